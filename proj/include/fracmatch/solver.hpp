#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fracmatch/cmfp.hpp"
#include "fracmatch/envy.hpp"
#include "fracmatch/fractional.hpp"
#include "fracmatch/instance.hpp"
#include "fracmatch/integral.hpp"
#include "fracmatch/lp.hpp"

namespace fracmatch {

/// Everything the fractional solver did on one instance. Matchings and agent
/// ids in `base`, `rotations`, `family` and `improved` are residual-local;
/// `composed` lives on the original instance.
struct SolveTrace {
    CmfpResult cmfp;
    IntegralMatching base;                  // GS matching on the residual
    std::vector<Rotation> rotations;        // extracted in order
    std::vector<IntegralMatching> family;   // distinct matchings mu_1..mu_k
    std::vector<AgentId> improved;          // set A in insertion order
    LinearProgram lp;                       // weight LP over x_1..x_k
    std::vector<Rational> weights;          // solved x values
    FractionalMatching composed;

    int k() const { return static_cast<int>(family.size()); }
};

/// alpha(agent, mu): the best value the agent could get from a counterpart
/// who strictly prefers the agent to their own allocation under mu; 0 when no
/// such counterpart exists.
inline Rational alpha(const MatchingInstance& instance, AgentId agent,
                      const IntegralMatching& mu) {
    detail::check_matching(instance, mu);
    const std::vector<int> inv = mu.inverse();
    Rational best(0);
    if (agent.side == Side::Men) {
        const int m = agent.index;
        for (int w = 0; w < instance.n; ++w) {
            if (inv[w] == IntegralMatching::kUnmatched) continue;
            const Rational& v_w = instance.V[inv[w]][w];
            if (instance.V[m][w] > v_w && instance.U[m][w] > best) best = instance.U[m][w];
        }
    } else {
        const int w = agent.index;
        for (int m = 0; m < instance.n; ++m) {
            if (!mu.matched(m)) continue;
            const Rational& u_m = instance.U[m][mu.pairing[m]];
            if (instance.U[m][w] > u_m && instance.V[m][w] > best) best = instance.V[m][w];
        }
    }
    return best;
}

/// Stability constraints for the weights x_1..x_k over matchings mu_1..mu_k
/// (mu_1 stable; the others are envy rotations of it).
///
/// Every pair (m, w) must end up with at least one side not strictly gaining.
/// A side whose value for the pair never exceeds its worst utility across the
/// family can never gain, whatever the weights; such pairs need no row. Each
/// remaining pair contributes to exactly one row: the man's when his value
/// for w sits below his mu_1 utility, otherwise the woman's (stability of
/// mu_1 guarantees her side is then strict). Anchoring the choice at mu_1
/// keeps x = e_1 strictly interior, so feasible weights always exist and the
/// min-max optimum stays below 1. In the cycle case this reduces exactly to
/// u_m(x) >= alpha(m, mu_1) for the men behind a women-cycle (and mirrored),
/// with the other side's rows trivially slack.
inline LinearProgram build_weight_lp(const MatchingInstance& instance,
                                     const std::vector<IntegralMatching>& matchings) {
    const int k = static_cast<int>(matchings.size());
    if (k < 1) throw DimensionMismatch("weight LP needs at least one matching");
    const int n = instance.n;
    for (const auto& mu : matchings) {
        detail::check_matching(instance, mu);
        if (!mu.perfect()) throw InvalidMatching("weight LP requires perfect matchings");
    }

    // Per-matching utilities. u[i][m] = U(m, mu_i(m)), v[i][w] = V(mu_i(w), w).
    std::vector<std::vector<Rational>> u(k), v(k);
    for (int i = 0; i < k; ++i) {
        u[i].assign(n, Rational(0));
        v[i].assign(n, Rational(0));
        const std::vector<int> inv = matchings[i].inverse();
        for (int m = 0; m < n; ++m) u[i][m] = instance.U[m][matchings[i].pairing[m]];
        for (int w = 0; w < n; ++w) v[i][w] = instance.V[inv[w]][w];
    }
    std::vector<Rational> u_min = u[0], v_min = v[0];
    for (int i = 1; i < k; ++i)
        for (int a = 0; a < n; ++a) {
            u_min[a] = std::min(u_min[a], u[i][a]);
            v_min[a] = std::min(v_min[a], v[i][a]);
        }

    std::vector<std::optional<Rational>> man_rhs(n), woman_rhs(n);
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w) {
            if (instance.U[m][w] <= u_min[m] || instance.V[m][w] <= v_min[w])
                continue;  // one side can never strictly gain
            if (instance.U[m][w] < u[0][m]) {
                if (!man_rhs[m] || *man_rhs[m] < instance.U[m][w]) man_rhs[m] = instance.U[m][w];
            } else {
                if (!woman_rhs[w] || *woman_rhs[w] < instance.V[m][w])
                    woman_rhs[w] = instance.V[m][w];
            }
        }

    LinearProgram lp;
    lp.num_vars = k;
    lp.objective.assign(k, Rational(0));  // caller installs the objective
    auto utility_row = [&](const std::vector<std::vector<Rational>>& util, int agent,
                           const Rational& rhs) {
        LinearConstraint row;
        row.coeffs.reserve(k);
        for (int i = 0; i < k; ++i) row.coeffs.push_back(util[i][agent]);
        row.rel = Relation::Ge;
        row.rhs = rhs;
        lp.constraints.push_back(std::move(row));
    };
    for (int m = 0; m < n; ++m)
        if (man_rhs[m]) utility_row(u, m, *man_rhs[m]);
    for (int w = 0; w < n; ++w)
        if (woman_rhs[w]) utility_row(v, w, *woman_rhs[w]);

    LinearConstraint simplex_row;
    simplex_row.coeffs.assign(k, Rational(1));
    simplex_row.rel = Relation::Eq;
    simplex_row.rhs = 1;
    lp.constraints.push_back(std::move(simplex_row));
    for (int i = 0; i < k; ++i) {
        LinearConstraint nonneg;
        nonneg.coeffs.assign(k, Rational(0));
        nonneg.coeffs[i] = 1;
        nonneg.rel = Relation::Ge;
        nonneg.rhs = 0;
        lp.constraints.push_back(std::move(nonneg));
    }
    return lp;
}

namespace detail {

inline int lowest_sink(const EnvyGraph& g) {
    for (int a = 0; a < g.n; ++a)
        if (g.is_sink(a)) return a;
    return -1;
}

}  // namespace detail

/// Full fractional solve: force Algorithm-1 pairs at weight 1, then build a
/// non-integral stable matching on the residual from the Gale-Shapley base
/// and envy rotations, with LP-chosen min-max weights. The composed result is
/// re-verified; a verifier failure is an internal bug, never a return value.
inline SolveTrace solve(const MatchingInstance& instance) {
    SolveTrace trace;
    trace.cmfp = cmfp_matching(instance);
    const MatchingInstance& residual = trace.cmfp.residual;

    if (trace.cmfp.residual_men.empty()) {
        trace.composed = FractionalMatching::from_integral(trace.cmfp.forced);
        const StabilityReport report = is_stable(instance, trace.composed);
        if (!report.stable)
            throw InternalInstabilityBug("CMFP matching failed the stability verifier");
        return trace;
    }

    trace.base = gale_shapley(residual, Side::Men);
    trace.family.push_back(trace.base);

    const FractionalMatching base_weights = FractionalMatching::from_integral(trace.base);
    const EnvyGraph g_w = build_envy_graph(residual, base_weights, Side::Women);
    const EnvyGraph g_m = build_envy_graph(residual, base_weights, Side::Men);

    auto add_rotation = [&](Rotation rot) {
        if (std::find(trace.family.begin(), trace.family.end(), rot.produced) ==
            trace.family.end())
            trace.family.push_back(rot.produced);
        trace.rotations.push_back(std::move(rot));
    };

    if (auto cycle = find_cycle(g_w)) {
        add_rotation(rotate(residual, trace.base, Side::Women, *cycle, RotationKind::Cycle));
    } else if (auto cycle = find_cycle(g_m)) {
        add_rotation(rotate(residual, trace.base, Side::Men, *cycle, RotationKind::Cycle));
    } else {
        // Both envy graphs acyclic. Chain paths between the two sides: each
        // path starts at the base partner of the previous sink and ends at a
        // sink; the loop closes when that partner has already improved.
        std::set<AgentId> improved;
        const std::vector<int> inv = trace.base.inverse();

        const int w1 = detail::lowest_sink(g_w);
        if (w1 < 0) throw InternalInstabilityBug("acyclic envy graph without a sink");
        AgentId current = man(inv[w1]);

        while (!improved.contains(current)) {
            const EnvyGraph& g = current.side == Side::Men ? g_m : g_w;
            if (g.is_sink(current.index))
                throw InternalInstabilityBug(
                    "path start has no envy edge; MFP pair left in residual?");
            const std::vector<int> path = path_to_sink(g, current.index);
            add_rotation(rotate(residual, trace.base, current.side, path, RotationKind::Path));
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                AgentId a{current.side, path[i]};
                if (improved.insert(a).second) trace.improved.push_back(a);
            }
            const int sink = path.back();
            current = current.side == Side::Men ? woman(trace.base.pairing[sink])
                                                : man(inv[sink]);
        }
    }

    trace.lp = build_weight_lp(residual, trace.family);
    const LpSolution sol = solve_minmax_weight(trace.lp);
    if (sol.status != LpStatus::Optimal)
        throw InternalInstabilityBug("weight LP is not optimal on a non-CMFP residual");
    trace.weights = sol.values;

    trace.composed = FractionalMatching::from_integral(trace.cmfp.forced);
    for (int i = 0; i < trace.k(); ++i) {
        if (trace.weights[i] == 0) continue;
        for (int rm = 0; rm < residual.n; ++rm) {
            const int rw = trace.family[i].pairing[rm];
            trace.composed.weights[trace.cmfp.residual_men[rm]][trace.cmfp.residual_women[rw]] +=
                trace.weights[i];
        }
    }

    const StabilityReport report = is_stable(instance, trace.composed);
    if (!report.stable)
        throw InternalInstabilityBug("composed matching failed the stability verifier");
    return trace;
}

/// Theorem-3 decision: CMFP instances have exactly one stable fractional
/// matching (the forced one); anything else admits a non-integral witness.
inline std::pair<bool, std::optional<FractionalMatching>> unique_sfm(
    const MatchingInstance& instance) {
    SolveTrace trace = solve(instance);
    return {trace.cmfp.perfect(), std::move(trace.composed)};
}

/// A stable-matching mechanism: a named pure rule from reported instances to
/// stable fractional matchings.
struct Mechanism {
    std::string name;
    std::function<FractionalMatching(const MatchingInstance&)> rule;
};

inline const std::vector<Mechanism>& mechanisms() {
    static const std::vector<Mechanism> all = {
        {"gs-men",
         [](const MatchingInstance& inst) {
             return FractionalMatching::from_integral(gale_shapley(inst, Side::Men));
         }},
        {"gs-women",
         [](const MatchingInstance& inst) {
             return FractionalMatching::from_integral(gale_shapley(inst, Side::Women));
         }},
        {"envy-frac", [](const MatchingInstance& inst) { return solve(inst).composed; }},
    };
    return all;
}

inline const Mechanism& mechanism_by_name(const std::string& name) {
    for (const auto& mech : mechanisms())
        if (mech.name == name) return mech;
    throw Error("unknown mechanism: " + name);
}

}  // namespace fracmatch
