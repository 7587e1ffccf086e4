#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fracmatch/fractional.hpp"
#include "fracmatch/instance.hpp"
#include "fracmatch/solver.hpp"

namespace fracmatch {

/// Finite space of candidate misreports for one agent. RowPermutations keeps
/// the agent's own values and reorders them; ValueGrid assigns any injective
/// tuple from a finite value set (default 1..2n plus the agent's true
/// values); Combined is the union. The full cardinal misreport space is a
/// continuum, so NoGainFound certifies exhaustiveness relative to the family
/// only.
struct MisreportFamily {
    enum class Kind { RowPermutations, ValueGrid, Combined };

    Kind kind = Kind::RowPermutations;
    std::vector<Rational> grid_values;  // empty means the default grid
    std::string description;

    static MisreportFamily row_permutations() {
        return {Kind::RowPermutations, {}, "permutations of the true values"};
    }
    static MisreportFamily value_grid(std::vector<Rational> values = {}) {
        return {Kind::ValueGrid, std::move(values), "injective tuples from a value grid"};
    }
    static MisreportFamily combined(std::vector<Rational> values = {}) {
        return {Kind::Combined, std::move(values), "permutations plus grid tuples"};
    }
};

/// Best deviation found for one agent. Utilities are always the deviator's
/// true-preference utilities; only the mechanism sees the reported instance.
struct Deviation {
    AgentId agent{Side::Men, -1};
    std::vector<Rational> report;  // the agent's misreported valuation vector
    Rational truthful_utility;
    Rational deviated_utility;
    Rational gain;  // deviated - truthful

    bool gain_found() const { return gain > 0; }
};

enum class AuditVerdict { NoGainFound, ManipulationFound };

struct AuditOptions {
    std::size_t family_bound = 1'000'000;
    int jobs = 1;                        // parallel agents in audit_ic
    std::size_t coalition_size_bound = 3;
    /// Strict improvement for every member is the acceptance criterion;
    /// the weak variant (all >=, at least one >) is exposed but not used
    /// by the shipped checks.
    bool weak_coalition_improvement = false;
};

struct AuditReport {
    std::string mechanism;
    AuditVerdict verdict = AuditVerdict::NoGainFound;
    std::vector<Deviation> per_agent;
};

struct CoalitionRecord {
    std::vector<AgentId> coalition;
    AuditVerdict verdict = AuditVerdict::NoGainFound;
    /// Per-member records of the best qualifying joint deviation (empty when
    /// none qualifies). "Best" maximizes the total gain.
    std::vector<Deviation> best_joint;
};

namespace detail {

inline std::uint64_t mul_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap;
    return a * b;
}

inline std::uint64_t factorial_capped(int n, std::uint64_t cap) {
    std::uint64_t out = 1;
    for (int i = 2; i <= n; ++i) out = mul_capped(out, static_cast<std::uint64_t>(i), cap);
    return out;
}

inline std::uint64_t falling_factorial_capped(std::uint64_t g, int n, std::uint64_t cap) {
    std::uint64_t out = 1;
    for (int i = 0; i < n; ++i) {
        if (g <= static_cast<std::uint64_t>(i)) return 0;
        out = mul_capped(out, g - static_cast<std::uint64_t>(i), cap);
    }
    return out;
}

inline std::vector<Rational> true_vector(const MatchingInstance& inst, AgentId agent) {
    std::vector<Rational> out(inst.n);
    for (int k = 0; k < inst.n; ++k)
        out[k] = agent.side == Side::Men ? inst.U[agent.index][k] : inst.V[k][agent.index];
    return out;
}

inline MatchingInstance apply_report(const MatchingInstance& inst, AgentId agent,
                                     const std::vector<Rational>& report) {
    return agent.side == Side::Men ? with_man_report(inst, agent.index, report)
                                   : with_woman_report(inst, agent.index, report);
}

inline Rational true_utility(const MatchingInstance& true_inst, AgentId agent,
                             const FractionalMatching& mu) {
    Rational total(0);
    for (int k = 0; k < true_inst.n; ++k) {
        const Rational& weight = agent.side == Side::Men ? mu.weights[agent.index][k]
                                                         : mu.weights[k][agent.index];
        if (weight == 0) continue;
        total += agent.side == Side::Men ? weight * true_inst.U[agent.index][k]
                                         : weight * true_inst.V[k][agent.index];
    }
    return total;
}

inline std::vector<Rational> default_grid(const MatchingInstance& inst, AgentId agent) {
    std::set<Rational> values;
    for (int v = 1; v <= 2 * inst.n; ++v) values.insert(Rational(v));
    for (const Rational& v : true_vector(inst, agent)) values.insert(v);
    return {values.begin(), values.end()};
}

inline void grid_tuples(const std::vector<Rational>& grid, int n,
                        std::vector<std::vector<Rational>>& out) {
    std::vector<Rational> current;
    std::vector<char> used(grid.size(), 0);
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            out.push_back(current);
            return;
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (used[g]) continue;
            used[g] = 1;
            current.push_back(grid[g]);
            self(self, depth + 1);
            current.pop_back();
            used[g] = 0;
        }
    };
    rec(rec, 0);
}

/// All candidate reports of the family, truthful report included, in a
/// deterministic order.
inline std::vector<std::vector<Rational>> candidate_reports(const MatchingInstance& inst,
                                                            AgentId agent,
                                                            const MisreportFamily& family,
                                                            std::uint64_t bound) {
    const int n = inst.n;
    const std::vector<Rational> truth = true_vector(inst, agent);
    const bool want_perms = family.kind != MisreportFamily::Kind::ValueGrid;
    const bool want_grid = family.kind != MisreportFamily::Kind::RowPermutations;

    std::vector<Rational> grid;
    if (want_grid)
        grid = family.grid_values.empty() ? default_grid(inst, agent) : family.grid_values;

    std::uint64_t count = 0;
    const std::uint64_t cap = bound + 1;
    if (want_perms) count += factorial_capped(n, cap);
    if (want_grid) count += falling_factorial_capped(grid.size(), n, cap);
    if (count > bound)
        throw FamilyTooLarge("candidate count exceeds " + std::to_string(bound));

    std::vector<std::vector<Rational>> out;
    if (want_perms) {
        std::vector<Rational> perm = truth;
        std::sort(perm.begin(), perm.end());
        do {
            out.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    if (want_grid) {
        if ((int)grid.size() >= n) grid_tuples(grid, n, out);
        if (family.kind == MisreportFamily::Kind::Combined) {
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        }
    }
    return out;
}

}  // namespace detail

/// Exhaustive single-agent best response over a misreport family. The
/// mechanism runs on each reported instance with everyone else truthful; the
/// deviator is scored against their true valuations.
inline Deviation best_response(const MatchingInstance& instance, AgentId agent,
                               const Mechanism& mechanism, const MisreportFamily& family,
                               const AuditOptions& opts = {},
                               const FractionalMatching* truthful_output = nullptr) {
    const std::vector<Rational> truth = detail::true_vector(instance, agent);
    const FractionalMatching base =
        truthful_output ? *truthful_output : mechanism.rule(instance);

    Deviation best;
    best.agent = agent;
    best.report = truth;
    best.truthful_utility = detail::true_utility(instance, agent, base);
    best.deviated_utility = best.truthful_utility;
    best.gain = 0;

    bool found = false;
    for (const auto& report :
         detail::candidate_reports(instance, agent, family, opts.family_bound)) {
        if (report == truth) continue;
        const MatchingInstance reported = detail::apply_report(instance, agent, report);
        const FractionalMatching out = mechanism.rule(reported);
        const Rational utility = detail::true_utility(instance, agent, out);
        if (!found || utility > best.deviated_utility) {
            found = true;
            best.report = report;
            best.deviated_utility = utility;
            best.gain = utility - best.truthful_utility;
        }
    }
    return best;
}

/// Runs best_response for every agent; ManipulationFound iff some gain is
/// strictly positive. Agents are independent, so jobs > 1 fans them out.
inline AuditReport audit_ic(const MatchingInstance& instance, const Mechanism& mechanism,
                            const MisreportFamily& family, const AuditOptions& opts = {}) {
    AuditReport report;
    report.mechanism = mechanism.name;

    std::vector<AgentId> agents;
    for (int m = 0; m < instance.n; ++m) agents.push_back(man(m));
    for (int w = 0; w < instance.n; ++w) agents.push_back(woman(w));
    report.per_agent.resize(agents.size());

    const FractionalMatching truthful = mechanism.rule(instance);

    if (opts.jobs > 1) {
        std::vector<std::future<Deviation>> futures;
        futures.reserve(agents.size());
        for (AgentId agent : agents)
            futures.push_back(std::async(std::launch::async, [&, agent] {
                return best_response(instance, agent, mechanism, family, opts, &truthful);
            }));
        for (std::size_t i = 0; i < futures.size(); ++i) report.per_agent[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < agents.size(); ++i)
            report.per_agent[i] =
                best_response(instance, agents[i], mechanism, family, opts, &truthful);
    }

    for (const auto& dev : report.per_agent)
        if (dev.gain_found()) report.verdict = AuditVerdict::ManipulationFound;
    return report;
}

/// Joint misreport search over the product family. Every member actually
/// misreports (sub-coalition patterns are covered by auditing the subsets),
/// and a joint deviation qualifies only if every member's true utility
/// strictly increases -- the strongest reading of "improve their utilities".
inline CoalitionRecord audit_coalition(const MatchingInstance& instance,
                                       const std::vector<AgentId>& coalition,
                                       const Mechanism& mechanism, const MisreportFamily& family,
                                       const AuditOptions& opts = {}) {
    if (coalition.empty()) throw Error("empty coalition");
    if (coalition.size() > opts.coalition_size_bound)
        throw FamilyTooLarge("coalition larger than the configured bound");

    CoalitionRecord record;
    record.coalition = coalition;

    const std::size_t size = coalition.size();
    std::vector<std::vector<Rational>> truths(size);
    std::vector<std::vector<std::vector<Rational>>> candidates(size);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < size; ++i) {
        truths[i] = detail::true_vector(instance, coalition[i]);
        auto all = detail::candidate_reports(instance, coalition[i], family, opts.family_bound);
        for (auto& report : all)
            if (report != truths[i]) candidates[i].push_back(std::move(report));
        total = detail::mul_capped(total, candidates[i].size(), opts.family_bound + 1);
    }
    if (total > opts.family_bound)
        throw FamilyTooLarge("joint candidate count exceeds " +
                             std::to_string(opts.family_bound));

    const FractionalMatching truthful = mechanism.rule(instance);
    std::vector<Rational> truthful_utils(size);
    for (std::size_t i = 0; i < size; ++i)
        truthful_utils[i] = detail::true_utility(instance, coalition[i], truthful);

    std::optional<Rational> best_total_gain;
    std::vector<Rational> best_gains(size);
    std::vector<std::vector<Rational>> best_reports(size);

    std::vector<std::size_t> choice(size, 0);
    auto evaluate = [&]() {
        MatchingInstance reported = instance;
        for (std::size_t i = 0; i < size; ++i)
            reported = detail::apply_report(reported, coalition[i], candidates[i][choice[i]]);
        const FractionalMatching out = mechanism.rule(reported);

        bool all_strict = true, all_weak = true, some_strict = false;
        std::vector<Rational> gains(size);
        Rational total_gain(0);
        for (std::size_t i = 0; i < size; ++i) {
            gains[i] = detail::true_utility(instance, coalition[i], out) - truthful_utils[i];
            total_gain += gains[i];
            if (gains[i] <= 0) all_strict = false;
            if (gains[i] < 0) all_weak = false;
            if (gains[i] > 0) some_strict = true;
        }
        const bool qualifies = opts.weak_coalition_improvement ? (all_weak && some_strict)
                                                               : all_strict;
        if (qualifies && (!best_total_gain || total_gain > *best_total_gain)) {
            best_total_gain = total_gain;
            best_gains = gains;
            for (std::size_t i = 0; i < size; ++i)
                best_reports[i] = candidates[i][choice[i]];
        }
    };

    // Odometer over the product family.
    bool done = std::any_of(candidates.begin(), candidates.end(),
                            [](const auto& c) { return c.empty(); });
    while (!done) {
        evaluate();
        std::size_t pos = 0;
        while (pos < size && ++choice[pos] == candidates[pos].size()) {
            choice[pos] = 0;
            ++pos;
        }
        done = pos == size;
    }

    if (best_total_gain) {
        record.verdict = AuditVerdict::ManipulationFound;
        for (std::size_t i = 0; i < size; ++i) {
            Deviation dev;
            dev.agent = coalition[i];
            dev.report = best_reports[i];
            dev.truthful_utility = truthful_utils[i];
            dev.gain = best_gains[i];
            dev.deviated_utility = truthful_utils[i] + best_gains[i];
            record.best_joint.push_back(std::move(dev));
        }
    }
    return record;
}

}  // namespace fracmatch
