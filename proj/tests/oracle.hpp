#pragma once

// Independent test oracles. Everything here is written straight from the
// definitions with plain loops, separate from the library code paths it
// checks (the polytope-union search at the bottom is the one exception: it
// drives the exact LP solver, which is itself validated against the
// Gaussian-elimination oracle in test_lp).

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "fracmatch/fracmatch.hpp"

namespace oracle {

using fracmatch::FractionalMatching;
using fracmatch::IntegralMatching;
using fracmatch::Matrix;
using fracmatch::MatchingInstance;
using fracmatch::Rational;

/// Blocking pairs of an integral matching, straight from the definition.
inline std::vector<std::pair<int, int>> naive_blocking_pairs(const MatchingInstance& inst,
                                                             const IntegralMatching& mu) {
    const int n = inst.n;
    std::vector<Rational> um(n, Rational(0)), vw(n, Rational(0));
    for (int m = 0; m < n; ++m)
        if (mu.matched(m)) {
            um[m] = inst.U[m][mu.pairing[m]];
            vw[mu.pairing[m]] = inst.V[m][mu.pairing[m]];
        }
    std::vector<std::pair<int, int>> out;
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            if (inst.U[m][w] > um[m] && inst.V[m][w] > vw[w]) out.emplace_back(m, w);
    return out;
}

inline bool naive_stable(const MatchingInstance& inst, const IntegralMatching& mu) {
    return naive_blocking_pairs(inst, mu).empty();
}

/// Fractional stability from the definition (independent utility sums).
inline bool naive_fractional_stable(const MatchingInstance& inst, const Matrix& weights) {
    const int n = inst.n;
    std::vector<Rational> um(n, Rational(0)), vw(n, Rational(0));
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w) {
            um[m] += weights[m][w] * inst.U[m][w];
            vw[w] += weights[m][w] * inst.V[m][w];
        }
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            if (inst.U[m][w] > um[m] && inst.V[m][w] > vw[w]) return false;
    return true;
}

/// All stable perfect matchings by brute force over permutations.
inline std::vector<IntegralMatching> all_stable_matchings(const MatchingInstance& inst) {
    std::vector<int> perm(inst.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<IntegralMatching> out;
    do {
        IntegralMatching mu(perm);
        if (naive_stable(inst, mu)) out.push_back(std::move(mu));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline std::vector<IntegralMatching> all_permutation_matchings(int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<IntegralMatching> out;
    do {
        out.push_back(IntegralMatching(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// ---------------------------------------------------------------------------
// Exact LP oracle: enumerate candidate vertices by Gaussian elimination over
// subsets of tight constraints. Only for tiny LPs with a bounded optimum.

struct OracleLp {
    int num_vars = 0;
    // rows as <= form: coeffs . x <= rhs; equalities appear as two rows.
    std::vector<std::pair<std::vector<Rational>, Rational>> rows;
    std::vector<Rational> objective;  // maximize
};

inline OracleLp to_oracle_form(const fracmatch::LinearProgram& lp) {
    OracleLp out;
    out.num_vars = lp.num_vars;
    out.objective = lp.objective;
    if (lp.sense == fracmatch::Sense::Min)
        for (auto& c : out.objective) c = -c;
    for (const auto& c : lp.constraints) {
        std::vector<Rational> neg(c.coeffs.size());
        for (std::size_t j = 0; j < c.coeffs.size(); ++j) neg[j] = -c.coeffs[j];
        if (c.rel != fracmatch::Relation::Ge) out.rows.emplace_back(c.coeffs, c.rhs);
        if (c.rel != fracmatch::Relation::Le) out.rows.emplace_back(neg, Rational(-c.rhs));
    }
    return out;
}

/// Solves square system Ax = b; nullopt when singular.
inline std::optional<std::vector<Rational>> gauss_solve(std::vector<std::vector<Rational>> a,
                                                        std::vector<Rational> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot == -1) return std::nullopt;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

/// Best objective over all vertices (subsets of tight rows). Returns nullopt
/// when no feasible vertex exists; the caller must know the LP is bounded
/// with a vertex optimum.
inline std::optional<std::pair<Rational, std::vector<Rational>>> best_vertex(const OracleLp& lp) {
    const int nv = lp.num_vars;
    const int nr = static_cast<int>(lp.rows.size());
    std::optional<std::pair<Rational, std::vector<Rational>>> best;

    std::vector<int> idx(nv);
    auto consider = [&](const std::vector<int>& subset) {
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        for (int r : subset) {
            a.push_back(lp.rows[r].first);
            b.push_back(lp.rows[r].second);
        }
        auto x = gauss_solve(std::move(a), std::move(b));
        if (!x) return;
        for (const auto& [coeffs, rhs] : lp.rows) {
            Rational lhs(0);
            for (int j = 0; j < nv; ++j) lhs += coeffs[j] * (*x)[j];
            if (lhs > rhs) return;
        }
        Rational value(0);
        for (int j = 0; j < nv; ++j) value += lp.objective[j] * (*x)[j];
        if (!best || value > best->first) best = {value, *x};
    };

    // all nv-subsets of rows
    std::vector<int> comb(nv);
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == nv) {
            consider(comb);
            return;
        }
        for (int r = start; r < nr; ++r) {
            comb[depth] = r;
            self(self, r + 1, depth + 1);
        }
    };
    if (nv > 0 && nr >= nv) rec(rec, 0, 0);
    return best;
}

// ---------------------------------------------------------------------------
// Exact stable-region probe. The stable set of an instance is the union over
// per-pair side choices of polytopes (each pair (m,w) needs u_m >= U(m,w) or
// v_w >= V(m,w)). Maximizing the weight off a base support over every
// polytope of perfect matchings decides, exactly, whether any stable
// fractional matching other than combinations supported on `base` exists.
// 2^(n^2) masks, so n <= 3 in practice.

inline Rational max_off_support_stable_mass(const MatchingInstance& inst,
                                            const IntegralMatching& base) {
    using namespace fracmatch;
    const int n = inst.n;
    auto var = [&](int m, int w) { return m * n + w; };
    Rational best(0);
    for (long mask = 0; mask < (1L << (n * n)); ++mask) {
        LinearProgram lp;
        lp.num_vars = n * n;
        lp.sense = Sense::Max;
        lp.objective.assign(n * n, Rational(0));
        for (int m = 0; m < n; ++m)
            for (int w = 0; w < n; ++w)
                if (base.pairing[m] != w) lp.objective[var(m, w)] = 1;
        auto sum_row = [&](bool by_row, int fixed) {
            LinearConstraint c;
            c.coeffs.assign(n * n, Rational(0));
            for (int o = 0; o < n; ++o) c.coeffs[by_row ? var(fixed, o) : var(o, fixed)] = 1;
            c.rel = Relation::Eq;
            c.rhs = 1;
            lp.constraints.push_back(std::move(c));
        };
        for (int m = 0; m < n; ++m) sum_row(true, m);
        for (int w = 0; w < n; ++w) sum_row(false, w);
        for (int k = 0; k < n * n; ++k) {
            LinearConstraint c;
            c.coeffs.assign(n * n, Rational(0));
            c.coeffs[k] = 1;
            c.rel = Relation::Ge;
            c.rhs = 0;
            lp.constraints.push_back(std::move(c));
        }
        for (int m = 0; m < n; ++m)
            for (int w = 0; w < n; ++w) {
                LinearConstraint c;
                c.coeffs.assign(n * n, Rational(0));
                if (mask & (1L << var(m, w))) {
                    for (int o = 0; o < n; ++o) c.coeffs[var(m, o)] = inst.U[m][o];
                    c.rhs = inst.U[m][w];
                } else {
                    for (int o = 0; o < n; ++o) c.coeffs[var(o, w)] = inst.V[o][w];
                    c.rhs = inst.V[m][w];
                }
                c.rel = Relation::Ge;
                lp.constraints.push_back(std::move(c));
            }
        const LpSolution sol = solve(lp);
        if (sol.status == LpStatus::Optimal && sol.objective_value > best)
            best = sol.objective_value;
    }
    return best;
}

}  // namespace oracle
