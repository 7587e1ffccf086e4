#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fracmatch/errors.hpp"
#include "fracmatch/rational.hpp"

namespace fracmatch {

enum class Relation { Ge, Le, Eq };
enum class Sense { Min, Max };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearConstraint {
    std::vector<Rational> coeffs;
    Relation rel = Relation::Le;
    Rational rhs;
};

struct LinearProgram {
    int num_vars = 0;
    std::vector<LinearConstraint> constraints;
    std::vector<Rational> objective;
    Sense sense = Sense::Min;

    /// Plain-text dump, one constraint per line.
    std::string debug_string() const {
        std::ostringstream out;
        auto term = [&](std::ostringstream& os, const std::vector<Rational>& c) {
            bool first = true;
            for (int j = 0; j < num_vars; ++j) {
                if (c[j] == 0) continue;
                if (!first) os << " + ";
                os << to_canonical_string(c[j]) << " x" << j;
                first = false;
            }
            if (first) os << "0";
        };
        out << (sense == Sense::Min ? "min " : "max ");
        term(out, objective);
        out << "\n";
        for (const auto& c : constraints) {
            term(out, c.coeffs);
            out << (c.rel == Relation::Ge ? " >= " : c.rel == Relation::Le ? " <= " : " = ")
                << to_canonical_string(c.rhs) << "\n";
        }
        return out.str();
    }
};

struct LpOptions {
    /// Bit budget per tableau entry (numerator plus denominator). Growth past
    /// this raises NumericBlowup instead of silently grinding on.
    std::size_t max_bits = 65536;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rational> values;   // empty unless Optimal
    Rational objective_value;       // 0 unless Optimal
};

namespace detail {

// Dense dictionary simplex over exact rationals, Bland's rule throughout.
//
// Standard form: maximize c.x subject to A x <= b, x >= 0. Row semantics are
// the usual dictionary: x_basic[i] = D[i][rhs] - sum_j D[i][j] * x_nonbasic[j],
// and both objective rows use the same convention, so one pivot routine
// updates everything. Infeasible starts are repaired with a single artificial
// column pivoted in at the most violated row.
class SimplexTableau {
public:
    SimplexTableau(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                   const std::vector<Rational>& c, const LpOptions& opts)
        : m_(static_cast<int>(a.size())),
          n_(static_cast<int>(c.size())),
          opts_(opts),
          art_label_(n_ + m_),
          D_(m_ + 2, std::vector<Rational>(n_ + 2, Rational(0))),
          basic_(m_),
          nonbasic_(n_ + 1) {
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) D_[i][j] = a[i][j];
            D_[i][art_col()] = -1;
            D_[i][rhs_col()] = b[i];
            basic_[i] = n_ + i;  // slack labels
        }
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            D_[obj_row()][j] = -c[j];
        }
        nonbasic_[n_] = art_label_;
        D_[phase1_row()][art_col()] = 1;  // phase-1 objective: maximize -artificial
    }

    LpStatus run(std::vector<Rational>& out_values) {
        int worst = 0;
        for (int i = 1; i < m_; ++i)
            if (D_[i][rhs_col()] < D_[worst][rhs_col()]) worst = i;
        if (m_ > 0 && D_[worst][rhs_col()] < 0) {
            pivot(worst, art_col());
            simplex(phase1_row());
            if (D_[phase1_row()][rhs_col()] != 0) return LpStatus::Infeasible;
            // Drive a degenerate-basic artificial out; a row with no usable
            // entry is identically zero and can stay.
            for (int i = 0; i < m_; ++i) {
                if (basic_[i] != art_label_) continue;
                int enter = -1;
                for (int j = 0; j <= n_; ++j) {
                    if (nonbasic_[j] == art_label_ || D_[i][j] == 0) continue;
                    if (enter == -1 || nonbasic_[j] < nonbasic_[enter]) enter = j;
                }
                if (enter >= 0) pivot(i, enter);
            }
        }
        if (!simplex(obj_row())) return LpStatus::Unbounded;

        out_values.assign(n_, Rational(0));
        for (int i = 0; i < m_; ++i)
            if (basic_[i] < n_) out_values[basic_[i]] = D_[i][rhs_col()];
        return LpStatus::Optimal;
    }

private:
    int obj_row() const { return m_; }
    int phase1_row() const { return m_ + 1; }
    int art_col() const { return n_; }
    int rhs_col() const { return n_ + 1; }

    void pivot(int r, int s) {
        const Rational p = D_[r][s];
        for (int j = 0; j <= n_ + 1; ++j)
            if (j != s) D_[r][j] /= p;
        D_[r][s] = Rational(1) / p;
        for (int i = 0; i <= m_ + 1; ++i) {
            if (i == r) continue;
            const Rational f = D_[i][s];
            if (f == 0) continue;
            for (int j = 0; j <= n_ + 1; ++j) {
                if (j == s) continue;
                D_[i][j] -= f * D_[r][j];
                if (bit_size(D_[i][j]) > opts_.max_bits)
                    throw NumericBlowup("tableau entry exceeded " +
                                        std::to_string(opts_.max_bits) + " bits");
            }
            D_[i][s] = -f * D_[r][s];
        }
        std::swap(basic_[r], nonbasic_[s]);
    }

    // Bland's rule on the given objective row. Returns false on unbounded.
    bool simplex(int obj) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j <= n_; ++j) {
                if (nonbasic_[j] == art_label_) continue;  // never re-enters
                if (D_[obj][j] < 0 && (enter == -1 || nonbasic_[j] < nonbasic_[enter]))
                    enter = j;
            }
            if (enter == -1) return true;

            int leave = -1;
            for (int i = 0; i < m_; ++i) {
                if (D_[i][enter] <= 0) continue;
                if (leave == -1) {
                    leave = i;
                    continue;
                }
                const Rational cur = D_[i][rhs_col()] * D_[leave][enter];
                const Rational best = D_[leave][rhs_col()] * D_[i][enter];
                if (cur < best || (cur == best && basic_[i] < basic_[leave])) leave = i;
            }
            if (leave == -1) return false;
            pivot(leave, enter);
        }
    }

    int m_, n_;
    LpOptions opts_;
    int art_label_;
    std::vector<std::vector<Rational>> D_;
    std::vector<int> basic_;
    std::vector<int> nonbasic_;
};

inline void check_lp_shape(const LinearProgram& lp) {
    if (lp.num_vars < 0) throw DimensionMismatch("negative variable count");
    if (static_cast<int>(lp.objective.size()) != lp.num_vars)
        throw DimensionMismatch("objective length != num_vars");
    for (const auto& c : lp.constraints)
        if (static_cast<int>(c.coeffs.size()) != lp.num_vars)
            throw DimensionMismatch("constraint length != num_vars");
}

// Plain nonnegativity row: single nonzero coefficient, zero rhs, oriented as
// x_j >= 0. These become variable markers instead of tableau rows.
inline int nonneg_singleton(const LinearConstraint& c) {
    int var = -1;
    for (int j = 0; j < static_cast<int>(c.coeffs.size()); ++j) {
        if (c.coeffs[j] == 0) continue;
        if (var != -1) return -1;
        var = j;
    }
    if (var == -1 || c.rhs != 0) return -1;
    if (c.rel == Relation::Ge && c.coeffs[var] > 0) return var;
    if (c.rel == Relation::Le && c.coeffs[var] < 0) return var;
    return -1;
}

}  // namespace detail

/// Exact simplex solve. Deterministic: Bland's entering/leaving rules with a
/// fixed variable order; identical pivots on every run. Free variables (no
/// x >= 0 row) are split internally into differences of nonnegatives.
inline LpSolution solve(const LinearProgram& lp, const LpOptions& opts = {}) {
    detail::check_lp_shape(lp);
    LpSolution sol;
    if (lp.num_vars == 0) {
        for (const auto& c : lp.constraints) {
            const bool ok = c.rel == Relation::Ge   ? Rational(0) >= c.rhs
                            : c.rel == Relation::Le ? Rational(0) <= c.rhs
                                                    : Rational(0) == c.rhs;
            if (!ok) return sol;  // Infeasible
        }
        sol.status = LpStatus::Optimal;
        return sol;
    }

    std::vector<char> nonneg(lp.num_vars, 0);
    std::vector<const LinearConstraint*> rows;
    for (const auto& c : lp.constraints) {
        if (int var = detail::nonneg_singleton(c); var >= 0)
            nonneg[var] = 1;
        else
            rows.push_back(&c);
    }

    // Column layout: one column per nonnegative variable, two (plus, minus)
    // per free variable.
    std::vector<int> plus_col(lp.num_vars), minus_col(lp.num_vars, -1);
    int cols = 0;
    for (int j = 0; j < lp.num_vars; ++j) {
        plus_col[j] = cols++;
        if (!nonneg[j]) minus_col[j] = cols++;
    }

    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    auto add_le = [&](const std::vector<Rational>& coeffs, const Rational& rhs, bool negate) {
        std::vector<Rational> row(cols, Rational(0));
        for (int j = 0; j < lp.num_vars; ++j) {
            Rational v = negate ? Rational(-coeffs[j]) : coeffs[j];
            row[plus_col[j]] = v;
            if (minus_col[j] >= 0) row[minus_col[j]] = -v;
        }
        a.push_back(std::move(row));
        b.push_back(negate ? Rational(-rhs) : rhs);
    };
    for (const auto* c : rows) {
        if (c->rel != Relation::Ge) add_le(c->coeffs, c->rhs, false);
        if (c->rel != Relation::Le) add_le(c->coeffs, c->rhs, true);
    }

    std::vector<Rational> c_std(cols, Rational(0));
    for (int j = 0; j < lp.num_vars; ++j) {
        Rational v = lp.sense == Sense::Max ? lp.objective[j] : Rational(-lp.objective[j]);
        c_std[plus_col[j]] = v;
        if (minus_col[j] >= 0) c_std[minus_col[j]] = -v;
    }

    std::vector<Rational> x_std;
    detail::SimplexTableau tableau(a, b, c_std, opts);
    sol.status = tableau.run(x_std);
    if (sol.status != LpStatus::Optimal) return sol;

    sol.values.assign(lp.num_vars, Rational(0));
    for (int j = 0; j < lp.num_vars; ++j) {
        sol.values[j] = x_std[plus_col[j]];
        if (minus_col[j] >= 0) sol.values[j] -= x_std[minus_col[j]];
    }
    for (int j = 0; j < lp.num_vars; ++j)
        sol.objective_value += lp.objective[j] * sol.values[j];

    // Exactness is the whole point; a violated constraint here is a solver
    // bug, not an input condition.
    for (const auto& c : lp.constraints) {
        Rational lhs(0);
        for (int j = 0; j < lp.num_vars; ++j) lhs += c.coeffs[j] * sol.values[j];
        const bool ok = c.rel == Relation::Ge   ? lhs >= c.rhs
                        : c.rel == Relation::Le ? lhs <= c.rhs
                                                : lhs == c.rhs;
        if (!ok) throw Error("internal: simplex solution violates a constraint");
    }
    return sol;
}

/// Min-max weight selection over a weight polytope: adds t with x_i <= t for
/// every variable of `lp`, minimizes t, and reports the x part. The caller's
/// constraints are expected to contain the simplex rows (sum x = 1, x >= 0).
inline LpSolution solve_minmax_weight(const LinearProgram& lp, const LpOptions& opts = {}) {
    detail::check_lp_shape(lp);
    LinearProgram ext;
    ext.num_vars = lp.num_vars + 1;
    const int t = lp.num_vars;
    for (const auto& c : lp.constraints) {
        LinearConstraint row;
        row.coeffs = c.coeffs;
        row.coeffs.emplace_back(0);
        row.rel = c.rel;
        row.rhs = c.rhs;
        ext.constraints.push_back(std::move(row));
    }
    for (int j = 0; j < lp.num_vars; ++j) {
        LinearConstraint row;
        row.coeffs.assign(ext.num_vars, Rational(0));
        row.coeffs[j] = 1;
        row.coeffs[t] = -1;
        row.rel = Relation::Le;
        row.rhs = 0;
        ext.constraints.push_back(std::move(row));
    }
    ext.objective.assign(ext.num_vars, Rational(0));
    ext.objective[t] = 1;
    ext.sense = Sense::Min;

    LpSolution full = solve(ext, opts);
    if (full.status != LpStatus::Optimal) return full;
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.values.assign(full.values.begin(), full.values.begin() + lp.num_vars);
    sol.objective_value = full.values[t];
    return sol;
}

}  // namespace fracmatch
