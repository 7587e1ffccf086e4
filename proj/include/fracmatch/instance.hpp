#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <vector>

#include "fracmatch/errors.hpp"
#include "fracmatch/rational.hpp"

namespace fracmatch {

enum class Side { Men, Women };

inline Side opposite(Side s) { return s == Side::Men ? Side::Women : Side::Men; }

inline const char* side_name(Side s) { return s == Side::Men ? "men" : "women"; }

/// Reference to one agent of an instance: which side it lives on plus its
/// 0-based index there.
struct AgentId {
    Side side;
    int index;

    friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

inline AgentId man(int i) { return {Side::Men, i}; }
inline AgentId woman(int j) { return {Side::Women, j}; }

using Matrix = std::vector<std::vector<Rational>>;

/// One-to-one market with n men and n women under cardinal valuations.
/// U[i][j] is man i's value for woman j; V[i][j] is woman j's value for
/// man i. Preferences must be strict: U rows and V columns hold pairwise
/// distinct entries. Treat instances as immutable once built.
struct MatchingInstance {
    int n = 0;
    Matrix U;
    Matrix V;

    const Rational& man_value(int m, int w) const { return U[m][w]; }
    const Rational& woman_value(int m, int w) const { return V[m][w]; }

    bool operator==(const MatchingInstance&) const = default;

    /// Role-swapped view: women become the proposing side. In the result,
    /// "men" are the original women, so U' = V^T and V' = U^T.
    MatchingInstance swapped_sides() const {
        MatchingInstance out;
        out.n = n;
        out.U.assign(n, std::vector<Rational>(n));
        out.V.assign(n, std::vector<Rational>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                out.U[j][i] = V[i][j];
                out.V[j][i] = U[i][j];
            }
        return out;
    }

    /// Sub-instance induced by the given original indices (both ascending).
    MatchingInstance restricted_to(const std::vector<int>& men_idx,
                                   const std::vector<int>& women_idx) const {
        MatchingInstance out;
        out.n = static_cast<int>(men_idx.size());
        out.U.assign(out.n, std::vector<Rational>(out.n));
        out.V.assign(out.n, std::vector<Rational>(out.n));
        for (int i = 0; i < out.n; ++i)
            for (int j = 0; j < out.n; ++j) {
                out.U[i][j] = U[men_idx[i]][women_idx[j]];
                out.V[i][j] = V[men_idx[i]][women_idx[j]];
            }
        return out;
    }
};

struct Violation {
    enum class Kind { NegativeEntry, DuplicateRowValue, DuplicateColumnValue };

    Kind kind;
    char matrix;  // 'U' or 'V'
    int row = -1;
    int col = -1;
    Rational value;

    std::string to_string() const {
        switch (kind) {
            case Kind::NegativeEntry:
                return std::string("negative entry ") + matrix + "[" + std::to_string(row) +
                       "][" + std::to_string(col) + "] = " + to_canonical_string(value);
            case Kind::DuplicateRowValue:
                return std::string("row ") + std::to_string(row) + " of " + matrix +
                       " contains duplicate value " + to_canonical_string(value);
            case Kind::DuplicateColumnValue:
                return std::string("column ") + std::to_string(col) + " of " + matrix +
                       " contains duplicate value " + to_canonical_string(value);
        }
        return "unknown violation";
    }
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    std::vector<std::string> messages() const {
        std::vector<std::string> out;
        out.reserve(violations.size());
        for (const auto& v : violations) out.push_back(v.to_string());
        return out;
    }
};

namespace detail {

inline void check_shape(const MatchingInstance& inst) {
    if (inst.n <= 0) throw DimensionMismatch("instance size must be positive");
    auto square = [&](const Matrix& m, const char* name) {
        if (static_cast<int>(m.size()) != inst.n)
            throw DimensionMismatch(std::string(name) + " does not have n rows");
        for (const auto& row : m)
            if (static_cast<int>(row.size()) != inst.n)
                throw DimensionMismatch(std::string(name) + " has a row of wrong length");
    };
    square(inst.U, "U");
    square(inst.V, "V");
}

}  // namespace detail

/// Checks nonnegativity and strictness (distinct U rows, distinct V columns).
/// Shape problems are thrown as DimensionMismatch; invariant breaks are
/// collected into the report.
inline ValidationReport validate(const MatchingInstance& inst) {
    detail::check_shape(inst);
    ValidationReport report;

    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.n; ++j) {
            if (inst.U[i][j] < 0)
                report.violations.push_back(
                    {Violation::Kind::NegativeEntry, 'U', i, j, inst.U[i][j]});
            if (inst.V[i][j] < 0)
                report.violations.push_back(
                    {Violation::Kind::NegativeEntry, 'V', i, j, inst.V[i][j]});
        }

    // Strictness for men: distinct values within each U row.
    for (int i = 0; i < inst.n; ++i) {
        std::vector<Rational> sorted = inst.U[i];
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 1; k < sorted.size(); ++k)
            if (sorted[k] == sorted[k - 1]) {
                report.violations.push_back(
                    {Violation::Kind::DuplicateRowValue, 'U', i, -1, sorted[k]});
                break;
            }
    }

    // Strictness for women: distinct values within each V column.
    for (int j = 0; j < inst.n; ++j) {
        std::vector<Rational> sorted;
        sorted.reserve(inst.n);
        for (int i = 0; i < inst.n; ++i) sorted.push_back(inst.V[i][j]);
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 1; k < sorted.size(); ++k)
            if (sorted[k] == sorted[k - 1]) {
                report.violations.push_back(
                    {Violation::Kind::DuplicateColumnValue, 'V', -1, j, sorted[k]});
                break;
            }
    }

    return report;
}

/// Copy of the instance where man m reports `row` as his valuations.
inline MatchingInstance with_man_report(const MatchingInstance& inst, int m,
                                        std::vector<Rational> row) {
    MatchingInstance out = inst;
    out.U[m] = std::move(row);
    return out;
}

/// Copy of the instance where woman w reports `column` (indexed by man).
inline MatchingInstance with_woman_report(const MatchingInstance& inst, int w,
                                          const std::vector<Rational>& column) {
    MatchingInstance out = inst;
    for (int i = 0; i < inst.n; ++i) out.V[i][w] = column[i];
    return out;
}

}  // namespace fracmatch
