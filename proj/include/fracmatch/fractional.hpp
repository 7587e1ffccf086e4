#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "fracmatch/instance.hpp"
#include "fracmatch/integral.hpp"

namespace fracmatch {

/// Edge-weight table: weights[m][w] = weight placed on the pair (m, w).
/// Entries lie in [0,1] with every row and column sum at most 1. Row sums
/// strictly below 1 are legitimate (partial matchings from Algorithm-1
/// residual composition); the solver itself always emits sums of exactly 1.
struct FractionalMatching {
    Matrix weights;

    FractionalMatching() = default;
    explicit FractionalMatching(Matrix w) : weights(std::move(w)) {}

    int n() const { return static_cast<int>(weights.size()); }

    static FractionalMatching zero(int n) {
        return FractionalMatching(Matrix(n, std::vector<Rational>(n, Rational(0))));
    }

    static FractionalMatching from_integral(const IntegralMatching& mu) {
        FractionalMatching out = zero(mu.size());
        for (int m = 0; m < mu.size(); ++m)
            if (mu.matched(m)) out.weights[m][mu.pairing[m]] = 1;
        return out;
    }

    /// The permutation matching this table equals, if it is integral.
    std::optional<IntegralMatching> as_integral() const {
        IntegralMatching mu(n());
        for (int m = 0; m < n(); ++m)
            for (int w = 0; w < n(); ++w) {
                if (weights[m][w] == 0) continue;
                if (weights[m][w] != 1) return std::nullopt;
                mu.pairing[m] = w;
            }
        return mu;
    }

    bool operator==(const FractionalMatching&) const = default;
};

struct UtilityProfile {
    std::vector<Rational> men_utils;
    std::vector<Rational> women_utils;

    const Rational& of(AgentId a) const {
        return a.side == Side::Men ? men_utils[a.index] : women_utils[a.index];
    }
};

struct StabilityReport {
    bool stable = true;
    std::vector<std::pair<int, int>> blocking;
};

namespace detail {

inline void check_weights(const MatchingInstance& instance, const FractionalMatching& mu) {
    if (mu.n() != instance.n)
        throw WeightInvariantViolated("weight matrix size does not match instance");
    for (const auto& row : mu.weights)
        if (static_cast<int>(row.size()) != instance.n)
            throw WeightInvariantViolated("weight matrix is not square");
    for (int m = 0; m < instance.n; ++m) {
        Rational row_sum(0);
        for (int w = 0; w < instance.n; ++w) {
            const Rational& x = mu.weights[m][w];
            if (x < 0 || x > 1)
                throw WeightInvariantViolated("weight outside [0,1] at (" + std::to_string(m) +
                                              "," + std::to_string(w) + ")");
            row_sum += x;
        }
        if (row_sum > 1)
            throw WeightInvariantViolated("row " + std::to_string(m) + " sums above 1");
    }
    for (int w = 0; w < instance.n; ++w) {
        Rational col_sum(0);
        for (int m = 0; m < instance.n; ++m) col_sum += mu.weights[m][w];
        if (col_sum > 1)
            throw WeightInvariantViolated("column " + std::to_string(w) + " sums above 1");
    }
}

}  // namespace detail

/// u_m = sum_w mu(m,w) U(m,w) and v_w = sum_m mu(m,w) V(m,w), exactly.
inline UtilityProfile utilities(const MatchingInstance& instance, const FractionalMatching& mu) {
    detail::check_weights(instance, mu);
    UtilityProfile out;
    out.men_utils.assign(instance.n, Rational(0));
    out.women_utils.assign(instance.n, Rational(0));
    for (int m = 0; m < instance.n; ++m)
        for (int w = 0; w < instance.n; ++w) {
            const Rational& x = mu.weights[m][w];
            if (x == 0) continue;
            out.men_utils[m] += x * instance.U[m][w];
            out.women_utils[w] += x * instance.V[m][w];
        }
    return out;
}

/// Fractional stability check: (m,w) blocks iff U(m,w) > u_m and
/// V(m,w) > v_w, both strict, both exact.
inline StabilityReport is_stable(const MatchingInstance& instance, const FractionalMatching& mu) {
    const UtilityProfile util = utilities(instance, mu);
    StabilityReport report;
    for (int m = 0; m < instance.n; ++m)
        for (int w = 0; w < instance.n; ++w)
            if (instance.U[m][w] > util.men_utils[m] && instance.V[m][w] > util.women_utils[w])
                report.blocking.emplace_back(m, w);
    report.stable = report.blocking.empty();
    return report;
}

/// Weighted sum of perfect matchings; weights must be nonnegative and sum
/// to exactly 1.
inline FractionalMatching convex_combine(
    const std::vector<std::pair<Rational, IntegralMatching>>& components) {
    if (components.empty()) throw WeightsNotConvex("empty combination");
    const int n = components.front().second.size();
    Rational total(0);
    for (const auto& [weight, matching] : components) {
        if (weight < 0) throw WeightsNotConvex("negative component weight");
        total += weight;
        if (matching.size() != n)
            throw DimensionMismatch("component matchings have different sizes");
        if (!matching.perfect()) throw InvalidMatching("component matching is not perfect");
        std::vector<char> used(n, 0);
        for (int m = 0; m < n; ++m) {
            if (used[matching.pairing[m]])
                throw InvalidMatching("component matching is not injective");
            used[matching.pairing[m]] = 1;
        }
    }
    if (total != 1) throw WeightsNotConvex("weights sum to " + to_canonical_string(total));

    FractionalMatching out = FractionalMatching::zero(n);
    for (const auto& [weight, matching] : components)
        for (int m = 0; m < n; ++m) out.weights[m][matching.pairing[m]] += weight;
    return out;
}

namespace detail {

// Kuhn's augmenting-path search over a boolean support graph.
inline bool kuhn_try(int m, const std::vector<std::vector<char>>& support,
                     std::vector<int>& match_w, std::vector<char>& seen) {
    const int n = static_cast<int>(support.size());
    for (int w = 0; w < n; ++w) {
        if (!support[m][w] || seen[w]) continue;
        seen[w] = 1;
        if (match_w[w] < 0 || kuhn_try(match_w[w], support, match_w, seen)) {
            match_w[w] = m;
            return true;
        }
    }
    return false;
}

inline bool has_perfect_matching(const std::vector<std::vector<char>>& support) {
    const int n = static_cast<int>(support.size());
    std::vector<int> match_w(n, -1);
    for (int m = 0; m < n; ++m) {
        std::vector<char> seen(n, 0);
        if (!kuhn_try(m, support, match_w, seen)) return false;
    }
    return true;
}

// Lexicographically least perfect matching on the support, or nullopt.
inline std::optional<IntegralMatching> lex_least_perfect(
    std::vector<std::vector<char>> support) {
    const int n = static_cast<int>(support.size());
    if (!has_perfect_matching(support)) return std::nullopt;
    IntegralMatching mu(n);
    std::vector<char> taken(n, 0);
    for (int m = 0; m < n; ++m) {
        for (int w = 0; w < n; ++w) {
            if (!support[m][w] || taken[w]) continue;
            // Fix (m,w) tentatively and test the remainder.
            std::vector<std::vector<char>> rest = support;
            for (int ww = 0; ww < n; ++ww) rest[m][ww] = 0;
            for (int mm = 0; mm < n; ++mm) rest[mm][w] = 0;
            rest[m][w] = 1;
            if (has_perfect_matching(rest)) {
                mu.pairing[m] = w;
                taken[w] = 1;
                support = std::move(rest);
                break;
            }
        }
        if (!mu.matched(m)) return std::nullopt;  // cannot happen on feasible support
    }
    return mu;
}

}  // namespace detail

/// Birkhoff-von Neumann decomposition of a doubly stochastic table.
/// Each step extracts the lexicographically least perfect matching on the
/// positive support and subtracts its bottleneck weight, so results are
/// reproducible and exact; convex_combine(result) == mu. Every extracted
/// matching owns a cell that later steps never reuse, which caps the
/// component count at n^2 - 2n + 2.
inline std::vector<std::pair<Rational, IntegralMatching>> bvn_decompose(
    const FractionalMatching& mu) {
    const int n = mu.n();
    if (n == 0) throw NotDoublyStochastic("empty matrix");
    Matrix rem = mu.weights;
    for (int m = 0; m < n; ++m) {
        Rational row_sum(0);
        for (int w = 0; w < n; ++w) {
            if (static_cast<int>(rem[m].size()) != n)
                throw NotDoublyStochastic("matrix is not square");
            if (rem[m][w] < 0) throw NotDoublyStochastic("negative weight");
            row_sum += rem[m][w];
        }
        if (row_sum != 1) throw NotDoublyStochastic("row " + std::to_string(m) + " sum != 1");
    }
    for (int w = 0; w < n; ++w) {
        Rational col_sum(0);
        for (int m = 0; m < n; ++m) col_sum += rem[m][w];
        if (col_sum != 1) throw NotDoublyStochastic("column " + std::to_string(w) + " sum != 1");
    }

    std::vector<std::pair<Rational, IntegralMatching>> components;
    Rational remaining(1);
    while (remaining > 0) {
        std::vector<std::vector<char>> support(n, std::vector<char>(n, 0));
        for (int m = 0; m < n; ++m)
            for (int w = 0; w < n; ++w) support[m][w] = rem[m][w] > 0;
        auto matching = detail::lex_least_perfect(std::move(support));
        if (!matching)
            throw NotDoublyStochastic("support admits no perfect matching");
        Rational bottleneck = remaining;
        for (int m = 0; m < n; ++m)
            bottleneck = std::min(bottleneck, rem[m][matching->pairing[m]]);
        for (int m = 0; m < n; ++m) rem[m][matching->pairing[m]] -= bottleneck;
        components.emplace_back(bottleneck, std::move(*matching));
        remaining -= bottleneck;
    }
    return components;
}

}  // namespace fracmatch
