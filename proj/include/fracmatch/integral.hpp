#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "fracmatch/instance.hpp"

namespace fracmatch {

/// Pairing of men to women; pairing[m] is the woman matched to man m or
/// kUnmatched. Algorithm-1 residual composition needs partial matchings, so
/// perfection is a query, not an invariant.
struct IntegralMatching {
    static constexpr int kUnmatched = -1;

    std::vector<int> pairing;

    IntegralMatching() = default;
    explicit IntegralMatching(int n) : pairing(n, kUnmatched) {}
    explicit IntegralMatching(std::vector<int> p) : pairing(std::move(p)) {}

    int size() const { return static_cast<int>(pairing.size()); }
    bool matched(int m) const { return pairing[m] != kUnmatched; }

    bool perfect() const {
        for (int w : pairing)
            if (w == kUnmatched) return false;
        return true;
    }

    /// woman index -> man index (kUnmatched where no man holds her).
    std::vector<int> inverse() const {
        std::vector<int> inv(pairing.size(), kUnmatched);
        for (int m = 0; m < size(); ++m)
            if (matched(m)) inv[pairing[m]] = m;
        return inv;
    }

    std::vector<std::pair<int, int>> pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int m = 0; m < size(); ++m)
            if (matched(m)) out.emplace_back(m, pairing[m]);
        return out;
    }

    bool operator==(const IntegralMatching&) const = default;
};

namespace detail {

inline void check_matching(const MatchingInstance& inst, const IntegralMatching& mu) {
    if (mu.size() != inst.n)
        throw InvalidMatching("matching size does not match instance");
    std::vector<char> used(inst.n, 0);
    for (int m = 0; m < inst.n; ++m) {
        int w = mu.pairing[m];
        if (w == IntegralMatching::kUnmatched) continue;
        if (w < 0 || w >= inst.n) throw InvalidMatching("woman index out of range");
        if (used[w]) throw InvalidMatching("woman matched twice");
        used[w] = 1;
    }
}

inline IntegralMatching transpose_matching(const IntegralMatching& mu) {
    IntegralMatching out(mu.size());
    for (int m = 0; m < mu.size(); ++m)
        if (mu.matched(m)) out.pairing[mu.pairing[m]] = m;
    return out;
}

}  // namespace detail

/// Deferred-acceptance with the chosen side proposing. Proposals go out in
/// index order; with strict preferences the outcome is the proposer-optimal
/// stable matching either way, fixing the order just makes traces canonical.
inline IntegralMatching gale_shapley(const MatchingInstance& instance, Side proposers) {
    if (proposers == Side::Women)
        return detail::transpose_matching(gale_shapley(instance.swapped_sides(), Side::Men));

    const int n = instance.n;
    // Preference lists: for each man the women in decreasing value order.
    std::vector<std::vector<int>> pref(n);
    for (int m = 0; m < n; ++m) {
        pref[m].resize(n);
        std::iota(pref[m].begin(), pref[m].end(), 0);
        std::sort(pref[m].begin(), pref[m].end(),
                  [&](int a, int b) { return instance.U[m][a] > instance.U[m][b]; });
    }

    std::vector<int> next_proposal(n, 0);
    std::vector<int> holds(n, IntegralMatching::kUnmatched);  // woman -> man
    std::vector<int> free_men(n);
    std::iota(free_men.rbegin(), free_men.rend(), 0);  // lowest index proposes first

    while (!free_men.empty()) {
        int m = free_men.back();
        free_men.pop_back();
        int w = pref[m][next_proposal[m]++];
        int rival = holds[w];
        if (rival == IntegralMatching::kUnmatched) {
            holds[w] = m;
        } else if (instance.V[m][w] > instance.V[rival][w]) {
            holds[w] = m;
            free_men.push_back(rival);
        } else {
            free_men.push_back(m);
        }
    }

    IntegralMatching mu(n);
    for (int w = 0; w < n; ++w) mu.pairing[holds[w]] = w;
    return mu;
}

/// All pairs (m, w) where both strictly prefer each other to their current
/// assignment. Unmatched agents count with utility 0. Empty result means the
/// matching is stable.
inline std::vector<std::pair<int, int>> blocking_pairs(const MatchingInstance& instance,
                                                       const IntegralMatching& mu) {
    detail::check_matching(instance, mu);
    const int n = instance.n;
    const std::vector<int> inv = mu.inverse();

    std::vector<Rational> mu_util(n, Rational(0));
    std::vector<Rational> wu_util(n, Rational(0));
    for (int m = 0; m < n; ++m)
        if (mu.matched(m)) mu_util[m] = instance.U[m][mu.pairing[m]];
    for (int w = 0; w < n; ++w)
        if (inv[w] != IntegralMatching::kUnmatched) wu_util[w] = instance.V[inv[w]][w];

    std::vector<std::pair<int, int>> blocking;
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            if (instance.U[m][w] > mu_util[m] && instance.V[m][w] > wu_util[w])
                blocking.emplace_back(m, w);
    return blocking;
}

/// Brute-force enumeration of every stable perfect matching, in lexicographic
/// pairing order. Test oracle; n! work, so guarded by `bound`.
inline std::vector<IntegralMatching> enumerate_stable(const MatchingInstance& instance,
                                                      int bound = 8) {
    if (instance.n > bound)
        throw BoundExceeded("enumerate_stable limited to n <= " + std::to_string(bound));
    std::vector<int> perm(instance.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<IntegralMatching> stable;
    do {
        IntegralMatching mu(perm);
        if (blocking_pairs(instance, mu).empty()) stable.push_back(std::move(mu));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return stable;
}

}  // namespace fracmatch
