#pragma once

#include <utility>
#include <vector>

#include "fracmatch/instance.hpp"
#include "fracmatch/integral.hpp"

namespace fracmatch {

/// Output of iterated mutual-first-preference extraction. `forced` is
/// expressed in original indices and may be partial; the residual instance
/// keeps a mapping back to original indices so forced pairs and a solved
/// residual compose without renumbering mistakes.
struct CmfpResult {
    struct Round {
        int man;
        int woman;
        int round;  // 1-based extraction round

        bool operator==(const Round&) const = default;
    };

    IntegralMatching forced;
    MatchingInstance residual;        // n == 0 when everyone was matched
    std::vector<int> residual_men;    // residual index -> original man index
    std::vector<int> residual_women;  // residual index -> original woman index
    std::vector<Round> rounds;

    bool perfect() const { return forced.perfect(); }
};

enum class CmfpClass { InCmfp, NotInCmfp };

namespace detail {

// Index of the largest entry of `row` restricted to alive positions.
// Strict preferences make the argmax unique.
inline int argmax_alive(const std::vector<Rational>& row, const std::vector<char>& alive) {
    int best = -1;
    for (int k = 0; k < static_cast<int>(row.size()); ++k) {
        if (!alive[k]) continue;
        if (best == -1 || row[k] > row[best]) best = k;
    }
    return best;
}

inline int argmax_col_alive(const Matrix& mat, int col, const std::vector<char>& alive) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(mat.size()); ++i) {
        if (!alive[i]) continue;
        if (best == -1 || mat[i][col] > mat[best][col]) best = i;
    }
    return best;
}

inline std::vector<std::pair<int, int>> mfp_pairs_alive(const MatchingInstance& instance,
                                                        const std::vector<char>& alive_men,
                                                        const std::vector<char>& alive_women) {
    std::vector<std::pair<int, int>> out;
    for (int m = 0; m < instance.n; ++m) {
        if (!alive_men[m]) continue;
        int w = argmax_alive(instance.U[m], alive_women);
        if (w >= 0 && argmax_col_alive(instance.V, w, alive_men) == m) out.emplace_back(m, w);
    }
    return out;
}

}  // namespace detail

/// Pairs (m, w) that are each other's unique first preference, sorted by man.
inline std::vector<std::pair<int, int>> mfp_pairs(const MatchingInstance& instance) {
    std::vector<char> all_men(instance.n, 1), all_women(instance.n, 1);
    return detail::mfp_pairs_alive(instance, all_men, all_women);
}

/// Iterated MFP extraction. Each round removes the MFP pair with the lowest
/// man index among those currently present; the forced set itself does not
/// depend on the order, only the round trace does. Stops when the remaining
/// instance has no MFP pair.
inline CmfpResult cmfp_matching(const MatchingInstance& instance) {
    CmfpResult result;
    result.forced = IntegralMatching(instance.n);
    std::vector<char> alive_men(instance.n, 1), alive_women(instance.n, 1);

    int round = 1;
    for (;;) {
        auto pairs = detail::mfp_pairs_alive(instance, alive_men, alive_women);
        if (pairs.empty()) break;
        auto [m, w] = pairs.front();  // lowest man index
        result.forced.pairing[m] = w;
        result.rounds.push_back({m, w, round++});
        alive_men[m] = 0;
        alive_women[w] = 0;
    }

    for (int m = 0; m < instance.n; ++m)
        if (alive_men[m]) result.residual_men.push_back(m);
    for (int w = 0; w < instance.n; ++w)
        if (alive_women[w]) result.residual_women.push_back(w);
    if (!result.residual_men.empty())
        result.residual = instance.restricted_to(result.residual_men, result.residual_women);
    return result;
}

/// An instance is in CMFP exactly when Algorithm 1 matches everyone.
inline CmfpClass classify(const MatchingInstance& instance) {
    return cmfp_matching(instance).perfect() ? CmfpClass::InCmfp : CmfpClass::NotInCmfp;
}

}  // namespace fracmatch
