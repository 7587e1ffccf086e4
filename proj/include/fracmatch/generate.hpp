#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fracmatch/cmfp.hpp"
#include "fracmatch/instance.hpp"

namespace fracmatch {

enum class GenMode { Uniform, NoMfp, Cmfp };

namespace detail {

// SplitMix64. Hand-rolled so generated instances are bit-identical across
// platforms and standard libraries.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    /// Unbiased draw from [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % bound;
    }
};

/// n distinct integers from [1, pool_size], in random order
/// (partial Fisher-Yates over the value pool).
inline std::vector<int> distinct_values(SplitMix64& rng, int n, int pool_size) {
    std::vector<int> pool(pool_size);
    std::iota(pool.begin(), pool.end(), 1);
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t j = i + rng.below(pool_size - i);
        std::swap(pool[i], pool[j]);
        out[i] = pool[i];
    }
    return out;
}

inline std::vector<int> random_permutation(SplitMix64& rng, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    return perm;
}

inline MatchingInstance uniform_instance(SplitMix64& rng, int n) {
    // Distinct integers in [1, 10n] per U row and per V column; readable and
    // strict by construction.
    MatchingInstance inst;
    inst.n = n;
    inst.U.assign(n, std::vector<Rational>(n));
    inst.V.assign(n, std::vector<Rational>(n));
    for (int m = 0; m < n; ++m) {
        const std::vector<int> row = distinct_values(rng, n, 10 * n);
        for (int w = 0; w < n; ++w) inst.U[m][w] = row[w];
    }
    for (int w = 0; w < n; ++w) {
        const std::vector<int> col = distinct_values(rng, n, 10 * n);
        for (int m = 0; m < n; ++m) inst.V[m][w] = col[m];
    }
    return inst;
}

// CMFP sampler. Pick the forced matching and an extraction order, then give
// every agent a random ranking subject to one rule: the partner precedes
// every counterpart extracted in a later round. Earlier-round counterparts
// may rank anywhere, which interleaves "soulmate" and "popularity" shapes.
// Algorithm 1 is confluent, so any extraction order it picks reaches the
// same perfect matching.
inline MatchingInstance cmfp_instance(SplitMix64& rng, int n) {
    const std::vector<int> partner_of_man = random_permutation(rng, n);  // man -> woman
    const std::vector<int> extraction = random_permutation(rng, n);     // round -> man

    std::vector<int> round_of_man(n), round_of_woman(n);
    for (int t = 0; t < n; ++t) {
        round_of_man[extraction[t]] = t;
        round_of_woman[partner_of_man[extraction[t]]] = t;
    }

    // Random ranking of `others` for an agent of round `t` whose partner is
    // `partner`: later-round counterparts may appear only after the partner.
    auto ranking = [&](int t, int partner, const std::vector<int>& round_of) {
        const int total = static_cast<int>(round_of.size());
        std::vector<int> pool(total);
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> order;
        bool partner_placed = false;
        while (!pool.empty()) {
            std::vector<int> allowed;
            for (int c : pool)
                if (c == partner || round_of[c] < t || partner_placed) allowed.push_back(c);
            const int pick = allowed[rng.below(allowed.size())];
            if (pick == partner) partner_placed = true;
            order.push_back(pick);
            pool.erase(std::find(pool.begin(), pool.end(), pick));
        }
        return order;
    };

    MatchingInstance inst;
    inst.n = n;
    inst.U.assign(n, std::vector<Rational>(n));
    inst.V.assign(n, std::vector<Rational>(n));
    for (int m = 0; m < n; ++m) {
        std::vector<int> values = distinct_values(rng, n, 10 * n);
        std::sort(values.rbegin(), values.rend());
        const std::vector<int> order =
            ranking(round_of_man[m], partner_of_man[m], round_of_woman);
        for (int pos = 0; pos < n; ++pos) inst.U[m][order[pos]] = values[pos];
    }
    std::vector<int> partner_of_woman(n);
    for (int m = 0; m < n; ++m) partner_of_woman[partner_of_man[m]] = m;
    for (int w = 0; w < n; ++w) {
        std::vector<int> values = distinct_values(rng, n, 10 * n);
        std::sort(values.rbegin(), values.rend());
        const std::vector<int> order = ranking(round_of_woman[w], partner_of_woman[w], round_of_man);
        for (int pos = 0; pos < n; ++pos) inst.V[order[pos]][w] = values[pos];
    }
    return inst;
}

}  // namespace detail

/// Deterministic in (n, seed, mode), bit-exact across platforms.
/// NoMfp rejection-samples uniform draws; a 1x1 instance is always an MFP
/// pair, so it exhausts the retry budget.
inline MatchingInstance generate(int n, std::uint64_t seed, GenMode mode) {
    if (n < 1) throw DimensionMismatch("instance size must be positive");
    detail::SplitMix64 rng{seed};
    rng.state = rng.next() ^ static_cast<std::uint64_t>(n);
    rng.state = rng.next() ^ (static_cast<std::uint64_t>(mode) + 1);

    constexpr int kNoMfpRetries = 10000;
    MatchingInstance inst;
    switch (mode) {
        case GenMode::Uniform:
            inst = detail::uniform_instance(rng, n);
            break;
        case GenMode::Cmfp:
            inst = detail::cmfp_instance(rng, n);
            break;
        case GenMode::NoMfp: {
            bool found = false;
            for (int attempt = 0; attempt < kNoMfpRetries && !found; ++attempt) {
                inst = detail::uniform_instance(rng, n);
                found = mfp_pairs(inst).empty();
            }
            if (!found)
                throw GenerationExhausted("no MFP-free instance after " +
                                          std::to_string(kNoMfpRetries) + " draws (n=" +
                                          std::to_string(n) + ")");
            break;
        }
    }
    if (!validate(inst).ok()) throw Error("internal: generated instance failed validation");
    return inst;
}

}  // namespace fracmatch
