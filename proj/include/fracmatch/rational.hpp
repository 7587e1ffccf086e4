#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "fracmatch/errors.hpp"

namespace fracmatch {

// All valuations, utilities and LP quantities are exact rationals. Stability
// is decided by strict inequalities, so no floating point appears anywhere in
// a decision path. GMP-backed rationals are canonical by construction:
// lowest terms, positive denominator.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw ParseError("rational with zero denominator");
    return Rational(num, den);  // canonicalizes
}

inline Integer rational_num(const Rational& r) { return numerator(r); }
inline Integer rational_den(const Rational& r) { return denominator(r); }

/// Total bit size of numerator plus denominator; the LP blow-up guard
/// measures tableau entries with this.
inline std::size_t bit_size(const Rational& r) {
    const Integer num = abs(numerator(r));
    const Integer den = denominator(r);
    const std::size_t nb = num == 0 ? 1 : static_cast<std::size_t>(msb(num)) + 1;
    const std::size_t db = den == 1 ? 1 : static_cast<std::size_t>(msb(den)) + 1;
    return nb + db;
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace detail

/// Exact parse of "p/q", decimal ("0.25", "-3.5") and integer strings.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw ParseError("empty rational literal: '" + std::string(text) + "'");

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den))
            throw ParseError("malformed fraction literal: '" + std::string(text) + "'");
        value = make_rational(Integer(std::string(num)), Integer(std::string(den)));
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if ((!whole.empty() && !detail::all_digits(whole)) || !detail::all_digits(frac))
            throw ParseError("malformed decimal literal: '" + std::string(text) + "'");
        Integer digits(std::string(whole.empty() ? "0" : std::string(whole)) + std::string(frac));
        Integer scale = pow(Integer(10), static_cast<unsigned>(frac.size()));
        value = make_rational(digits, scale);
    } else {
        if (!detail::all_digits(s))
            throw ParseError("malformed integer literal: '" + std::string(text) + "'");
        value = Rational(Integer(std::string(s)));
    }
    return negative ? Rational(-value) : value;
}

/// Always "p/q", q > 0, lowest terms (so integers read "k/1").
inline std::string to_fraction_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// "p" for integers, otherwise "p/q".
inline std::string to_canonical_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return to_fraction_string(r);
}

}  // namespace fracmatch
