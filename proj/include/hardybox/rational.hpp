#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hardybox {

using BigInt = boost::multiprecision::cpp_int;

// Exact arbitrary-precision rational. Always kept in canonical form:
// gcd(|num|, den) = 1, den >= 1.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Canonical "num/den" form, denominator always printed ("0/1", "1/2", "-3/4").
inline std::string to_fraction_string(const Rational& r) {
    return rat_num(r).str() + "/" + rat_den(r).str();
}

// Accepts "num/den" as well as bare integers ("0", "-3"). Strict decimal
// grammar: [+-]digits[/digits], denominator nonzero.
inline Rational rational_from_string(std::string_view s) {
    const auto bad = [&] {
        return std::invalid_argument("not a rational literal: '" + std::string(s) + "'");
    };
    const auto all_digits = [](std::string_view t) {
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    std::string_view num = s, den = "1";
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
        negative = num.front() == '-';
        num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) throw bad();
    const BigInt d{std::string(den)};
    if (d == 0) throw bad();
    BigInt n{std::string(num)};
    if (negative) n = -n;
    return Rational(n, d);
}

}  // namespace hardybox
