#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace patchq {

/// Exact score arithmetic. Scores are sums and averages of widths, so
/// denominators stay small, but random trees can grow them past 64 bits.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// floor(log2(x)) for x >= 1.
unsigned floor_log2(std::uint64_t x);

/// Exact decimal when the denominator has only factors 2 and 5; otherwise
/// rounded half-up to `fallback_places` digits.
std::string to_decimal(const Rational& value, unsigned fallback_places = 15);

/// Rounded half away from zero to `places` digits, trailing zeros (and a
/// bare trailing '.') removed: 15.75 -> "15.8", 24 -> "24", 0.5 -> "0.5".
std::string to_rounded(const Rational& value, unsigned places = 1);

/// "p/q", or "p" when the denominator is 1.
std::string to_fraction(const Rational& value);

bool is_terminating_decimal(const Rational& value);

} // namespace patchq
