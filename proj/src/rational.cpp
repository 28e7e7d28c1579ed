#include "patchq/rational.hpp"

#include <cassert>

namespace patchq {

unsigned floor_log2(std::uint64_t x) {
    assert(x >= 1);
    unsigned r = 0;
    while (x >>= 1)
        ++r;
    return r;
}

bool is_terminating_decimal(const Rational& value) {
    BigInt den = boost::multiprecision::denominator(value);
    while (den % 2 == 0)
        den /= 2;
    while (den % 5 == 0)
        den /= 5;
    return den == 1;
}

namespace {

BigInt pow10(unsigned places) {
    BigInt p = 1;
    for (unsigned i = 0; i < places; ++i)
        p *= 10;
    return p;
}

// Fixed-point rendering of |value| scaled by 10^places, already rounded.
std::string render_scaled(bool negative, const BigInt& scaled, unsigned places, bool trim) {
    std::string digits = scaled.str();
    if (places > 0) {
        if (digits.size() <= places)
            digits.insert(0, places - digits.size() + 1, '0');
        digits.insert(digits.size() - places, 1, '.');
        if (trim) {
            while (digits.back() == '0')
                digits.pop_back();
            if (digits.back() == '.')
                digits.pop_back();
        }
    }
    if (negative && digits != "0")
        digits.insert(0, 1, '-');
    return digits;
}

BigInt round_half_up(const Rational& magnitude, unsigned places) {
    Rational scaled = magnitude * Rational(pow10(places)) + Rational(1, 2);
    return boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
}

} // namespace

std::string to_rounded(const Rational& value, unsigned places) {
    const bool negative = value < 0;
    const Rational magnitude = negative ? Rational(-value) : value;
    return render_scaled(negative, round_half_up(magnitude, places), places, true);
}

std::string to_decimal(const Rational& value, unsigned fallback_places) {
    if (!is_terminating_decimal(value))
        return to_rounded(value, fallback_places);
    // The number of places needed is max(power of 2, power of 5) in the denominator.
    BigInt den = boost::multiprecision::denominator(value);
    unsigned twos = 0, fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    const unsigned places = std::max(twos, fives);
    const bool negative = value < 0;
    const Rational magnitude = negative ? Rational(-value) : value;
    const Rational scaled = magnitude * Rational(pow10(places));
    return render_scaled(negative, boost::multiprecision::numerator(scaled), places, true);
}

std::string to_fraction(const Rational& value) {
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

} // namespace patchq
