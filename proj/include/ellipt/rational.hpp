#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

namespace ellipt {

using BigInt = boost::multiprecision::mpz_int;

// Canonical-form rational: gcd(num, den) == 1, den > 0. The GMP-backed type
// keeps the canonical form through all arithmetic; parse_rational guards the
// string entry point (mpq string assignment alone would not reduce).
using Rational = boost::multiprecision::mpq_rational;

// Decimal integer, optional leading '-' (or '+'), ASCII digits only. The gmp
// string constructor treats a leading zero as octal; every string entry point
// must go through here instead. Throws parse_error on malformed text.
BigInt parse_bigint(const std::string& text);

// Accepts "p", "p/q", optional leading '-' (or '+'), ASCII digits only.
// Throws parse_error on malformed text or q == 0.
Rational parse_rational(const std::string& text);

// "p/q" with the '/q' omitted when the denominator is 1.
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

// Exact square root when r is a perfect square of a rational, nullopt otherwise.
std::optional<Rational> rational_sqrt(const Rational& r);

} // namespace ellipt
