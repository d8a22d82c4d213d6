#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace uipq {

// Exact rational backed by GMP; mpq_class keeps itself canonical once we
// call canonicalize() after construction from raw num/den.
using Rational = mpq_class;
using BigInt = mpz_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const BigInt& num, const BigInt& den);

// "num/den" (or "num" when den == 1)
std::string to_string(const Rational& x);
Rational parse_rational(const std::string& s);

// nearest double; mpq_get_d truncates, so go through a long division
double to_double(const Rational& x);
long double to_long_double(const Rational& x);

// exact square root when x is the square of a rational
std::optional<Rational> exact_sqrt(const Rational& x);

Rational pow(const Rational& x, unsigned long e);

} // namespace uipq
