#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace subw {

using Rational = mpq_class;
using BigInt = mpz_class;

/// a/b in lowest terms (mpq arithmetic requires canonical operands).
inline Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

/// Parses "3", "-2/7" or a finite decimal such as "0.125". Throws DomainError.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q" in lowest terms, or "p" for integers.
std::string to_string(const Rational& value);

BigInt floor_of(const Rational& value);
BigInt ceil_of(const Rational& value);

/// Largest integer k >= 0 with k <= base^exponent, for base >= 1 and exponent >= 0.
BigInt floor_power(unsigned long base, const Rational& exponent);

/// Sign of ratio - base^exponent, for ratio > 0, base >= 1. Exact.
int compare_to_power(const Rational& ratio, unsigned long base, const Rational& exponent);

}  // namespace subw
