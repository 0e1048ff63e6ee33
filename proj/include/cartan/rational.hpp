#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cartan {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "3", "-3/4"; throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "3", "-3/4".
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_one(const Rational& q) { return q == 1; }

Rational factorial(unsigned n);

}  // namespace cartan
