#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace steinrmt {

using Integer = mpz_class;
using Rational = mpq_class;

/// Canonical text form: "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Accepts "a", "-a", "a/b"; the result is canonicalized.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

Rational make_rational(long num, long den = 1);

/// Shortest decimal string that round-trips to the same double.
std::string shortest_repr(double value);

}  // namespace steinrmt
