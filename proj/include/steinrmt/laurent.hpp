#pragma once

#include <compare>
#include <map>
#include <string>

#include "steinrmt/rational.hpp"

namespace steinrmt {

/// Exponent of the formal dimension n, measured in half units so that the
/// raw form of a scaled odd-degree trace (n^{-k/2} tr A^k) stays exact.
class NPower {
 public:
  constexpr NPower() = default;
  static constexpr NPower of(int exponent) { return NPower(2 * exponent); }
  static constexpr NPower from_twice(int twice) { return NPower(twice); }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// Integer exponent; throws std::logic_error for half-integers.
  int exponent() const;
  double as_double() const { return twice_ / 2.0; }

  constexpr NPower operator+(NPower o) const { return NPower(twice_ + o.twice_); }
  constexpr NPower operator-(NPower o) const { return NPower(twice_ - o.twice_); }
  constexpr NPower operator-() const { return NPower(-twice_); }
  constexpr auto operator<=>(const NPower&) const = default;

  /// "", "n", "n^2", "n^-1", "n^-3/2".
  std::string str() const;

 private:
  constexpr explicit NPower(int twice) : twice_(twice) {}
  int twice_ = 0;
};

/// Exact Laurent polynomial in n with rational coefficients. Stored terms
/// never have zero coefficients.
class LaurentPolynomial {
 public:
  using Terms = std::map<NPower, Rational>;

  LaurentPolynomial() = default;
  LaurentPolynomial(Rational c, NPower p = NPower{});  // NOLINT: implicit from scalar

  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }
  Rational coefficient(NPower p) const;
  Rational constant_term() const { return coefficient(NPower{}); }
  /// Largest / smallest exponent present; throws on the zero polynomial.
  NPower max_power() const;
  NPower min_power() const;

  double evaluate(double n) const;
  void add_term(const Rational& c, NPower p);

  LaurentPolynomial& operator+=(const LaurentPolynomial& o);
  LaurentPolynomial& operator-=(const LaurentPolynomial& o);
  LaurentPolynomial& operator*=(const LaurentPolynomial& o);
  LaurentPolynomial& operator*=(const Rational& c);
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator*(LaurentPolynomial a, const LaurentPolynomial& b) { return a *= b; }
  LaurentPolynomial operator-() const;
  bool operator==(const LaurentPolynomial& o) const { return terms_ == o.terms_; }

  /// Highest power first, e.g. "2 n^3 + n" or "9/4 + 9/4 n^-2"; zero is "0".
  std::string str() const;

 private:
  Terms terms_;
};

/// Exact expectation values produced by the Wick oracle.
using NPolynomial = LaurentPolynomial;

}  // namespace steinrmt
