#pragma once

// Exact Chebyshev polynomials, Catalan numbers and semicircle moments.
// Everything here is rational arithmetic; no floating point.

#include <span>
#include <string>
#include <vector>

#include "steinrmt/rational.hpp"

namespace steinrmt {

inline constexpr int kDefaultMaxPolynomialDegree = 32;

/// Polynomial with exact rational coefficients, ascending by degree.
/// The stored highest coefficient is nonzero unless the polynomial is zero.
class UnivariatePolynomial {
 public:
  UnivariatePolynomial() = default;
  explicit UnivariatePolynomial(std::vector<Rational> coefficients);

  static UnivariatePolynomial constant(const Rational& c);
  static UnivariatePolynomial monomial(int degree, const Rational& c = 1);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_zero() const { return coefficients_.empty(); }
  Rational coefficient(int k) const;
  std::span<const Rational> coefficients() const { return coefficients_; }

  UnivariatePolynomial derivative() const;
  /// x -> c x, done as exact coefficient scaling by powers of c.
  UnivariatePolynomial scale_argument(const Rational& c) const;
  Rational evaluate(const Rational& x) const;
  double evaluate(double x) const;

  UnivariatePolynomial& operator+=(const UnivariatePolynomial& o);
  UnivariatePolynomial& operator-=(const UnivariatePolynomial& o);
  UnivariatePolynomial& operator*=(const Rational& c);
  friend UnivariatePolynomial operator+(UnivariatePolynomial a, const UnivariatePolynomial& b) { return a += b; }
  friend UnivariatePolynomial operator-(UnivariatePolynomial a, const UnivariatePolynomial& b) { return a -= b; }
  friend UnivariatePolynomial operator*(UnivariatePolynomial a, const Rational& c) { return a *= c; }
  friend UnivariatePolynomial operator*(const Rational& c, UnivariatePolynomial a) { return a *= c; }
  friend UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b);
  bool operator==(const UnivariatePolynomial& o) const { return coefficients_ == o.coefficients_; }

  /// e.g. "8 x^4 - 8 x^2 + 1".
  std::string str() const;

 private:
  void trim();
  std::vector<Rational> coefficients_;
};

/// T_p via T_{p+1} = 2x T_p - T_{p-1}. Throws DegreeCapExceeded for p > max_degree.
UnivariatePolynomial chebyshev_T(int p, int max_degree = kDefaultMaxPolynomialDegree);
/// U_p via the same recurrence with U_1 = 2x.
UnivariatePolynomial chebyshev_U(int p, int max_degree = kDefaultMaxPolynomialDegree);

/// Catalan number. Computed from the convolution recursion and checked
/// against binom(2p, p) / (p + 1).
Integer catalan(int p);

/// Moments of the variance-one semicircle law: C_{k/2} for even k, else 0.
Rational semicircle_moment(int k);

/// Integral of f g against the semicircle law.
Rational semicircle_inner_product(const UnivariatePolynomial& f, const UnivariatePolynomial& g);

/// Immutable table of semicircle moments up to a fixed order.
class SemicircleMoments {
 public:
  explicit SemicircleMoments(int max_order = 2 * kDefaultMaxPolynomialDegree);
  int max_order() const { return static_cast<int>(moments_.size()) - 1; }
  /// Throws DegreeCapExceeded beyond max_order().
  const Rational& moment(int k) const;

 private:
  std::vector<Rational> moments_;
};

}  // namespace steinrmt
