#include "steinrmt/chebyshev.hpp"

#include <stdexcept>

#include "steinrmt/errors.hpp"

namespace steinrmt {

UnivariatePolynomial::UnivariatePolynomial(std::vector<Rational> coefficients)
    : coefficients_(std::move(coefficients)) {
  for (auto& c : coefficients_) c.canonicalize();
  trim();
}

UnivariatePolynomial UnivariatePolynomial::constant(const Rational& c) {
  return UnivariatePolynomial(std::vector<Rational>{c});
}

UnivariatePolynomial UnivariatePolynomial::monomial(int degree, const Rational& c) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return UnivariatePolynomial(std::move(v));
}

void UnivariatePolynomial::trim() {
  while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
}

Rational UnivariatePolynomial::coefficient(int k) const {
  if (k < 0 || k > degree()) return 0;
  return coefficients_[k];
}

UnivariatePolynomial UnivariatePolynomial::derivative() const {
  if (coefficients_.size() <= 1) return {};
  std::vector<Rational> d(coefficients_.size() - 1);
  for (std::size_t k = 1; k < coefficients_.size(); ++k) d[k - 1] = coefficients_[k] * static_cast<long>(k);
  return UnivariatePolynomial(std::move(d));
}

UnivariatePolynomial UnivariatePolynomial::scale_argument(const Rational& c) const {
  std::vector<Rational> v(coefficients_);
  Rational power = 1;
  for (auto& a : v) {
    a *= power;
    power *= c;
  }
  return UnivariatePolynomial(std::move(v));
}

Rational UnivariatePolynomial::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double UnivariatePolynomial::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

UnivariatePolynomial& UnivariatePolynomial::operator+=(const UnivariatePolynomial& o) {
  if (o.coefficients_.size() > coefficients_.size()) coefficients_.resize(o.coefficients_.size());
  for (std::size_t k = 0; k < o.coefficients_.size(); ++k) coefficients_[k] += o.coefficients_[k];
  trim();
  return *this;
}

UnivariatePolynomial& UnivariatePolynomial::operator-=(const UnivariatePolynomial& o) {
  if (o.coefficients_.size() > coefficients_.size()) coefficients_.resize(o.coefficients_.size());
  for (std::size_t k = 0; k < o.coefficients_.size(); ++k) coefficients_[k] -= o.coefficients_[k];
  trim();
  return *this;
}

UnivariatePolynomial& UnivariatePolynomial::operator*=(const Rational& c) {
  for (auto& a : coefficients_) a *= c;
  trim();
  return *this;
}

UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coefficients_.size() + b.coefficients_.size() - 1);
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i)
    for (std::size_t j = 0; j < b.coefficients_.size(); ++j)
      v[i + j] += a.coefficients_[i] * b.coefficients_[j];
  return UnivariatePolynomial(std::move(v));
}

std::string UnivariatePolynomial::str() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coefficients_[k];
    if (c == 0) continue;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    Rational mag = abs(c);
    if (k == 0) {
      out += to_string(mag);
      continue;
    }
    if (mag != 1) out += to_string(mag) + " ";
    out += k == 1 ? "x" : "x^" + std::to_string(k);
  }
  return out;
}

namespace {

UnivariatePolynomial three_term(int p, int max_degree, const UnivariatePolynomial& p1) {
  if (p < 0) throw std::invalid_argument("negative Chebyshev index");
  if (p > max_degree) throw DegreeCapExceeded(p, max_degree);
  UnivariatePolynomial prev = UnivariatePolynomial::constant(1);
  if (p == 0) return prev;
  UnivariatePolynomial cur = p1;
  const UnivariatePolynomial two_x = UnivariatePolynomial::monomial(1, 2);
  for (int k = 1; k < p; ++k) {
    UnivariatePolynomial next = two_x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

UnivariatePolynomial chebyshev_T(int p, int max_degree) {
  return three_term(p, max_degree, UnivariatePolynomial::monomial(1, 1));
}

UnivariatePolynomial chebyshev_U(int p, int max_degree) {
  return three_term(p, max_degree, UnivariatePolynomial::monomial(1, 2));
}

Integer catalan(int p) {
  if (p < 0) throw std::invalid_argument("negative Catalan index");
  std::vector<Integer> c(p + 1);
  c[0] = 1;
  for (int m = 1; m <= p; ++m)
    for (int k = 0; k < m; ++k) c[m] += c[k] * c[m - 1 - k];
  Integer binom;
  mpz_bin_uiui(binom.get_mpz_t(), 2 * static_cast<unsigned long>(p), static_cast<unsigned long>(p));
  if (binom % (p + 1) != 0 || binom / (p + 1) != c[p]) {
    throw std::logic_error("Catalan recursion disagrees with closed form");
  }
  return c[p];
}

Rational semicircle_moment(int k) {
  if (k < 0) throw std::invalid_argument("negative moment order");
  if (k % 2 != 0) return 0;
  return Rational(catalan(k / 2));
}

Rational semicircle_inner_product(const UnivariatePolynomial& f, const UnivariatePolynomial& g) {
  const UnivariatePolynomial fg = f * g;
  Rational total = 0;
  for (int k = 0; k <= fg.degree(); k += 2) {
    if (fg.coefficient(k) != 0) total += fg.coefficient(k) * semicircle_moment(k);
  }
  return total;
}

SemicircleMoments::SemicircleMoments(int max_order) {
  if (max_order < 0) throw std::invalid_argument("negative moment order");
  moments_.resize(max_order + 1);
  std::vector<Integer> c(max_order / 2 + 1);
  c[0] = 1;
  for (int m = 1; m <= max_order / 2; ++m)
    for (int k = 0; k < m; ++k) c[m] += c[k] * c[m - 1 - k];
  for (int k = 0; k <= max_order; k += 2) moments_[k] = Rational(c[k / 2]);
}

const Rational& SemicircleMoments::moment(int k) const {
  if (k < 0) throw std::invalid_argument("negative moment order");
  if (k > max_order()) throw DegreeCapExceeded(k, max_order());
  return moments_[k];
}

}  // namespace steinrmt
