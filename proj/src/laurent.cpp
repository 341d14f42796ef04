#include "steinrmt/laurent.hpp"

#include <cmath>
#include <stdexcept>

namespace steinrmt {

int NPower::exponent() const {
  if (!is_integer()) throw std::logic_error("half-integer power of n");
  return twice_ / 2;
}

std::string NPower::str() const {
  if (twice_ == 0) return "";
  if (twice_ == 2) return "n";
  if (is_integer()) return "n^" + std::to_string(twice_ / 2);
  return "n^" + std::to_string(twice_) + "/2";
}

LaurentPolynomial::LaurentPolynomial(Rational c, NPower p) {
  add_term(c, p);
}

Rational LaurentPolynomial::coefficient(NPower p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Rational(0) : it->second;
}

NPower LaurentPolynomial::max_power() const {
  if (terms_.empty()) throw std::logic_error("zero polynomial has no degree");
  return terms_.rbegin()->first;
}

NPower LaurentPolynomial::min_power() const {
  if (terms_.empty()) throw std::logic_error("zero polynomial has no degree");
  return terms_.begin()->first;
}

double LaurentPolynomial::evaluate(double n) const {
  double total = 0.0;
  for (const auto& [p, c] : terms_) total += c.get_d() * std::pow(n, p.as_double());
  return total;
}

void LaurentPolynomial::add_term(const Rational& c, NPower p) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(p, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
  for (const auto& [p, c] : o.terms_) add_term(c, p);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& o) {
  for (const auto& [p, c] : o.terms_) add_term(-c, p);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator*=(const LaurentPolynomial& o) {
  LaurentPolynomial out;
  for (const auto& [p, c] : terms_)
    for (const auto& [q, d] : o.terms_) out.add_term(c * d, p + q);
  *this = std::move(out);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, v] : terms_) v *= c;
  return *this;
}

LaurentPolynomial LaurentPolynomial::operator-() const {
  LaurentPolynomial out(*this);
  out *= Rational(-1);
  return out;
}

std::string LaurentPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [p, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    const std::string np = p.str();
    if (np.empty()) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + " ";
      out += np;
    }
  }
  return out;
}

}  // namespace steinrmt
