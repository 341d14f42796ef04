#pragma once

// Exact symbolic calculus on polynomial trace statistics of a Hermitian
// matrix argument A under the Ornstein-Uhlenbeck process on the GUE:
//
//   Gamma(u, v) = <grad u, grad v>,   L u = Laplacian(u) - <A, grad u>.
//
// A TracePolynomial is a finite sum  c * n^e * tr(X^{k_1}) ... tr(X^{k_m})
// where X = A (raw mode) or X = n^{-1/2} A (scaled mode). The dimension n is
// formal throughout; numbers are substituted only by evaluate().

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steinrmt/chebyshev.hpp"
#include "steinrmt/hermitian_matrix.hpp"
#include "steinrmt/laurent.hpp"
#include "steinrmt/rational.hpp"

namespace steinrmt {

inline constexpr int kDefaultTraceDegreeCap = 16;

enum class ScaleMode { raw, scaled };

/// tr-power multiset (sorted descending, no zeros) plus the power of n.
struct MonomialKey {
  std::vector<int> powers;
  NPower n_power;

  int degree() const;
  bool operator==(const MonomialKey&) const = default;
};

/// Canonical order: higher trace degree first, then powers descending
/// lexicographically, then higher n power first.
struct MonomialKeyOrder {
  bool operator()(const MonomialKey& a, const MonomialKey& b) const;
};

struct TraceMonomial {
  std::vector<int> powers;
  NPower n_power;
  Rational coefficient;
};

class TracePolynomial {
 public:
  using Terms = std::map<MonomialKey, Rational, MonomialKeyOrder>;

  explicit TracePolynomial(ScaleMode mode = ScaleMode::scaled) : mode_(mode) {}

  /// c * n^p * prod tr(X^k). Zero powers are absorbed as factors of n.
  static TracePolynomial monomial(const Rational& c, std::vector<int> powers, NPower p = NPower{},
                                  ScaleMode mode = ScaleMode::scaled);
  static TracePolynomial constant(const Rational& c, NPower p = NPower{}, ScaleMode mode = ScaleMode::scaled);
  static TracePolynomial constant(const LaurentPolynomial& c, ScaleMode mode = ScaleMode::scaled);
  /// tr X^k (k = 0 gives n).
  static TracePolynomial trace_power(int k, ScaleMode mode = ScaleMode::scaled);

  ScaleMode mode() const { return mode_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }
  std::vector<TraceMonomial> monomials() const;
  /// Largest total trace degree among terms; -1 for zero.
  int degree() const;
  int max_single_power() const;
  Rational coefficient(const MonomialKey& key) const;

  /// Sum of the terms with no trace factor.
  LaurentPolynomial constant_part() const;

  void add_term(const Rational& c, MonomialKey key);

  TracePolynomial& operator+=(const TracePolynomial& o);
  TracePolynomial& operator-=(const TracePolynomial& o);
  TracePolynomial& operator*=(const TracePolynomial& o);
  TracePolynomial& operator*=(const Rational& c);
  friend TracePolynomial operator+(TracePolynomial a, const TracePolynomial& b) { return a += b; }
  friend TracePolynomial operator-(TracePolynomial a, const TracePolynomial& b) { return a -= b; }
  friend TracePolynomial operator*(TracePolynomial a, const TracePolynomial& b) { return a *= b; }
  friend TracePolynomial operator*(TracePolynomial a, const Rational& c) { return a *= c; }
  friend TracePolynomial operator*(const Rational& c, TracePolynomial a) { return a *= c; }
  TracePolynomial operator-() const;
  bool operator==(const TracePolynomial& o) const { return mode_ == o.mode_ && terms_ == o.terms_; }

  /// Re-express over tr A^k (resp. tr (n^{-1/2}A)^k); mutually inverse.
  TracePolynomial to_raw() const;
  TracePolynomial to_scaled() const;

  /// Text form, e.g. "(1/2) n^-1 tr[2] - n" or "2 n^-1 tr[1,1] - 2 n^-1".
  /// Coefficient first (omitted when 1), then the n power, then the
  /// bracketed power multiset. The scale mode is not part of the text.
  std::string str() const;
  static TracePolynomial parse(std::string_view text, ScaleMode mode = ScaleMode::scaled);

 private:
  void check_mode(const TracePolynomial& o) const;

  ScaleMode mode_;
  Terms terms_;
};

/// tr f(X) for X = A or n^{-1/2} A; a constant c becomes c n.
TracePolynomial from_univariate(const UnivariatePolynomial& f, ScaleMode mode,
                                int degree_cap = kDefaultTraceDegreeCap);

/// Carre du champ Gamma(u, v). Throws ScaleMismatch on mixed modes and
/// UnsupportedEnsemble for anything but the GUE.
TracePolynomial gradient_inner(const TracePolynomial& u, const TracePolynomial& v,
                               EnsembleKind kind = EnsembleKind::GUE);
TracePolynomial laplacian(const TracePolynomial& u, EnsembleKind kind = EnsembleKind::GUE);
/// <A, grad u>: multiplies each term by its total trace degree.
TracePolynomial radial_derivative(const TracePolynomial& u);
/// OU generator L u = Laplacian(u) - <A, grad u>.
TracePolynomial generator(const TracePolynomial& u, EnsembleKind kind = EnsembleKind::GUE);

/// Exact expectation of a trace polynomial as a Laurent polynomial in n.
using ExpectationOracle = std::function<LaurentPolynomial(const TracePolynomial&)>;

/// u - E u.
TracePolynomial center(const TracePolynomial& u, const ExpectationOracle& oracle);

/// Numeric value at a sample; n is taken from A.n().
double evaluate(const TracePolynomial& u, const HermitianMatrix& a);
/// Numeric value from precomputed raw traces tr A^k (index k, entry 0 unused).
double evaluate(const TracePolynomial& u, std::span<const double> raw_traces, double n);

}  // namespace steinrmt
