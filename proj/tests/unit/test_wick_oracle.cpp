#include <random>

#include "doctest.h"
#include "random_poly.hpp"
#include "steinrmt/chebyshev.hpp"
#include "steinrmt/errors.hpp"
#include "steinrmt/wick_oracle.hpp"

using namespace steinrmt;
using steinrmt::testing::random_trace_polynomial;

namespace {
LaurentPolynomial np(std::initializer_list<std::pair<long, int>> terms) {
  LaurentPolynomial p;
  for (auto [c, e] : terms) p.add_term(Rational(c), NPower::of(e));
  return p;
}
NPolynomial expect(const WickOracle& o, std::vector<int> powers) { return o.expect_trace_monomial(powers); }
}  // namespace

TEST_CASE("trace monomial expectations") {
  WickOracle o;
  CHECK(expect(o, {2}) == np({{1, 2}}));
  CHECK(expect(o, {4}) == np({{2, 3}, {1, 1}}));
  CHECK(expect(o, {4}).str() == "2 n^3 + n");
  CHECK(expect(o, {2, 2}) == np({{1, 4}, {2, 2}}));
  CHECK(expect(o, {3}).is_zero());
  CHECK(expect(o, {1, 1}) == np({{1, 1}}));
  CHECK(expect(o, {2, 1, 0}) .is_zero());
  CHECK(expect(o, {2, 0}) == np({{1, 3}}));
  CHECK(expect(o, {}) == np({{1, 0}}));
}

TEST_CASE("pairing enumeration counts") {
  // Evaluating at n = 1 counts all (2m-1)!! pairings.
  std::vector<int> w{6};
  CHECK(enumerate_pairings(w).evaluate(1) == 15);
  std::vector<int> w2{3, 3, 2};
  CHECK(enumerate_pairings(w2).evaluate(1) == 105);
  std::vector<int> w3{4, 3, 2, 1};
  CHECK(enumerate_pairings(w3).evaluate(1) == 945);
}

TEST_CASE("leading term of E tr A^{2p} is C_p n^{p+1}") {
  WickOracle o;
  for (int p = 0; p <= 7; ++p) {
    const auto e = expect(o, {2 * p});
    CHECK(e.max_power() == NPower::of(p + 1));
    CHECK(e.coefficient(NPower::of(p + 1)) == Rational(catalan(p)));
  }
}

TEST_CASE("genus expansion parity: E tr A^{2p} has powers n^{p+1-2g}") {
  WickOracle o;
  for (int p = 1; p <= 7; ++p) {
    const auto e = expect(o, {2 * p});
    for (const auto& [pw, c] : e.terms()) CHECK((p + 1 - pw.exponent()) % 2 == 0);
  }
}

TEST_CASE("odd total degree vanishes; cap enforced") {
  WickOracle o;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    std::uniform_int_distribution<int> k(1, 5), m(1, 3);
    std::vector<int> w;
    int total = 0;
    for (int j = m(rng); j > 0; --j) {
      w.push_back(k(rng));
      total += w.back();
    }
    if (total % 2 == 0) w.push_back(1);
    CHECK(o.expect_trace_monomial(w).is_zero());
  }
  CHECK_THROWS_AS(expect(o, {18}), DegreeCapExceeded);
  CHECK_THROWS_AS(WickOracle(16, EnsembleKind::GOE), UnsupportedEnsemble);
}

TEST_CASE("scaled expectations") {
  WickOracle o;
  CHECK(o.expect(TracePolynomial::trace_power(2)) == np({{1, 1}}));
  LaurentPolynomial g4 = np({{2, 1}, {1, -1}});
  CHECK(o.expect(TracePolynomial::trace_power(4)) == g4);
  const auto f1 = center(from_univariate(chebyshev_T(1).scale_argument(Rational(1, 2)), ScaleMode::scaled), o.as_oracle());
  CHECK(o.expect(f1).is_zero());
}

TEST_CASE("scaled even moments") {
  WickOracle o;
  CHECK(o.scaled_even_moment(0) == np({{1, 0}}));
  CHECK(o.scaled_even_moment(1) == np({{1, 0}}));
  CHECK(o.scaled_even_moment(2) == np({{2, 0}, {1, -2}}));
  CHECK(o.scaled_even_moment(3) == np({{5, 0}, {10, -2}}));
  CHECK(o.scaled_even_moment(4) == np({{14, 0}, {70, -2}, {21, -4}}));
  CHECK(o.scaled_even_moment(5) == np({{42, 0}, {420, -2}, {483, -4}}));
}

TEST_CASE("covariances") {
  WickOracle o;
  const auto g1 = TracePolynomial::trace_power(1), g2 = TracePolynomial::trace_power(2);
  CHECK(o.covariance(g1, g1) == np({{1, 0}}));
  CHECK(o.covariance(g2, g2) == np({{2, 0}}));
  CHECK(o.covariance(g1, g2).is_zero());
}

TEST_CASE("expect is linear and consistent across modes") {
  WickOracle o;
  std::mt19937_64 rng(23);
  for (int i = 0; i < 40; ++i) {
    const auto u = random_trace_polynomial(rng, 8), v = random_trace_polynomial(rng, 8);
    CHECK(o.expect(u + v) == o.expect(u) + o.expect(v));
    CHECK(o.expect(u.to_raw()) == o.expect(u));
  }
}

TEST_CASE("memo is populated and reused") {
  WickOracle o;
  expect(o, {4, 2});
  const auto size = o.memo_size();
  expect(o, {2, 4});
  CHECK(o.memo_size() == size);
}
