#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "steinrmt/errors.hpp"
#include "steinrmt/stein_certifier.hpp"

using namespace steinrmt;

namespace {
TracePolynomial sc(const std::string& s) { return TracePolynomial::parse(s, ScaleMode::scaled); }
LaurentPolynomial lp(std::initializer_list<std::pair<Rational, int>> terms) {
  LaurentPolynomial p;
  for (const auto& [c, e] : terms) p.add_term(c, NPower::of(e));
  return p;
}
}  // namespace

TEST_CASE("Chebyshev statistic vector") {
  WickOracle o;
  SteinCertifier c(o);
  const auto f = c.build_F(4);
  CHECK(f[0] == sc("(1/2) tr[1]"));
  CHECK(f[1] == sc("(1/2) tr[2] - (1/2) n"));
  CHECK(f[2] == sc("(1/2) tr[3] - (3/2) tr[1]"));
  CHECK(f[3] == sc("(1/2) tr[4] - 2 tr[2] + n - (1/2) n^-1"));
  for (const auto& fp : f) CHECK(o.expect(fp).is_zero());
  CHECK_THROWS(c.build_F(0));
}

TEST_CASE("generator rows") {
  WickOracle o;
  SteinCertifier c(o);
  const auto f = c.build_F(4);
  CHECK(generator(f[1]) == Rational(-2) * f[1]);
  CHECK(generator(f[2]) == Rational(-3) * f[2]);
  CHECK(generator(f[3]) == Rational(-4) * f[3] + sc("2 n^-1 tr[1,1] - 2 n^-1"));
}

TEST_CASE("decompose_generator d = 4") {
  WickOracle o;
  SteinCertifier c(o);
  const auto f = c.build_F(4);
  const auto g = c.decompose_generator(f);
  RationalMatrix want(4, 4);
  for (int p = 0; p < 4; ++p) want(p, p) = p + 1;
  CHECK(g.lambda == want);
  for (int p = 0; p < 3; ++p) CHECK(g.rows[p].residual.is_zero());
  CHECK(g.rows[3].residual == sc("2 n^-1 tr[1,1] - 2 n^-1"));
  for (int p = 0; p < 4; ++p) {
    // Reconstruction: L F_p = sum_k linear_part_k F_k + residual, and the residual has mean zero.
    TracePolynomial rebuilt = g.rows[p].residual;
    for (int k = 0; k < 4; ++k) rebuilt += g.rows[p].linear_part[k] * f[k];
    CHECK(rebuilt == generator(f[p]));
    CHECK(o.expect(g.rows[p].residual).is_zero());
  }
}

TEST_CASE("Lambda structure for larger d") {
  WickOracle o(18);
  SteinCertifier c(o);
  const auto f = c.build_F(8);
  const auto g = c.decompose_generator(f);
  CHECK(g.lambda.is_lower_triangular());
  CHECK(g.lambda.is_diagonal());
  for (int p = 0; p < 8; ++p) {
    CHECK(g.lambda(p, p) == p + 1);
    TracePolynomial rebuilt = g.rows[p].residual;
    for (int k = 0; k < 8; ++k) rebuilt += g.rows[p].linear_part[k] * f[k];
    CHECK(rebuilt == generator(f[p]));
    CHECK(o.expect(g.rows[p].residual).is_zero());
  }
  // Finite-n corrections to the linear coefficients vanish: entry(n) * n stays bounded.
  for (double n : {10.0, 100.0, 1000.0}) {
    const auto lam = lambda_at(g, n);
    for (int p = 0; p < 8; ++p)
      for (int k = 0; k < 8; ++k)
        if (p != k) CHECK(std::abs(lam[p][k]) * n < 50.0);
  }
}

TEST_CASE("carre du champ expectations") {
  WickOracle o;
  SteinCertifier c(o);
  const auto carre = c.decompose_carre(c.build_F(4));
  CHECK(carre.gamma[0][0] == TracePolynomial::constant(Rational(1, 4)));
  CHECK(carre.e2[0][0].is_zero());
  CHECK(carre.expected_gamma[2][2] == lp({{Rational(9, 4), 0}, {Rational(9, 4), -2}}));
  CHECK(carre.expected_gamma[0][1].is_zero());
  CHECK(carre.expected_gamma[3][3] == lp({{Rational(4), 0}, {Rational(24), -2}}));
  CHECK(carre.expected_gamma[1][3] == lp({{Rational(2), -2}}));
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      const auto& e = carre.expected_gamma[p][q];
      CHECK(e.constant_term() == (p == q ? make_rational((p + 1) * (p + 1), 4) : Rational(0)));
      LaurentPolynomial rest = e - LaurentPolynomial(e.constant_term());
      if (!rest.is_zero()) CHECK(rest.max_power() <= NPower::of(-2));
      CHECK(carre.gamma[p][q] == carre.gamma[q][p]);
    }
}

TEST_CASE("variance identity: Var F_p = E Gamma(F_p, F_p) / p when L F_p = -p F_p") {
  WickOracle o;
  SteinCertifier c(o);
  const auto f = c.build_F(3);
  CHECK(o.covariance(f[2], f[2]) == lp({{Rational(3, 4), 0}, {Rational(3, 4), -2}}));
  CHECK(o.covariance(f[1], f[1]) == lp({{Rational(1, 2), 0}}));
  CHECK(o.covariance(f[0], f[0]) == lp({{Rational(1, 4), 0}}));
}

TEST_CASE("certificate arithmetic") {
  WickOracle o;
  SteinCertifier c(o);
  const auto c1 = c.certify(1, 50);
  CHECK(c1.wasserstein_bound == 0.0);
  const auto c4 = c.certify(4, 20);
  CHECK(c4.e1_second_moments[3] == doctest::Approx(8.0 / 400));
  CHECK(std::sqrt(c4.e1_second_moments[3]) == doctest::Approx(2.0 / 20 * std::sqrt(2.0)));
  CHECK(c4.lambda_inv_op == doctest::Approx(1.0));
  CHECK(c4.sigma_inv_sqrt_op == doctest::Approx(2.0));
  CHECK(c4.wasserstein_bound ==
        doctest::Approx(c4.lambda_inv_op * (c4.e1_l2_bound + c4.sigma_inv_sqrt_op * c4.e2_hs_bound)));
  CHECK(std::isnan(c4.e1_l1_mc));
  for (int p = 0; p < 4; ++p) {
    CHECK(c4.sigma(p, p) == make_rational(p + 1, 4));
    CHECK(c4.lambda(p, p) == p + 1);
  }
}

TEST_CASE("bound scales like 1/n") {
  WickOracle o;
  SteinCertifier c(o);
  for (int d = 2; d <= 4; ++d) {
    const double r = c.certify(d, 400).wasserstein_bound / c.certify(d, 800).wasserstein_bound;
    CHECK(r == doctest::Approx(2.0).epsilon(0.01));
    for (int n : {10, 100, 1000}) {
      const double bn = c.certify(d, n).wasserstein_bound * n;
      CHECK(bn > 0.1);
      CHECK(bn < 1000);
    }
  }
}

TEST_CASE("Monte Carlo norms sit below the L2 bounds") {
  WickOracle o;
  SteinCertifier c(o);
  const auto a = c.certify(3, 30, 3000, 9, 1);
  const auto b = c.certify(3, 30, 3000, 9, 3);
  CHECK(a.e1_l1_mc == b.e1_l1_mc);
  CHECK(a.e2_hs_mc == b.e2_hs_mc);
  CHECK(a.e2_hs_mc <= a.e2_hs_bound * 1.05);
  CHECK(a.e2_hs_mc > 0.2 * a.e2_hs_bound);
}

TEST_CASE("centered basis") {
  WickOracle o;
  const auto u = to_centered_basis(sc("tr[2] - n"), o);
  CHECK(u == sc("tr[2]"));
  const auto e1 = to_centered_basis(sc("2 n^-1 tr[1,1] - 2 n^-1"), o);
  CHECK(centered_order(e1) == NPower::of(-1));
  CHECK(!centered_order(TracePolynomial()).has_value());
  CHECK_THROWS_AS(to_centered_basis(TracePolynomial::parse("tr[1]", ScaleMode::raw), o), ScaleMismatch);
}

TEST_CASE("diagonality diagnostic") {
  const std::vector<std::vector<double>> diag{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}};
  const auto r = diagonality_diagnostic(diag);
  CHECK(r.max_off_diagonal == 0.0);
  for (int p = 0; p < 3; ++p)
    for (int k = 0; k < 3; ++k) CHECK(r.eigenvectors[p][k] == (p == k ? 1.0 : 0.0));
  CHECK(diagonality_diagnostic({{1}}).max_off_diagonal == 0.0);
  CHECK_THROWS_AS(diagonality_diagnostic({{1, 0}, {0.5, 1}}), std::logic_error);

  // A lower-triangular perturbation of size c/n gives weighted Gram entries of order c/n.
  auto perturbed = [](double n) {
    std::vector<std::vector<double>> l{{1, 0, 0, 0}, {0, 2, 0, 0}, {0.3 / n, 0, 3, 0}, {0, 0.7 / n, 0, 4}};
    return diagonality_diagnostic(l).max_off_diagonal;
  };
  const double g10 = perturbed(10), g100 = perturbed(100);
  CHECK(g10 > 0);
  CHECK(g10 / g100 == doctest::Approx(10).epsilon(0.05));

  WickOracle o;
  SteinCertifier c(o);
  const auto g = c.decompose_generator(c.build_F(4));
  CHECK(diagonality_diagnostic(lambda_at(g, 10)).max_off_diagonal == 0.0);
}

TEST_CASE("third-moment surrogate for a linear statistic") {
  // F_1 increment over time t is Gaussian with variance 2 (1 - e^{-t}) / 4,
  // so (1/t) E|dF|^3 = sqrt(8/pi) s^3 / t with s^2 that variance.
  const std::vector<double> t{0.5, 0.05};
  const auto rep = lindeberg_third_moment(1, 6, t, 20000, 4, 1);
  for (const auto& row : rep.rows) {
    const double s = std::sqrt(0.5 * (1 - std::exp(-row.t)));
    const double exact = std::sqrt(8 / M_PI) * s * s * s / row.t;
    CHECK(std::abs(row.estimate - exact) < 3 * row.standard_error);
  }
  CHECK(rep.rows[1].ratio_to_previous == doctest::Approx(rep.rows[0].estimate / rep.rows[1].estimate));
}

TEST_CASE("third-moment surrogate decouples at large t") {
  // Independent copies: F_1 - F_1' ~ N(0, 1/2), E|.|^3 = sqrt(8/pi) (1/2)^{3/2}.
  const std::vector<double> t{10};
  const auto rep = lindeberg_third_moment(1, 4, t, 20000, 6, 1);
  const double exact = std::sqrt(8 / M_PI) * std::pow(0.5, 1.5) / 10;
  CHECK(std::abs(rep.rows[0].estimate - exact) < 3 * rep.rows[0].standard_error);
}

TEST_CASE("certificate JSON") {
  WickOracle o;
  SteinCertifier c(o);
  const auto j = nlohmann::json::parse(to_json(c.certify(2, 10)));
  CHECK(j["d"] == 2);
  CHECK(j["lambda"][1][1]["num"] == "2");
  CHECK(j["wasserstein_bound"].get<double>() > 0);
}
