#include "steinrmt/stein_certifier.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "steinrmt/chebyshev.hpp"
#include "steinrmt/ensembles.hpp"
#include "steinrmt/errors.hpp"

namespace steinrmt {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

bool RationalMatrix::is_lower_triangular() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != 0) return false;
  return true;
}

namespace {

RationalMatrix invert_lower_triangular(const RationalMatrix& t) {
  const std::size_t n = t.rows();
  if (!t.is_lower_triangular()) throw std::logic_error("basis change is not lower triangular");
  RationalMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (t(j, j) == 0) throw std::logic_error("singular basis change");
    inv(j, j) = 1 / t(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      Rational s = 0;
      for (std::size_t k = j; k < i; ++k) s += t(i, k) * inv(k, j);
      inv(i, j) = -s / t(i, i);
    }
  }
  return inv;
}

}  // namespace

TracePolynomial to_centered_basis(const TracePolynomial& u, const WickOracle& oracle) {
  if (u.mode() != ScaleMode::scaled) throw ScaleMismatch();
  const int top = u.max_single_power();
  std::vector<TracePolynomial> shifted(top + 1);
  for (int k = 1; k <= top; ++k) {
    const TracePolynomial g = TracePolynomial::trace_power(k);
    shifted[k] = g + TracePolynomial::constant(oracle.expect(g));
  }
  TracePolynomial out;
  for (const auto& [key, c] : u.terms()) {
    TracePolynomial term = TracePolynomial::constant(c, key.n_power);
    for (int k : key.powers) term *= shifted[k];
    out += term;
  }
  return out;
}

std::optional<NPower> centered_order(const TracePolynomial& centered) {
  std::optional<NPower> top;
  for (const auto& [key, c] : centered.terms())
    if (!top || key.n_power > *top) top = key.n_power;
  return top;
}

std::vector<TracePolynomial> SteinCertifier::build_F(int d) const {
  if (d < 1) throw std::invalid_argument("need at least one statistic");
  if (d > oracle_.degree_cap()) throw DegreeCapExceeded(d, oracle_.degree_cap());
  const auto expectation = oracle_.as_oracle();
  std::vector<TracePolynomial> f;
  for (int p = 1; p <= d; ++p) {
    const auto tp = chebyshev_T(p).scale_argument(Rational(1, 2));
    f.push_back(center(from_univariate(tp, ScaleMode::scaled, oracle_.degree_cap()), expectation));
  }
  return f;
}

GeneratorDecomposition SteinCertifier::decompose_generator(const std::vector<TracePolynomial>& f) const {
  const std::size_t d = f.size();
  // F_j = sum_k basis(j, k) G_k exactly, with n-free coefficients.
  RationalMatrix basis(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const TracePolynomial c = to_centered_basis(f[j], oracle_);
    for (const auto& [key, v] : c.terms()) {
      if (key.powers.size() != 1 || key.n_power != NPower{} || key.powers[0] > static_cast<int>(d)) {
        throw std::logic_error("F_" + std::to_string(j + 1) + " is not a linear combination of centered traces");
      }
      basis(j, key.powers[0] - 1) = v;
    }
  }
  const RationalMatrix basis_inv = invert_lower_triangular(basis);

  GeneratorDecomposition out;
  out.lambda = RationalMatrix(d, d);
  out.linear_full.assign(d, std::vector<LaurentPolynomial>(d));
  for (std::size_t p = 0; p < d; ++p) {
    const TracePolynomial lf = generator(f[p]);
    const TracePolynomial centered = to_centered_basis(lf, oracle_);
    std::vector<LaurentPolynomial> c(d);
    for (const auto& [key, v] : centered.terms()) {
      if (key.powers.size() != 1) continue;
      const int k = key.powers[0];
      if (k > static_cast<int>(d)) throw std::logic_error("generator produced a linear term above degree d");
      c[k - 1].add_term(v, key.n_power);
    }
    for (std::size_t j = 0; j < d; ++j) {
      LaurentPolynomial a;
      for (std::size_t k = 0; k < d; ++k) {
        if (basis_inv(k, j) == 0 || c[k].is_zero()) continue;
        LaurentPolynomial term = c[k];
        term *= basis_inv(k, j);
        a += term;
      }
      if (!a.is_zero() && a.max_power() > NPower{}) {
        throw std::logic_error("linear coefficient grows with n");
      }
      out.lambda(p, j) = -a.constant_term();
      out.linear_full[p][j] = std::move(a);
    }
    ResidualDecomposition row;
    row.residual = lf;
    for (std::size_t j = 0; j < d; ++j) {
      row.linear_part.push_back(-out.lambda(p, j));
      if (out.lambda(p, j) != 0) row.residual += out.lambda(p, j) * f[j];
    }
    out.rows.push_back(std::move(row));
  }
  if (!out.lambda.is_lower_triangular()) throw std::logic_error("Lambda is not lower triangular");
  for (std::size_t p = 0; p < d; ++p) {
    if (out.lambda(p, p) != static_cast<long>(p + 1)) throw std::logic_error("Lambda diagonal differs from p");
  }
  return out;
}

CarreDecomposition SteinCertifier::decompose_carre(const std::vector<TracePolynomial>& f) const {
  const std::size_t d = f.size();
  CarreDecomposition out;
  out.gamma.assign(d, std::vector<TracePolynomial>(d));
  out.expected_gamma.assign(d, std::vector<LaurentPolynomial>(d));
  out.e2.assign(d, std::vector<TracePolynomial>(d));
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = 0; q < d; ++q) {
      TracePolynomial g = q < p ? out.gamma[q][p] : gradient_inner(f[p], f[q]);
      out.expected_gamma[p][q] = oracle_.expect(g);
      TracePolynomial e2 = g;
      if (p == q) e2 -= TracePolynomial::constant(make_rational(static_cast<long>((p + 1) * (p + 1)), 4));
      out.gamma[p][q] = std::move(g);
      out.e2[p][q] = std::move(e2);
    }
  }
  return out;
}

SteinCertificate SteinCertifier::certify(int d, int n, std::size_t mc_replicas, std::uint64_t seed,
                                         int threads) const {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  const auto f = build_F(d);
  const auto gen = decompose_generator(f);
  const auto carre = decompose_carre(f);
  const auto dd = static_cast<std::size_t>(d);

  SteinCertificate cert;
  cert.d = d;
  cert.n = n;
  cert.lambda = gen.lambda;
  cert.sigma = RationalMatrix(dd, dd);
  for (std::size_t p = 0; p < dd; ++p) cert.sigma(p, p) = make_rational(static_cast<long>(p + 1), 4);

  double e1_total = 0.0;
  for (const auto& row : gen.rows) {
    const double m2 = oracle_.expect(row.residual * row.residual).evaluate(n);
    cert.e1_second_moments.push_back(m2);
    e1_total += m2;
  }
  double e2_total = 0.0;
  cert.e2_second_moments.assign(dd, std::vector<double>(dd));
  cert.expected_gamma.assign(dd, std::vector<double>(dd));
  for (std::size_t p = 0; p < dd; ++p) {
    for (std::size_t q = 0; q < dd; ++q) {
      cert.expected_gamma[p][q] = carre.expected_gamma[p][q].evaluate(n);
      const double m2 =
          q < p ? cert.e2_second_moments[q][p] : oracle_.expect(carre.e2[p][q] * carre.e2[p][q]).evaluate(n);
      cert.e2_second_moments[p][q] = m2;
      e2_total += m2;
    }
  }
  cert.e1_l2_bound = std::sqrt(std::max(0.0, e1_total));
  cert.e2_hs_bound = std::sqrt(std::max(0.0, e2_total));

  Eigen::MatrixXd lam(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lam(i, j) = cert.lambda(i, j).get_d();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(lam.inverse());
  cert.lambda_inv_op = svd.singularValues()(0);
  double sig = 0.0;
  for (int p = 1; p <= d; ++p) sig = std::max(sig, 1.0 / std::sqrt(p / 4.0));
  cert.sigma_inv_sqrt_op = sig;
  cert.wasserstein_bound = cert.lambda_inv_op * (cert.e1_l2_bound + cert.sigma_inv_sqrt_op * cert.e2_hs_bound);

  cert.e1_l1_mc = std::numeric_limits<double>::quiet_NaN();
  cert.e2_hs_mc = std::numeric_limits<double>::quiet_NaN();
  cert.mc_replicas = mc_replicas;
  if (mc_replicas > 0) {
    int top = 0;
    for (const auto& row : gen.rows) top = std::max(top, row.residual.max_single_power());
    for (const auto& r : carre.e2)
      for (const auto& e : r) top = std::max(top, e.max_single_power());
    std::vector<double> e1_norm(mc_replicas), e2_norm(mc_replicas);
    const EnsembleSpec spec{EnsembleKind::GUE, n, seed};
    parallel_for(mc_replicas, threads, [&](std::size_t i) {
      const auto traces = sample_replica(spec, i).power_traces(top);
      double s1 = 0.0, s2 = 0.0;
      for (const auto& row : gen.rows) s1 += std::pow(evaluate(row.residual, traces, n), 2);
      for (const auto& r : carre.e2)
        for (const auto& e : r) s2 += std::pow(evaluate(e, traces, n), 2);
      e1_norm[i] = std::sqrt(s1);
      e2_norm[i] = std::sqrt(s2);
    });
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < mc_replicas; ++i) {
      a += e1_norm[i];
      b += e2_norm[i];
    }
    cert.e1_l1_mc = a / mc_replicas;
    cert.e2_hs_mc = b / mc_replicas;
  }
  return cert;
}

std::vector<std::vector<double>> lambda_at(const GeneratorDecomposition& decomposition, double n) {
  const std::size_t d = decomposition.linear_full.size();
  std::vector<std::vector<double>> out(d, std::vector<double>(d));
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t k = 0; k < d; ++k) out[p][k] = -decomposition.linear_full[p][k].evaluate(n);
  return out;
}

DiagonalityReport diagonality_diagnostic(const std::vector<std::vector<double>>& lambda) {
  const std::size_t d = lambda.size();
  for (const auto& row : lambda)
    if (row.size() != d) throw std::invalid_argument("Lambda must be square");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (lambda[i][j] != 0.0) throw std::invalid_argument("Lambda must be lower triangular");

  DiagonalityReport report;
  report.d = static_cast<int>(d);
  report.eigenvectors.assign(d, std::vector<double>(d, 0.0));
  // Lambda^T is upper triangular; the eigenvector for the p-th diagonal
  // entry is supported on 1..p and solved upward from v_p = 1.
  for (std::size_t p = 0; p < d; ++p) {
    auto& v = report.eigenvectors[p];
    const double ev = lambda[p][p];
    v[p] = 1.0;
    for (std::size_t i = p; i-- > 0;) {
      const double gap = ev - lambda[i][i];
      if (gap == 0.0) throw std::logic_error("defective Lambda: repeated diagonal entry");
      double s = 0.0;
      for (std::size_t j = i + 1; j <= p; ++j) s += lambda[j][i] * v[j];
      v[i] = s / gap;
    }
  }
  report.weighted_gram.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = 0; q < d; ++q) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double w = static_cast<double>((k + 1) * (k + 1));
        s += w * report.eigenvectors[p][k] * report.eigenvectors[q][k];
      }
      report.weighted_gram[p][q] = s;
      if (p != q) report.max_off_diagonal = std::max(report.max_off_diagonal, std::abs(s));
    }
  }
  return report;
}

ThirdMomentReport lindeberg_third_moment(int d, int n, const std::vector<double>& t_grid, std::size_t replicas,
                                         std::uint64_t seed, int threads) {
  if (replicas < 2) throw std::invalid_argument("need at least two replicas");
  for (double t : t_grid)
    if (!(t > 0)) throw std::invalid_argument("OU time must be positive");
  const std::size_t nt = t_grid.size();
  std::vector<double> cubes(replicas * nt);
  parallel_for(replicas, threads, [&](std::size_t i) {
    Rng rng0 = replica_rng(seed, Stream::sample, i);
    Rng rngz = replica_rng(seed, Stream::ou_noise, i);
    const HermitianMatrix x0 = sample_matrix(EnsembleKind::GUE, n, rng0);
    const HermitianMatrix z = sample_matrix(EnsembleKind::GUE, n, rngz);
    const auto f0 = chebyshev_traces(x0, d);
    for (std::size_t j = 0; j < nt; ++j) {
      const double t = t_grid[j];
      const auto xt = HermitianMatrix::combine(std::exp(-t), x0, std::sqrt(-std::expm1(-2.0 * t)), z);
      const auto ft = chebyshev_traces(xt, d);
      double sq = 0.0;
      for (int k = 0; k < d; ++k) sq += (ft[k] - f0[k]) * (ft[k] - f0[k]);
      cubes[i * nt + j] = std::pow(sq, 1.5) / t;
    }
  });
  ThirdMomentReport report;
  report.d = d;
  report.n = n;
  report.replicas = replicas;
  for (std::size_t j = 0; j < nt; ++j) {
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < replicas; ++i) {
      const double v = cubes[i * nt + j];
      s += v;
      ss += v * v;
    }
    const double r = static_cast<double>(replicas);
    ThirdMomentRow row;
    row.t = t_grid[j];
    row.estimate = s / r;
    row.standard_error = std::sqrt(std::max(0.0, (ss - s * s / r) / (r - 1)) / r);
    row.ratio_to_previous = j == 0 ? 0.0 : report.rows.back().estimate / row.estimate;
    report.rows.push_back(row);
  }
  return report;
}

namespace {

nlohmann::json rational_json(const Rational& q) {
  return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

nlohmann::json matrix_json(const RationalMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string to_json(const SteinCertificate& cert) {
  nlohmann::json j;
  j["d"] = cert.d;
  j["n"] = cert.n;
  j["lambda"] = matrix_json(cert.lambda);
  j["sigma"] = matrix_json(cert.sigma);
  j["expected_gamma"] = cert.expected_gamma;
  j["e1_second_moments"] = cert.e1_second_moments;
  j["e2_second_moments"] = cert.e2_second_moments;
  j["e1_l2_bound"] = cert.e1_l2_bound;
  j["e2_hs_bound"] = cert.e2_hs_bound;
  j["lambda_inv_op"] = cert.lambda_inv_op;
  j["sigma_inv_sqrt_op"] = cert.sigma_inv_sqrt_op;
  j["wasserstein_bound"] = cert.wasserstein_bound;
  j["monte_carlo"] = {{"replicas", cert.mc_replicas},
                      {"e1_l1", number_or_null(cert.e1_l1_mc)},
                      {"e2_hs", number_or_null(cert.e2_hs_mc)}};
  return j.dump(2);
}

}  // namespace steinrmt
