#pragma once

// Chebyshev statistic vector F_p = tr T_p(Y/2) - E tr T_p(Y/2), Y = n^{-1/2} A,
// and an exact split of its generator and carre du champ into
//
//   L F = -Lambda F + E1,     Gamma(F, F) = Lambda Sigma + E2,
//
// which feeds the Wasserstein bound
//
//   d_W(F, Z_Sigma) <= |Lambda^{-1}|_op (E|E1| + |Sigma^{-1/2}|_op E|E2|_HS).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steinrmt/laurent.hpp"
#include "steinrmt/rational.hpp"
#include "steinrmt/trace_algebra.hpp"
#include "steinrmt/wick_oracle.hpp"

namespace steinrmt {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  bool operator==(const RationalMatrix&) const = default;

  bool is_diagonal() const;
  bool is_lower_triangular() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// One row of the generator split: input = sum_k linear_part[k] F_k + residual.
struct ResidualDecomposition {
  std::vector<Rational> linear_part;
  TracePolynomial residual;
};

struct GeneratorDecomposition {
  RationalMatrix lambda;                     ///< n-free part, L F = -Lambda F + E1
  std::vector<ResidualDecomposition> rows;   ///< linear_part = -Lambda row
  /// Full linear coefficients over F including negative powers of n
  /// (row p, column k); lambda(p, k) = -(constant term of linear_full[p][k]).
  std::vector<std::vector<LaurentPolynomial>> linear_full;
};

struct CarreDecomposition {
  std::vector<std::vector<TracePolynomial>> gamma;            ///< Gamma(F_p, F_q)
  std::vector<std::vector<LaurentPolynomial>> expected_gamma; ///< oracle E Gamma(F_p, F_q)
  std::vector<std::vector<TracePolynomial>> e2;               ///< Gamma(F_p,F_q) - (p^2/4) delta_pq
};

/// Rewrites a scaled trace polynomial in terms of centered traces
/// G_k = g_k - E g_k. The result uses the TracePolynomial container, with
/// tr[k] standing for G_k; coefficients carry their exact n dependence.
TracePolynomial to_centered_basis(const TracePolynomial& u, const WickOracle& oracle);

/// Largest power of n over all coefficients of a centered-basis polynomial
/// (each G_k counted as order one); the zero polynomial reports n^{-infinity}
/// as std::nullopt.
std::optional<NPower> centered_order(const TracePolynomial& centered);

struct SteinCertificate {
  int d = 0;
  int n = 0;
  RationalMatrix lambda;
  RationalMatrix sigma;                           ///< limit diag(p/4)
  std::vector<std::vector<double>> expected_gamma; ///< finite-n oracle E Gamma(F,F)
  std::vector<double> e1_second_moments;          ///< E E1_p^2 per row
  std::vector<std::vector<double>> e2_second_moments;
  double e1_l2_bound = 0;  ///< sqrt(E|E1|^2) >= E|E1|
  double e2_hs_bound = 0;  ///< sqrt(E|E2|_HS^2) >= E|E2|_HS
  double lambda_inv_op = 0;
  double sigma_inv_sqrt_op = 0;
  double wasserstein_bound = 0;
  // Monte Carlo estimates of E|E1| and E|E2|_HS; NaN unless requested.
  double e1_l1_mc = 0;
  double e2_hs_mc = 0;
  std::size_t mc_replicas = 0;
};

struct DiagonalityReport {
  int d = 0;
  std::vector<std::vector<double>> eigenvectors;  ///< v^p, normalized with v^p_p = 1
  std::vector<std::vector<double>> weighted_gram; ///< sum_k k^2 v^p_k v^q_k
  double max_off_diagonal = 0;
};

struct ThirdMomentRow {
  double t = 0;
  double estimate = 0;  ///< (1/t) E|F(X_t) - F(X_0)|^3
  double standard_error = 0;
  double ratio_to_previous = 0;  ///< estimate(t_prev) / estimate(t); 0 for the first row
};

struct ThirdMomentReport {
  int d = 0;
  int n = 0;
  std::size_t replicas = 0;
  std::vector<ThirdMomentRow> rows;
};

class SteinCertifier {
 public:
  explicit SteinCertifier(const WickOracle& oracle) : oracle_(oracle) {}

  const WickOracle& oracle() const { return oracle_; }

  /// F_1..F_d in scaled mode, each with exact zero expectation.
  std::vector<TracePolynomial> build_F(int d) const;

  /// Throws std::logic_error if Lambda is not lower triangular with
  /// diagonal (1, ..., d).
  GeneratorDecomposition decompose_generator(const std::vector<TracePolynomial>& f) const;

  CarreDecomposition decompose_carre(const std::vector<TracePolynomial>& f) const;

  /// Exact second moments via the oracle, assembled numerically at n.
  SteinCertificate certify(int d, int n, std::size_t mc_replicas = 0, std::uint64_t seed = 0, int threads = 1) const;

 private:
  const WickOracle& oracle_;
};

/// Eigenvectors of Lambda^T and their k^2-weighted Gram matrix. Throws
/// std::logic_error when two diagonal entries coincide.
DiagonalityReport diagonality_diagnostic(const std::vector<std::vector<double>>& lambda);
std::vector<std::vector<double>> lambda_at(const GeneratorDecomposition& decomposition, double n);

/// (1/t) E|F(X_t) - F(X_0)|^3 over an OU-coupled pair, unconditional in X_0.
ThirdMomentReport lindeberg_third_moment(int d, int n, const std::vector<double>& t_grid, std::size_t replicas,
                                         std::uint64_t seed, int threads = 1);

std::string to_json(const SteinCertificate& cert);

}  // namespace steinrmt
