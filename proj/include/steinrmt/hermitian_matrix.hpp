#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace steinrmt {

enum class EnsembleKind { GUE, GOE, GSE };

std::string to_string(EnsembleKind kind);
/// Accepts "GUE", "GOE", "GSE" (case-insensitive).
EnsembleKind parse_ensemble_kind(std::string_view text);

/// Dense self-adjoint sample of one of the Gaussian ensembles.
///
/// GOE samples are stored with zero imaginary parts. GSE samples are stored
/// in the 2n x 2n complex representation of an n x n quaternionic matrix;
/// every eigenvalue appears twice there, so traces are halved and n() is the
/// quaternionic dimension.
class HermitianMatrix {
 public:
  HermitianMatrix(EnsembleKind kind, int n, Eigen::MatrixXcd data);

  EnsembleKind kind() const { return kind_; }
  int n() const { return n_; }
  const Eigen::MatrixXcd& data() const { return data_; }
  /// 1 for GUE/GOE, 1/2 for GSE.
  double trace_factor() const { return kind_ == EnsembleKind::GSE ? 0.5 : 1.0; }

  /// Spectral traces tr A^k for k = 0..max_power (index k), computed by
  /// repeated multiplication. Entry 0 is n.
  std::vector<double> power_traces(int max_power) const;

  /// Re tr(A B*) in the underlying complex representation, times trace_factor().
  double hs_inner(const HermitianMatrix& other) const;

  /// a X + b Y for samples of the same kind and dimension.
  static HermitianMatrix combine(double a, const HermitianMatrix& x, double b, const HermitianMatrix& y);

 private:
  EnsembleKind kind_;
  int n_;
  Eigen::MatrixXcd data_;
};

/// Re tr(X Y) for self-adjoint X and Y, in O(dim^2).
double trace_of_product(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y);

}  // namespace steinrmt
