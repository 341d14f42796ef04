#include "steinrmt/hermitian_matrix.hpp"

#include <algorithm>
#include <cctype>

#include "steinrmt/errors.hpp"

namespace steinrmt {

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::GUE: return "GUE";
    case EnsembleKind::GOE: return "GOE";
    case EnsembleKind::GSE: return "GSE";
  }
  return "?";
}

EnsembleKind parse_ensemble_kind(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "GUE") return EnsembleKind::GUE;
  if (up == "GOE") return EnsembleKind::GOE;
  if (up == "GSE") return EnsembleKind::GSE;
  throw ConfigError("unknown ensemble kind '" + std::string(text) + "'");
}

HermitianMatrix::HermitianMatrix(EnsembleKind kind, int n, Eigen::MatrixXcd data)
    : kind_(kind), n_(n), data_(std::move(data)) {
  const int dim = kind == EnsembleKind::GSE ? 2 * n : n;
  if (n < 1 || data_.rows() != dim || data_.cols() != dim) {
    throw DimensionMismatch("matrix shape does not match ensemble dimension");
  }
}

std::vector<double> HermitianMatrix::power_traces(int max_power) const {
  std::vector<double> traces(std::max(max_power, 0) + 1);
  traces[0] = n_;
  if (max_power < 1) return traces;
  const double factor = trace_factor();
  traces[1] = factor * data_.trace().real();
  if (max_power < 2) return traces;
  Eigen::MatrixXcd power = data_;
  for (int k = 2; k <= max_power; ++k) {
    if (k == max_power) {
      traces[k] = factor * trace_of_product(power, data_);
    } else {
      power = power * data_;
      traces[k] = factor * power.trace().real();
    }
  }
  return traces;
}

double HermitianMatrix::hs_inner(const HermitianMatrix& other) const {
  if (other.kind_ != kind_ || other.n_ != n_) throw DimensionMismatch("HS inner product of mismatched samples");
  return trace_factor() * (data_.array() * other.data_.conjugate().array()).sum().real();
}

HermitianMatrix HermitianMatrix::combine(double a, const HermitianMatrix& x, double b, const HermitianMatrix& y) {
  if (x.kind_ != y.kind_ || x.n_ != y.n_) throw DimensionMismatch("combining mismatched samples");
  return HermitianMatrix(x.kind_, x.n_, a * x.data_ + b * y.data_);
}

double trace_of_product(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  // tr(XY) = sum_ij X_ij Y_ji = sum_ij X_ij conj(Y_ij) for self-adjoint Y.
  return (x.array() * y.conjugate().array()).sum().real();
}

}  // namespace steinrmt
