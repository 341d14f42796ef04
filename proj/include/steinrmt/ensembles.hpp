#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "steinrmt/hermitian_matrix.hpp"
#include "steinrmt/trace_algebra.hpp"
#include "steinrmt/wick_oracle.hpp"

namespace steinrmt {

using Rng = std::mt19937_64;

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::GUE;
  int n = 1;
  std::uint64_t seed = 0;
};

// Independent random streams derived from one experiment seed. Each replica
// index of each stream gets its own engine, so results do not depend on how
// replicas are scheduled across threads.
enum class Stream : std::uint64_t {
  sample = 0,
  ou_noise = 1,
  calibration = 2,
  anchor = 3,
  directions = 4,
  bootstrap = 5,
};

std::uint64_t splitmix64(std::uint64_t x);
/// splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index); documented and stable.
std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index);
Rng replica_rng(std::uint64_t seed, Stream stream, std::uint64_t index);

/// Runs body(i) for i in [0, count). threads <= 1 runs serially; otherwise
/// indices are split into contiguous blocks. Body must only write to slot i.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// One standard Gaussian sample with respect to the Hilbert-Schmidt inner
/// product: independent N(0,1) coefficients on an orthonormal basis.
HermitianMatrix sample_matrix(EnsembleKind kind, int n, Rng& rng);
/// Replica i of the sample stream for spec.
HermitianMatrix sample_replica(const EnsembleSpec& spec, std::size_t index);
std::vector<HermitianMatrix> sample(const EnsembleSpec& spec, std::size_t count, int threads = 1);

/// Coordinates on the orthonormal basis used for sampling (n^2 for GUE,
/// n(n+1)/2 for GOE, n(2n-1) for GSE).
std::vector<double> hs_coordinates(const HermitianMatrix& a);

struct CenteringConstants {
  EnsembleKind kind = EnsembleKind::GUE;
  int n = 0;
  int d = 0;
  std::vector<double> values;  ///< index k-1 holds E tr T_k(A / (2 sqrt n))
  std::vector<double> standard_error;  ///< zero when exact
  bool exact = false;
  std::size_t replicas = 0;
};

/// Exact centering from the Wick oracle.
CenteringConstants gue_centering(int n, int d, const WickOracle& oracle);
/// Empirical centering from an independent calibration stream.
CenteringConstants empirical_centering(EnsembleKind kind, int n, int d, std::size_t replicas, std::uint64_t seed,
                                       int threads = 1);

struct LinearStatisticVector {
  std::vector<double> values;
  std::vector<double> centering;
};

/// tr T_k(A / (2 sqrt n)) for k = 1..d via the matrix three-term recurrence.
std::vector<double> chebyshev_traces(const HermitianMatrix& a, int d, int degree_cap = kDefaultTraceDegreeCap);
/// Same quantity from the eigenvalues; cross-check only.
std::vector<double> chebyshev_traces_eigen(const HermitianMatrix& a, int d);
LinearStatisticVector chebyshev_statistics(const HermitianMatrix& a, const CenteringConstants& centering);

struct OUCouplePair {
  HermitianMatrix x0;
  HermitianMatrix xt;
  double t;
};

/// Exact OU transition: X_t = e^{-t} X_0 + sqrt(1 - e^{-2t}) Z.
OUCouplePair ou_step(const HermitianMatrix& x0, double t, Rng& rng);

struct InfinitesimalRow {
  double t = 0;
  double generator_quotient = 0;  ///< (1/t) E[f(X_t) - f(X_0) | X_0]
  double generator_stderr = 0;
  double generator_symbolic = 0;  ///< L f(X_0)
  double carre_quotient = 0;      ///< (1/t) E[(f(X_t)-f(X_0))(g(X_t)-g(X_0)) | X_0]
  double carre_stderr = 0;
  double carre_symbolic = 0;      ///< 2 Gamma(f, g)(X_0)
};

struct InfinitesimalReport {
  int n = 0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<InfinitesimalRow> rows;
};

/// Conditional Monte Carlo at one fixed X_0 (from the anchor stream) with a
/// fresh Z per replica; GUE only.
InfinitesimalReport infinitesimal_check(const TracePolynomial& f, const TracePolynomial& g, const EnsembleSpec& spec,
                                        std::span<const double> t_grid, std::size_t replicas, int threads = 1);

// Binary dump of statistic vectors. Layout, all little-endian:
//   8 bytes  magic "STRMTW01"
//   u32      version (1)
//   u32      kind (0 GUE, 1 GOE, 2 GSE)
//   u32      n
//   u32      d
//   u64      seed
//   u64      count
//   f64[count * d] values, row-major (one row per replica)
struct StatisticsDumpHeader {
  EnsembleKind kind = EnsembleKind::GUE;
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
};

void write_statistics_dump(std::ostream& out, const StatisticsDumpHeader& header, std::span<const double> values);
std::vector<double> read_statistics_dump(std::istream& in, StatisticsDumpHeader& header);

}  // namespace steinrmt
