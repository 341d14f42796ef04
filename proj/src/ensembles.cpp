#include "steinrmt/ensembles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <thread>

#include "steinrmt/chebyshev.hpp"
#include "steinrmt/errors.hpp"

namespace steinrmt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(stream)) ^ index);
}

Rng replica_rng(std::uint64_t seed, Stream stream, std::uint64_t index) {
  return Rng(derive_seed(seed, stream, index));
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = count * w / workers;
      const std::size_t hi = count * (w + 1) / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

HermitianMatrix sample_matrix(EnsembleKind kind, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("ensemble dimension must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double r = std::sqrt(0.5);
  using cd = std::complex<double>;
  switch (kind) {
    case EnsembleKind::GUE: {
      Eigen::MatrixXcd a(n, n);
      for (int j = 0; j < n; ++j) {
        a(j, j) = cd(normal(rng), 0.0);
        for (int k = j + 1; k < n; ++k) {
          const double x = normal(rng);
          const double y = normal(rng);
          a(j, k) = cd(r * x, r * y);
          a(k, j) = cd(r * x, -r * y);
        }
      }
      return HermitianMatrix(kind, n, std::move(a));
    }
    case EnsembleKind::GOE: {
      Eigen::MatrixXcd a(n, n);
      for (int j = 0; j < n; ++j) {
        a(j, j) = cd(normal(rng), 0.0);
        for (int k = j + 1; k < n; ++k) {
          const double x = r * normal(rng);
          a(j, k) = cd(x, 0.0);
          a(k, j) = cd(x, 0.0);
        }
      }
      return HermitianMatrix(kind, n, std::move(a));
    }
    case EnsembleKind::GSE: {
      // Quaternion q = a + b i + c j + d k  ->  [[a + b i, c + d i], [-c + d i, a - b i]].
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
      for (int j = 0; j < n; ++j) {
        const double a0 = normal(rng);
        m(2 * j, 2 * j) = cd(a0, 0.0);
        m(2 * j + 1, 2 * j + 1) = cd(a0, 0.0);
        for (int k = j + 1; k < n; ++k) {
          const double qa = r * normal(rng);
          const double qb = r * normal(rng);
          const double qc = r * normal(rng);
          const double qd = r * normal(rng);
          Eigen::Matrix2cd block;
          block << cd(qa, qb), cd(qc, qd), cd(-qc, qd), cd(qa, -qb);
          m.block<2, 2>(2 * j, 2 * k) = block;
          m.block<2, 2>(2 * k, 2 * j) = block.adjoint();
        }
      }
      return HermitianMatrix(kind, n, std::move(m));
    }
  }
  throw std::logic_error("unknown ensemble kind");
}

HermitianMatrix sample_replica(const EnsembleSpec& spec, std::size_t index) {
  Rng rng = replica_rng(spec.seed, Stream::sample, index);
  return sample_matrix(spec.kind, spec.n, rng);
}

std::vector<HermitianMatrix> sample(const EnsembleSpec& spec, std::size_t count, int threads) {
  std::vector<std::optional<HermitianMatrix>> slots(count);
  parallel_for(count, threads, [&](std::size_t i) { slots[i].emplace(sample_replica(spec, i)); });
  std::vector<HermitianMatrix> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<double> hs_coordinates(const HermitianMatrix& a) {
  const int n = a.n();
  const auto& m = a.data();
  const double s = std::sqrt(2.0);
  std::vector<double> out;
  switch (a.kind()) {
    case EnsembleKind::GUE:
      out.reserve(static_cast<std::size_t>(n) * n);
      for (int j = 0; j < n; ++j) out.push_back(m(j, j).real());
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          out.push_back(s * m(j, k).real());
          out.push_back(s * m(j, k).imag());
        }
      break;
    case EnsembleKind::GOE:
      for (int j = 0; j < n; ++j) out.push_back(m(j, j).real());
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) out.push_back(s * m(j, k).real());
      break;
    case EnsembleKind::GSE:
      for (int j = 0; j < n; ++j) out.push_back(m(2 * j, 2 * j).real());
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          const auto b = m.block<2, 2>(2 * j, 2 * k);
          out.push_back(s * b(0, 0).real());
          out.push_back(s * b(0, 0).imag());
          out.push_back(s * b(0, 1).real());
          out.push_back(s * b(0, 1).imag());
        }
      break;
  }
  return out;
}

CenteringConstants gue_centering(int n, int d, const WickOracle& oracle) {
  CenteringConstants c;
  c.kind = EnsembleKind::GUE;
  c.n = n;
  c.d = d;
  c.exact = true;
  const Rational half(1, 2);
  for (int k = 1; k <= d; ++k) {
    const auto f = chebyshev_T(k).scale_argument(half);
    c.values.push_back(oracle.expect(from_univariate(f, ScaleMode::scaled, oracle.degree_cap())).evaluate(n));
    c.standard_error.push_back(0.0);
  }
  return c;
}

CenteringConstants empirical_centering(EnsembleKind kind, int n, int d, std::size_t replicas, std::uint64_t seed,
                                       int threads) {
  if (replicas < 2) throw std::invalid_argument("empirical centering needs at least two replicas");
  std::vector<std::vector<double>> rows(replicas);
  parallel_for(replicas, threads, [&](std::size_t i) {
    Rng rng = replica_rng(seed, Stream::calibration, i);
    rows[i] = chebyshev_traces(sample_matrix(kind, n, rng), d);
  });
  CenteringConstants c;
  c.kind = kind;
  c.n = n;
  c.d = d;
  c.replicas = replicas;
  for (int k = 0; k < d; ++k) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[k];
    const double mean = sum / replicas;
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[k] - mean) * (r[k] - mean);
    c.values.push_back(mean);
    c.standard_error.push_back(std::sqrt(ss / (replicas - 1) / replicas));
  }
  return c;
}

std::vector<double> chebyshev_traces(const HermitianMatrix& a, int d, int degree_cap) {
  if (d > degree_cap) throw DegreeCapExceeded(d, degree_cap);
  std::vector<double> out;
  if (d < 1) return out;
  out.reserve(d);
  const double factor = a.trace_factor();
  const Eigen::MatrixXcd b = a.data() / (2.0 * std::sqrt(static_cast<double>(a.n())));
  const auto dim = b.rows();
  // M_0 = I, M_1 = B, M_{k+1} = 2 B M_k - M_{k-1}; the last trace only needs tr(B M_{d-1}).
  std::vector<double> tr(d + 1);
  tr[0] = static_cast<double>(dim);
  tr[1] = b.trace().real();
  Eigen::MatrixXcd prev = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd cur = b;
  for (int k = 1; k < d; ++k) {
    if (k + 1 == d) {
      tr[k + 1] = 2.0 * trace_of_product(b, cur) - tr[k - 1];
      break;
    }
    Eigen::MatrixXcd next = 2.0 * (b * cur) - prev;
    tr[k + 1] = next.trace().real();
    prev = std::move(cur);
    cur = std::move(next);
  }
  for (int k = 1; k <= d; ++k) out.push_back(factor * tr[k]);
  return out;
}

std::vector<double> chebyshev_traces_eigen(const HermitianMatrix& a, int d) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.data(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lambda = solver.eigenvalues() / (2.0 * std::sqrt(static_cast<double>(a.n())));
  std::vector<double> out(std::max(d, 0), 0.0);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    double prev = 1.0;
    double cur = lambda(i);
    for (int k = 1; k <= d; ++k) {
      out[k - 1] += cur;
      const double next = 2.0 * lambda(i) * cur - prev;
      prev = cur;
      cur = next;
    }
  }
  for (auto& v : out) v *= a.trace_factor();
  return out;
}

LinearStatisticVector chebyshev_statistics(const HermitianMatrix& a, const CenteringConstants& centering) {
  if (centering.n != a.n() || centering.kind != a.kind()) {
    throw DimensionMismatch("centering constants computed for a different ensemble");
  }
  LinearStatisticVector out;
  out.values = chebyshev_traces(a, centering.d);
  out.centering = centering.values;
  for (int k = 0; k < centering.d; ++k) out.values[k] -= centering.values[k];
  return out;
}

OUCouplePair ou_step(const HermitianMatrix& x0, double t, Rng& rng) {
  if (!(t > 0)) throw std::invalid_argument("OU time must be positive");
  const HermitianMatrix z = sample_matrix(x0.kind(), x0.n(), rng);
  return OUCouplePair{x0, HermitianMatrix::combine(std::exp(-t), x0, std::sqrt(-std::expm1(-2.0 * t)), z), t};
}

InfinitesimalReport infinitesimal_check(const TracePolynomial& f, const TracePolynomial& g, const EnsembleSpec& spec,
                                        std::span<const double> t_grid, std::size_t replicas, int threads) {
  if (spec.kind != EnsembleKind::GUE) {
    throw UnsupportedEnsemble("infinitesimal_check needs the symbolic generator, which exists only for the GUE");
  }
  if (replicas < 2) throw std::invalid_argument("need at least two replicas");
  Rng anchor = replica_rng(spec.seed, Stream::anchor, 0);
  const HermitianMatrix x0 = sample_matrix(spec.kind, spec.n, anchor);
  const double f0 = evaluate(f, x0);
  const double g0 = evaluate(g, x0);

  InfinitesimalReport report;
  report.n = spec.n;
  report.replicas = replicas;
  report.seed = spec.seed;
  const double lf = evaluate(generator(f), x0);
  const double gamma = evaluate(gradient_inner(f, g), x0);

  const std::size_t nt = t_grid.size();
  // df[i * nt + j], dg[...] for replica i at time t_grid[j]; the same Z is reused across the grid.
  std::vector<double> df(replicas * nt), dg(replicas * nt);
  parallel_for(replicas, threads, [&](std::size_t i) {
    Rng rng = replica_rng(spec.seed, Stream::ou_noise, i);
    const HermitianMatrix z = sample_matrix(spec.kind, spec.n, rng);
    for (std::size_t j = 0; j < nt; ++j) {
      const double t = t_grid[j];
      const HermitianMatrix xt = HermitianMatrix::combine(std::exp(-t), x0, std::sqrt(-std::expm1(-2.0 * t)), z);
      df[i * nt + j] = evaluate(f, xt) - f0;
      dg[i * nt + j] = evaluate(g, xt) - g0;
    }
  });

  for (std::size_t j = 0; j < nt; ++j) {
    const double t = t_grid[j];
    if (!(t > 0)) throw std::invalid_argument("OU time must be positive");
    double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0;
    for (std::size_t i = 0; i < replicas; ++i) {
      const double a = df[i * nt + j] / t;
      const double b = df[i * nt + j] * dg[i * nt + j] / t;
      s1 += a;
      s1sq += a * a;
      s2 += b;
      s2sq += b * b;
    }
    const double r = static_cast<double>(replicas);
    InfinitesimalRow row;
    row.t = t;
    row.generator_quotient = s1 / r;
    row.generator_stderr = std::sqrt(std::max(0.0, (s1sq - s1 * s1 / r) / (r - 1)) / r);
    row.generator_symbolic = lf;
    row.carre_quotient = s2 / r;
    row.carre_stderr = std::sqrt(std::max(0.0, (s2sq - s2 * s2 / r) / (r - 1)) / r);
    row.carre_symbolic = 2.0 * gamma;
    report.rows.push_back(row);
  }
  return report;
}

namespace {

constexpr char kDumpMagic[8] = {'S', 'T', 'R', 'M', 'T', 'W', '0', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw ParseError("truncated statistics dump");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void write_statistics_dump(std::ostream& out, const StatisticsDumpHeader& header, std::span<const double> values) {
  if (values.size() != header.count * header.d) throw DimensionMismatch("dump payload does not match header");
  out.write(kDumpMagic, sizeof(kDumpMagic));
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(header.kind));
  put_le<std::uint32_t>(out, header.n);
  put_le<std::uint32_t>(out, header.d);
  put_le<std::uint64_t>(out, header.seed);
  put_le<std::uint64_t>(out, header.count);
  for (double v : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_le<std::uint64_t>(out, bits);
  }
}

std::vector<double> read_statistics_dump(std::istream& in, StatisticsDumpHeader& header) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kDumpMagic, sizeof(magic)) != 0) throw ParseError("not a statistics dump");
  if (get_le<std::uint32_t>(in) != 1) throw ParseError("unsupported dump version");
  const auto kind = get_le<std::uint32_t>(in);
  if (kind > 2) throw ParseError("bad ensemble kind in dump");
  header.kind = static_cast<EnsembleKind>(kind);
  header.n = get_le<std::uint32_t>(in);
  header.d = get_le<std::uint32_t>(in);
  header.seed = get_le<std::uint64_t>(in);
  header.count = get_le<std::uint64_t>(in);
  std::vector<double> values(header.count * header.d);
  for (auto& v : values) {
    const auto bits = get_le<std::uint64_t>(in);
    std::memcpy(&v, &bits, sizeof(v));
  }
  return values;
}

}  // namespace steinrmt
