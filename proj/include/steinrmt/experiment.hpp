#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steinrmt/hermitian_matrix.hpp"

namespace steinrmt {

class WickOracle;

/// Flat JSON document with exactly these fields.
struct ExperimentConfig {
  EnsembleKind kind = EnsembleKind::GUE;
  std::vector<int> n_list{25, 50, 100, 200};
  int d = 4;
  std::size_t replicas = 20000;
  std::uint64_t seed = 20240611;
  std::vector<double> t_grid{0.1, 0.01, 0.001};
  std::string out_dir = ".";
  int slices = 64;

  /// Throws ConfigError: n_list strictly increasing and positive,
  /// replicas >= 100, 1 <= d <= 16, t_grid positive, slices >= 1.
  void validate() const;
  std::string to_json() const;
  /// Throws ConfigError on malformed JSON, unknown or ill-typed fields.
  static ExperimentConfig from_json(const std::string& text);
  /// FNV-1a 64 of the canonical JSON form without out_dir, as 16 hex digits.
  std::string hash() const;
};

struct ResultRow {
  int n = 0;
  std::string metric;
  double value = 0;
  double standard_error = 0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

class ResultTable {
 public:
  void add(ResultRow row) { rows_.push_back(std::move(row)); }
  const std::vector<ResultRow>& rows() const { return rows_; }
  std::optional<ResultRow> find(int n, const std::string& metric) const;
  std::vector<ResultRow> metric_rows(const std::string& metric) const;

  /// Header "n,metric,value,stderr,replicas,seed,config_hash"; numbers in
  /// shortest round-trip form.
  std::string to_csv() const;
  std::string to_json() const;
  static ResultTable from_csv(const std::string& text);

 private:
  std::vector<ResultRow> rows_;
};

struct CltOptions {
  int threads = 1;
  /// When set, a binary statistics dump per n is written here.
  std::optional<std::string> dump_dir;
};

/// For each n: samples replicas, computes the centered Chebyshev statistics
/// and records var_p, cov_p_q, w1_p, sliced_w1 and (GUE) cert_bound. GOE/GSE
/// runs also record the empirical centering constants center_p.
ResultTable clt_experiment(const ExperimentConfig& config, const WickOracle& oracle, const CltOptions& options = {});

}  // namespace steinrmt
