#include "steinrmt/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "steinrmt/distances.hpp"
#include "steinrmt/ensembles.hpp"
#include "steinrmt/errors.hpp"
#include "steinrmt/rational.hpp"
#include "steinrmt/stein_certifier.hpp"

namespace steinrmt {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw ConfigError("n_list must not be empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("n_list entries must be positive");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ConfigError("n_list must be strictly increasing");
  }
  if (replicas < 100) throw ConfigError("replicas must be at least 100");
  if (d < 1 || d > 16) throw ConfigError("d must lie in [1, 16]");
  for (double t : t_grid)
    if (!(t > 0)) throw ConfigError("t_grid entries must be positive");
  if (slices < 1) throw ConfigError("slices must be at least 1");
}

namespace {

json config_json(const ExperimentConfig& c) {
  return json{{"kind", to_string(c.kind)}, {"n_list", c.n_list}, {"d", c.d},
              {"replicas", c.replicas},     {"seed", c.seed},     {"t_grid", c.t_grid},
              {"out_dir", c.out_dir},       {"slices", c.slices}};
}

}  // namespace

std::string ExperimentConfig::to_json() const { return config_json(*this).dump(2); }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "kind") c.kind = parse_ensemble_kind(value.get<std::string>());
      else if (key == "n_list") c.n_list = value.get<std::vector<int>>();
      else if (key == "d") c.d = value.get<int>();
      else if (key == "replicas") c.replicas = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "t_grid") c.t_grid = value.get<std::vector<double>>();
      else if (key == "out_dir") c.out_dir = value.get<std::string>();
      else if (key == "slices") c.slices = value.get<int>();
      else throw ConfigError("unknown config field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ill-typed config field: ") + e.what());
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::hash() const {
  // The output location does not affect any result.
  json j = config_json(*this);
  j.erase("out_dir");
  const std::string canonical = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<ResultRow> ResultTable::find(int n, const std::string& metric) const {
  for (const auto& r : rows_)
    if (r.n == n && r.metric == metric) return r;
  return std::nullopt;
}

std::vector<ResultRow> ResultTable::metric_rows(const std::string& metric) const {
  std::vector<ResultRow> out;
  for (const auto& r : rows_)
    if (r.metric == metric) out.push_back(r);
  return out;
}

std::string ResultTable::to_csv() const {
  std::string out = "n,metric,value,stderr,replicas,seed,config_hash\n";
  for (const auto& r : rows_) {
    out += std::to_string(r.n) + "," + r.metric + "," + shortest_repr(r.value) + "," +
           shortest_repr(r.standard_error) + "," + std::to_string(r.replicas) + "," + std::to_string(r.seed) + "," +
           r.config_hash + "\n";
  }
  return out;
}

std::string ResultTable::to_json() const {
  // Numbers are emitted through shortest_repr so CSV and JSON agree digit for digit.
  std::string out = "[\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    out += "  {\"n\": " + std::to_string(r.n) + ", \"metric\": " + json(r.metric).dump() +
           ", \"value\": " + shortest_repr(r.value) + ", \"stderr\": " + shortest_repr(r.standard_error) +
           ", \"replicas\": " + std::to_string(r.replicas) + ", \"seed\": " + std::to_string(r.seed) +
           ", \"config_hash\": " + json(r.config_hash).dump() + "}";
    out += i + 1 < rows_.size() ? ",\n" : "\n";
  }
  return out + "]\n";
}

ResultTable ResultTable::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,metric,value,stderr,replicas,seed", 0) != 0) {
    throw ParseError("missing result table header");
  }
  ResultTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
    if (f.size() < 6) throw ParseError("short result row '" + line + "'");
    try {
      ResultRow r;
      r.n = std::stoi(f[0]);
      r.metric = f[1];
      r.value = std::stod(f[2]);
      r.standard_error = std::stod(f[3]);
      r.replicas = std::stoull(f[4]);
      r.seed = std::stoull(f[5]);
      if (f.size() > 6) r.config_hash = f[6];
      table.add(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("malformed result row '" + line + "'");
    }
  }
  return table;
}

namespace {

struct Moments {
  double mean = 0;
  double variance = 0;
  double variance_se = 0;
};

Moments column_moments(const std::vector<std::vector<double>>& rows, int k) {
  const double r = static_cast<double>(rows.size());
  Moments m;
  for (const auto& row : rows) m.mean += row[k];
  m.mean /= r;
  double m2 = 0, m4 = 0;
  for (const auto& row : rows) {
    const double c = row[k] - m.mean;
    m2 += c * c;
    m4 += c * c * c * c;
  }
  m.variance = m2 / (r - 1);
  m4 /= r;
  const double s4 = (m2 / r) * (m2 / r);
  m.variance_se = std::sqrt(std::max(0.0, m4 - s4) / r);
  return m;
}

}  // namespace

ResultTable clt_experiment(const ExperimentConfig& config, const WickOracle& oracle, const CltOptions& options) {
  config.validate();
  const std::string hash = config.hash();
  const SteinCertifier certifier(oracle);
  const GaussianTarget target = GaussianTarget::chebyshev_limit(config.d);
  ResultTable table;
  const int d = config.d;

  for (int n : config.n_list) {
    const std::uint64_t seed_n = derive_seed(config.seed, Stream::sample, static_cast<std::uint64_t>(n));
    auto add = [&](const std::string& metric, double value, double se) {
      table.add(ResultRow{n, metric, value, se, config.replicas, config.seed, hash});
    };

    const CenteringConstants centering =
        config.kind == EnsembleKind::GUE
            ? gue_centering(n, d, oracle)
            : empirical_centering(config.kind, n, d, config.replicas,
                                  derive_seed(config.seed, Stream::calibration, static_cast<std::uint64_t>(n)),
                                  options.threads);

    const EnsembleSpec spec{config.kind, n, seed_n};
    std::vector<std::vector<double>> rows(config.replicas);
    parallel_for(config.replicas, options.threads,
                 [&](std::size_t i) { rows[i] = chebyshev_statistics(sample_replica(spec, i), centering).values; });

    if (!centering.exact) {
      for (int k = 0; k < d; ++k)
        add("center_" + std::to_string(k + 1), centering.values[k], centering.standard_error[k]);
    }
    std::vector<Moments> moments;
    for (int k = 0; k < d; ++k) {
      moments.push_back(column_moments(rows, k));
      add("var_" + std::to_string(k + 1), moments.back().variance, moments.back().variance_se);
    }
    const double r = static_cast<double>(config.replicas);
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        double s = 0;
        for (const auto& row : rows) s += (row[p] - moments[p].mean) * (row[q] - moments[q].mean);
        const double cov = s / (r - 1);
        double ss = 0;
        for (const auto& row : rows) {
          const double v = (row[p] - moments[p].mean) * (row[q] - moments[q].mean) - cov;
          ss += v * v;
        }
        add("cov_" + std::to_string(p + 1) + "_" + std::to_string(q + 1), cov, std::sqrt(ss / (r - 1) / r));
      }
    }
    std::vector<double> column(rows.size());
    for (int k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][k];
      add("w1_" + std::to_string(k + 1), w1_empirical_vs_gaussian_1d(column, 0.0, target.variances[k]), 0.0);
    }
    add("sliced_w1", sliced_w1(rows, target, config.slices, config.seed), 0.0);
    if (config.kind == EnsembleKind::GUE) {
      add("cert_bound", certifier.certify(d, n).wasserstein_bound, 0.0);
    }

    if (options.dump_dir) {
      std::vector<double> flat;
      flat.reserve(rows.size() * d);
      for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
      const std::string path = *options.dump_dir + "/statistics_" + to_string(config.kind) + "_n" +
                               std::to_string(n) + "_d" + std::to_string(d) + ".bin";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + path);
      write_statistics_dump(out,
                            StatisticsDumpHeader{config.kind, static_cast<std::uint32_t>(n),
                                                 static_cast<std::uint32_t>(d), seed_n, rows.size()},
                            flat);
    }
  }
  return table;
}

}  // namespace steinrmt
