#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "steinrmt/ensembles.hpp"
#include "steinrmt/errors.hpp"
#include "steinrmt/experiment.hpp"
#include "steinrmt/rate_fit.hpp"
#include "steinrmt/stein_certifier.hpp"
#include "steinrmt/wick_oracle.hpp"

using namespace steinrmt;

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.n_list = {10, 10};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.n_list = {20, 10};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.replicas = 99;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.t_grid = {0.1, 0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config JSON round trip and strictness") {
  ExperimentConfig c;
  c.kind = EnsembleKind::GSE;
  c.n_list = {5, 7};
  c.seed = 42;
  const auto back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
  CHECK(c.hash().size() == 16);
  ExperimentConfig other = c;
  other.seed = 43;
  CHECK(other.hash() != c.hash());
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"d": "four"})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"kind": "XYZ"})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json("{not json"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"n_list": [3, 2]})"), ConfigError);
  CHECK(ExperimentConfig::from_json(R"({"d": 3})").d == 3);
}

TEST_CASE("result table CSV") {
  ResultTable t;
  t.add({25, "var_1", 0.1, 1.0 / 3.0, 100, 7, "abc"});
  t.add({50, "var_1", 2.5e-17, 0, 100, 7, "abc"});
  const auto csv = t.to_csv();
  CHECK(csv.rfind("n,metric,value,stderr,replicas,seed,config_hash\n", 0) == 0);
  CHECK(csv.find("25,var_1,0.1,0.3333333333333333,100,7,abc") != std::string::npos);
  const auto back = ResultTable::from_csv(csv);
  REQUIRE(back.rows().size() == 2);
  CHECK(back.rows()[0].standard_error == 1.0 / 3.0);
  CHECK(back.rows()[1].value == 2.5e-17);
  CHECK(back.to_csv() == csv);
  CHECK(back.find(50, "var_1").has_value());
  CHECK(!back.find(50, "var_2").has_value());
  const auto j = nlohmann::json::parse(t.to_json());
  CHECK(j.size() == 2);
  CHECK(j[0]["stderr"].get<double>() == 1.0 / 3.0);
  CHECK_THROWS_AS(ResultTable::from_csv("a,b\n"), ParseError);
}

TEST_CASE("rate fit on exact power laws") {
  const std::vector<double> n{10, 20, 40, 80};
  std::vector<double> v, se(4, 0.0);
  for (double x : n) v.push_back(3.0 / x);
  const auto f = fit_rate(n, v, se, "synthetic");
  CHECK(f.slope == doctest::Approx(-1).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  for (double r : f.residuals) CHECK(std::abs(r) < 1e-12);
  CHECK(!f.floor_suspected);
  CHECK(f.slope_ci_low == f.slope);
}

TEST_CASE("rate fit flags a noise floor") {
  const std::vector<double> n{10, 20, 40, 80, 160, 320, 640};
  std::vector<double> v, se;
  for (double x : n) {
    v.push_back(1.0 / x + 0.01);
    se.push_back(0.0005);
  }
  const auto f = fit_rate(n, v, se, "floor", 500, 3);
  CHECK(f.slope > -1);
  CHECK(f.slope < 0);
  CHECK(f.floor_suspected);
  CHECK(f.slope_ci_low < f.slope_ci_high);
  // Convex curvature in log-log: both ends sit above the fitted line.
  CHECK(f.residuals.front() > 0);
  CHECK(f.residuals.back() > 0);
  CHECK(f.residuals[3] < 0);
}

TEST_CASE("rate fit input handling") {
  const std::vector<double> n{10, 20, 40, 80};
  const std::vector<double> v{0.1, -1.0, 0.025, 0.0125}, se(4, 0.0);
  const auto f = fit_rate(n, v, se);
  CHECK(f.n.size() == 3);
  CHECK(f.warnings.size() >= 1);
  const std::vector<double> v2{0.1, -1.0, 0.0, 0.0125};
  CHECK_THROWS_AS(fit_rate(n, v2, se), std::invalid_argument);
}

TEST_CASE("bootstrap interval is reproducible and covers the truth") {
  const std::vector<double> n{25, 50, 100, 200};
  std::vector<double> v, se;
  for (double x : n) {
    v.push_back(2.0 / x * (1 + 0.01 * std::sin(x)));
    se.push_back(0.02 * 2.0 / x);
  }
  const auto a = fit_rate(n, v, se, "m", 1000, 5), b = fit_rate(n, v, se, "m", 1000, 5);
  CHECK(a.slope_ci_low == b.slope_ci_low);
  CHECK(a.slope_ci_low < -1);
  CHECK(a.slope_ci_high > -1);
}

TEST_CASE("certificate series has slope -1") {
  WickOracle o;
  SteinCertifier c(o);
  for (int d = 2; d <= 4; ++d) {
    ResultTable t;
    for (int n : {20, 40, 80, 160, 320}) t.add({n, "cert_bound", c.certify(d, n).wasserstein_bound, 0, 0, 0, ""});
    const auto f = rate_fit(t, "cert_bound");
    CHECK(std::abs(f.slope + 1) <= 0.02);
  }
}

TEST_CASE("SVG plot") {
  const std::vector<double> n{10, 20, 40};
  const std::vector<double> v{0.3, 0.15, 0.075}, se(3, 0.0);
  const auto svg = rate_plot_svg(fit_rate(n, v, se, "toy"));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("toy: slope -1.00") != std::string::npos);
}

TEST_CASE("CLT experiment, GUE") {
  ExperimentConfig cfg;
  cfg.n_list = {8, 16};
  cfg.d = 3;
  cfg.replicas = 4000;
  cfg.slices = 8;
  WickOracle o;
  const auto t = clt_experiment(cfg, o);
  for (int n : cfg.n_list) {
    for (int p = 1; p <= 2; ++p) {
      const auto r = t.find(n, "var_" + std::to_string(p));
      REQUIRE(r.has_value());
      CHECK(std::abs(r->value - p / 4.0) < 3 * r->standard_error);
      CHECK(r->config_hash == cfg.hash());
      CHECK(r->seed == cfg.seed);
      CHECK(r->replicas == cfg.replicas);
    }
    const auto c = t.find(n, "cov_1_2");
    REQUIRE(c.has_value());
    CHECK(std::abs(c->value) < 3 * c->standard_error);
    CHECK(t.find(n, "cert_bound").has_value());
    CHECK(t.find(n, "sliced_w1").has_value());
    CHECK(t.find(n, "w1_3").has_value());
  }
  CltOptions threaded;
  threaded.threads = 3;
  CHECK(clt_experiment(cfg, o, threaded).to_csv() == t.to_csv());
}

TEST_CASE("CLT experiment, GOE and GSE use empirical centering") {
  for (auto kind : {EnsembleKind::GOE, EnsembleKind::GSE}) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.n_list = {6};
    cfg.d = 2;
    cfg.replicas = 1000;
    cfg.slices = 4;
    WickOracle o;
    const auto t = clt_experiment(cfg, o);
    CHECK(t.find(6, "center_1").has_value());
    CHECK(t.find(6, "center_2").has_value());
    CHECK(!t.find(6, "cert_bound").has_value());
    CHECK(t.find(6, "var_2")->value > 0);
  }
}

TEST_CASE("CLT dump files") {
  const auto dir = std::filesystem::temp_directory_path() / "steinrmt_dump_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ExperimentConfig cfg;
  cfg.n_list = {5};
  cfg.d = 2;
  cfg.replicas = 200;
  WickOracle o;
  CltOptions opts;
  opts.dump_dir = dir.string();
  clt_experiment(cfg, o, opts);
  std::ifstream in(dir / "statistics_GUE_n5_d2.bin", std::ios::binary);
  REQUIRE(in.good());
  StatisticsDumpHeader h;
  const auto v = read_statistics_dump(in, h);
  CHECK(h.count == 200);
  CHECK(v.size() == 400);
  std::filesystem::remove_all(dir);
}
