#include "steinrmt/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "steinrmt/chebyshev.hpp"
#include "steinrmt/ensembles.hpp"
#include "steinrmt/errors.hpp"
#include "steinrmt/experiment.hpp"
#include "steinrmt/rate_fit.hpp"
#include "steinrmt/rational.hpp"
#include "steinrmt/stein_certifier.hpp"
#include "steinrmt/trace_algebra.hpp"
#include "steinrmt/wick_oracle.hpp"

namespace steinrmt {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kCheckFailed = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::optional<std::string> out_dir;
  int threads = 1;
  std::string format = "csv";
};

ExperimentConfig load_config(const Globals& g) {
  ExperimentConfig cfg;
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw ConfigError("cannot read config file " + g.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = ExperimentConfig::from_json(buf.str());
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.out_dir) cfg.out_dir = *g.out_dir;
  return cfg;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << body;
}

std::string rational_matrix_str(const RationalMatrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += "  [";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += to_string(m(i, j));
    }
    s += "]\n";
  }
  return s;
}

// Exact identities behind the Chebyshev certificate.
int run_verify_symbolic(int d, const Globals& g, std::ostream& out) {
  WickOracle oracle(std::max(kDefaultTraceDegreeCap, 2 * d + 2));
  SteinCertifier cert(oracle);
  const auto f = cert.build_F(d);
  std::vector<std::string> failures;

  GeneratorDecomposition gen;
  try {
    gen = cert.decompose_generator(f);
  } catch (const std::logic_error& e) {
    out << "generator decomposition failed: " << e.what() << "\n";
    return kCheckFailed;
  }
  if (!gen.lambda.is_diagonal()) failures.push_back("Lambda is not diagonal");

  nlohmann::ordered_json report;
  report["d"] = d;
  std::vector<std::vector<std::string>> lam(d, std::vector<std::string>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lam[i][j] = to_string(gen.lambda(i, j));
  report["lambda"] = lam;

  std::ostringstream text;
  text << "Lambda =\n" << rational_matrix_str(gen.lambda);
  text << "residuals E1_p = L F_p + (Lambda F)_p:\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int p = 0; p < d; ++p) {
    const auto& r = gen.rows[p].residual;
    if (!oracle.expect(r).is_zero()) failures.push_back("E[E1_" + std::to_string(p + 1) + "] != 0");
    if (!oracle.expect(generator(f[p])).is_zero()) failures.push_back("E[L F_" + std::to_string(p + 1) + "] != 0");
    const auto order = centered_order(to_centered_basis(r, oracle));
    if (order && !(*order < NPower{})) failures.push_back("E1_" + std::to_string(p + 1) + " is not O(1/n)");
    const std::string order_str = order ? (order->str().empty() ? "1" : order->str()) : "0";
    text << "  p=" << p + 1 << ": " << r.str() << "   [order " << order_str << "]\n";
    rows.push_back({{"p", p + 1}, {"residual", r.str()}, {"order", order_str}});
  }
  report["residuals"] = rows;

  const auto carre = cert.decompose_carre(f);
  text << "E Gamma(F_p, F_q):\n";
  nlohmann::ordered_json gam = nlohmann::ordered_json::array();
  for (int p = 0; p < d; ++p) {
    nlohmann::ordered_json grow = nlohmann::ordered_json::array();
    text << "  [";
    for (int q = 0; q < d; ++q) {
      const auto& e = carre.expected_gamma[p][q];
      const Rational want = p == q ? make_rational((p + 1) * (p + 1), 4) : Rational(0);
      if (e.constant_term() != want) failures.push_back("E Gamma constant term wrong at " + std::to_string(p + 1));
      LaurentPolynomial corr = e;
      corr -= LaurentPolynomial(want);
      if (!corr.is_zero() && corr.max_power() > NPower::of(-2))
        failures.push_back("E Gamma correction larger than n^-2 at " + std::to_string(p + 1) + "," +
                           std::to_string(q + 1));
      const std::string s = e.str();
      text << (q ? "; " : "") << s;
      grow.push_back(s);
    }
    text << "]\n";
    gam.push_back(grow);
  }
  report["expected_gamma"] = gam;
  report["failures"] = failures;

  if (g.format == "json") {
    out << report.dump(2) << "\n";
  } else {
    out << text.str();
  }
  if (g.out_dir) write_file(*g.out_dir, "verify_symbolic.json", report.dump(2) + "\n");
  for (const auto& msg : failures) out << "FAILED: " << msg << "\n";
  return failures.empty() ? kOk : kCheckFailed;
}

int run_moments(int max_p, const Globals& g, std::ostream& out) {
  WickOracle oracle(std::max(kDefaultTraceDegreeCap, 2 * max_p));
  bool ok = true;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string csv = "p,moment,catalan\n";
  for (int p = 0; p <= max_p; ++p) {
    const auto m = oracle.scaled_even_moment(p);
    const Integer c = catalan(p);
    LaurentPolynomial corr = m;
    corr -= LaurentPolynomial(Rational(c));
    if (m.constant_term() != Rational(c) || (!corr.is_zero() && !(corr.max_power() < NPower{}))) ok = false;
    csv += std::to_string(p) + "," + m.str() + "," + to_string(c) + "\n";
    rows.push_back({{"p", p}, {"moment", m.str()}, {"catalan", to_string(c)}});
  }
  const std::string body = g.format == "json" ? rows.dump(2) + "\n" : csv;
  out << body;
  if (g.out_dir) write_file(*g.out_dir, g.format == "json" ? "moments.json" : "moments.csv", body);
  if (!ok) out << "FAILED: moment constant term differs from the Catalan number\n";
  return ok ? kOk : kCheckFailed;
}

struct OuOptions {
  int n = 20;
  std::size_t replicas = 100000;
  double gamma_tolerance = 0.02;
  int third_d = 3;
  int third_n = 40;
  std::size_t third_replicas = 20000;
};

int run_ou_check(const OuOptions& o, const Globals& g, std::ostream& out) {
  const ExperimentConfig cfg = load_config(g);
  const auto f = TracePolynomial::trace_power(1);
  EnsembleSpec spec{EnsembleKind::GUE, o.n, cfg.seed};
  const auto rep = infinitesimal_check(f, f, spec, cfg.t_grid, o.replicas, g.threads);
  bool ok = true;
  nlohmann::ordered_json j;
  j["n"] = o.n;
  j["replicas"] = o.replicas;
  j["seed"] = cfg.seed;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string csv = "t,generator_quotient,generator_stderr,generator_symbolic,carre_quotient,carre_stderr,carre_symbolic\n";
  std::size_t finest = 0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    if (rep.rows[i].t < rep.rows[finest].t) finest = i;
  for (const auto& r : rep.rows) {
    rows.push_back({{"t", r.t},
                    {"generator_quotient", r.generator_quotient},
                    {"generator_stderr", r.generator_stderr},
                    {"generator_symbolic", r.generator_symbolic},
                    {"carre_quotient", r.carre_quotient},
                    {"carre_stderr", r.carre_stderr},
                    {"carre_symbolic", r.carre_symbolic}});
    csv += shortest_repr(r.t) + "," + shortest_repr(r.generator_quotient) + "," + shortest_repr(r.generator_stderr) +
           "," + shortest_repr(r.generator_symbolic) + "," + shortest_repr(r.carre_quotient) + "," +
           shortest_repr(r.carre_stderr) + "," + shortest_repr(r.carre_symbolic) + "\n";
  }
  if (!rep.rows.empty()) {
    const auto& r = rep.rows[finest];
    const double rel = std::abs(r.carre_quotient - r.carre_symbolic) / std::abs(r.carre_symbolic);
    if (!(rel <= o.gamma_tolerance)) ok = false;
    if (!(std::abs(r.generator_quotient - r.generator_symbolic) <= 4 * r.generator_stderr)) ok = false;
  }
  j["infinitesimal"] = rows;

  const auto third = lindeberg_third_moment(o.third_d, o.third_n, cfg.t_grid, o.third_replicas, cfg.seed, g.threads);
  nlohmann::ordered_json trows = nlohmann::ordered_json::array();
  csv += "t,third_moment,stderr,ratio_to_previous\n";
  for (std::size_t i = 0; i < third.rows.size(); ++i) {
    const auto& r = third.rows[i];
    trows.push_back({{"t", r.t}, {"estimate", r.estimate}, {"stderr", r.standard_error}, {"ratio", r.ratio_to_previous}});
    csv += shortest_repr(r.t) + "," + shortest_repr(r.estimate) + "," + shortest_repr(r.standard_error) + "," +
           shortest_repr(r.ratio_to_previous) + "\n";
    // Only tenfold refinements carry the [2.5, 4] expectation.
    if (i > 0 && std::abs(third.rows[i - 1].t / r.t - 10) < 1e-9 &&
        !(r.ratio_to_previous >= 2.5 && r.ratio_to_previous <= 4.0))
      ok = false;
  }
  j["third_moment"] = {{"d", o.third_d}, {"n", o.third_n}, {"replicas", o.third_replicas}, {"rows", trows}};
  j["pass"] = ok;
  const std::string body = g.format == "json" ? j.dump(2) + "\n" : csv;
  out << body;
  if (g.out_dir) write_file(*g.out_dir, g.format == "json" ? "ou_check.json" : "ou_check.csv", body);
  if (!ok) out << "FAILED: OU difference quotients disagree with the symbolic values\n";
  return ok ? kOk : kCheckFailed;
}

int run_clt(ExperimentConfig cfg, bool dump, const Globals& g, std::ostream& out) {
  cfg.validate();
  WickOracle oracle(std::max(kDefaultTraceDegreeCap, 2 * cfg.d + 2));
  CltOptions opts;
  opts.threads = g.threads;
  if (dump) opts.dump_dir = cfg.out_dir;
  const auto table = clt_experiment(cfg, oracle, opts);
  const std::string body = g.format == "json" ? table.to_json() : table.to_csv();
  write_file(cfg.out_dir, g.format == "json" ? "clt.json" : "clt.csv", body);
  out << body;
  return kOk;
}

ResultTable certificate_series(int d, const std::vector<int>& ns, std::uint64_t seed, const std::string& hash) {
  WickOracle oracle(std::max(kDefaultTraceDegreeCap, 2 * d + 2));
  SteinCertifier cert(oracle);
  ResultTable t;
  for (int n : ns) {
    const auto c = cert.certify(d, n);
    t.add({n, "cert_bound", c.wasserstein_bound, 0.0, 0, seed, hash});
  }
  return t;
}

int run_rate(const std::string& input, const std::string& metric, int d, std::size_t bootstrap, const Globals& g,
             std::ostream& out) {
  const ExperimentConfig cfg = load_config(g);
  ResultTable table;
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw ConfigError("cannot read " + input);
    std::stringstream buf;
    buf << in.rdbuf();
    table = ResultTable::from_csv(buf.str());
  } else {
    if (metric != "cert_bound") throw ConfigError("without --input only the cert_bound series is available");
    table = certificate_series(d, {20, 40, 80, 160, 320}, cfg.seed, cfg.hash());
  }
  const RateFit fit = rate_fit(table, metric, bootstrap, cfg.seed);
  nlohmann::ordered_json j;
  j["metric"] = fit.metric;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["slope_ci"] = {fit.slope_ci_low, fit.slope_ci_high};
  j["n"] = fit.n;
  j["values"] = fit.values;
  j["residuals"] = fit.residuals;
  j["segment_slopes"] = fit.segment_slopes;
  j["floor_suspected"] = fit.floor_suspected;
  j["warnings"] = fit.warnings;
  std::string csv = "n,value,residual\n";
  for (std::size_t i = 0; i < fit.n.size(); ++i)
    csv += shortest_repr(fit.n[i]) + "," + shortest_repr(fit.values[i]) + "," + shortest_repr(fit.residuals[i]) + "\n";
  csv += "slope," + shortest_repr(fit.slope) + "\nintercept," + shortest_repr(fit.intercept) + "\nslope_ci," +
         shortest_repr(fit.slope_ci_low) + " " + shortest_repr(fit.slope_ci_high) + "\n";
  const std::string body = g.format == "json" ? j.dump(2) + "\n" : csv;
  write_file(cfg.out_dir, "rate_" + metric + ".svg", rate_plot_svg(fit));
  write_file(cfg.out_dir, g.format == "json" ? "rate_" + metric + ".json" : "rate_" + metric + ".csv", body);
  out << body;
  for (const auto& w : fit.warnings) out << "warning: " << w << "\n";
  return kOk;
}

int run_certify(int d, int n, std::size_t mc, const Globals& g, std::ostream& out) {
  const ExperimentConfig cfg = load_config(g);
  WickOracle oracle(std::max(kDefaultTraceDegreeCap, 2 * d + 2));
  SteinCertifier cert(oracle);
  const auto c = cert.certify(d, n, mc, cfg.seed, g.threads);
  const std::string body = to_json(c) + "\n";
  write_file(cfg.out_dir, "certificate.json", body);
  out << body;
  return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stein certificates and Monte Carlo checks for Chebyshev statistics of Gaussian matrices", "steinrmt"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "Experiment seed");
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  int sym_d = 4;
  auto* sym = app.add_subcommand("verify-symbolic", "Check the exact generator and carre du champ identities");
  sym->add_option("--d", sym_d, "Number of statistics")->check(CLI::Range(1, 8));

  int max_p = 5;
  auto* mom = app.add_subcommand("moments", "Tabulate exact scaled even moments against Catalan numbers");
  mom->add_option("--max-p", max_p, "Largest p")->check(CLI::Range(0, 8));

  OuOptions ou;
  auto* ouc = app.add_subcommand("ou-check", "Monte Carlo OU difference quotients and third-moment scaling");
  ouc->add_option("--n", ou.n)->check(CLI::PositiveNumber);
  ouc->add_option("--replicas", ou.replicas)->check(CLI::PositiveNumber);
  ouc->add_option("--third-d", ou.third_d)->check(CLI::Range(1, 8));
  ouc->add_option("--third-n", ou.third_n)->check(CLI::PositiveNumber);
  ouc->add_option("--third-replicas", ou.third_replicas)->check(CLI::PositiveNumber);

  bool dump = false;
  std::optional<int> clt_d;
  std::optional<std::size_t> clt_replicas;
  std::vector<int> clt_n;
  std::string clt_kind;
  auto* clt = app.add_subcommand("clt", "Empirical CLT experiment");
  clt->add_flag("--dump", dump, "Write binary statistic dumps");
  clt->add_option("--d", clt_d);
  clt->add_option("--replicas", clt_replicas);
  clt->add_option("--n", clt_n, "Matrix sizes (overrides n_list)");
  clt->add_option("--ensemble", clt_kind)->check(CLI::IsMember({"GUE", "GOE", "GSE"}));

  std::string rate_input, rate_metric = "cert_bound";
  int rate_d = 4;
  std::size_t bootstrap = 2000;
  auto* rate = app.add_subcommand("rate", "Log-log rate fit with SVG plot");
  rate->add_option("--input", rate_input, "ResultTable CSV")->check(CLI::ExistingFile);
  rate->add_option("--metric", rate_metric);
  rate->add_option("--d", rate_d)->check(CLI::Range(1, 8));
  rate->add_option("--bootstrap", bootstrap);

  int cert_d = 4, cert_n = 100;
  std::size_t cert_mc = 0;
  auto* cer = app.add_subcommand("certify", "Emit a Stein certificate as JSON");
  cer->add_option("--d", cert_d)->check(CLI::Range(1, 8));
  cer->add_option("--n", cert_n)->check(CLI::PositiveNumber);
  cer->add_option("--mc-replicas", cert_mc);

  for (auto* s : {sym, mom, ouc, clt, rate, cer}) s->fallthrough();

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  if (*seed_opt) g.seed = seed;
  if (*out_opt) g.out_dir = out_dir;

  try {
    if (*sym) return run_verify_symbolic(sym_d, g, out);
    if (*mom) return run_moments(max_p, g, out);
    if (*ouc) return run_ou_check(ou, g, out);
    if (*clt) {
      ExperimentConfig cfg = load_config(g);
      if (clt_d) cfg.d = *clt_d;
      if (clt_replicas) cfg.replicas = *clt_replicas;
      if (!clt_n.empty()) cfg.n_list = clt_n;
      if (!clt_kind.empty()) cfg.kind = parse_ensemble_kind(clt_kind);
      return run_clt(cfg, dump, g, out);
    }
    if (*rate) return run_rate(rate_input, rate_metric, rate_d, bootstrap, g, out);
    if (*cer) return run_certify(cert_d, cert_n, cert_mc, g, out);
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace steinrmt
