#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "steinrmt/cli.hpp"

using namespace steinrmt;

namespace {
struct Run {
  int code;
  std::string out, err;
};
Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "steinrmt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}
std::filesystem::path scratch(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("steinrmt_cli_" + name);
  std::filesystem::remove_all(d);
  return d;
}
}  // namespace

TEST_CASE("verify-symbolic") {
  const auto r = run({"verify-symbolic", "--d", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("[1, 0, 0, 0]\n  [0, 2, 0, 0]\n  [0, 0, 3, 0]\n  [0, 0, 0, 4]") != std::string::npos);
  CHECK(r.out.find("p=4: 2 n^-1 tr[1,1] - 2 n^-1") != std::string::npos);
  CHECK(r.out.find("FAILED") == std::string::npos);
  const auto j = run({"--format", "json", "verify-symbolic", "--d", "3"});
  CHECK(j.code == 0);
  CHECK(j.out.find("\"lambda\"") != std::string::npos);
}

TEST_CASE("moments table") {
  const auto r = run({"moments", "--max-p", "5"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "p,moment,catalan\n0,1,1\n1,1,1\n2,2 + n^-2,2\n3,5 + 10 n^-2,5\n4,14 + 70 n^-2 + 21 n^-4,14\n"
        "5,42 + 420 n^-2 + 483 n^-4,42\n");
}

TEST_CASE("usage errors exit 1") {
  auto r = run({"--bogus", "moments"});
  CHECK(r.code == 1);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run({"moments", "--max-p", "x"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"--format", "xml", "moments"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("invalid config exits 1") {
  const auto dir = scratch("config");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"replicas": 10})";
  std::ofstream(dir / "unknown.json") << R"({"colour": "red"})";
  CHECK(run({"--config", (dir / "bad.json").string(), "clt"}).code == 1);
  CHECK(run({"--config", (dir / "unknown.json").string(), "clt"}).code == 1);
  CHECK(run({"--config", (dir / "missing.json").string(), "clt"}).code == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("certify writes certificate.json") {
  const auto dir = scratch("certify");
  const auto r = run({"--out", dir.string(), "certify", "--d", "3", "--n", "40"});
  CHECK(r.code == 0);
  const auto body = slurp(dir / "certificate.json");
  CHECK(body == r.out);
  CHECK(body.find("\"wasserstein_bound\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("rate on the certificate series") {
  const auto dir = scratch("rate");
  const auto r = run({"--out", dir.string(), "rate"});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "rate_cert_bound.svg"));
  CHECK(r.out.find("slope,-1.0") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("clt output is identical across thread counts") {
  const auto d1 = scratch("clt1"), d3 = scratch("clt3");
  const auto cfg = scratch("cltcfg");
  std::filesystem::create_directories(cfg);
  std::ofstream(cfg / "c.json") << R"({"n_list": [6, 12], "d": 2, "replicas": 500, "slices": 4})";
  for (const char* fmt : {"csv", "json"}) {
    const auto a = run({"--config", (cfg / "c.json").string(), "--out", d1.string(), "--threads", "1", "--format", fmt, "clt"});
    const auto b = run({"--config", (cfg / "c.json").string(), "--out", d3.string(), "--threads", "3", "--format", fmt, "clt"});
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    const std::string name = std::string("clt.") + fmt;
    CHECK(slurp(d1 / name) == slurp(d3 / name));
    CHECK(!slurp(d1 / name).empty());
  }
  const auto dumped = run({"--config", (cfg / "c.json").string(), "--out", d1.string(), "clt", "--dump"});
  CHECK(dumped.code == 0);
  CHECK(std::filesystem::exists(d1 / "statistics_GUE_n6_d2.bin"));
  // The rate subcommand reads a result table back.
  const auto rr = run({"--out", d1.string(), "rate", "--input", (d1 / "clt.csv").string(), "--metric", "cert_bound"});
  CHECK(rr.code == 1);  // only two n values
  for (const auto& d : {d1, d3, cfg}) std::filesystem::remove_all(d);
}

TEST_CASE("ou-check passes at small scale and reports failures") {
  const auto ok = run({"ou-check", "--n", "8", "--replicas", "100000", "--third-n", "10", "--third-replicas", "4000"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("third_moment") != std::string::npos);
  // Too few replicas for a 2% Gamma match.
  const auto bad = run({"ou-check", "--n", "8", "--replicas", "3", "--third-n", "10", "--third-replicas", "50"});
  CHECK(bad.code == 2);
}
