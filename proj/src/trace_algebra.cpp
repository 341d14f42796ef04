#include "steinrmt/trace_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "steinrmt/errors.hpp"

namespace steinrmt {

int MonomialKey::degree() const { return std::accumulate(powers.begin(), powers.end(), 0); }

bool MonomialKeyOrder::operator()(const MonomialKey& a, const MonomialKey& b) const {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da > db;
  if (a.powers != b.powers) {
    return std::lexicographical_compare(a.powers.begin(), a.powers.end(), b.powers.begin(), b.powers.end(),
                                        std::greater<>());
  }
  return a.n_power > b.n_power;
}

namespace {

// Canonical key: zero powers become factors of n, remaining powers sorted descending.
MonomialKey make_key(std::vector<int> powers, NPower p) {
  int zeros = 0;
  for (int k : powers) {
    if (k < 0) throw std::invalid_argument("negative trace power");
    if (k == 0) ++zeros;
  }
  powers.erase(std::remove(powers.begin(), powers.end(), 0), powers.end());
  std::sort(powers.begin(), powers.end(), std::greater<>());
  return MonomialKey{std::move(powers), p + NPower::of(zeros)};
}

std::vector<int> without(const std::vector<int>& powers, std::size_t i) {
  std::vector<int> out;
  out.reserve(powers.size());
  for (std::size_t k = 0; k < powers.size(); ++k)
    if (k != i) out.push_back(powers[k]);
  return out;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void require_gue(EnsembleKind kind, const char* op) {
  if (kind != EnsembleKind::GUE) {
    throw UnsupportedEnsemble(std::string(op) + " is only available for the GUE, not " + to_string(kind));
  }
}

// Raw mode: Gamma(tr A^a, tr A^b) = ab tr A^{a+b-2} and
// Laplacian(tr A^p) = p sum_{k=0}^{p-2} tr A^k tr A^{p-2-k}.
// Scaled mode carries an extra n^{-1} on both.
NPower mode_factor(ScaleMode mode) { return mode == ScaleMode::scaled ? NPower::of(-1) : NPower{}; }

}  // namespace

TracePolynomial TracePolynomial::monomial(const Rational& c, std::vector<int> powers, NPower p, ScaleMode mode) {
  TracePolynomial out(mode);
  out.add_term(c, make_key(std::move(powers), p));
  return out;
}

TracePolynomial TracePolynomial::constant(const Rational& c, NPower p, ScaleMode mode) {
  return monomial(c, {}, p, mode);
}

TracePolynomial TracePolynomial::constant(const LaurentPolynomial& c, ScaleMode mode) {
  TracePolynomial out(mode);
  for (const auto& [p, v] : c.terms()) out.add_term(v, MonomialKey{{}, p});
  return out;
}

TracePolynomial TracePolynomial::trace_power(int k, ScaleMode mode) { return monomial(1, {k}, NPower{}, mode); }

std::vector<TraceMonomial> TracePolynomial::monomials() const {
  std::vector<TraceMonomial> out;
  out.reserve(terms_.size());
  for (const auto& [key, c] : terms_) out.push_back(TraceMonomial{key.powers, key.n_power, c});
  return out;
}

int TracePolynomial::degree() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.degree());
  return d;
}

int TracePolynomial::max_single_power() const {
  int d = 0;
  for (const auto& [key, c] : terms_)
    if (!key.powers.empty()) d = std::max(d, key.powers.front());
  return d;
}

Rational TracePolynomial::coefficient(const MonomialKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

LaurentPolynomial TracePolynomial::constant_part() const {
  LaurentPolynomial out;
  for (const auto& [key, c] : terms_)
    if (key.powers.empty()) out.add_term(c, key.n_power);
  return out;
}

void TracePolynomial::add_term(const Rational& c, MonomialKey key) {
  if (c == 0) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

void TracePolynomial::check_mode(const TracePolynomial& o) const {
  if (o.mode_ != mode_) throw ScaleMismatch();
}

TracePolynomial& TracePolynomial::operator+=(const TracePolynomial& o) {
  check_mode(o);
  for (const auto& [key, c] : o.terms_) add_term(c, key);
  return *this;
}

TracePolynomial& TracePolynomial::operator-=(const TracePolynomial& o) {
  check_mode(o);
  for (const auto& [key, c] : o.terms_) add_term(-c, key);
  return *this;
}

TracePolynomial& TracePolynomial::operator*=(const TracePolynomial& o) {
  check_mode(o);
  TracePolynomial out(mode_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      out.add_term(ca * cb, make_key(concat(ka.powers, kb.powers), ka.n_power + kb.n_power));
  terms_ = std::move(out.terms_);
  return *this;
}

TracePolynomial& TracePolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, v] : terms_) v *= c;
  return *this;
}

TracePolynomial TracePolynomial::operator-() const {
  TracePolynomial out(*this);
  out *= Rational(-1);
  return out;
}

TracePolynomial TracePolynomial::to_raw() const {
  if (mode_ == ScaleMode::raw) return *this;
  TracePolynomial out(ScaleMode::raw);
  for (const auto& [key, c] : terms_)
    out.add_term(c, MonomialKey{key.powers, key.n_power - NPower::from_twice(key.degree())});
  return out;
}

TracePolynomial TracePolynomial::to_scaled() const {
  if (mode_ == ScaleMode::scaled) return *this;
  TracePolynomial out(ScaleMode::scaled);
  for (const auto& [key, c] : terms_)
    out.add_term(c, MonomialKey{key.powers, key.n_power + NPower::from_twice(key.degree())});
  return out;
}

std::string TracePolynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::vector<std::string> parts;
    const Rational mag = abs(c);
    const bool bare = key.powers.empty() && key.n_power == NPower{};
    if (mag != 1 || bare) {
      parts.push_back(mag.get_den() == 1 ? to_string(mag) : "(" + to_string(mag) + ")");
    }
    if (key.n_power != NPower{}) parts.push_back(key.n_power.str());
    if (!key.powers.empty()) {
      std::string tr = "tr[";
      for (std::size_t i = 0; i < key.powers.size(); ++i) {
        if (i) tr += ",";
        tr += std::to_string(key.powers[i]);
      }
      parts.push_back(tr + "]");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += " ";
      out += parts[i];
    }
  }
  return out;
}

namespace {

NPower parse_npower(const std::string& tok) {
  if (tok == "n") return NPower::of(1);
  if (tok.rfind("n^", 0) != 0) throw ParseError("bad n power '" + tok + "'");
  const std::string e = tok.substr(2);
  const auto slash = e.find('/');
  try {
    if (slash == std::string::npos) return NPower::of(std::stoi(e));
    if (e.substr(slash + 1) != "2") throw ParseError("n exponent denominator must be 2");
    return NPower::from_twice(std::stoi(e.substr(0, slash)));
  } catch (const std::logic_error&) {
    throw ParseError("bad n power '" + tok + "'");
  }
}

std::vector<int> parse_powers(const std::string& tok) {
  if (tok.size() < 4 || tok.rfind("tr[", 0) != 0 || tok.back() != ']') {
    throw ParseError("bad trace factor '" + tok + "'");
  }
  std::vector<int> powers;
  std::stringstream ss(tok.substr(3, tok.size() - 4));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int k = std::stoi(item, &used);
      if (used != item.size() || k < 0) throw ParseError("bad power");
      powers.push_back(k);
    } catch (const std::logic_error&) {
      throw ParseError("bad trace power '" + item + "'");
    }
  }
  if (powers.empty()) throw ParseError("empty trace factor");
  return powers;
}

}  // namespace

TracePolynomial TracePolynomial::parse(std::string_view text, ScaleMode mode) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  TracePolynomial out(mode);
  if (tokens.size() == 1 && tokens[0] == "0") return out;
  if (tokens.empty()) throw ParseError("empty trace polynomial");

  std::size_t i = 0;
  bool negative = false;
  while (i < tokens.size()) {
    std::string tok = tokens[i];
    if (tok == "+" || tok == "-") {
      if (i == 0 || i + 1 == tokens.size()) throw ParseError("misplaced sign");
      negative = tok == "-";
      ++i;
      continue;
    }
    if (tok.size() > 1 && tok[0] == '-' && i == 0) {
      negative = true;
      tok = tok.substr(1);
    }
    Rational coef = 1;
    NPower np{};
    std::vector<int> powers;
    bool any = false;
    auto is_coef = [](const std::string& t) {
      return !t.empty() && (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '(');
    };
    if (is_coef(tok)) {
      std::string body = tok;
      if (body.front() == '(') {
        if (body.back() != ')') throw ParseError("unbalanced parenthesis in '" + tok + "'");
        body = body.substr(1, body.size() - 2);
      }
      coef = parse_rational(body);
      any = true;
      if (++i < tokens.size()) tok = tokens[i];
      else tok.clear();
    }
    if (!tok.empty() && tok[0] == 'n') {
      np = parse_npower(tok);
      any = true;
      if (++i < tokens.size()) tok = tokens[i];
      else tok.clear();
    }
    if (!tok.empty() && tok.rfind("tr[", 0) == 0) {
      powers = parse_powers(tok);
      any = true;
      ++i;
    }
    if (!any) throw ParseError("unexpected token '" + tok + "'");
    if (i < tokens.size() && tokens[i] != "+" && tokens[i] != "-") {
      throw ParseError("missing sign before '" + tokens[i] + "'");
    }
    out.add_term(negative ? -coef : coef, make_key(std::move(powers), np));
    negative = false;
  }
  return out;
}

TracePolynomial from_univariate(const UnivariatePolynomial& f, ScaleMode mode, int degree_cap) {
  if (f.degree() > degree_cap) throw DegreeCapExceeded(f.degree(), degree_cap);
  TracePolynomial out(mode);
  for (int k = 0; k <= f.degree(); ++k) {
    if (f.coefficient(k) != 0) out += TracePolynomial::monomial(f.coefficient(k), {k}, NPower{}, mode);
  }
  return out;
}

namespace {

// Gamma of two single traces tr X^a, tr X^b, multiplied into the remaining factors.
void add_single_gamma(TracePolynomial& out, const Rational& c, int a, int b, const std::vector<int>& rest,
                      NPower p, ScaleMode mode) {
  if (a == 0 || b == 0) return;
  std::vector<int> powers = rest;
  powers.push_back(a + b - 2);
  out.add_term(c * a * b, make_key(std::move(powers), p + mode_factor(mode)));
}

void add_single_laplacian(TracePolynomial& out, const Rational& c, int p, const std::vector<int>& rest, NPower np,
                          ScaleMode mode) {
  for (int k = 0; k <= p - 2; ++k) {
    std::vector<int> powers = rest;
    powers.push_back(k);
    powers.push_back(p - 2 - k);
    out.add_term(c * p, make_key(std::move(powers), np + mode_factor(mode)));
  }
}

}  // namespace

TracePolynomial gradient_inner(const TracePolynomial& u, const TracePolynomial& v, EnsembleKind kind) {
  require_gue(kind, "gradient_inner");
  if (u.mode() != v.mode()) throw ScaleMismatch();
  TracePolynomial out(u.mode());
  for (const auto& [ku, cu] : u.terms()) {
    for (const auto& [kv, cv] : v.terms()) {
      const Rational c = cu * cv;
      const NPower p = ku.n_power + kv.n_power;
      for (std::size_t i = 0; i < ku.powers.size(); ++i) {
        const auto rest_u = without(ku.powers, i);
        for (std::size_t j = 0; j < kv.powers.size(); ++j) {
          add_single_gamma(out, c, ku.powers[i], kv.powers[j], concat(rest_u, without(kv.powers, j)), p, u.mode());
        }
      }
    }
  }
  return out;
}

TracePolynomial laplacian(const TracePolynomial& u, EnsembleKind kind) {
  require_gue(kind, "laplacian");
  TracePolynomial out(u.mode());
  for (const auto& [key, c] : u.terms()) {
    const auto& pw = key.powers;
    for (std::size_t i = 0; i < pw.size(); ++i) add_single_laplacian(out, c, pw[i], without(pw, i), key.n_power, u.mode());
    // Cross terms of the product rule: 2 Gamma(t_i, t_j) times the other factors.
    for (std::size_t i = 0; i < pw.size(); ++i) {
      for (std::size_t j = i + 1; j < pw.size(); ++j) {
        std::vector<int> rest;
        for (std::size_t k = 0; k < pw.size(); ++k)
          if (k != i && k != j) rest.push_back(pw[k]);
        add_single_gamma(out, 2 * c, pw[i], pw[j], rest, key.n_power, u.mode());
      }
    }
  }
  return out;
}

TracePolynomial radial_derivative(const TracePolynomial& u) {
  TracePolynomial out(u.mode());
  for (const auto& [key, c] : u.terms()) out.add_term(c * key.degree(), key);
  return out;
}

TracePolynomial generator(const TracePolynomial& u, EnsembleKind kind) {
  require_gue(kind, "generator");
  return laplacian(u, kind) - radial_derivative(u);
}

TracePolynomial center(const TracePolynomial& u, const ExpectationOracle& oracle) {
  return u - TracePolynomial::constant(oracle(u), u.mode());
}

double evaluate(const TracePolynomial& u, std::span<const double> raw_traces, double n) {
  double total = 0.0;
  const double inv_sqrt_n = 1.0 / std::sqrt(n);
  for (const auto& [key, c] : u.terms()) {
    double term = c.get_d() * std::pow(n, key.n_power.as_double());
    for (int k : key.powers) {
      if (static_cast<std::size_t>(k) >= raw_traces.size()) throw std::out_of_range("missing trace power");
      term *= raw_traces[k];
      if (u.mode() == ScaleMode::scaled) term *= std::pow(inv_sqrt_n, k);
    }
    total += term;
  }
  return total;
}

double evaluate(const TracePolynomial& u, const HermitianMatrix& a) {
  const auto traces = a.power_traces(u.max_single_power());
  return evaluate(u, traces, static_cast<double>(a.n()));
}

}  // namespace steinrmt
