#include "steinrmt/wick_oracle.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "steinrmt/errors.hpp"

namespace steinrmt {

NPolynomial enumerate_pairings(std::span<const int> powers) {
  const int letters = std::accumulate(powers.begin(), powers.end(), 0);
  if (letters == 0) return NPolynomial(1);
  if (letters % 2 != 0) return {};

  // gamma: next letter within the same trace factor (cyclically).
  std::vector<int> gamma(letters);
  int start = 0;
  for (int k : powers) {
    for (int j = 0; j < k; ++j) gamma[start + j] = start + (j + 1) % k;
    start += k;
  }

  // Iterative enumeration: repeatedly pair the smallest unpaired letter with
  // each larger unpaired letter in turn, backtracking via an explicit stack.
  std::vector<int> partner(letters, -1);
  std::vector<int> first(letters / 2);   // letter opened at depth d
  std::vector<int> choice(letters / 2);  // its current partner
  std::vector<long long> histogram(letters + 1, 0);
  std::vector<char> seen(letters);

  auto count_cycles = [&]() {
    std::fill(seen.begin(), seen.end(), 0);
    int cycles = 0;
    for (int s = 0; s < letters; ++s) {
      if (seen[s]) continue;
      ++cycles;
      for (int j = s; !seen[j]; j = gamma[partner[j]]) seen[j] = 1;
    }
    return cycles;
  };

  auto next_free = [&](int from) {
    while (from < letters && partner[from] != -1) ++from;
    return from;
  };

  const int depth_max = letters / 2;
  int depth = 0;
  first[0] = 0;
  choice[0] = 0;
  while (depth >= 0) {
    const int a = first[depth];
    // Undo the current choice at this depth, then advance to the next free partner.
    if (choice[depth] > a) {
      partner[a] = -1;
      partner[choice[depth]] = -1;
    }
    int b = next_free(std::max(choice[depth], a) + 1);
    if (b >= letters) {
      --depth;
      continue;
    }
    choice[depth] = b;
    partner[a] = b;
    partner[b] = a;
    if (depth + 1 == depth_max) {
      ++histogram[count_cycles()];
      continue;
    }
    ++depth;
    first[depth] = next_free(a + 1);
    choice[depth] = first[depth];
  }

  NPolynomial out;
  for (int c = 0; c <= letters; ++c)
    if (histogram[c] != 0) out.add_term(Rational(Integer(std::to_string(histogram[c]))), NPower::of(c));
  return out;
}

WickOracle::WickOracle(int degree_cap, EnsembleKind kind) : degree_cap_(degree_cap) {
  if (kind != EnsembleKind::GUE) {
    throw UnsupportedEnsemble("Wick oracle is only available for the GUE, not " + to_string(kind));
  }
}

NPolynomial WickOracle::expect_trace_monomial(std::span<const int> powers) const {
  std::vector<int> key;
  for (int k : powers) {
    if (k < 0) throw std::invalid_argument("negative trace power");
    if (k > 0) key.push_back(k);
  }
  const int zeros = static_cast<int>(powers.size() - key.size());
  const int total = std::accumulate(key.begin(), key.end(), 0);
  if (total > degree_cap_) throw DegreeCapExceeded(total, degree_cap_);
  if (total % 2 != 0) return {};
  std::sort(key.begin(), key.end(), std::greater<>());

  NPolynomial value;
  bool found = false;
  {
    std::shared_lock lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      value = it->second;
      found = true;
    }
  }
  if (!found) {
    value = enumerate_pairings(key);
    std::unique_lock lock(mutex_);
    memo_.emplace(key, value);
  }
  if (zeros > 0) value *= NPolynomial(1, NPower::of(zeros));
  return value;
}

NPolynomial WickOracle::expect(const TracePolynomial& u) const {
  NPolynomial out;
  for (const auto& [key, c] : u.terms()) {
    NPolynomial e = expect_trace_monomial(key.powers);
    if (e.is_zero()) continue;
    NPower shift = key.n_power;
    if (u.mode() == ScaleMode::scaled) shift = shift - NPower::from_twice(key.degree());
    e *= NPolynomial(c, shift);
    out += e;
  }
  return out;
}

NPolynomial WickOracle::scaled_even_moment(int p) const {
  if (p < 0) throw std::invalid_argument("negative moment index");
  if (p == 0) return NPolynomial(1);
  const std::vector<int> key{2 * p};
  NPolynomial e = expect_trace_monomial(key);
  e *= NPolynomial(1, NPower::of(-1 - p));
  return e;
}

NPolynomial WickOracle::covariance(const TracePolynomial& u, const TracePolynomial& v) const {
  return expect(u * v) - expect(u) * expect(v);
}

ExpectationOracle WickOracle::as_oracle() const {
  return [this](const TracePolynomial& u) { return expect(u); };
}

std::size_t WickOracle::memo_size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

}  // namespace steinrmt
