#pragma once

// Exact GUE expectations of products of traces, by enumerating all pair
// partitions of the letters of the trace word. With E A_ij A_kl = d_il d_jk,
// a pairing pi contributes n^{cycles(gamma o pi)}, where gamma advances each
// letter to its successor inside its own trace.

#include <map>
#include <shared_mutex>
#include <span>
#include <vector>

#include "steinrmt/hermitian_matrix.hpp"
#include "steinrmt/laurent.hpp"
#include "steinrmt/trace_algebra.hpp"

namespace steinrmt {

/// Sum of n^{cycles(gamma o pi)} over all fixed-point-free involutions pi of
/// the letters of prod tr(A^{k_i}). Uncached; exposed for testing.
NPolynomial enumerate_pairings(std::span<const int> powers);

class WickOracle {
 public:
  /// Throws UnsupportedEnsemble for GOE/GSE.
  explicit WickOracle(int degree_cap = kDefaultTraceDegreeCap, EnsembleKind kind = EnsembleKind::GUE);

  int degree_cap() const { return degree_cap_; }

  /// E prod tr(A^{k_i}) as a polynomial in n. Odd total degree gives zero;
  /// total degree above the cap throws DegreeCapExceeded. Memoized.
  NPolynomial expect_trace_monomial(std::span<const int> powers) const;

  /// Linear extension, including each term's own power of n and, in scaled
  /// mode, the factor n^{-k/2} per degree-k trace.
  NPolynomial expect(const TracePolynomial& u) const;

  /// M_{n,p} = n^{-1} E tr (n^{-1/2} A)^{2p}.
  NPolynomial scaled_even_moment(int p) const;

  /// E[uv] - E[u] E[v].
  NPolynomial covariance(const TracePolynomial& u, const TracePolynomial& v) const;

  /// Adapter for center().
  ExpectationOracle as_oracle() const;

  std::size_t memo_size() const;

 private:
  int degree_cap_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::vector<int>, NPolynomial> memo_;
};

}  // namespace steinrmt
