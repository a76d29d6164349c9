#pragma once

#include <cstdint>

#include "cjfeast/chebyshev_filter.hpp"
#include "cjfeast/sparse_matrix.hpp"

namespace cjfeast {

struct NormEstimate {
  double eta_raw = 0.0;   // largest singular value of the bidiagonal
  double eta_safe = 0.0;  // kEtaSafety * eta_raw
  int steps_used = 0;
  bool breakdown = false;
};

/// ||A|| from `steps` Golub-Kahan-Lanczos steps with full reorthogonalization
/// of both Lanczos bases. Stops early on breakdown, which means an invariant
/// subspace was captured and eta_raw is exact. Requires 1 <= steps <= min(m, n).
NormEstimate estimate_norm_gkl(const SparseMatrix& a, int steps, std::uint64_t seed,
                               MvCounter& counter);

struct NsvEstimate {
  double estimate_real = 0.0;
  int estimate_rounded = 1;  // max(1, ceil(estimate_real))
  int probes = 0;
  std::uint64_t seed = 0;
};

/// Hutchinson estimate of the number of singular values in the interval,
/// trace(P_C) with Rademacher probes and the degree-d cross-product filter.
/// Costs 2 d probes MVs.
NsvEstimate estimate_nsv(const SparseMatrix& a, const Interval& interval,
                         const SpectralBounds& bounds, int degree, int probes,
                         std::uint64_t seed, MvCounter& counter, unsigned threads = 1);

}  // namespace cjfeast
