#include "cjfeast/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cjfeast/dense_matrix.hpp"
#include "cjfeast/error.hpp"
#include "cjfeast/projector.hpp"
#include "cjfeast/random.hpp"

namespace cjfeast {

namespace {

// Two passes of classical Gram-Schmidt against the stored basis.
void orthogonalize(std::vector<double>& x, const std::vector<std::vector<double>>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      const double c = dot(q, x);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * q[i];
    }
  }
}

double normalize(std::vector<double>& x) {
  const double nrm = norm2(x);
  if (nrm > 0.0) {
    for (double& v : x) v /= nrm;
  }
  return nrm;
}

double largest_singular_value(const std::vector<double>& alpha, const std::vector<double>& beta) {
  // (k+1) x k lower bidiagonal, zero-padded to square for the Jacobi kernel.
  const std::size_t k = alpha.size();
  DenseMatrix b(k + 1, k + 1);
  for (std::size_t j = 0; j < k; ++j) {
    b(j, j) = alpha[j];
    if (j < beta.size()) b(j + 1, j) = beta[j];
  }
  return jacobi_svd(b).s.front();
}

}  // namespace

NormEstimate estimate_norm_gkl(const SparseMatrix& a, int steps, std::uint64_t seed,
                               MvCounter& counter) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (steps < 1 || static_cast<std::size_t>(steps) > std::min(m, n)) {
    throw PreconditionError("GKL steps must lie in [1, min(m, n)]");
  }

  Rng rng = substream(seed, 0);
  std::normal_distribution<double> normal;
  std::vector<double> u(m);
  for (double& x : u) x = normal(rng);
  normalize(u);

  std::vector<std::vector<double>> us{u};
  std::vector<std::vector<double>> vs;
  std::vector<double> alpha;
  std::vector<double> beta;
  double scale = 0.0;

  NormEstimate est;
  std::vector<double> v = matvec_transpose(a, u, counter);
  for (int j = 0; j < steps; ++j) {
    orthogonalize(v, vs);
    const double aj = normalize(v);
    scale = std::max(scale, aj);
    if (aj <= 1e-14 * scale) {
      est.breakdown = true;
      break;
    }
    alpha.push_back(aj);
    vs.push_back(v);

    std::vector<double> w = matvec(a, v, counter);
    orthogonalize(w, us);
    const double bj = normalize(w);
    beta.push_back(bj);
    scale = std::max(scale, bj);
    if (bj <= 1e-14 * scale) {
      est.breakdown = true;
      break;
    }
    us.push_back(w);
    if (j + 1 < steps) v = matvec_transpose(a, w, counter);
  }

  est.steps_used = static_cast<int>(alpha.size());
  est.eta_raw = alpha.empty() ? 0.0 : largest_singular_value(alpha, beta);
  est.eta_safe = kEtaSafety * est.eta_raw;
  return est;
}

NsvEstimate estimate_nsv(const SparseMatrix& a, const Interval& interval,
                         const SpectralBounds& bounds, int degree, int probes,
                         std::uint64_t seed, MvCounter& counter, unsigned threads) {
  if (probes < 1) throw PreconditionError("probe count must be at least 1");
  const auto filter = ChebJacksonFilter::build(interval, bounds, degree, Variant::CrossProduct);

  const std::size_t n = a.cols();
  DenseMatrix w(n, static_cast<std::size_t>(probes));
  for (int k = 0; k < probes; ++k) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(k));
    const auto z = rademacher_vector(n, rng);
    std::copy(z.begin(), z.end(), w.col(static_cast<std::size_t>(k)).begin());
  }

  const FilteredOperator op(a, filter, counter);
  const DenseMatrix pw = apply_filter_block(op, w, threads);
  double sum = 0.0;
  for (int k = 0; k < probes; ++k) {
    sum += dot(w.col(static_cast<std::size_t>(k)), pw.col(static_cast<std::size_t>(k)));
  }

  NsvEstimate est;
  est.estimate_real = sum / probes;
  est.estimate_rounded = std::max(1, static_cast<int>(std::ceil(est.estimate_real)));
  est.probes = probes;
  est.seed = seed;
  return est;
}

}  // namespace cjfeast
