#include "cjfeast/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cjfeast/error.hpp"
#include "cjfeast/projector.hpp"
#include "cjfeast/random.hpp"

namespace cjfeast {

namespace {

// Orthogonal completion of a column-orthonormal `basis` to a square matrix.
DenseMatrix complete_basis(const DenseMatrix& basis) {
  const std::size_t rows = basis.rows();
  const std::size_t k = basis.cols();
  if (k == rows) return basis;
  Rng rng = substream(0x5eedULL, rows);
  DenseMatrix full = thin_qr(hstack(basis, gaussian_matrix(rows, rows - k, rng))).q;
  std::copy(basis.data().begin(), basis.data().end(), full.data().begin());
  return full;
}

bool on_endpoint(double sigma, const Interval& iv) {
  auto near = [sigma](double e) { return std::abs(sigma - e) <= 1e-12 * std::max(std::abs(e), std::abs(sigma)); };
  return near(iv.a) || near(iv.b);
}

DenseMatrix weighted_outer(const DenseMatrix& q, const std::vector<double>& w) {
  const std::size_t n = q.rows();
  DenseMatrix p(n, n);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) continue;
    const auto c = q.col(k);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = w[k] * c[j];
      if (s == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) p(i, j) += s * c[i];
    }
  }
  return p;
}

DenseMatrix orthonormal_part(const DenseMatrix& x) { return thin_qr(x).q; }

std::vector<double> nearest_sines(const DenseMatrix& exact, const std::vector<double>& sigma,
                                  const DenseMatrix& ritz, const std::vector<double>& ritz_sigma) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ritz.cols() && i < ritz_sigma.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < sigma.size(); ++j) {
      if (std::abs(sigma[j] - ritz_sigma[i]) < std::abs(sigma[best] - ritz_sigma[i])) best = j;
    }
    const auto e = exact.col(best);
    const auto r = ritz.col(i);
    const double c = dot(e, r);
    double acc = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) acc += (r[k] - c * e[k]) * (r[k] - c * e[k]);
    out.push_back(std::min(1.0, std::sqrt(acc)));
  }
  return out;
}

}  // namespace

DenseReference build_reference(const SparseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m + n > kDenseOracleLimit) {
    throw PreconditionError("build_reference: m + n exceeds the dense oracle limit");
  }
  const DenseMatrix dense = to_dense(a);
  const bool tall = m >= n;
  const DenseMatrix work = tall ? dense : transpose(dense);

  // QR first so the Jacobi sweep runs on a square triangle.
  const QrResult qr = thin_qr(work);
  const SvdResult svd = jacobi_svd(qr.r);
  const DenseMatrix left = complete_basis(multiply(qr.q, svd.u));

  DenseReference ref;
  ref.m = m;
  ref.n = n;
  ref.sigma = svd.s;
  ref.u = tall ? left : svd.v;
  ref.v = tall ? svd.v : left;
  ref.norm = svd.s.empty() ? 0.0 : svd.s.front();

  const std::size_t k = std::min(m, n);
  const std::size_t dim = m + n;
  const double h = 1.0 / std::sqrt(2.0);
  ref.q = DenseMatrix(dim, dim);
  ref.eigenvalues.assign(dim, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      ref.q(r, i) = h * ref.v(r, i);
      ref.q(r, k + i) = h * ref.v(r, i);
    }
    for (std::size_t r = 0; r < m; ++r) {
      ref.q(n + r, i) = h * ref.u(r, i);
      ref.q(n + r, k + i) = -h * ref.u(r, i);
    }
    ref.eigenvalues[i] = ref.sigma[i];
    ref.eigenvalues[k + i] = -ref.sigma[i];
  }
  for (std::size_t j = k; j < std::max(m, n); ++j) {
    const std::size_t c = k + j;
    if (tall) {
      for (std::size_t r = 0; r < m; ++r) ref.q(n + r, c) = ref.u(r, j);
    } else {
      for (std::size_t r = 0; r < n; ++r) ref.q(r, c) = ref.v(r, j);
    }
  }

  // A V = U Sigma and A^T U = V Sigma, with the null directions included.
  const DenseMatrix av = multiply(dense, ref.v);
  const DenseMatrix atu = multiply_at_b(dense, ref.u);
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = j < k ? ref.sigma[j] : 0.0;
    for (std::size_t r = 0; r < m; ++r) err = std::max(err, std::abs(av(r, j) - s * ref.u(r, j)));
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double s = j < k ? ref.sigma[j] : 0.0;
    for (std::size_t r = 0; r < n; ++r) err = std::max(err, std::abs(atu(r, j) - s * ref.v(r, j)));
  }
  const double scale = std::max(ref.norm, std::numeric_limits<double>::min());
  if (err > 1e-12 * scale * static_cast<double>(std::max(m, n))) {
    throw Error("build_reference: eigen-decomposition check failed");
  }
  return ref;
}

DenseMatrix exact_projector(const DenseReference& ref, const Interval& interval) {
  interval.validate();
  std::vector<double> w(ref.eigenvalues.size(), 0.0);
  for (std::size_t i = 0; i < ref.sigma.size(); ++i) {
    const double s = ref.sigma[i];
    if (on_endpoint(s, interval)) {
      w[i] = 0.5;
    } else if (interval.a < s && s < interval.b) {
      w[i] = 1.0;
    }
  }
  return weighted_outer(ref.q, w);
}

DenseMatrix filtered_projector(const DenseReference& ref, const ChebJacksonFilter& filter) {
  if (filter.variant() != Variant::Augmented) {
    throw PreconditionError("filtered_projector needs an augmented filter");
  }
  std::vector<double> w;
  w.reserve(ref.eigenvalues.size());
  for (double lambda : ref.eigenvalues) w.push_back(filter(lambda));
  return weighted_outer(ref.q, w);
}

double delta_min(const DenseReference& ref, const ChebJacksonFilter& filter) {
  double best = std::numeric_limits<double>::infinity();
  for (double lambda : ref.eigenvalues) {
    if (lambda > 0.0 && on_endpoint(lambda, filter.interval())) continue;
    const double theta = filter.angle(lambda);
    best = std::min({best, std::abs(theta - filter.alpha()), std::abs(theta - filter.beta())});
  }
  return best;
}

DominantBasis dominant_basis(const DenseReference& ref, const ChebJacksonFilter& filter,
                             std::size_t p) {
  const std::size_t dim = ref.eigenvalues.size();
  if (p == 0 || p > dim) throw DimensionError("dominant_basis: p out of range");
  std::vector<double> g;
  g.reserve(dim);
  for (double lambda : ref.eigenvalues) g.push_back(filter(lambda));

  DominantBasis out;
  out.order.resize(dim);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&g](std::size_t x, std::size_t y) { return g[x] > g[y]; });
  out.q = DenseMatrix(dim, p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto src = ref.q.col(out.order[j]);
    std::copy(src.begin(), src.end(), out.q.col(j).begin());
  }
  for (std::size_t idx : out.order) out.gamma.push_back(g[idx]);
  return out;
}

SubspaceAngles angles_and_distances(const DenseReference& ref, const DenseMatrix& basis,
                                    const DenseMatrix& q1, const DenseMatrix& q2,
                                    const DenseMatrix& qtilde, const DenseMatrix& ritz_v,
                                    const DenseMatrix& ritz_u,
                                    const std::vector<double>& ritz_sigma) {
  if (basis.rows() != ref.m + ref.n || q1.rows() != ref.n || q2.rows() != ref.m) {
    throw DimensionError("angles_and_distances: block shapes do not match the reference");
  }
  SubspaceAngles out;
  out.eps = subspace_distance(qtilde, basis);
  out.eps1 = subspace_distance(q1, orthonormal_part(basis.row_block(0, ref.n)));
  out.eps2 = subspace_distance(q2, orthonormal_part(basis.row_block(ref.n, ref.m)));
  out.sin_v = nearest_sines(ref.v, ref.sigma, ritz_v, ritz_sigma);
  out.sin_u = nearest_sines(ref.u, ref.sigma, ritz_u, ritz_sigma);
  return out;
}

double split_distance_multiplier(const DenseMatrix& top, const DenseMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw DimensionError("split_distance_multiplier: column counts differ");
  const QrResult qr = thin_qr(top);
  if (qr.rank_deficient()) throw PreconditionError("split_distance_multiplier: top block is rank deficient");
  const std::size_t p = top.cols();
  // X = bottom R^{-1}, column by column.
  DenseMatrix x(bottom.rows(), p);
  for (std::size_t j = 0; j < p; ++j) {
    auto xj = x.col(j);
    const auto bj = bottom.col(j);
    std::copy(bj.begin(), bj.end(), xj.begin());
    for (std::size_t i = 0; i < j; ++i) {
      const double rij = qr.r(i, j);
      const auto xi = x.col(i);
      for (std::size_t r = 0; r < xj.size(); ++r) xj[r] -= rij * xi[r];
    }
    for (double& val : xj) val /= qr.r(j, j);
  }
  const double s = spectral_norm(x);
  return std::sqrt(1.0 + s * s);
}

}  // namespace cjfeast
