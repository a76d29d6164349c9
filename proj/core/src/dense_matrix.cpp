#include "cjfeast/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cjfeast/error.hpp"
#include "cjfeast/random.hpp"

namespace cjfeast {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const DenseMatrix& a, const char* who) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw DomainError(std::string(who) + ": non-finite entry");
  }
}

// Descending permutation, ties keep their original order.
std::vector<std::size_t> descending_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

// Applies [c -s; s c] to the column pair (x, y) in place: x' = c x - s y, y' = s x + c y.
void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept {
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xk = x[k];
    const double yk = y[k];
    x[k] = c * xk - s * yk;
    y[k] = s * xk + c * yk;
  }
}

// Orthogonalizes `v` against the first `count` columns of `q` twice and
// accumulates the projection coefficients into `coeffs` (when non-empty).
void orthogonalize(const DenseMatrix& q, std::size_t count, std::span<double> v,
                   std::span<double> coeffs) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < count; ++i) {
      const double h = dot(q.col(i), v);
      const auto qi = q.col(i);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] -= h * qi[k];
      if (!coeffs.empty()) coeffs[i] += h;
    }
  }
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw DimensionError("row_block out of range");
  DenseMatrix out(count, cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    std::copy_n(col(j).begin() + static_cast<std::ptrdiff_t>(first), count, out.col(j).begin());
  }
  return out;
}

DenseMatrix DenseMatrix::col_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw DimensionError("col_block out of range");
  DenseMatrix out(rows_, count);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * rows_), count * rows_,
              out.data_.begin());
  return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  }
  return t;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      const auto ak = a.col(k);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("multiply_at_b: row counts differ");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  }
  return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("subtract: shapes differ");
  DenseMatrix c = a;
  auto cd = c.data();
  const auto bd = b.data();
  for (std::size_t k = 0; k < cd.size(); ++k) cd[k] -= bd[k];
  return c;
}

DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw DimensionError("vstack: column counts differ");
  DenseMatrix out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t j = 0; j < top.cols(); ++j) {
    auto dst = out.col(j);
    std::copy(top.col(j).begin(), top.col(j).end(), dst.begin());
    std::copy(bottom.col(j).begin(), bottom.col(j).end(),
              dst.begin() + static_cast<std::ptrdiff_t>(top.rows()));
  }
  return out;
}

DenseMatrix hstack(const DenseMatrix& left, const DenseMatrix& right) {
  if (left.rows() != right.rows()) throw DimensionError("hstack: row counts differ");
  DenseMatrix out(left.rows(), left.cols() + right.cols());
  std::copy(left.data().begin(), left.data().end(), out.data().begin());
  std::copy(right.data().begin(), right.data().end(),
            out.data().begin() + static_cast<std::ptrdiff_t>(left.data().size()));
  return out;
}

double frobenius_norm(const DenseMatrix& a) noexcept { return norm2(a.data()); }

double max_abs(const DenseMatrix& a) noexcept {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double spectral_norm(const DenseMatrix& a) {
  if (a.empty()) return 0.0;
  const auto svd = a.rows() >= a.cols() ? jacobi_svd(a) : jacobi_svd(transpose(a));
  return svd.s.front();
}

double orthogonality_error(const DenseMatrix& q) {
  auto g = multiply_at_b(q, q);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frobenius_norm(g);
}

DenseMatrix to_dense(const SparseMatrix& a) {
  DenseMatrix d(a.rows(), a.cols());
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) d(i, cols[k]) = vals[k];
  }
  return d;
}

SparseMatrix to_sparse(const DenseMatrix& a) {
  std::vector<Triplet> entries;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (a(i, j) != 0.0) entries.push_back({i, j, a(i, j)});
    }
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(entries));
}

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double norm2(std::span<const double> x) noexcept {
  // Scaled to stay clear of overflow/underflow for extreme entries.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : x) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

QrResult thin_qr(const DenseMatrix& x, std::uint64_t seed) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (p == 0) throw DimensionError("thin_qr: need at least one column");
  if (n < p) throw DimensionError("thin_qr: more columns than rows");
  require_finite(x, "thin_qr");

  const double threshold = 1e-13 * frobenius_norm(x);
  QrResult out{DenseMatrix(n, p), DenseMatrix(p, p), {}};
  std::vector<double> v(n);
  for (std::size_t j = 0; j < p; ++j) {
    std::copy(x.col(j).begin(), x.col(j).end(), v.begin());
    std::vector<double> coeffs(j, 0.0);
    orthogonalize(out.q, j, v, coeffs);
    const double nrm = norm2(v);
    for (std::size_t i = 0; i < j; ++i) out.r(i, j) = coeffs[i];
    if (nrm > threshold && nrm > 0.0) {
      out.r(j, j) = nrm;
      for (std::size_t k = 0; k < n; ++k) out.q(k, j) = v[k] / nrm;
      continue;
    }
    out.deficient_columns.push_back(j);
    out.r(j, j) = 0.0;
    Rng rng = substream(seed, j);
    std::normal_distribution<double> normal;
    // A random direction has a nonzero component outside a p < n dimensional
    // span with probability one; retry guards the measure-zero case.
    for (int attempt = 0; attempt < 8; ++attempt) {
      for (auto& e : v) e = normal(rng);
      orthogonalize(out.q, j, v, {});
      const double rn = norm2(v);
      if (rn > 1e-8) {
        for (std::size_t k = 0; k < n; ++k) out.q(k, j) = v[k] / rn;
        break;
      }
    }
  }
  return out;
}

SvdResult jacobi_svd(const DenseMatrix& b) {
  const std::size_t m = b.rows();
  const std::size_t n = b.cols();
  if (n == 0) throw DimensionError("jacobi_svd: empty matrix");
  if (m < n) throw DimensionError("jacobi_svd: requires rows >= cols");
  require_finite(b, "jacobi_svd");

  DenseMatrix w = b;
  DenseMatrix v = DenseMatrix::identity(n);
  constexpr int kMaxSweeps = 30;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = dot(w.col(i), w.col(i));
        const double beta = dot(w.col(j), w.col(j));
        const double gamma = dot(w.col(i), w.col(j));
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(w.col(i), w.col(j), c, s);
        rotate(v.col(i), v.col(j), c, s);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = norm2(w.col(j));
  const auto order = descending_order(norms);

  SvdResult out{DenseMatrix(m, n), std::vector<double>(n), DenseMatrix(n, n)};
  std::vector<std::size_t> null_cols;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.s[k] = norms[j];
    std::copy(v.col(j).begin(), v.col(j).end(), out.v.col(k).begin());
    if (norms[j] > 1e-300) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w(i, j) / norms[j];
    } else {
      out.s[k] = 0.0;
      null_cols.push_back(k);
    }
  }
  // Complete U for exactly null directions with unit vectors orthogonalized
  // against every other column.
  std::size_t next_basis = 0;
  for (std::size_t k : null_cols) {
    std::vector<double> e(m);
    for (; next_basis < m; ++next_basis) {
      std::fill(e.begin(), e.end(), 0.0);
      e[next_basis] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < n; ++c) {
          if (c == k) continue;
          const double h = dot(out.u.col(c), e);
          for (std::size_t i = 0; i < m; ++i) e[i] -= h * out.u(i, c);
        }
      }
      const double en = norm2(e);
      if (en > 0.5) {
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = e[i] / en;
        ++next_basis;
        break;
      }
    }
  }
  return out;
}

EigenResult symmetric_eigen(const DenseMatrix& s) {
  const std::size_t k = s.rows();
  if (k == 0 || s.cols() != k) throw DimensionError("symmetric_eigen: need a nonempty square matrix");
  require_finite(s, "symmetric_eigen");

  DenseMatrix a(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) a(i, j) = 0.5 * (s(i, j) + s(j, i));
  }
  DenseMatrix q = DenseMatrix::identity(k);
  const double fro = frobenius_norm(a);

  auto off_norm = [&] {
    double o = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < j; ++i) o += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(o);
  };

  constexpr int kMaxSweeps = 60;
  for (int sweep = 0; sweep < kMaxSweeps && fro > 0.0; ++sweep) {
    if (off_norm() <= 1e-20 * fro) break;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t r = p + 1; r < k; ++r) {
        const double apr = a(p, r);
        if (std::abs(apr) <= 1e-24 * fro) {
          a(p, r) = a(r, p) = 0.0;
          continue;
        }
        const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double sn = c * t;
        // A <- J^T A J with J the rotation in the (p, r) plane.
        rotate(a.col(p), a.col(r), c, sn);
        for (std::size_t j = 0; j < k; ++j) {
          const double xp = a(p, j);
          const double xr = a(r, j);
          a(p, j) = c * xp - sn * xr;
          a(r, j) = sn * xp + c * xr;
        }
        a(p, r) = a(r, p) = 0.0;
        rotate(q.col(p), q.col(r), c, sn);
      }
    }
  }

  std::vector<double> diag(k);
  for (std::size_t i = 0; i < k; ++i) diag[i] = a(i, i);
  const auto order = descending_order(diag);
  EigenResult out{std::vector<double>(k), DenseMatrix(k, k)};
  for (std::size_t c = 0; c < k; ++c) {
    out.values[c] = diag[order[c]];
    std::copy(q.col(order[c]).begin(), q.col(order[c]).end(), out.vectors.col(c).begin());
  }
  return out;
}

double subspace_distance(const DenseMatrix& w1, const DenseMatrix& z1) {
  if (w1.rows() != z1.rows() || w1.cols() != z1.cols()) {
    throw DimensionError("subspace_distance: shapes differ");
  }
  if (orthogonality_error(w1) > 1e-10 || orthogonality_error(z1) > 1e-10) {
    throw PreconditionError("subspace_distance: inputs must be column-orthonormal");
  }
  const DenseMatrix residual = subtract(w1, multiply(z1, multiply_at_b(z1, w1)));
  return std::clamp(spectral_norm(residual), 0.0, 1.0);
}

}  // namespace cjfeast
