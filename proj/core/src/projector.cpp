#include "cjfeast/projector.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "cjfeast/error.hpp"

namespace cjfeast {

namespace {

// One application of L = scale * Op + shift * I to every column of `in`.
void apply_mapped(const FilteredOperator& op, const DenseMatrix& in, DenseMatrix& out,
                  std::vector<double>& scratch) {
  const auto& a = op.matrix();
  const double scale = op.filter().operator_scale();
  const double shift = op.filter().operator_shift();
  const bool augmented = op.filter().variant() == Variant::Augmented;
  for (std::size_t c = 0; c < in.cols(); ++c) {
    auto dst = out.col(c);
    const auto src = in.col(c);
    if (augmented) {
      apply_augmented(a, src, dst, op.counter());
    } else {
      apply_cross_product(a, src, dst, scratch, op.counter());
    }
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = scale * dst[k] + shift * src[k];
  }
}

void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y) {
  const auto xs = x.data();
  auto ys = y.data();
  for (std::size_t k = 0; k < ys.size(); ++k) ys[k] += alpha * xs[k];
}

DenseMatrix filter_columns(const FilteredOperator& op, const DenseMatrix& x) {
  const auto g = op.filter().coeffs();
  const std::size_t d = g.size() - 1;
  DenseMatrix acc(x.rows(), x.cols());
  axpy(g[0], x, acc);
  if (d == 0) return acc;

  std::vector<double> scratch(op.matrix().rows());
  DenseMatrix t_prev = x;
  DenseMatrix t_cur(x.rows(), x.cols());
  DenseMatrix t_next(x.rows(), x.cols());
  apply_mapped(op, t_prev, t_cur, scratch);
  axpy(g[1], t_cur, acc);
  for (std::size_t j = 2; j <= d; ++j) {
    apply_mapped(op, t_cur, t_next, scratch);
    auto nx = t_next.data();
    const auto pv = t_prev.data();
    for (std::size_t k = 0; k < nx.size(); ++k) nx[k] = 2.0 * nx[k] - pv[k];
    axpy(g[j], t_next, acc);
    std::swap(t_prev, t_cur);
    std::swap(t_cur, t_next);
  }
  return acc;
}

}  // namespace

DenseMatrix apply_filter_block(const FilteredOperator& op, const DenseMatrix& x, unsigned threads) {
  if (x.rows() != op.dimension()) {
    throw DimensionError("apply_filter_block: block has " + std::to_string(x.rows()) +
                         " rows, operator dimension is " + std::to_string(op.dimension()));
  }
  if (x.cols() == 0) throw DimensionError("apply_filter_block: empty block");

  const std::size_t p = x.cols();
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, p);
  if (workers == 1) return filter_columns(op, x);

  DenseMatrix out(x.rows(), p);
  std::vector<std::jthread> pool;
  const std::size_t chunk = (p + workers - 1) / workers;
  for (std::size_t first = 0; first < p; first += chunk) {
    const std::size_t count = std::min(chunk, p - first);
    pool.emplace_back([&op, &x, &out, first, count] {
      const DenseMatrix part = filter_columns(op, x.col_block(first, count));
      std::copy(part.data().begin(), part.data().end(),
                out.data().begin() + static_cast<std::ptrdiff_t>(first * x.rows()));
    });
  }
  pool.clear();
  return out;
}

std::vector<double> projector_gamma_spectrum(const SparseMatrix& a, const ChebJacksonFilter& filter) {
  if (a.rows() + a.cols() > kDenseOracleLimit) {
    throw PreconditionError("projector_gamma_spectrum: matrix too large for the dense oracle");
  }
  const DenseMatrix dense = to_dense(a);
  const auto svd = a.rows() >= a.cols() ? jacobi_svd(dense) : jacobi_svd(transpose(dense));
  const std::size_t k = svd.s.size();
  std::vector<double> gamma;
  if (filter.variant() == Variant::Augmented) {
    const std::size_t zeros = std::max(a.rows(), a.cols()) - k;
    for (double s : svd.s) {
      gamma.push_back(filter(s));
      gamma.push_back(filter(-s));
    }
    for (std::size_t i = 0; i < zeros; ++i) gamma.push_back(filter(0.0));
  } else {
    for (double s : svd.s) gamma.push_back(filter(s));
    for (std::size_t i = k; i < a.cols(); ++i) gamma.push_back(filter(0.0));
  }
  std::sort(gamma.begin(), gamma.end(), std::greater<>());
  return gamma;
}

}  // namespace cjfeast
