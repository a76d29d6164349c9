#pragma once

#include <cstddef>
#include <vector>

#include "cjfeast/chebyshev_filter.hpp"
#include "cjfeast/dense_matrix.hpp"
#include "cjfeast/sparse_matrix.hpp"

namespace cjfeast {

/// The approximate spectral projector P = phi_d(L), L being the mapped S_A
/// (operand length m + n) or the mapped S_C (operand length n). Holds
/// references only; the matrix, filter and counter must outlive it.
class FilteredOperator {
 public:
  FilteredOperator(const SparseMatrix& matrix, const ChebJacksonFilter& filter, MvCounter& counter)
      : matrix_(matrix), filter_(filter), counter_(counter) {}

  const SparseMatrix& matrix() const noexcept { return matrix_; }
  const ChebJacksonFilter& filter() const noexcept { return filter_; }
  MvCounter& counter() const noexcept { return counter_; }

  std::size_t dimension() const noexcept {
    return filter_.variant() == Variant::Augmented ? matrix_.rows() + matrix_.cols()
                                                   : matrix_.cols();
  }

 private:
  const SparseMatrix& matrix_;
  const ChebJacksonFilter& filter_;
  MvCounter& counter_;
};

/// Returns P X = sum_j g_j T_j(L) X. Consumes exactly 2 d p MVs for an N x p
/// block. Columns are independent, so `threads > 1` splits them into
/// contiguous chunks without changing any result bit.
DenseMatrix apply_filter_block(const FilteredOperator& op, const DenseMatrix& x,
                               unsigned threads = 1);

/// Largest m + n the dense diagnostics accept.
inline constexpr std::size_t kDenseOracleLimit = 2000;

/// phi_d(l(lambda)) for every eigenvalue lambda of S_A (augmented) or S_C
/// (cross-product), sorted descending. Desk scale only.
std::vector<double> projector_gamma_spectrum(const SparseMatrix& a, const ChebJacksonFilter& filter);

}  // namespace cjfeast
