#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cjfeast/sparse_matrix.hpp"

namespace cjfeast {

/// Small dense matrix, column-major. Holds the p-column blocks and the p x p
/// projected matrices of the subspace iteration, and the desk-scale oracles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Rows [first, first + count) as a new matrix.
  DenseMatrix row_block(std::size_t first, std::size_t count) const;
  /// Columns [first, first + count) as a new matrix.
  DenseMatrix col_block(std::size_t first, std::size_t count) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
// a^T b
DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
// [top; bottom]
DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom);
// [left, right]
DenseMatrix hstack(const DenseMatrix& left, const DenseMatrix& right);

double frobenius_norm(const DenseMatrix& a) noexcept;
double max_abs(const DenseMatrix& a) noexcept;
double spectral_norm(const DenseMatrix& a);
/// ||Q^T Q - I||_F.
double orthogonality_error(const DenseMatrix& q);

DenseMatrix to_dense(const SparseMatrix& a);
SparseMatrix to_sparse(const DenseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y) noexcept;
double norm2(std::span<const double> x) noexcept;

struct QrResult {
  DenseMatrix q;
  DenseMatrix r;
  /// Columns whose remaining norm fell below 1e-13 ||X||_F. They were replaced
  /// by seeded random directions orthogonal to the earlier columns, and carry
  /// a zero diagonal in R.
  std::vector<std::size_t> deficient_columns;

  bool rank_deficient() const noexcept { return !deficient_columns.empty(); }
};

/// Thin QR by classical Gram-Schmidt with one unconditional
/// reorthogonalization pass per column. Requires rows >= cols >= 1.
QrResult thin_qr(const DenseMatrix& x, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

struct SvdResult {
  DenseMatrix u;          // rows x cols
  std::vector<double> s;  // descending, nonnegative
  DenseMatrix v;          // cols x cols
};

/// One-sided (Hestenes) Jacobi SVD of a matrix with rows >= cols.
SvdResult jacobi_svd(const DenseMatrix& b);

struct EigenResult {
  std::vector<double> values;  // descending
  DenseMatrix vectors;
};

/// Cyclic two-sided Jacobi eigensolver; the input is symmetrized first.
EigenResult symmetric_eigen(const DenseMatrix& s);

/// dist(span W1, span Z1) = ||(I - Z1 Z1^T) W1||_2 for column-orthonormal
/// inputs of the same shape.
double subspace_distance(const DenseMatrix& w1, const DenseMatrix& z1);

}  // namespace cjfeast
