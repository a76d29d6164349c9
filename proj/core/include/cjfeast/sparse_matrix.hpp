#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cjfeast {

/// Counts matrix-vector products. One MV is one application of A or A^T to a
/// single vector; S_A z and A^T(A x) therefore cost two each.
class MvCounter {
 public:
  MvCounter() = default;
  MvCounter(const MvCounter&) = delete;
  MvCounter& operator=(const MvCounter&) = delete;

  void add(std::uint64_t n) noexcept { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t count() const noexcept { return count_.load(std::memory_order_relaxed); }
  // Only between solves.
  void reset() noexcept { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Immutable compressed sparse row matrix with 0-based indices.
///
/// Column indices are strictly increasing inside each row; duplicate
/// coordinates handed to the constructor are summed. Explicit zeros are kept.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Builds the matrix from coordinate entries (any order, duplicates summed).
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    std::vector<Triplet> entries);

  /// Takes ownership of already-compressed arrays after validating them.
  SparseMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  std::size_t rows() const noexcept { return nrows_; }
  std::size_t cols() const noexcept { return ncols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  double frobenius_norm() const noexcept;
  SparseMatrix transposed() const;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// Reads a Matrix Market stream (coordinate or array; real, integer or
/// pattern; general, symmetric or skew-symmetric) into a fully expanded matrix.
SparseMatrix parse_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::string& path);

/// Writes `coordinate real general` with 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

// y = A x. One MV.
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y,
            MvCounter& counter);
std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x, MvCounter& counter);

// x = A^T y, by a scatter pass over the row storage. One MV.
void matvec_transpose(const SparseMatrix& a, std::span<const double> y, std::span<double> x,
                      MvCounter& counter);
std::vector<double> matvec_transpose(const SparseMatrix& a, std::span<const double> y,
                                     MvCounter& counter);

/// z = [x; y] with x of length n and y of length m; returns [A^T y; A x].
/// Two MVs.
void apply_augmented(const SparseMatrix& a, std::span<const double> z, std::span<double> out,
                     MvCounter& counter);
std::vector<double> apply_augmented(const SparseMatrix& a, std::span<const double> z,
                                    MvCounter& counter);

/// A^T (A x) as two chained products; S_C is never formed. Two MVs.
/// `scratch` must have length m.
void apply_cross_product(const SparseMatrix& a, std::span<const double> x, std::span<double> out,
                         std::span<double> scratch, MvCounter& counter);
std::vector<double> apply_cross_product(const SparseMatrix& a, std::span<const double> x,
                                        MvCounter& counter);

}  // namespace cjfeast
