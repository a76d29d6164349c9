#include "cjfeast/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "cjfeast/error.hpp"

namespace cjfeast {

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                         std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= nrows || t.col >= ncols) {
      throw DimensionError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                           ") outside " + std::to_string(nrows) + "x" + std::to_string(ncols));
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& l, const Triplet& r) {
    return l.row != r.row ? l.row < r.row : l.col < r.col;
  });

  std::vector<std::size_t> offsets(nrows + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
  }
  for (std::size_t i = 0; i < nrows; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (nrows_ == 0 || ncols_ == 0) throw PreconditionError("matrix dimensions must be positive");
  if (row_offsets_.size() != nrows_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != values_.size() || col_indices_.size() != values_.size()) {
    throw PreconditionError("inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < nrows_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) throw PreconditionError("row offsets decrease");
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= ncols_) throw PreconditionError("column index out of range");
      if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1]) {
        throw PreconditionError("column indices not strictly increasing within a row");
      }
      if (!std::isfinite(values_[k])) throw PreconditionError("non-finite stored value");
    }
  }
}

double SparseMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<std::size_t> offsets(ncols_ + 1, 0);
  for (std::size_t c : col_indices_) ++offsets[c + 1];
  for (std::size_t j = 0; j < ncols_; ++j) offsets[j + 1] += offsets[j];
  std::vector<std::size_t> cols(values_.size());
  std::vector<double> vals(values_.size());
  std::vector<std::size_t> next(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const std::size_t dst = next[col_indices_[k]]++;
      cols[dst] = i;
      vals[dst] = values_[k];
    }
  }
  return SparseMatrix(ncols_, nrows_, std::move(offsets), std::move(cols), std::move(vals));
}

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y,
            MvCounter& counter) {
  require_length(x.size(), a.cols(), "matvec input");
  require_length(y.size(), a.rows(), "matvec output");
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
  counter.add(1);
}

std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x, MvCounter& counter) {
  std::vector<double> y(a.rows());
  matvec(a, x, y, counter);
  return y;
}

void matvec_transpose(const SparseMatrix& a, std::span<const double> y, std::span<double> x,
                      MvCounter& counter) {
  require_length(y.size(), a.rows(), "matvec_transpose input");
  require_length(x.size(), a.cols(), "matvec_transpose output");
  std::fill(x.begin(), x.end(), 0.0);
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double yi = y[i];
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) x[cols[k]] += vals[k] * yi;
  }
  counter.add(1);
}

std::vector<double> matvec_transpose(const SparseMatrix& a, std::span<const double> y,
                                     MvCounter& counter) {
  std::vector<double> x(a.cols());
  matvec_transpose(a, y, x, counter);
  return x;
}

void apply_augmented(const SparseMatrix& a, std::span<const double> z, std::span<double> out,
                     MvCounter& counter) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  require_length(z.size(), m + n, "apply_augmented input");
  require_length(out.size(), m + n, "apply_augmented output");
  matvec_transpose(a, z.subspan(n, m), out.subspan(0, n), counter);
  matvec(a, z.subspan(0, n), out.subspan(n, m), counter);
}

std::vector<double> apply_augmented(const SparseMatrix& a, std::span<const double> z,
                                    MvCounter& counter) {
  std::vector<double> out(a.rows() + a.cols());
  apply_augmented(a, z, out, counter);
  return out;
}

void apply_cross_product(const SparseMatrix& a, std::span<const double> x, std::span<double> out,
                         std::span<double> scratch, MvCounter& counter) {
  require_length(x.size(), a.cols(), "apply_cross_product input");
  require_length(out.size(), a.cols(), "apply_cross_product output");
  require_length(scratch.size(), a.rows(), "apply_cross_product scratch");
  matvec(a, x, scratch, counter);
  matvec_transpose(a, scratch, out, counter);
}

std::vector<double> apply_cross_product(const SparseMatrix& a, std::span<const double> x,
                                        MvCounter& counter) {
  std::vector<double> scratch(a.rows());
  std::vector<double> out(a.cols());
  apply_cross_product(a, x, out, scratch, counter);
  return out;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
    }
  }
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file '" + path + "'");
  return parse_matrix_market(in);
}

}  // namespace cjfeast
