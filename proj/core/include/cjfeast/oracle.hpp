#pragma once

#include <cstddef>
#include <vector>

#include "cjfeast/chebyshev_filter.hpp"
#include "cjfeast/dense_matrix.hpp"
#include "cjfeast/sparse_matrix.hpp"

namespace cjfeast {

/// Full dense SVD of A and the orthogonal eigenvector matrix of
/// S_A = [0 A^T; A 0]. Desk scale only (m + n <= 2000).
struct DenseReference {
  std::size_t m = 0;
  std::size_t n = 0;
  DenseMatrix u;                // m x m
  std::vector<double> sigma;    // min(m, n), descending
  DenseMatrix v;                // n x n
  DenseMatrix q;                // (m + n) x (m + n), columns match `eigenvalues`
  std::vector<double> eigenvalues;  // sigma, then -sigma, then |m - n| zeros
  double norm = 0.0;            // sigma[0]
};

DenseReference build_reference(const SparseMatrix& a);

/// Generalized spectral projector of S_A onto [a, b]: weight 1 for sigma in
/// (a, b), 1/2 for sigma within a relative 1e-12 of an endpoint.
DenseMatrix exact_projector(const DenseReference& ref, const Interval& interval);

/// Dense Q diag(phi_d(l(lambda))) Q^T for an augmented filter.
DenseMatrix filtered_projector(const DenseReference& ref, const ChebJacksonFilter& filter);

/// Min over eigenvalues lambda of S_A of the angular distance between
/// arccos(lambda / eta) and the endpoint angles. Eigenvalues that sit on an
/// endpoint are skipped.
double delta_min(const DenseReference& ref, const ChebJacksonFilter& filter);

/// Columns of Q for the p largest filter values phi_d(l(lambda)).
struct DominantBasis {
  DenseMatrix q;               // (m + n) x p
  std::vector<double> gamma;   // all filter values, descending
  std::vector<std::size_t> order;  // eigen-index of each gamma
};
DominantBasis dominant_basis(const DenseReference& ref, const ChebJacksonFilter& filter,
                             std::size_t p);

struct SubspaceAngles {
  double eps = 0.0;   // dist(span Qtilde, span Q_p)
  double eps1 = 0.0;  // dist(span Q1, right part of Q_p)
  double eps2 = 0.0;  // dist(span Q2, left part of Q_p)
  std::vector<double> sin_v;  // per Ritz vector, against the nearest sigma
  std::vector<double> sin_u;
};

/// Distances of the current iterate against the dominant basis of `basis`.
/// `ritz_v`/`ritz_u` hold Ritz vectors column-wise with values `ritz_sigma`.
SubspaceAngles angles_and_distances(const DenseReference& ref, const DenseMatrix& basis,
                                    const DenseMatrix& q1, const DenseMatrix& q2,
                                    const DenseMatrix& qtilde, const DenseMatrix& ritz_v,
                                    const DenseMatrix& ritz_u,
                                    const std::vector<double>& ritz_sigma);

/// sqrt(1 + s^2), s the largest generalized singular value of the pair
/// {top, bottom} whose stack is column-orthonormal. Equals 1 / sigma_min(top).
double split_distance_multiplier(const DenseMatrix& top, const DenseMatrix& bottom);

}  // namespace cjfeast
