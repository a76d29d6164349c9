#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cjfeast/chebyshev_filter.hpp"
#include "cjfeast/dense_matrix.hpp"
#include "cjfeast/oracle.hpp"
#include "cjfeast/sparse_matrix.hpp"

namespace cjfeast {

enum class VariantChoice { Augmented, CrossProduct, Auto };

std::optional<VariantChoice> parse_variant(std::string_view name);

struct SolverConfig {
  Interval interval;
  std::size_t p = 1;
  /// Explicit filter degree. When empty, select_degree with degree_factor.
  std::optional<int> degree;
  double degree_factor = 2.0;
  double tol = 1e-14;
  int max_iter = 50;
  VariantChoice variant = VariantChoice::Auto;
  std::uint64_t seed = 0;
  /// When empty, eta comes from a GKL run (inflated) and eta_minus = 0.
  std::optional<SpectralBounds> bounds;
  int gkl_steps = 30;
  /// Number of singular values known to lie in the interval.
  std::optional<std::size_t> target_count;
  unsigned threads = 1;
  /// Dense reference for instrumented runs; history then carries subspace
  /// distances. Only read by solve_A.
  const DenseReference* reference = nullptr;

  void validate() const;
};

struct RitzTriplet {
  double sigma = 0.0;
  std::vector<double> u;  // length m
  std::vector<double> v;  // length n
  double residual_norm = 0.0;
  bool in_interval = false;
  /// False when the left vector could not be formed (sigma below 1e-300).
  bool evaluable = true;
};

struct ConvergenceRecord {
  int iter = 0;
  std::uint64_t mv_total = 0;
  std::uint64_t mv_iteration = 0;
  std::vector<double> ritz_values;     // descending
  std::vector<double> residual_norms;  // aligned with ritz_values
  std::vector<bool> in_interval;
  std::size_t n_in_interval = 0;
  std::size_t n_converged = 0;  // in-interval with residual <= eta tol
  std::optional<SubspaceAngles> angles;
};

struct SolveReport {
  bool converged = false;
  std::vector<RitzTriplet> triplets;
  std::vector<ConvergenceRecord> history;
  Variant variant_used = Variant::Augmented;
  int degree_used = 0;
  std::size_t p_used = 0;
  double eta_used = 0.0;
  double eta_minus_used = 0.0;
  std::uint64_t total_mvs = 0;
  double wall_time = 0.0;
  std::vector<std::string> warnings;
};

struct Residual {
  double norm = 0.0;
  std::vector<double> first;   // A v - sigma u
  std::vector<double> second;  // A^T u - sigma v
};

/// ||[A v - sigma u; A^T u - sigma v]||. Two MVs.
Residual residual(const SparseMatrix& a, double sigma, std::span<const double> u,
                  std::span<const double> v, MvCounter& counter);
/// Same, with A v supplied. One MV.
Residual residual_with_image(const SparseMatrix& a, double sigma, std::span<const double> u,
                             std::span<const double> v, std::span<const double> av,
                             MvCounter& counter);

/// Ritz triplets of A from the right basis Q1 (n x p) and the left basis Q2
/// (m x p), sorted by sigma descending. 3p MVs.
std::vector<RitzTriplet> rayleigh_ritz_svd(const SparseMatrix& a, const DenseMatrix& q1,
                                           const DenseMatrix& q2, const Interval& interval,
                                           MvCounter& counter);

/// Augmented when eta / a >= eps^{-1/4}; for tol > eps^{1/2} the threshold
/// becomes tol / (100 eps).
Variant choose_variant(double eta, double a, double tol) noexcept;

/// Decides convergence from the history so far (last record is current).
bool stopping_rule(std::span<const ConvergenceRecord> history,
                   std::optional<std::size_t> target_count);

/// Iterations with no in-interval Ritz value before an empty target counts
/// as converged.
inline constexpr int kEmptyTargetIterations = 3;

SolveReport solve_A(const SparseMatrix& a, const SolverConfig& config);
SolveReport solve_C(const SparseMatrix& a, const SolverConfig& config);
/// Resolves VariantChoice::Auto with choose_variant and dispatches.
SolveReport solve(const SparseMatrix& a, const SolverConfig& config);

/// Bounds and variant after estimation; what solve() would use.
struct ResolvedSetup {
  SpectralBounds bounds;
  Variant variant = Variant::Augmented;
  int degree = 0;
  std::uint64_t estimation_mvs = 0;
};
ResolvedSetup resolve_setup(const SparseMatrix& a, const SolverConfig& config,
                            std::optional<Variant> forced = std::nullopt);

}  // namespace cjfeast
