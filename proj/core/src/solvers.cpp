#include "cjfeast/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cjfeast/error.hpp"
#include "cjfeast/estimators.hpp"
#include "cjfeast/projector.hpp"
#include "cjfeast/random.hpp"

namespace cjfeast {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::uint64_t qr_seed(std::uint64_t seed, int iter, std::uint64_t tag) {
  return substream(seed, (static_cast<std::uint64_t>(iter) << 4) | tag)();
}

std::vector<double> to_vector(std::span<const double> x) { return {x.begin(), x.end()}; }

DenseMatrix columns_of(const std::vector<RitzTriplet>& t, bool left) {
  if (t.empty()) return {};
  const std::size_t rows = left ? t.front().u.size() : t.front().v.size();
  DenseMatrix out(rows, t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    const auto& src = left ? t[j].u : t[j].v;
    std::copy(src.begin(), src.end(), out.col(j).begin());
  }
  return out;
}

Interval filter_interval(const Interval& iv, double eta) {
  if (iv.a >= eta) {
    throw PreconditionError("interval lies above the norm bound eta");
  }
  return {iv.a, std::min(iv.b, eta)};
}

ResolvedSetup resolve_impl(const SparseMatrix& a, const SolverConfig& config,
                           std::optional<Variant> forced) {
  ResolvedSetup setup;
  if (config.bounds) {
    setup.bounds = *config.bounds;
  } else {
    MvCounter counter;
    const int steps = std::min<int>(config.gkl_steps, static_cast<int>(std::min(a.rows(), a.cols())));
    const NormEstimate est = estimate_norm_gkl(a, steps, config.seed, counter);
    setup.bounds = {est.eta_safe, 0.0};
    setup.estimation_mvs = counter.count();
  }
  setup.bounds.validate();

  if (forced) {
    setup.variant = *forced;
  } else if (config.variant == VariantChoice::Augmented) {
    setup.variant = Variant::Augmented;
  } else if (config.variant == VariantChoice::CrossProduct) {
    setup.variant = Variant::CrossProduct;
  } else {
    setup.variant = choose_variant(setup.bounds.eta, config.interval.a, config.tol);
  }

  const Interval fiv = filter_interval(config.interval, setup.bounds.eta);
  setup.degree = config.degree ? *config.degree
                               : select_degree(fiv, setup.bounds, config.degree_factor, setup.variant);
  return setup;
}

ConvergenceRecord make_record(int iter, const MvCounter& counter, std::uint64_t before,
                              const std::vector<RitzTriplet>& triplets, double threshold) {
  ConvergenceRecord rec;
  rec.iter = iter;
  rec.mv_total = counter.count();
  rec.mv_iteration = counter.count() - before;
  for (const auto& t : triplets) {
    rec.ritz_values.push_back(t.sigma);
    rec.residual_norms.push_back(t.residual_norm);
    rec.in_interval.push_back(t.in_interval);
    if (t.in_interval) {
      ++rec.n_in_interval;
      if (t.residual_norm <= threshold) ++rec.n_converged;
    }
  }
  return rec;
}

void check_mv_count(const ConvergenceRecord& rec, std::uint64_t expected, const char* solver) {
  if (rec.mv_iteration != expected) {
    throw std::logic_error(std::string(solver) + ": iteration " + std::to_string(rec.iter) +
                           " used " + std::to_string(rec.mv_iteration) + " MVs, expected " +
                           std::to_string(expected));
  }
}

void warn_deficient(SolveReport& report, const QrResult& qr, int iter, const char* what) {
  if (qr.rank_deficient()) {
    report.warnings.push_back("iteration " + std::to_string(iter) + ": " + what +
                              " rank deficient (" + std::to_string(qr.deficient_columns.size()) +
                              " columns replaced)");
  }
}

// Ritz triplets of the cross-product iteration: R from QR of W = A Vhat,
// SVD of R, vhat = Vhat V_r, uhat = W V_r / sigma. The first residual block
// reuses W, so residuals cost p MVs here.
std::vector<RitzTriplet> cross_product_ritz(const SparseMatrix& a, const DenseMatrix& vhat,
                                            const Interval& interval, MvCounter& counter,
                                            SolveReport& report, int iter, std::uint64_t seed) {
  const std::size_t p = vhat.cols();
  DenseMatrix w(a.rows(), p);
  for (std::size_t j = 0; j < p; ++j) matvec(a, vhat.col(j), w.col(j), counter);

  const QrResult qr = thin_qr(w, qr_seed(seed, iter, 3));
  warn_deficient(report, qr, iter, "A Vhat");
  const SvdResult svd = jacobi_svd(qr.r);
  const DenseMatrix v = multiply(vhat, svd.v);
  const DenseMatrix av = multiply(w, svd.v);

  std::vector<RitzTriplet> out(p);
  for (std::size_t i = 0; i < p; ++i) {
    RitzTriplet& t = out[i];
    t.sigma = svd.s[i];
    t.v = to_vector(v.col(i));
    t.u.assign(a.rows(), 0.0);
    t.evaluable = t.sigma > 1e-300;
    if (t.evaluable) {
      const auto img = av.col(i);
      for (std::size_t r = 0; r < t.u.size(); ++r) t.u[r] = img[r] / t.sigma;
      t.residual_norm = residual_with_image(a, t.sigma, t.u, t.v, img, counter).norm;
    } else {
      // Keep the per-iteration MV count fixed.
      (void)matvec_transpose(a, t.u, counter);
      t.residual_norm = std::numeric_limits<double>::infinity();
    }
    t.in_interval = interval.contains(t.sigma);
  }
  return out;
}

SolveReport run(const SparseMatrix& input, const SolverConfig& config,
                std::optional<Variant> forced) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const bool swapped = input.rows() < input.cols();
  SparseMatrix transposed;
  if (swapped) transposed = input.transposed();
  const SparseMatrix& a = swapped ? transposed : input;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (config.p > n) {
    throw PreconditionError("p = " + std::to_string(config.p) + " exceeds min(m, n) = " +
                            std::to_string(n));
  }

  const ResolvedSetup setup = resolve_impl(a, config, forced);
  const Variant variant = setup.variant;
  const Interval fiv = filter_interval(config.interval, setup.bounds.eta);
  const auto filter = ChebJacksonFilter::build(fiv, setup.bounds, setup.degree, variant);

  MvCounter counter;
  counter.add(setup.estimation_mvs);
  const FilteredOperator op(a, filter, counter);

  SolveReport report;
  report.variant_used = variant;
  report.degree_used = setup.degree;
  report.p_used = config.p;
  report.eta_used = setup.bounds.eta;
  report.eta_minus_used = setup.bounds.eta_minus;

  const std::size_t p = config.p;
  const auto d = static_cast<std::uint64_t>(setup.degree);
  const double threshold = setup.bounds.eta * config.tol;
  const bool augmented = variant == Variant::Augmented;

  const DenseReference* ref = augmented && !swapped ? config.reference : nullptr;
  if (config.reference && !ref) {
    report.warnings.push_back("dense reference ignored: instrumentation needs the augmented "
                              "solver and m >= n");
  }
  DenseMatrix oracle_basis;
  if (ref) oracle_basis = dominant_basis(*ref, filter, p).q;

  Rng rng = substream(config.seed, 0);
  DenseMatrix block = thin_qr(gaussian_matrix(op.dimension(), p, rng), config.seed).q;

  std::vector<RitzTriplet> triplets;
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    const std::uint64_t before = counter.count();
    const DenseMatrix filtered = apply_filter_block(op, block, config.threads);
    const QrResult qr = thin_qr(filtered, qr_seed(config.seed, iter, 0));
    warn_deficient(report, qr, iter, "filtered block");
    block = qr.q;

    ConvergenceRecord rec;
    if (augmented) {
      const QrResult qy = thin_qr(block.row_block(0, n), qr_seed(config.seed, iter, 1));
      const QrResult qz = thin_qr(block.row_block(n, m), qr_seed(config.seed, iter, 2));
      warn_deficient(report, qy, iter, "right block Y");
      warn_deficient(report, qz, iter, "left block Z");
      triplets = rayleigh_ritz_svd(a, qy.q, qz.q, config.interval, counter);
      rec = make_record(iter, counter, before, triplets, threshold);
      check_mv_count(rec, (2 * d + 3) * p, "solve_A");
      if (ref) {
        std::vector<double> sig;
        for (const auto& t : triplets) sig.push_back(t.sigma);
        rec.angles = angles_and_distances(*ref, oracle_basis, qy.q, qz.q, block,
                                          columns_of(triplets, false), columns_of(triplets, true),
                                          sig);
      }
    } else {
      triplets = cross_product_ritz(a, block, config.interval, counter, report, iter,
                                    config.seed);
      rec = make_record(iter, counter, before, triplets, threshold);
      check_mv_count(rec, 2 * (d + 1) * p, "solve_C");
    }
    report.history.push_back(std::move(rec));
    if (stopping_rule(report.history, config.target_count)) {
      report.converged = true;
      break;
    }
  }

  for (auto& t : triplets) {
    if (t.in_interval && t.residual_norm <= threshold) {
      if (swapped) std::swap(t.u, t.v);
      report.triplets.push_back(std::move(t));
    }
  }
  report.total_mvs = counter.count();
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

std::optional<VariantChoice> parse_variant(std::string_view name) {
  if (name == "augmented" || name == "A") return VariantChoice::Augmented;
  if (name == "cross-product" || name == "cross" || name == "C") return VariantChoice::CrossProduct;
  if (name == "auto") return VariantChoice::Auto;
  return std::nullopt;
}

void SolverConfig::validate() const {
  interval.validate();
  if (p < 1) throw PreconditionError("subspace dimension p must be at least 1");
  if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
  if (max_iter < 1) throw PreconditionError("max_iter must be at least 1");
  if (degree && *degree < 1) throw PreconditionError("degree must be at least 1");
  if (!degree && !(degree_factor >= 1.0 && degree_factor <= 4.0)) {
    throw PreconditionError("degree factor D must lie in [1, 4]");
  }
  if (bounds) bounds->validate();
  if (!bounds && gkl_steps < 1) throw PreconditionError("GKL steps must be at least 1");
}

Residual residual(const SparseMatrix& a, double sigma, std::span<const double> u,
                  std::span<const double> v, MvCounter& counter) {
  if (v.size() != a.cols()) throw DimensionError("residual: v has the wrong length");
  const std::vector<double> av = matvec(a, v, counter);
  return residual_with_image(a, sigma, u, v, av, counter);
}

Residual residual_with_image(const SparseMatrix& a, double sigma, std::span<const double> u,
                             std::span<const double> v, std::span<const double> av,
                             MvCounter& counter) {
  if (u.size() != a.rows() || v.size() != a.cols() || av.size() != a.rows()) {
    throw DimensionError("residual: vector lengths do not match the matrix");
  }
  Residual r;
  r.first.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r.first[i] = av[i] - sigma * u[i];
  r.second = matvec_transpose(a, u, counter);
  for (std::size_t i = 0; i < v.size(); ++i) r.second[i] -= sigma * v[i];
  const double n1 = norm2(r.first);
  const double n2 = norm2(r.second);
  r.norm = std::hypot(n1, n2);
  return r;
}

std::vector<RitzTriplet> rayleigh_ritz_svd(const SparseMatrix& a, const DenseMatrix& q1,
                                           const DenseMatrix& q2, const Interval& interval,
                                           MvCounter& counter) {
  if (q1.rows() != a.cols() || q2.rows() != a.rows() || q1.cols() != q2.cols()) {
    throw DimensionError("rayleigh_ritz_svd: basis shapes do not match A");
  }
  const std::size_t p = q1.cols();
  DenseMatrix aq1(a.rows(), p);
  for (std::size_t j = 0; j < p; ++j) matvec(a, q1.col(j), aq1.col(j), counter);

  const SvdResult svd = jacobi_svd(multiply_at_b(q2, aq1));
  const DenseMatrix u = multiply(q2, svd.u);
  const DenseMatrix v = multiply(q1, svd.v);

  std::vector<RitzTriplet> out(p);
  for (std::size_t i = 0; i < p; ++i) {
    RitzTriplet& t = out[i];
    t.sigma = svd.s[i];
    t.u = to_vector(u.col(i));
    t.v = to_vector(v.col(i));
    t.residual_norm = residual(a, t.sigma, t.u, t.v, counter).norm;
    t.in_interval = interval.contains(t.sigma);
  }
  return out;
}

Variant choose_variant(double eta, double a, double tol) noexcept {
  const double ratio = eta / a;
  const double threshold = tol > std::sqrt(kEps) ? tol / (100.0 * kEps) : std::pow(kEps, -0.25);
  return ratio >= threshold ? Variant::Augmented : Variant::CrossProduct;
}

bool stopping_rule(std::span<const ConvergenceRecord> history,
                   std::optional<std::size_t> target_count) {
  if (history.empty()) return false;
  const ConvergenceRecord& cur = history.back();
  if (target_count && *target_count > 0) return cur.n_converged >= *target_count;

  const auto window = static_cast<std::size_t>(kEmptyTargetIterations);
  if (history.size() >= window &&
      std::all_of(history.end() - static_cast<std::ptrdiff_t>(window), history.end(),
                  [](const ConvergenceRecord& r) { return r.n_in_interval == 0; })) {
    return true;
  }
  if (target_count || history.size() < 2) return false;
  const ConvergenceRecord& prev = history[history.size() - 2];
  return cur.n_in_interval >= 1 && cur.n_in_interval == prev.n_in_interval &&
         cur.n_converged == cur.n_in_interval && prev.n_converged == prev.n_in_interval;
}

ResolvedSetup resolve_setup(const SparseMatrix& a, const SolverConfig& config,
                            std::optional<Variant> forced) {
  config.validate();
  if (a.rows() < a.cols()) return resolve_impl(a.transposed(), config, forced);
  return resolve_impl(a, config, forced);
}

SolveReport solve_A(const SparseMatrix& a, const SolverConfig& config) {
  return run(a, config, Variant::Augmented);
}

SolveReport solve_C(const SparseMatrix& a, const SolverConfig& config) {
  return run(a, config, Variant::CrossProduct);
}

SolveReport solve(const SparseMatrix& a, const SolverConfig& config) {
  return run(a, config, std::nullopt);
}

}  // namespace cjfeast
