// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cjfeast/chebyshev_filter.hpp"
#include "cjfeast/estimators.hpp"
#include "cjfeast/oracle.hpp"
#include "cjfeast/projector.hpp"
#include "cjfeast/random.hpp"
#include "cjfeast/solvers.hpp"
#include "cli.hpp"
#include "planted.hpp"

namespace {

using namespace cjfeast;
namespace fs = std::filesystem;

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every solver run in this file is audited for the per-iteration MV count.
struct MvAudit {
  std::size_t iterations = 0;
  std::size_t violations = 0;

  void record(const SolveReport& r) {
    const std::uint64_t d = static_cast<std::uint64_t>(r.degree_used), p = r.p_used;
    const std::uint64_t expect = r.variant_used == Variant::Augmented ? (2 * d + 3) * p : 2 * (d + 1) * p;
    for (const auto& h : r.history) {
      ++iterations;
      if (h.mv_iteration != expect) ++violations;
    }
  }
} audit;

SolveReport audited(SolveReport r) {
  audit.record(r);
  return r;
}

// 12 values in [0.38, 0.6], the rest well outside, ||A|| = 1.
SparseMatrix moderate_instance() {
  std::vector<double> s;
  for (int i = 0; i < 12; ++i) s.push_back(0.40 + 0.015 * i);
  s.push_back(1.0);
  for (int i = 0; s.size() < 150; ++i) {
    s.push_back(i % 2 == 0 ? 0.65 + 0.3 * i / 138.0 : 0.35 * (1.0 - i / 138.0) + 1e-3);
  }
  return testing::planted_matrix(200, 150, s, 42);
}

std::vector<double> tiny_sigma() {
  std::vector<double> s{1.0, 1e-9, 0.03, 0.045, 0.06, 0.07};
  for (int i = 0; s.size() < 80; ++i) s.push_back(0.15 + 0.01 * i);
  return s;
}

SparseMatrix tiny_instance() { return testing::planted_matrix(80, 80, tiny_sigma(), 5); }

struct Case {
  double lo, hi;
  int degree;
};

std::vector<Case> filter_cases() {
  Rng rng = substream(2024, 1);
  std::uniform_real_distribution<double> u(-0.98, 0.98);
  std::uniform_int_distribution<int> deg(2, 500);
  std::vector<Case> cases;
  while (cases.size() < 50) {
    double x = u(rng), y = u(rng);
    if (std::abs(x - y) < 1e-3) continue;
    cases.push_back({std::min(x, y), std::max(x, y), deg(rng)});
  }
  return cases;
}

std::vector<double> grid() {
  std::vector<double> x(2001);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -1.0 + 2.0 * static_cast<double>(i) / 2000.0;
  return x;
}

Outcome filter_range() {
  const auto t0 = std::chrono::steady_clock::now();
  double lowest = 1.0, highest = 0.0;
  for (const auto& c : filter_cases()) {
    const ChebyshevJacksonSeries phi(c.lo, c.hi, c.degree);
    for (double x : grid()) {
      const double v = phi(x);
      lowest = std::min(lowest, v);
      highest = std::max(highest, v);
    }
  }
  const double t = seconds_since(t0);
  return {lowest >= -1e-12 && highest <= 1.0 + 1e-12 && t < 5.0,
          fmt("min %.3e, max 1%+.3e, %.2f s", lowest, highest - 1.0, t)};
}

Outcome pointwise_bound() {
  std::size_t checked = 0, violations = 0;
  for (const auto& c : filter_cases()) {
    const ChebyshevJacksonSeries phi(c.lo, c.hi, c.degree);
    for (double x : grid()) {
      const double theta = std::acos(x);
      const double gap = std::min(std::abs(theta - phi.alpha()), std::abs(theta - phi.beta()));
      if (gap < 0.05) continue;
      const double bound = std::pow(std::numbers::pi, 6) / (2.0 * std::pow(c.degree + 2.0, 3) * std::pow(gap, 4));
      ++checked;
      if (std::abs(phi(x) - phi.step(x)) > bound) ++violations;
    }
  }
  return {violations == 0 && checked > 0, fmt("%zu points checked, %zu violations", checked, violations)};
}

Outcome projector_accuracy() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t violations = 0, separated = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    Rng rng = substream(300 + trial, 0);
    std::uniform_int_distribution<std::size_t> nd(5, 40);
    const std::size_t n = nd(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(n, 60)(rng);
    const auto a = to_sparse(gaussian_matrix(m, n, rng));
    const auto ref = build_reference(a);

    // Endpoints at midpoints of consecutive distinct singular values.
    std::uniform_int_distribution<std::size_t> pick(0, n - 2);
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) j = (i + 1) % (n - 1);
    if (i > j) std::swap(i, j);
    const Interval iv{0.5 * (ref.sigma[j] + ref.sigma[j + 1]), 0.5 * (ref.sigma[i] + ref.sigma[i + 1])};
    const SpectralBounds bounds{1.05 * ref.norm, 0.0};

    const auto probe = ChebJacksonFilter::build(iv, bounds, 2, Variant::Augmented);
    const double dmin = delta_min(ref, probe);
    const double threshold = separation_degree_threshold(dmin);
    int d = std::uniform_int_distribution<int>(2, 500)(rng);
    if (trial % 2 == 1 && threshold < 20000) d = static_cast<int>(std::ceil(threshold)) + 1 + d % 50;

    const auto f = ChebJacksonFilter::build(iv, bounds, d, Variant::Augmented);
    const double err = spectral_norm(subtract(exact_projector(ref, iv), filtered_projector(ref, f)));
    if (err > projector_accuracy_bound(d, dmin)) ++violations;

    if (d > threshold) {
      ++separated;
      for (double lambda : ref.eigenvalues) {
        const double g = f(lambda);
        const bool inside = iv.a < lambda && lambda < iv.b;
        if ((inside && !(g > 0.75)) || (!inside && !(g < 0.25))) ++violations;
      }
    }
  }
  const double t = seconds_since(t0);
  return {violations == 0 && separated > 0 && t < 30.0,
          fmt("%zu violations, %zu cases above the separation degree, %.2f s", violations, separated, t)};
}

Outcome solver_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = moderate_instance();
  std::vector<double> planted;
  for (int i = 0; i < 12; ++i) planted.push_back(0.40 + 0.015 * i);
  std::sort(planted.rbegin(), planted.rend());

  SolverConfig c;
  c.interval = {0.38, 0.6};
  c.p = static_cast<std::size_t>(std::ceil(1.3 * 12));
  c.degree_factor = 2.0;
  c.max_iter = 40;
  c.seed = 1;
  c.target_count = 12;
  const auto r = audited(solve_A(a, c));
  const double t = seconds_since(t0);

  bool ok = r.converged && r.triplets.size() == 12 && r.history.size() <= 40 && t < 60.0;
  double worst_res = 0.0, worst_err = 0.0;
  for (std::size_t i = 0; ok && i < 12; ++i) {
    worst_res = std::max(worst_res, r.triplets[i].residual_norm);
    worst_err = std::max(worst_err, std::abs(r.triplets[i].sigma - planted[i]));
  }
  ok = ok && worst_res <= 1e-13 && worst_err <= 1e-12;
  return {ok, fmt("%zu triplets in %zu iterations (d = %d), max residual %.2e, max sigma error %.2e, %.2f s",
                  r.triplets.size(), r.history.size(), r.degree_used, worst_res, worst_err, t)};
}

struct TinyStats {
  double best_residual = std::numeric_limits<double>::infinity();
  double sigma_error = std::numeric_limits<double>::infinity();
};

TinyStats track_tiny(const SolveReport& r) {
  TinyStats s;
  for (const auto& h : r.history) {
    for (std::size_t i = 0; i < h.ritz_values.size(); ++i) {
      if (std::abs(h.ritz_values[i] - 1e-9) > 5e-10) continue;
      s.best_residual = std::min(s.best_residual, h.residual_norms[i]);
      s.sigma_error = std::abs(h.ritz_values[i] - 1e-9);
    }
  }
  return s;
}

Outcome stability_contrast() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = tiny_instance();
  SolverConfig c;
  c.interval = {5e-10, 0.1};
  c.p = 8;
  c.degree_factor = 2.0;
  c.seed = 3;
  c.target_count = 5;
  const auto sa = track_tiny(audited(solve_A(a, c)));
  const auto sc = track_tiny(audited(solve_C(a, c)));
  const double t = seconds_since(t0);
  const bool ok = sa.best_residual <= 1e-13 && sc.best_residual >= 1e-11 &&
                  sc.best_residual >= 100 * sa.best_residual && sa.sigma_error <= 100 * kEps &&
                  sc.sigma_error <= 100 * kEps && t < 60.0;
  return {ok, fmt("A best %.2e, C best %.2e, sigma errors %.1e / %.1e, %.2f s", sa.best_residual, sc.best_residual,
                  sa.sigma_error, sc.sigma_error, t)};
}

Outcome rate_properties() {
  std::vector<double> s{1.0, 0.33, 0.37, 0.41, 0.46, 0.25, 0.55, 0.2, 0.6, 0.65};
  for (int i = 0; s.size() < 60; ++i) s.push_back(0.7 + 0.004 * i);
  const auto a = testing::planted_matrix(80, 60, s, 11);
  const auto ref = build_reference(a);

  SolverConfig c;
  c.interval = {0.3, 0.5};
  c.p = 4;
  c.degree = 40;
  c.bounds = SpectralBounds{1.05, 0.0};
  c.max_iter = 30;
  c.seed = 9;
  c.target_count = 4;
  c.reference = &ref;
  const auto r = audited(solve_A(a, c));

  const auto f = ChebJacksonFilter::build(c.interval, *c.bounds, 40, Variant::Augmented);
  const auto basis = dominant_basis(ref, f, c.p);
  const double gamma_ratio = basis.gamma[c.p] / basis.gamma[c.p - 1];

  std::size_t ratio_violations = 0, split_violations = 0;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < r.history.size(); ++k) {
    const auto& h = r.history[k];
    const auto& g = *h.angles;
    if (g.eps1 > std::numbers::sqrt2 * g.eps + 1e-10 || g.eps2 > std::numbers::sqrt2 * g.eps + 1e-10) ++split_violations;
    // Pre-saturation: the distance is still well above rounding level.
    if (k >= 2 && r.history[k - 1].angles->eps > 1e-11 && g.eps / r.history[k - 1].angles->eps > 1.5 * gamma_ratio) {
      ++ratio_violations;
    }
    for (std::size_t i = 0; i < h.ritz_values.size(); ++i) {
      if (!h.in_interval[i]) continue;
      double err = std::numeric_limits<double>::infinity();
      for (double x : ref.sigma) err = std::min(err, std::abs(x - h.ritz_values[i]));
      if (err > 1e-13 && g.sin_v[i] > 1e-7) {
        lx.push_back(std::log10(g.sin_v[i]));
        ly.push_back(std::log10(err));
      }
    }
  }
  double slope = 0.0;
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  const bool ok = ratio_violations == 0 && split_violations == 0 && std::abs(slope - 2.0) <= 0.4;
  return {ok, fmt("gamma ratio %.3f, %zu rate violations, %zu split violations, slope %.2f over %zu points",
                  gamma_ratio, ratio_violations, split_violations, slope, lx.size())};
}

Outcome split_distance() {
  std::size_t violations = 0;
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    Rng rng = substream(trial, 21);
    const std::size_t n = 6 + trial % 5, m = 7 + trial % 4, p = 1 + trial % 4;
    const DenseMatrix w = random_orthonormal(n + m, p, rng);
    DenseMatrix wt = w;
    const DenseMatrix pert = gaussian_matrix(n + m, p, rng);
    const double scale = std::pow(10.0, -static_cast<double>(trial % 6));
    for (std::size_t k = 0; k < wt.data().size(); ++k) wt.data()[k] += scale * pert.data()[k];
    wt = thin_qr(wt).q;
    const double whole = subspace_distance(wt, w);
    const double top = subspace_distance(thin_qr(wt.row_block(0, n)).q, thin_qr(w.row_block(0, n)).q);
    if (top > split_distance_multiplier(wt.row_block(0, n), wt.row_block(n, m)) * whole + 1e-12) ++violations;
  }
  Rng rng = substream(77, 0);
  DenseMatrix stacked = vstack(random_orthonormal(9, 4, rng), random_orthonormal(12, 4, rng));
  for (double& x : stacked.data()) x /= std::numbers::sqrt2;
  const double mult = split_distance_multiplier(stacked.row_block(0, 9), stacked.row_block(9, 12));
  return {violations == 0 && std::abs(mult - std::numbers::sqrt2) <= 1e-10,
          fmt("%zu violations in 200 pairs, structured multiplier %.12f", violations, mult)};
}

Outcome degree_linkage() {
  const SpectralBounds b{14.4, 0.0};
  const Interval iv{11.0, 12.0};
  const int a4 = select_degree(iv, b, 4, Variant::Augmented), c4 = select_degree(iv, b, 4, Variant::CrossProduct);
  const int a2 = select_degree(iv, b, 2, Variant::Augmented), c2 = select_degree(iv, b, 2, Variant::CrossProduct);
  const int rel = degree_relation_a_from_c(137);
  const auto near = [](int x, int ref) { return std::abs(x - ref) <= 3; };
  const bool ok = rel >= 346 && rel <= 352 && near(a4, 697) && near(c4, 276) && near(a2, 348) && near(c2, 137);
  return {ok, fmt("relation(137) = %d, D=4: %d/%d, D=2: %d/%d", rel, a4, c4, a2, c2)};
}

Outcome estimators() {
  MvCounter counter;
  const auto gkl = estimate_norm_gkl(testing::diagonal_matrix(3, 3, {5, 3, 1}), 3, 1, counter);

  std::vector<double> s;
  for (int i = 0; i < 25; ++i) s.push_back(0.41 + 0.18 * i / 24.0);
  for (int i = 0; s.size() < 200; ++i) s.push_back(i % 2 ? 0.7 + 0.3 * (i % 50) / 50.0 : 0.3 * (1.0 - (i % 60) / 60.0));
  const auto planted = testing::planted_matrix(300, 200, s, 2024);
  const Interval iv{0.4, 0.6};
  const SpectralBounds eta{1.05, 0.0};
  const auto nsv = estimate_nsv(planted, iv, eta, select_degree(iv, eta, 2.0, Variant::CrossProduct), 30, 99, counter);
  const bool count_ok = std::abs(nsv.estimate_real - 25.0) <= 0.2 * 25.0 + 1.0;

  Rng rng = substream(8, 0);
  const DenseMatrix d = gaussian_matrix(12, 10, rng);
  const double norm = 1.05 * spectral_norm(d);
  const auto f = ChebJacksonFilter::build({0.3 * norm, 0.6 * norm}, {norm, 0.0}, 30, Variant::CrossProduct);
  const auto sa = to_sparse(d);
  const DenseMatrix p = apply_filter_block(FilteredOperator(sa, f, counter), DenseMatrix::identity(10));
  double trace = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < 10; ++i) trace += p(i, i);
  for (unsigned mask = 0; mask < 1024; ++mask) {
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) {
        const double wi = (mask >> i) & 1u ? 1.0 : -1.0, wj = (mask >> j) & 1u ? 1.0 : -1.0;
        sum += wi * p(i, j) * wj;
      }
    }
  }
  const double bias = std::abs(sum / 1024.0 - trace);
  const bool ok = std::abs(gkl.eta_raw - 5.0) <= 4 * kEps * 5.0 && gkl.breakdown && count_ok && bias <= 1e-12;
  return {ok, fmt("GKL %.17g (breakdown %d), n_sv estimate %.2f for 25, exhaustive bias %.1e", gkl.eta_raw,
                  gkl.breakdown ? 1 : 0, nsv.estimate_real, bias)};
}

class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / "cjfeast_acceptance") { fs::create_directories(dir_); }
  ~Workspace() { fs::remove_all(dir_); }

  std::string matrix(const std::string& name, const SparseMatrix& a) const {
    const auto path = (dir_ / name).string();
    std::ofstream f(path);
    write_matrix_market(f, a);
    return path;
  }

 private:
  fs::path dir_;
};

struct CliResult {
  int code;
  std::string out;
};

CliResult cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "cjfeast");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

Outcome chooser(const Workspace& ws) {
  const bool rules = choose_variant(1.0, 1e-8, 1e-12) == Variant::Augmented &&
                     choose_variant(14.4, 11.0, 1e-12) == Variant::CrossProduct &&
                     choose_variant(std::pow(kEps, -0.25), 1.0, 1e-12) == Variant::Augmented;
  const auto tiny = cli_run({"solve", "--matrix", ws.matrix("tiny.mtx", tiny_instance()), "--interval", "5e-10,0.1",
                             "--p", "8", "--nsv", "5", "--seed", "3"});
  const auto moderate = cli_run({"solve", "--matrix", ws.matrix("moderate.mtx", moderate_instance()), "--interval",
                                 "0.38,0.6", "--p", "16", "--nsv", "12", "--seed", "1"});
  std::string vt = "?", vm = "?";
  if (tiny.code != cli::kExitError) vt = nlohmann::json::parse(tiny.out)["variant_used"];
  if (moderate.code != cli::kExitError) vm = nlohmann::json::parse(moderate.out)["variant_used"];
  return {rules && vt == "augmented" && vm == "cross-product",
          fmt("rule examples %s, tiny-sigma -> %s, moderate -> %s", rules ? "ok" : "wrong", vt.c_str(), vm.c_str())};
}

Outcome reproducibility(const Workspace& ws) {
  const auto path = ws.matrix("repro.mtx", moderate_instance());
  const std::vector<std::string> args{"solve", "--matrix", path, "--interval", "0.38,0.6", "--mu", "1.3", "--seed", "5"};
  const auto r1 = cli_run(args), r2 = cli_run(args);
  const std::regex wall("\"wall_time_s\":\\s*[-+0-9.eE]+");
  const std::string a = std::regex_replace(r1.out, wall, ""), b = std::regex_replace(r2.out, wall, "");
  const bool ok = r1.code != cli::kExitError && !a.empty() && a == b && a.size() < r1.out.size();
  return {ok, fmt("exit codes %d/%d, %zu bytes compared, %s", r1.code, r2.code, a.size(), a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const Workspace ws;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  // MV accounting is audited over the solver runs of every other criterion, so it goes last.
  const std::vector<Criterion> criteria{
      {"1 filter range", filter_range},
      {"2 pointwise bound", pointwise_bound},
      {"3 projector accuracy", projector_accuracy},
      {"4 solver correctness", solver_correctness},
      {"5 stability contrast", stability_contrast},
      {"7 rate properties", rate_properties},
      {"8 split-distance inequality", split_distance},
      {"9 degree linkage", degree_linkage},
      {"10 estimators", estimators},
      {"11 variant chooser", [&] { return chooser(ws); }},
      {"12 reproducibility", [&] { return reproducibility(ws); }},
      {"6 MV accounting",
       [] {
         return Outcome{audit.violations == 0 && audit.iterations > 0,
                        fmt("%zu iterations audited, %zu mismatches", audit.iterations, audit.violations)};
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
