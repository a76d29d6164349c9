#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "cjfeast/chebyshev_filter.hpp"
#include "cjfeast/error.hpp"
#include "cjfeast/estimators.hpp"
#include "cjfeast/oracle.hpp"
#include "cjfeast/solvers.hpp"
#include "cjfeast/sparse_matrix.hpp"

namespace cjfeast::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned default_threads() {
  if (const char* env = std::getenv("CJFEAST_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

Interval parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("interval must be given as a,b");
  Interval iv;
  try {
    std::size_t used = 0;
    iv.a = std::stod(text.substr(0, comma), &used);
    iv.b = std::stod(text.substr(comma + 1), &used);
  } catch (const std::exception&) {
    throw UsageError("interval must be given as a,b");
  }
  iv.validate();
  return iv;
}

std::string format_interval(double a, double b) {
  std::ostringstream s;
  s << std::setprecision(17) << a << ',' << b;
  return s.str();
}

SparseMatrix load_matrix(const std::string& path) {
  if (path.empty()) throw UsageError("--matrix is required");
  return read_matrix_market(path);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << std::setprecision(17);
  return f;
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    open_output(path) << j.dump(2) << '\n';
  }
}

// Options shared by solve and compare. Fields left empty fall back to the
// --config file, then to the defaults.
struct RunOptions {
  std::string config_path;
  std::string matrix;
  std::string interval;
  std::string variant = "auto";
  std::optional<int> degree;
  std::optional<double> degree_factor;
  std::optional<std::size_t> p;
  double mu = 1.2;
  std::optional<std::size_t> nsv;
  double tol = 1e-14;
  int max_iter = 50;
  std::uint64_t seed = 0;
  std::optional<double> eta;
  double eta_minus = 0.0;
  int gkl_steps = 30;
  int probes = 30;
  unsigned threads = default_threads();
  std::string output;
  std::string history;
  std::string vectors;
  bool oracle = false;
};

void add_run_options(CLI::App& cmd, RunOptions& o) {
  cmd.add_option("--config", o.config_path, "JSON run configuration");
  cmd.add_option("--matrix", o.matrix, "Matrix Market file");
  cmd.add_option("--interval", o.interval, "target interval a,b");
  auto* deg = cmd.add_option("--degree", o.degree, "explicit filter degree");
  auto* fac = cmd.add_option("--degree-factor", o.degree_factor, "degree factor D in [1, 4]");
  deg->excludes(fac);
  cmd.add_option("--p", o.p, "subspace dimension (default ceil(mu * estimated n_sv))");
  cmd.add_option("--mu", o.mu, "subspace factor");
  cmd.add_option("--nsv", o.nsv, "known number of singular values in the interval");
  cmd.add_option("--tol", o.tol, "relative residual tolerance");
  cmd.add_option("--max-iter", o.max_iter, "iteration cap");
  cmd.add_option("--seed", o.seed, "random seed");
  cmd.add_option("--eta", o.eta, "upper bound on ||A|| (default: GKL estimate)");
  cmd.add_option("--eta-minus", o.eta_minus, "lower bound on sigma_min for the cross-product map");
  cmd.add_option("--gkl-steps", o.gkl_steps, "GKL steps for the norm estimate");
  cmd.add_option("--probes", o.probes, "Rademacher probes for the n_sv estimate");
  cmd.add_option("--threads", o.threads, "worker threads for the filter (env CJFEAST_THREADS)");
  cmd.add_option("--output", o.output, "output file (default stdout)");
}

// Fills options missing from the command line from the JSON config file.
void apply_config_file(CLI::App& cmd, RunOptions& o) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw Error("cannot open config file " + o.config_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("config file " + o.config_path + ": " + e.what());
  }
  if (!j.is_object()) throw Error("config file must hold a JSON object");
  if (j.contains("degree") && j.contains("degree_factor")) {
    throw UsageError("degree and degree_factor are mutually exclusive");
  }
  auto unset = [&cmd](const char* flag) {
    const CLI::Option* opt = cmd.get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "matrix_path") {
        if (unset("--matrix")) o.matrix = value.get<std::string>();
      } else if (key == "interval") {
        if (!value.is_array() || value.size() != 2) throw UsageError("config interval must be [a, b]");
        if (unset("--interval")) o.interval = format_interval(value[0].get<double>(), value[1].get<double>());
      } else if (key == "variant") {
        if (unset("--variant")) o.variant = value.get<std::string>();
      } else if (key == "degree") {
        if (unset("--degree") && unset("--degree-factor")) o.degree = value.get<int>();
      } else if (key == "degree_factor") {
        if (unset("--degree") && unset("--degree-factor")) o.degree_factor = value.get<double>();
      } else if (key == "mu") {
        if (unset("--mu")) o.mu = value.get<double>();
      } else if (key == "p") {
        if (unset("--p")) o.p = value.get<std::size_t>();
      } else if (key == "nsv") {
        if (unset("--nsv")) o.nsv = value.get<std::size_t>();
      } else if (key == "tol") {
        if (unset("--tol")) o.tol = value.get<double>();
      } else if (key == "max_iter") {
        if (unset("--max-iter")) o.max_iter = value.get<int>();
      } else if (key == "seed") {
        if (unset("--seed")) o.seed = value.get<std::uint64_t>();
      } else if (key == "eta") {
        if (unset("--eta")) o.eta = value.get<double>();
      } else if (key == "eta_minus") {
        if (unset("--eta-minus")) o.eta_minus = value.get<double>();
      } else if (key == "gkl_steps") {
        if (unset("--gkl-steps")) o.gkl_steps = value.get<int>();
      } else if (key == "probes") {
        if (unset("--probes")) o.probes = value.get<int>();
      } else if (key == "output") {
        if (unset("--output")) o.output = value.get<std::string>();
      } else if (key == "history") {
        if (unset("--history")) o.history = value.get<std::string>();
      } else if (key == "vectors") {
        if (unset("--emit-vectors")) o.vectors = value.get<std::string>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError("config file " + o.config_path + ": " + e.what());
  }
}

void check_run_options(const RunOptions& o) {
  if (o.degree && o.degree_factor) throw UsageError("degree and degree_factor are mutually exclusive");
  if (!(o.mu >= 1.0)) throw UsageError("mu must be at least 1");
  if (!(o.tol > 0.0)) throw UsageError("tol must be positive");
  if (o.max_iter < 1) throw UsageError("max-iter must be at least 1");
  if (o.probes < 1) throw UsageError("probes must be at least 1");
  if (o.gkl_steps < 1) throw UsageError("gkl-steps must be at least 1");
  if (o.p && *o.p == 0) throw UsageError("p must be at least 1");
  if (o.interval.empty()) throw UsageError("--interval is required");
}

// Everything solve and compare settle before any iteration runs.
struct Prepared {
  SparseMatrix a;
  SolverConfig config;
  std::optional<NsvEstimate> nsv;
  std::uint64_t estimation_mvs = 0;
};

Prepared prepare(const RunOptions& o) {
  check_run_options(o);
  Prepared prep;
  SolverConfig& c = prep.config;
  c.interval = parse_interval(o.interval);
  prep.a = load_matrix(o.matrix);

  const auto choice = parse_variant(o.variant);
  if (!choice) throw UsageError("unknown variant '" + o.variant + "'");
  c.variant = *choice;
  c.degree = o.degree;
  c.degree_factor = o.degree_factor.value_or(2.0);
  c.tol = o.tol;
  c.max_iter = o.max_iter;
  c.seed = o.seed;
  c.gkl_steps = o.gkl_steps;
  c.threads = o.threads;
  c.target_count = o.nsv;

  const std::size_t k = std::min(prep.a.rows(), prep.a.cols());
  if (o.eta) {
    c.bounds = SpectralBounds{*o.eta, o.eta_minus};
  } else {
    MvCounter counter;
    const int steps = std::min<int>(o.gkl_steps, static_cast<int>(k));
    const auto est = estimate_norm_gkl(prep.a, steps, o.seed, counter);
    prep.estimation_mvs += counter.count();
    c.bounds = SpectralBounds{est.eta_safe, o.eta_minus};
  }
  c.bounds->validate();

  if (o.p) {
    c.p = *o.p;
  } else if (o.nsv) {
    c.p = static_cast<std::size_t>(std::ceil(o.mu * static_cast<double>(std::max<std::size_t>(*o.nsv, 1))));
  } else {
    const Interval fiv{c.interval.a, std::min(c.interval.b, c.bounds->eta)};
    const int d = select_degree(fiv, *c.bounds, c.degree_factor, Variant::CrossProduct);
    MvCounter counter;
    const auto a_work = prep.a.rows() >= prep.a.cols() ? prep.a : prep.a.transposed();
    prep.nsv = estimate_nsv(a_work, fiv, *c.bounds, d, o.probes, o.seed, counter, o.threads);
    prep.estimation_mvs += counter.count();
    c.p = static_cast<std::size_t>(std::ceil(o.mu * prep.nsv->estimate_rounded));
  }
  c.p = std::clamp<std::size_t>(c.p, 1, k);
  c.validate();
  return prep;
}

void write_history_csv(const std::string& path, const SolveReport& report) {
  auto f = open_output(path);
  f << "iter,mv_total,n_in_interval";
  for (std::size_t i = 1; i <= report.p_used; ++i) f << ",sigma_" << i << ",res_" << i;
  f << '\n';
  for (const auto& h : report.history) {
    f << h.iter << ',' << h.mv_total << ',' << h.n_in_interval;
    for (std::size_t i = 0; i < report.p_used; ++i) {
      if (i < h.ritz_values.size()) {
        f << ',' << h.ritz_values[i] << ',' << h.residual_norms[i];
      } else {
        f << ",,";
      }
    }
    f << '\n';
  }
}

void write_vectors(const std::string& path, const SolveReport& report) {
  auto f = open_output(path);
  for (std::size_t i = 0; i < report.triplets.size(); ++i) {
    const auto& t = report.triplets[i];
    f << "# triplet " << i + 1 << " sigma " << t.sigma << '\n';
    for (std::size_t k = 0; k < t.u.size(); ++k) f << (k ? " " : "") << t.u[k];
    f << '\n';
    for (std::size_t k = 0; k < t.v.size(); ++k) f << (k ? " " : "") << t.v[k];
    f << '\n';
  }
}

json report_json(const SolveReport& report, std::uint64_t extra_mvs, const std::string& history) {
  json j;
  j["converged"] = report.converged;
  j["variant_used"] = std::string(to_string(report.variant_used));
  j["degree_used"] = report.degree_used;
  j["p_used"] = report.p_used;
  j["eta_used"] = report.eta_used;
  j["total_mvs"] = report.total_mvs + extra_mvs;
  j["wall_time_s"] = report.wall_time;
  json trips = json::array();
  for (const auto& t : report.triplets) {
    trips.push_back({{"sigma", t.sigma}, {"residual_norm", t.residual_norm}, {"in_interval", t.in_interval}});
  }
  j["triplets"] = std::move(trips);
  j["history_path"] = history.empty() ? json(nullptr) : json(history);
  return j;
}

int cmd_solve(CLI::App& cmd, RunOptions& o, std::ostream& out, std::ostream& err) {
  apply_config_file(cmd, o);
  const Prepared prep = prepare(o);
  const SolveReport report = solve(prep.a, prep.config);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';

  if (!o.history.empty()) write_history_csv(o.history, report);
  if (!o.vectors.empty()) write_vectors(o.vectors, report);
  emit_json(report_json(report, prep.estimation_mvs, o.history), o.output, out);
  return report.converged ? kExitOk : kExitNotConverged;
}

struct EstimateOptions {
  std::string matrix;
  std::string interval;
  int steps = 30;
  int probes = 30;
  std::uint64_t seed = 0;
  std::optional<int> degree;
  double degree_factor = 2.0;
  std::optional<double> eta;
  double eta_minus = 0.0;
  unsigned threads = default_threads();
  std::string output;
};

int cmd_estimate(const EstimateOptions& o, std::ostream& out) {
  if (o.steps < 1) throw UsageError("steps must be at least 1");
  const SparseMatrix a = load_matrix(o.matrix);
  const std::size_t k = std::min(a.rows(), a.cols());

  MvCounter counter;
  const int steps = std::min<int>(o.steps, static_cast<int>(k));
  const NormEstimate norm = estimate_norm_gkl(a, steps, o.seed, counter);

  json j;
  j["eta_raw"] = norm.eta_raw;
  j["eta_safe"] = norm.eta_safe;
  j["gkl_steps_used"] = norm.steps_used;
  j["gkl_breakdown"] = norm.breakdown;
  if (!o.interval.empty()) {
    const Interval iv = parse_interval(o.interval);
    const SpectralBounds bounds{o.eta.value_or(norm.eta_safe), o.eta_minus};
    bounds.validate();
    if (iv.a >= bounds.eta) throw PreconditionError("interval lies above the norm bound eta");
    const Interval fiv{iv.a, std::min(iv.b, bounds.eta)};
    const int d = o.degree ? *o.degree : select_degree(fiv, bounds, o.degree_factor, Variant::CrossProduct);
    const auto a_work = a.rows() >= a.cols() ? a : a.transposed();
    const NsvEstimate nsv = estimate_nsv(a_work, fiv, bounds, d, o.probes, o.seed, counter, o.threads);
    j["degree"] = d;
    j["nsv_estimate"] = nsv.estimate_real;
    j["nsv_rounded"] = nsv.estimate_rounded;
    j["probes"] = nsv.probes;
  }
  j["seed"] = o.seed;
  j["total_mvs"] = counter.count();
  emit_json(j, o.output, out);
  return kExitOk;
}

struct TraceOptions {
  std::string interval;
  double eta = 1.0;
  double eta_minus = 0.0;
  std::string variant = "augmented";
  std::optional<int> degree;
  double degree_factor = 2.0;
  int points = 2001;
  std::string output;
};

int cmd_filter_trace(const TraceOptions& o, std::ostream& out) {
  if (o.points < 2) throw UsageError("points must be at least 2");
  const Interval iv = parse_interval(o.interval);
  const SpectralBounds bounds{o.eta, o.eta_minus};
  bounds.validate();
  const auto choice = parse_variant(o.variant);
  if (!choice || *choice == VariantChoice::Auto) {
    throw UsageError("filter-trace variant must be augmented or cross-product");
  }
  const Variant variant = *choice == VariantChoice::Augmented ? Variant::Augmented : Variant::CrossProduct;
  const int d = o.degree ? *o.degree : select_degree(iv, bounds, o.degree_factor, variant);
  const auto filter = ChebJacksonFilter::build(iv, bounds, d, variant);

  std::ofstream file;
  if (!o.output.empty()) file = open_output(o.output);
  std::ostream& dst = o.output.empty() ? out : file;
  const auto old_precision = dst.precision(17);

  // The augmented map covers the eigenvalues -eta..eta of S_A; the
  // cross-product map covers singular values eta_minus..eta.
  const double lo = variant == Variant::Augmented ? -bounds.eta : bounds.eta_minus;
  const double hi = bounds.eta;
  const auto& series = filter.series();
  dst << "x,mapped_x,phi_d,step,error_bound\n";
  for (int i = 0; i < o.points; ++i) {
    const double x = i + 1 == o.points ? hi : lo + (hi - lo) * i / (o.points - 1);
    const double t = std::clamp(filter.mapped(x), -1.0, 1.0);
    const double bound = d >= 2 ? series.pointwise_error_bound(std::acos(t))
                                : std::numeric_limits<double>::infinity();
    dst << x << ',' << t << ',' << series(t) << ',' << series.step(t) << ',' << bound << '\n';
  }
  dst.precision(old_precision);
  return kExitOk;
}

// Worst relative residual among in-interval Ritz values, or NaN if none.
double worst_in_interval(const ConvergenceRecord& rec, double eta) {
  double worst = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rec.ritz_values.size(); ++i) {
    if (!rec.in_interval[i]) continue;
    const double r = rec.residual_norms[i] / eta;
    worst = std::isnan(worst) ? r : std::max(worst, r);
  }
  return worst;
}

double nearest_error(const ConvergenceRecord& rec, double sigma) {
  double best = std::numeric_limits<double>::infinity();
  for (double s : rec.ritz_values) best = std::min(best, std::abs(s - sigma));
  return best;
}

int cmd_compare(CLI::App& cmd, RunOptions& o, std::ostream& out, std::ostream& err) {
  apply_config_file(cmd, o);
  Prepared prep = prepare(o);
  SolverConfig cfg_c = prep.config;
  SolverConfig cfg_a = prep.config;
  // --degree names the cross-product degree; the augmented one is linked.
  const Interval fiv{cfg_c.interval.a, std::min(cfg_c.interval.b, cfg_c.bounds->eta)};
  const int dc = o.degree ? *o.degree
                          : select_degree(fiv, *cfg_c.bounds, cfg_c.degree_factor, Variant::CrossProduct);
  cfg_c.degree = dc;
  cfg_a.degree = degree_relation_a_from_c(dc);
  const SolveReport ra = solve_A(prep.a, cfg_a);
  const SolveReport rc = solve_C(prep.a, cfg_c);
  for (const auto& w : ra.warnings) err << "warning (A): " << w << '\n';
  for (const auto& w : rc.warnings) err << "warning (C): " << w << '\n';

  std::vector<double> exact;
  if (o.oracle) {
    const DenseReference ref = build_reference(prep.a);
    for (double s : ref.sigma) {
      if (prep.config.interval.contains(s)) exact.push_back(s);
    }
  }

  const std::string csv_path = o.history.empty() ? std::string("compare_history.csv") : o.history;
  auto f = open_output(csv_path);
  f << "iter,mv_A,mv_C,best_residual_A,best_residual_C";
  for (std::size_t i = 1; i <= exact.size(); ++i) f << ",sigma_err_A_" << i << ",sigma_err_C_" << i;
  f << '\n';
  const std::size_t rows = std::max(ra.history.size(), rc.history.size());
  double best_a = std::numeric_limits<double>::quiet_NaN();
  double best_c = std::numeric_limits<double>::quiet_NaN();
  auto improve = [](double& best, double r) {
    if (!std::isnan(r)) best = std::isnan(best) ? r : std::min(best, r);
  };
  auto cell = [&f](double v) {
    if (!std::isnan(v)) f << v;
  };
  for (std::size_t k = 0; k < rows; ++k) {
    const ConvergenceRecord* ha = k < ra.history.size() ? &ra.history[k] : nullptr;
    const ConvergenceRecord* hc = k < rc.history.size() ? &rc.history[k] : nullptr;
    if (ha) improve(best_a, worst_in_interval(*ha, ra.eta_used));
    if (hc) improve(best_c, worst_in_interval(*hc, rc.eta_used));
    f << k + 1 << ',';
    if (ha) f << ha->mv_iteration;
    f << ',';
    if (hc) f << hc->mv_iteration;
    f << ',';
    cell(best_a);
    f << ',';
    cell(best_c);
    for (double s : exact) {
      f << ',';
      if (ha) f << nearest_error(*ha, s);
      f << ',';
      if (hc) f << nearest_error(*hc, s);
    }
    f << '\n';
  }

  json j;
  j["history_path"] = csv_path;
  j["p_used"] = prep.config.p;
  j["eta_used"] = ra.eta_used;
  j["augmented"] = {{"converged", ra.converged},
                    {"iterations", ra.history.size()},
                    {"degree_used", ra.degree_used},
                    {"total_mvs", ra.total_mvs},
                    {"triplets", ra.triplets.size()}};
  j["cross_product"] = {{"converged", rc.converged},
                        {"iterations", rc.history.size()},
                        {"degree_used", rc.degree_used},
                        {"total_mvs", rc.total_mvs},
                        {"triplets", rc.triplets.size()}};
  emit_json(j, o.output, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interval partial SVD by Chebyshev-Jackson filtered subspace iteration", "cjfeast"};
  app.require_subcommand(1);

  RunOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "compute the singular triplets in an interval");
  add_run_options(*solve_cmd, solve_opts);
  solve_cmd->add_option("--variant", solve_opts.variant, "auto, augmented or cross-product");
  solve_cmd->add_option("--history", solve_opts.history, "convergence history CSV");
  solve_cmd->add_option("--emit-vectors", solve_opts.vectors, "write singular vectors as text");

  EstimateOptions est_opts;
  auto* est_cmd = app.add_subcommand("estimate", "estimate ||A|| and the interval count");
  est_cmd->add_option("--matrix", est_opts.matrix, "Matrix Market file")->required();
  est_cmd->add_option("--interval", est_opts.interval, "interval a,b for the count estimate");
  est_cmd->add_option("--steps", est_opts.steps, "GKL steps (capped at min(m, n))");
  est_cmd->add_option("--probes", est_opts.probes, "Rademacher probes");
  est_cmd->add_option("--seed", est_opts.seed, "random seed");
  auto* est_deg = est_cmd->add_option("--degree", est_opts.degree, "explicit filter degree");
  est_cmd->add_option("--degree-factor", est_opts.degree_factor, "degree factor D")->excludes(est_deg);
  est_cmd->add_option("--eta", est_opts.eta, "norm bound for the count filter");
  est_cmd->add_option("--eta-minus", est_opts.eta_minus, "lower bound on sigma_min");
  est_cmd->add_option("--threads", est_opts.threads, "worker threads");
  est_cmd->add_option("--output", est_opts.output, "output file (default stdout)");

  TraceOptions trace_opts;
  auto* trace_cmd = app.add_subcommand("filter-trace", "tabulate the scalar filter");
  trace_cmd->add_option("--interval", trace_opts.interval, "interval a,b")->required();
  trace_cmd->add_option("--eta", trace_opts.eta, "norm bound");
  trace_cmd->add_option("--eta-minus", trace_opts.eta_minus, "lower bound on sigma_min");
  trace_cmd->add_option("--variant", trace_opts.variant, "augmented or cross-product");
  auto* tr_deg = trace_cmd->add_option("--degree", trace_opts.degree, "explicit degree");
  trace_cmd->add_option("--degree-factor", trace_opts.degree_factor, "degree factor D")->excludes(tr_deg);
  trace_cmd->add_option("--points", trace_opts.points, "grid points");
  trace_cmd->add_option("--output", trace_opts.output, "CSV file (default stdout)");

  RunOptions cmp_opts;
  auto* cmp_cmd = app.add_subcommand("compare", "run both solvers side by side");
  add_run_options(*cmp_cmd, cmp_opts);
  cmp_cmd->add_option("--history", cmp_opts.history, "side-by-side CSV (default compare_history.csv)");
  cmp_cmd->add_flag("--oracle", cmp_opts.oracle, "add sigma errors from a dense reference");

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(*solve_cmd, solve_opts, out, err);
    if (*est_cmd) return cmd_estimate(est_opts, out);
    if (*trace_cmd) return cmd_filter_trace(trace_opts, out);
    if (*cmp_cmd) return cmd_compare(*cmp_cmd, cmp_opts, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace cjfeast::cli
