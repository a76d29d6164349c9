#include "cjfeast/chebyshev_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cjfeast/error.hpp"

namespace cjfeast {

namespace {

using std::numbers::pi;

double clamp_mapped(double x) {
  if (!(std::abs(x) <= 1.0 + kMappedSlack)) {
    std::ostringstream msg;
    msg << "mapped argument " << x << " lies outside [-1, 1]; the norm estimate is too small";
    throw DomainError(msg.str());
  }
  return std::clamp(x, -1.0, 1.0);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void check_variant_bounds(const Interval& iv, const SpectralBounds& bounds, Variant variant) {
  iv.validate();
  bounds.validate();
  if (variant == Variant::Augmented) {
    if (iv.b > bounds.eta) {
      throw PreconditionError("augmented filter requires b <= eta (b = " + fmt(iv.b) +
                              ", eta = " + fmt(bounds.eta) + ")");
    }
    return;
  }
  if (bounds.eta_minus * bounds.eta_minus > iv.a * iv.a) {
    throw PreconditionError("cross-product filter requires eta_minus^2 <= a^2 (eta_minus = " +
                            fmt(bounds.eta_minus) + ", a = " + fmt(iv.a) + ")");
  }
  if (iv.b * iv.b > bounds.eta * bounds.eta) {
    throw PreconditionError("cross-product filter requires b^2 <= eta^2 (b = " + fmt(iv.b) +
                            ", eta = " + fmt(bounds.eta) + ")");
  }
}

double map_value(double x, const SpectralBounds& bounds, Variant variant) noexcept {
  if (variant == Variant::Augmented) return x / bounds.eta;
  const double e2 = bounds.eta * bounds.eta;
  const double m2 = bounds.eta_minus * bounds.eta_minus;
  return (2.0 * x * x - e2 - m2) / (e2 - m2);
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
  return v == Variant::Augmented ? "augmented" : "cross-product";
}

void Interval::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) throw PreconditionError("interval must be finite");
  if (!(a < b)) throw PreconditionError("interval requires a < b");
  if (!(a > 0.0)) throw PreconditionError("interval requires a > 0");
}

void SpectralBounds::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw PreconditionError("eta must be positive and finite");
  if (!(eta_minus >= 0.0) || !(eta_minus < eta)) {
    throw PreconditionError("eta_minus must satisfy 0 <= eta_minus < eta");
  }
}

double step_function(double x, double lo, double hi) noexcept {
  if (x == lo || x == hi) return 0.5;
  return (x > lo && x < hi) ? 1.0 : 0.0;
}

std::vector<double> fourier_coefficients(double mapped_lo, double mapped_hi, int degree) {
  if (degree < 0) throw PreconditionError("degree must be nonnegative");
  if (!(mapped_lo >= -1.0 && mapped_hi <= 1.0)) {
    throw DomainError("Fourier coefficients need endpoints inside [-1, 1]");
  }
  if (!(mapped_lo < mapped_hi)) throw DomainError("Fourier coefficients need lo < hi");
  const double alpha = std::acos(mapped_lo);
  const double beta = std::acos(mapped_hi);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  c[0] = (alpha - beta) / pi;
  for (int j = 1; j <= degree; ++j) {
    c[j] = 2.0 / pi * (std::sin(j * alpha) - std::sin(j * beta)) / j;
  }
  return c;
}

std::vector<double> jackson_damping(int degree) {
  if (degree < 0) throw PreconditionError("degree must be nonnegative");
  const double dp2 = degree + 2.0;
  const double s1 = std::sin(pi / dp2);
  const double c1 = std::cos(pi / dp2);
  std::vector<double> rho(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j) {
    const double t = j * pi / dp2;
    rho[j] = ((dp2 - j) * s1 * std::cos(t) + c1 * std::sin(t)) / (dp2 * s1);
  }
  return rho;
}

ChebyshevJacksonSeries::ChebyshevJacksonSeries(double lo, double hi, int degree)
    : lo_(lo), hi_(hi), alpha_(0.0), beta_(0.0), coeffs_(fourier_coefficients(lo, hi, degree)) {
  alpha_ = std::acos(lo);
  beta_ = std::acos(hi);
  const auto rho = jackson_damping(degree);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] *= rho[j];
}

double ChebyshevJacksonSeries::operator()(double x) const {
  x = clamp_mapped(x);
  double t_prev = 1.0;
  double sum = coeffs_[0];
  if (coeffs_.size() == 1) return sum;
  double t_cur = x;
  sum += coeffs_[1] * t_cur;
  for (std::size_t j = 2; j < coeffs_.size(); ++j) {
    const double t_next = 2.0 * x * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
    sum += coeffs_[j] * t_cur;
  }
  return sum;
}

double ChebyshevJacksonSeries::pointwise_error_bound(double theta) const {
  if (!(theta >= 0.0 && theta <= pi)) throw DomainError("theta must lie in [0, pi]");
  if (degree() < 2) throw PreconditionError("pointwise bound needs degree >= 2");
  const double dp2 = degree() + 2.0;
  const double k = std::pow(pi, 6) / (2.0 * dp2 * dp2 * dp2);
  const double gap = alpha_ - beta_;
  if (theta == alpha_) {
    return k * std::max(1.0 / std::pow(2.0 * pi - 2.0 * alpha_, 4), 1.0 / std::pow(gap, 4));
  }
  if (theta == beta_) {
    return k * std::max(1.0 / std::pow(2.0 * beta_, 4), 1.0 / std::pow(gap, 4));
  }
  const double delta = std::min(std::abs(theta - alpha_), std::abs(theta - beta_));
  return k / std::pow(delta, 4);
}

ChebJacksonFilter::ChebJacksonFilter(Interval interval, SpectralBounds bounds, Variant variant,
                                     ChebyshevJacksonSeries series, double scale, double shift)
    : interval_(interval),
      bounds_(bounds),
      variant_(variant),
      series_(std::move(series)),
      scale_(scale),
      shift_(shift) {}

ChebJacksonFilter ChebJacksonFilter::build(const Interval& interval, const SpectralBounds& bounds,
                                           int degree, Variant variant) {
  check_variant_bounds(interval, bounds, variant);
  if (degree < 0) throw PreconditionError("degree must be nonnegative");
  const double lo = std::clamp(map_value(interval.a, bounds, variant), -1.0, 1.0);
  const double hi = std::clamp(map_value(interval.b, bounds, variant), -1.0, 1.0);
  double scale = 1.0 / bounds.eta;
  double shift = 0.0;
  if (variant == Variant::CrossProduct) {
    const double e2 = bounds.eta * bounds.eta;
    const double m2 = bounds.eta_minus * bounds.eta_minus;
    scale = 2.0 / (e2 - m2);
    shift = -(e2 + m2) / (e2 - m2);
  }
  return ChebJacksonFilter(interval, bounds, variant, ChebyshevJacksonSeries(lo, hi, degree), scale,
                           shift);
}

double ChebJacksonFilter::mapped(double x) const noexcept { return map_value(x, bounds_, variant_); }

double ChebJacksonFilter::angle(double x) const { return std::acos(clamp_mapped(mapped(x))); }

EndpointAngles endpoint_angles(const Interval& interval, const SpectralBounds& bounds,
                               Variant variant) {
  check_variant_bounds(interval, bounds, variant);
  const double lo = std::clamp(map_value(interval.a, bounds, variant), -1.0, 1.0);
  const double hi = std::clamp(map_value(interval.b, bounds, variant), -1.0, 1.0);
  return {std::acos(lo), std::acos(hi)};
}

int select_degree(const Interval& interval, const SpectralBounds& bounds, double degree_factor,
                  Variant variant) {
  if (!(degree_factor >= 1.0 && degree_factor <= 4.0)) {
    throw PreconditionError("degree factor D must lie in [1, 4]");
  }
  const auto [alpha, beta] = endpoint_angles(interval, bounds, variant);
  if (!(alpha > beta)) throw PreconditionError("interval collapses under the spectral map");
  const double raw = std::ceil(degree_factor * pi * pi / std::pow(alpha - beta, 4.0 / 3.0)) - 2.0;
  if (raw > 1e7) throw PreconditionError("selected degree exceeds 1e7; interval too narrow");
  return std::max(2, static_cast<int>(raw));
}

int degree_relation_a_from_c(int cross_degree) {
  if (cross_degree < 2) throw PreconditionError("cross-product degree must be >= 2");
  return static_cast<int>(std::ceil(2.0 * std::cbrt(2.0) * (cross_degree + 2.0) - 2.0));
}

double projector_accuracy_bound(int degree, double delta_min) {
  if (!(delta_min > 0.0)) throw DomainError("delta_min must be positive");
  const double dp2 = degree + 2.0;
  return std::pow(pi, 6) / (2.0 * dp2 * dp2 * dp2 * std::pow(delta_min, 4));
}

double projector_accuracy_bound(const ChebJacksonFilter& filter, double delta_min) {
  return projector_accuracy_bound(filter.degree(), delta_min);
}

double separation_degree_threshold(double delta_min) {
  if (!(delta_min > 0.0)) throw DomainError("delta_min must be positive");
  return std::cbrt(2.0) * pi * pi / std::pow(delta_min, 4.0 / 3.0) - 2.0;
}

}  // namespace cjfeast
