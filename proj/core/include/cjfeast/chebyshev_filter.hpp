#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace cjfeast {

enum class Variant { Augmented, CrossProduct };

std::string_view to_string(Variant v) noexcept;

/// Target singular-value interval [a, b] with 0 < a < b.
struct Interval {
  double a = 0.0;
  double b = 0.0;

  void validate() const;
  bool contains(double sigma) const noexcept { return a <= sigma && sigma <= b; }
};

/// eta estimates ||A|| and eta_minus estimates sigma_min. eta_minus only
/// enters the cross-product map.
struct SpectralBounds {
  double eta = 0.0;
  double eta_minus = 0.0;

  void validate() const;
};

/// Multiplier applied to every estimated ||A|| before a filter is built. An
/// underestimate would push eigenvalues outside [-1, 1] where T_j grows.
inline constexpr double kEtaSafety = 1.05;

/// Mapped arguments within this distance beyond [-1, 1] are clamped.
inline constexpr double kMappedSlack = 1e-6;

/// 1 on (lo, hi), 1/2 at the endpoints, 0 elsewhere (also outside [-1, 1]).
double step_function(double x, double lo, double hi) noexcept;

/// Chebyshev coefficients c_0..c_d of the step function on [lo, hi].
std::vector<double> fourier_coefficients(double mapped_lo, double mapped_hi, int degree);

/// Jackson damping factors rho_{0,d}..rho_{d,d}.
std::vector<double> jackson_damping(int degree);

/// Degree-d Chebyshev-Jackson approximation phi_d of the step function on a
/// subinterval [lo, hi] of [-1, 1]. Coefficients are stored premultiplied,
/// g_j = rho_{j,d} c_j.
class ChebyshevJacksonSeries {
 public:
  ChebyshevJacksonSeries(double lo, double hi, int degree);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  /// alpha = arccos(lo) > beta = arccos(hi).
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// phi_d(x) by the three-term recurrence. x within kMappedSlack of [-1, 1]
  /// is clamped; farther out raises DomainError.
  double operator()(double x) const;
  double step(double x) const noexcept { return step_function(x, lo_, hi_); }

  /// Pointwise bound on |phi_d(cos theta) - h(cos theta)| for d >= 2.
  double pointwise_error_bound(double theta) const;

 private:
  double lo_;
  double hi_;
  double alpha_;
  double beta_;
  std::vector<double> coeffs_;
};

/// Chebyshev-Jackson filter on the singular-value axis: the series composed
/// with the augmented map x -> x/eta or the cross-product map
/// x -> (2x^2 - eta^2 - eta_-^2)/(eta^2 - eta_-^2).
class ChebJacksonFilter {
 public:
  static ChebJacksonFilter build(const Interval& interval, const SpectralBounds& bounds,
                                 int degree, Variant variant);

  Variant variant() const noexcept { return variant_; }
  const Interval& interval() const noexcept { return interval_; }
  const SpectralBounds& bounds() const noexcept { return bounds_; }
  const ChebyshevJacksonSeries& series() const noexcept { return series_; }
  int degree() const noexcept { return series_.degree(); }
  std::span<const double> coeffs() const noexcept { return series_.coeffs(); }
  double alpha() const noexcept { return series_.alpha(); }
  double beta() const noexcept { return series_.beta(); }

  /// Image of x on [-1, 1]. For Augmented x is an eigenvalue of S_A (may be
  /// negative); for CrossProduct x is a singular value and x^2 is mapped.
  double mapped(double x) const noexcept;
  /// arccos of the clamped mapped value.
  double angle(double x) const;
  /// phi_d(map(x)).
  double operator()(double x) const { return series_(mapped(x)); }
  double pointwise_error_bound(double theta) const { return series_.pointwise_error_bound(theta); }

  /// The mapped operator is scale * Op + shift * I, with Op = S_A or S_C.
  double operator_scale() const noexcept { return scale_; }
  double operator_shift() const noexcept { return shift_; }

 private:
  ChebJacksonFilter(Interval interval, SpectralBounds bounds, Variant variant,
                    ChebyshevJacksonSeries series, double scale, double shift);

  Interval interval_;
  SpectralBounds bounds_;
  Variant variant_;
  ChebyshevJacksonSeries series_;
  double scale_;
  double shift_;
};

/// Endpoint angles (alpha, beta) of the interval under the variant's map.
struct EndpointAngles {
  double alpha;
  double beta;
};
EndpointAngles endpoint_angles(const Interval& interval, const SpectralBounds& bounds,
                               Variant variant);

/// d = max(2, ceil(D pi^2 / (alpha - beta)^{4/3}) - 2) with D in [1, 4].
int select_degree(const Interval& interval, const SpectralBounds& bounds, double degree_factor,
                  Variant variant);

/// Smallest augmented degree whose projector bound matches a cross-product
/// filter of degree d_c: ceil(2 cbrt(2) (d_c + 2) - 2).
int degree_relation_a_from_c(int cross_degree);

/// pi^6 / (2 (d + 2)^3 delta_min^4), the bound on ||P_exact - P||.
double projector_accuracy_bound(int degree, double delta_min);
double projector_accuracy_bound(const ChebJacksonFilter& filter, double delta_min);

/// cbrt(2) pi^2 / delta_min^{4/3} - 2; any larger degree keeps the projector
/// error below 1/4 and separates the eigenvalue images at 3/4 and 1/4.
double separation_degree_threshold(double delta_min);

}  // namespace cjfeast
