#pragma once

// Helicoidal K^alpha-translators about the z-axis with pitch h:
// X(r, theta) = (r cos theta, r sin theta, f(r) + h theta), speed (0,0,1).
// Also the Bour chart X(U, t) with U^2 = r^2 + h^2.

#include <optional>
#include <vector>

#include "kflow/geometry.hpp"
#include "kflow/profile.hpp"

namespace kflow::helicoidal {

/// f'^2 = m e^{r^2} - h^2/r^2 - 1 (alpha = 1/2), otherwise
/// (((1-2a)/(2a)) r^2 + m)^{2a/(1-2a)} - h^2/r^2 - 1. A negative base is
/// admitted only for an integer exponent; otherwise -infinity.
/// Errors: invalid_argument (alpha = 0, h = 0, r <= 0, alpha = 1/2 with m <= 0).
double slope_squared(const HelicoidalParams& p, double r);

/// d(f'^2)/dr.
double slope_squared_derivative(const HelicoidalParams& p, double r);

/// Base of the power in f'^2 (m e^{r^2} for alpha = 1/2).
double base(const HelicoidalParams& p, double r);

struct ScanOptions {
  double scan_lo = 1e-4;
  double scan_hi = 1e3;
  std::size_t points = 4000;  ///< logarithmically spaced
};

/// First maximal r-interval of the scan where f'^2 >= 0. Roots of f'^2 are
/// refined by bracketing (closed, slope-zero); zeros of the base with a
/// negative exponent give open slope-infinite ends; an admissible run at the
/// bottom of the scan is reported as (0, ...) with a slope-infinite end and
/// one reaching the top as unbounded.
/// Errors: invalid_argument, empty_domain.
Interval domain(const HelicoidalParams& p, const ScanOptions& scan = {});

/// Sign of the base on the domain: +1 when the translator equation holds
/// for the chart normal X_r x X_theta, -1 when it holds for the reversed one.
int orientation(const HelicoidalParams& p, const Interval& d);

/// Numerically integrated generating curve.
ProfileCurve profile(const HelicoidalParams& p, const SamplingPolicy& sampling = {},
                     const ScanOptions& scan = {});

/// Helicoidal surface of a profile with analytic jets; chart
/// [r_first, r_last] x [0, 2 pi].
ParamSurface helicoid_surface(const ProfileCurve& profile);

/// (r^3 f' f'' - h^2) / D^2 with D = r^2 (1 + f'^2) + h^2.
double gauss_curvature(double r, double fp, double fpp, double h);

/// K^alpha - o r / sqrt(D) at one profile sample (NaN when K^alpha is undefined).
double residual(const ProfileSample& s, double h, double alpha, int orientation);

struct AxisCoefficients {
  double r = 0;
  double A0 = 0;  ///< K^alpha - o v3 r / sqrt(D)
  double A1 = 0;  ///< o (v1 r f' + v2 h) / sqrt(D), coefficient of cos theta
  double A2 = 0;  ///< -o (v1 h - v2 r f') / sqrt(D), coefficient of sin theta
  double v2_combination = 0;  ///< h A1 + r f' A2 = o v2 (h^2 + r^2 f'^2) / sqrt(D)
};

/// Fourier coefficients in theta of K^alpha - <N, v> on a helicoidal surface.
std::vector<AxisCoefficients> axis_obstruction(const ProfileCurve& profile, const Vec3& v);

// ---- Bour coordinates ----

/// ds/dU = m^{-1} e^{U^2/2} (alpha = 1/2) or (m - ((2a-1)/(2a)) U^2)^{a/(1-2a)}.
/// NaN where the power is undefined.
double bour_sigma(double alpha, double m, double U);

/// dU/ds = 1/sigma, equal to <N, (0,0,1)> on the Bour chart.
double bour_P(double alpha, double m, double U);

/// Gauss curvature -U''(s)/U expressed in U.
double bour_K(double alpha, double m, double U);

/// s(U). Closed forms for alpha in {1/4, 1/3, 1} and for m = 0; otherwise
/// quadrature of sigma from U = 0 (or from the zero of the base).
/// Errors: invalid_argument, out_of_domain (power undefined at U).
double bour_s_of_U(double alpha, double m, double U);

/// Inverse of s(U) for alpha = 1, m > 0: U = sqrt(2m) tanh(sqrt(m/2) s).
double bour_U_of_s_alpha_one(double m, double s);

/// The Bour constant of the surface whose direct constant is m_direct:
/// m_direct + ((2a-1)/(2a)) h^2, or e^{h^2/2}/sqrt(m_direct) for alpha = 1/2.
double bour_constant_from_direct(double alpha, double m_direct, double h);

/// U^2 (1 - P^2) - h^2, the radicand of df/dU.
double bour_radicand(const HelicoidalParams& p, double U);

/// First admissible U-interval (U > |h|, radicand >= 0, sigma finite).
Interval bour_range(const HelicoidalParams& p, const ScanOptions& scan = {});

struct BourSample {
  double U = 0, s = 0, f = 0, Theta = 0;
};

class BourChart {
 public:
  /// p.m is the Bour constant. f and Theta vanish at the closed end of the
  /// range (the lower one when both are closed). Errors: empty_domain,
  /// out_of_domain, budget_exceeded.
  BourChart(const HelicoidalParams& p, const SamplingPolicy& sampling = {},
            const ScanOptions& scan = {});

  const HelicoidalParams& params() const { return params_; }
  const Interval& range() const { return range_; }
  const std::vector<BourSample>& samples() const { return samples_; }
  int orientation() const { return orientation_; }

  double df(double U) const;    ///< df/dU
  double ddf(double U) const;   ///< d^2 f/dU^2
  double f(double U) const;
  double theta(double U) const;

  /// X(U, t) on [U_first, U_last] x [0, 2 pi] with analytic jets.
  ParamSurface surface() const;

 private:
  double integral_from_samples(double U, bool theta) const;

  HelicoidalParams params_;
  Interval range_;
  int orientation_ = 1;
  std::vector<BourSample> samples_;
};

}  // namespace kflow::helicoidal
