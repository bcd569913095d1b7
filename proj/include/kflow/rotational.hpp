#pragma once

// Rotational K^alpha-translators about the z-axis with speed (0,0,1):
// X(r, theta) = (r cos theta, r sin theta, f(r)).

#include <vector>

#include "kflow/geometry.hpp"
#include "kflow/profile.hpp"

namespace kflow::rotational {

/// f'^2 for the profile family: (1/m)e^{r^2} - 1 when alpha = 1/2, otherwise
/// (m - (2a-1)/(2a) r^2)^{2a/(1-2a)} - 1. Returns -infinity where the power
/// is undefined (non-positive base); the value is negative outside the
/// maximal domain. Errors: invalid_argument (alpha = 0; alpha = 1/2, m <= 0).
double slope_squared(double alpha, double m, double r);

/// d(f'^2)/dr.
double slope_squared_derivative(double alpha, double m, double r);

/// Maximal domain of the profile. Errors: invalid_argument, empty_domain.
Interval maximal_domain(double alpha, double m);

/// Slope model (f'^2 and f'') for the given constants.
SlopeModel slope_model(double alpha, double m);

/// Numerically integrated generating curve, f(anchor) = params.c.
ProfileCurve profile(const RotationalParams& params, const SamplingPolicy& sampling = {});

/// Printed antiderivatives: alpha = 1/4 (any m), and alpha in {1/3, 1/6, 1}
/// with m = 1. The alpha = 1 form is valid on [0, 2) without r = sqrt(2);
/// the translator itself lives on [0, sqrt(2)).
/// Errors: invalid_argument (no closed form), out_of_domain.
double closed_form_profile(double alpha, double m, double r);

/// The m = 1 member that meets the axis orthogonally (f'(0) = 0).
ProfileCurve orthogonal_profile(double alpha, const SamplingPolicy& sampling = {});

struct Asymptote {
  double exponent = 0;     ///< 1/(1-2 alpha)
  double coefficient = 0;  ///< f(r) ~ coefficient * r^exponent
};

/// Growth of the orthogonal profile for alpha in (0, 1/2).
Asymptote asymptotic_coefficient(double alpha);

/// The surface of revolution with analytic jets; chart [r_first, r_last] x [0, 2 pi].
ParamSurface revolve(const ProfileCurve& profile);

struct AxisCoefficients {
  double r = 0;
  double A0 = 0;  ///< K^alpha - v3 (1+f'^2)^{-1/2}; NaN when K^alpha is undefined
  double A1 = 0;  ///< v1 f' (1+f'^2)^{-1/2}
  double A2 = 0;  ///< v2 f' (1+f'^2)^{-1/2}
};

/// Coefficients of 1, cos theta, sin theta in the translator equation of a
/// surface of revolution with an arbitrary speed v; a translator needs all
/// three to vanish identically. The exponent is the profile's own.
std::vector<AxisCoefficients> axis_obstruction(const ProfileCurve& profile, const Vec3& v);

/// Gauss curvature f' f'' / (r (1+f'^2)^2) of the surface of revolution
/// (r = 0 handled through the limit f'/r -> f'').
double gauss_curvature(double r, double fp, double fpp);

}  // namespace kflow::rotational
