#pragma once

// Translation-type K^{1/4}-translators z = f(x) + g(y) (and y = f(x) + g(z)),
// the homothetical family x = f(z) g(y), and the coefficient identities that
// rule out other exponents.

#include <functional>
#include <vector>

#include "kflow/geometry.hpp"

namespace kflow::translation {

enum class TranslationCase {
  additive_v3,   ///< z = f(x) + g(y), speed (0,0,1)
  additive_v2,   ///< z = f(x) + g(y), speed (0,1,v3)/|(0,1,v3)|
  graph_xz,      ///< y = f(x) + g(z), speed (0,0,1)
  homothetical,  ///< x = f(z) g(y), speed (0,0,1)
};

const char* to_string(TranslationCase c);

struct TranslationParams {
  TranslationCase kind = TranslationCase::additive_v3;
  double a = 0, b = 0, c = 0, d = 0;
  double m = 2.0;
  double v3 = 0.0;  ///< additive_v2 only
  /// Chart [u0,u1] x [v0,v1]: (x,y) for the additive cases, (x,z) for
  /// graph_xz and (z,y) for homothetical.
  ChartDomain chart{-1.0, 1.0, -1.0, 1.0};

  // homothetical
  double a_h = 2.0;      ///< g'' = a_h g^3
  double m_h = 1.0;      ///< f' = +-sqrt(a_h) |m_h| sqrt(f) / sqrt(1 - 2 m_h^2 f)
  double y_pole = 2.0;   ///< g = g_sign sqrt(2/a_h) / (y_pole - y)
  double g_sign = 1.0;
  double z0 = 0.0;       ///< f(z0) = f0
  double f0 = 0.1;
};

/// Value and first three derivatives of a function of one variable.
struct Jet1 {
  double v = 0, d1 = 0, d2 = 0, d3 = 0;
};

using CurveFn = std::function<Jet1(double)>;

struct TranslationSurface {
  ParamSurface surface;
  TranslationParams params;
  Vec3 speed;      ///< unit speed of the built chart
  Vec3 raw_speed;  ///< speed of the undilated solution (may be non-unit)
  double scale = 1.0;  ///< chart dilation making the speed unit
  CurveFn f;       ///< f(x) (f(z) for homothetical)
  CurveFn g;       ///< g(y) (g(z) for graph_xz)
};

/// Exact K^{1/4} solutions of the three additive cases. Charts of
/// additive_v2 and graph_xz are clipped 1e-3 inside the zero locus of the
/// fractional-power radicand. Errors: invalid_argument (m = 0, empty clipped
/// chart, wrong case), degenerate (K <= 0 somewhere on the chart).
TranslationSurface build_quarter_solution(const TranslationParams& params);

/// x = f(z) g(y) with g from g'^2 = (a/2) g^4 and f marched by RK4 with
/// step doubling. Errors: invalid_argument (a_h <= 0, m_h = 0, f0 outside
/// (0, 1/(2 m_h^2)), pole inside the y-range), out_of_domain (f leaves its
/// range during the march).
TranslationSurface build_homothetical(const TranslationParams& params);

/// Residual of the exponent-1/4 solution evaluated under another exponent.
ResidualReport mismatch_obstruction(const TranslationSurface& s, double alpha, GridDims grid);

/// Coefficients of the cubic in g' obtained by differentiating the
/// translator equation of z = f(x) + g(y) in x, for speed v.
struct SeparationCoefficients {
  double A0 = 0, A1 = 0, A2 = 0, A3 = 0;
};

SeparationCoefficients separation_coefficients(const Jet1& f, const Vec3& v, double alpha);

/// The differentiated equation itself at one (f-jet, g') pair.
double separation_equation(const Jet1& f, double gp, const Vec3& v, double alpha);

/// (f''g'')^{1/4} + v1 f' + v2 g' - v3 at (x, y) with the raw speed.
double separation_identity(const TranslationSurface& s, double x, double y);

/// g'' - (m/2)(v3 - g')^4 for the additive_v2 profile.
double g_ode_residual(const TranslationSurface& s, double y);

/// f f'' - f'^2 / 2 - f'^4 / a_h along the homothetical f.
double f_ode_residual(const TranslationSurface& s, double z);

}  // namespace kflow::translation
