#pragma once

// Non-cylindrical ruled surfaces X(s,t) = gamma(s) + t w(s) with gamma the
// striction curve, their curvature, and the linear-independence probe that
// excludes ruled translators.

#include <functional>
#include <vector>

#include "kflow/geometry.hpp"

namespace kflow::ruled {

/// A space curve with its first two derivatives.
struct CurveJet {
  Vec3 p = Vec3::Zero();
  Vec3 d1 = Vec3::Zero();
  Vec3 d2 = Vec3::Zero();
};

using CurveFn = std::function<CurveJet(double)>;

struct RuledData {
  CurveFn gamma;                        ///< striction curve, unit speed
  CurveFn w;                            ///< unit ruling direction
  std::function<double(double)> lambda; ///< distribution parameter
};

/// det(gamma', w, w') / |w'|^2 at s. Errors: degenerate when w' = 0.
double distribution_parameter(const RuledData& data, double s);

/// Checks |gamma'| = 1, |w| = 1, w' != 0, <gamma', w'> = 0 (all to 1e-8)
/// and the stored lambda against the recomputed one (1e-6) on n samples of
/// [s0, s1]. Errors: degenerate (cylindrical ruling), invalid_argument.
void validate(const RuledData& data, double s0, double s1, int n = 33);

/// K = -lambda^2 / (lambda^2 + t^2)^2. Errors: degenerate at lambda = t = 0.
double ruled_gauss(double lambda, double t);

/// (lambda w' + t w' x w) / (|w'| sqrt(lambda^2 + t^2)).
Vec3 ruled_normal(const RuledData& data, double s, double t);

/// Analytic chart on (s, t); the normal agrees with ruled_normal.
/// Validates the data on the s-range first.
ParamSurface ruled_surface(const RuledData& data, ChartDomain chart);

/// The straight helicoid gamma(s) = (0, 0, s), w(s) = (cos(s/h), sin(s/h), 0),
/// with lambda = h. Errors: invalid_argument for h <= 0.
RuledData helicoid_ruled_data(double pitch);

/// Wronskian of {1, q^b, t q^b}, q = lambda^2 + t^2, b = (4 alpha - 1)/2:
/// (4 alpha - 1) q^(4 alpha - 3) (4 alpha t^2 - lambda^2).
double wronskian(double alpha, double lambda, double t);

/// Smallest eigenvalue of the Gram matrix of `functions` under the
/// trapezoid inner product on n uniform samples of [t0, t1].
/// Errors: invalid_argument (empty set, n < 2), degenerate (fewer than
/// three distinct samples).
double gram_min_eigenvalue(const std::vector<std::function<double(double)>>& functions,
                           double t0, double t1, int n);

/// gram_min_eigenvalue of {1, q^b, t q^b}. Errors: invalid_argument unless
/// alpha is a nonzero integer, lambda != 0 and n >= 16; degenerate as above.
double independence_probe(double alpha, double lambda, double t0, double t1, int n);

/// -(-1)^alpha lambda^(2 alpha) |w'| + (lambda <w', v> + (w', w, v) t) q^((4 alpha - 1)/2)
/// at (s, t). Zero for all t exactly when the ruled surface is a translator
/// along the ruling through s. Errors: invalid_argument for non-integer alpha.
double ruled_equation(const RuledData& data, const Vec3& v, double alpha, double s, double t);

/// Max |ruled_equation| over n uniform t-samples of [t0, t1] at fixed s.
double ruled_equation_residual(const RuledData& data, const Vec3& v, double alpha, double s,
                               double t0, double t1, int n);

}  // namespace kflow::ruled
