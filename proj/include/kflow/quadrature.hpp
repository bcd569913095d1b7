#pragma once

// Adaptive integration of profile slopes and bracketed root finding.

#include <cstddef>
#include <functional>
#include <optional>

namespace kflow {

using ScalarFn = std::function<double(double)>;

enum class EndKind { regular, slope_zero, slope_infinite, unbounded };

const char* to_string(EndKind kind);

/// A real interval with endpoint classification. An unbounded upper end has
/// no value (hi == nullopt) and kind EndKind::unbounded.
struct Interval {
  double lo = 0.0;
  std::optional<double> hi;
  bool lo_closed = true;
  bool hi_closed = false;
  EndKind lo_kind = EndKind::regular;
  EndKind hi_kind = EndKind::unbounded;

  bool bounded() const { return hi.has_value(); }
  bool contains(double r) const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_evaluations = 1'000'000;
};

/// Adaptive Gauss-Kronrod (7/15) bisection. The rule never samples the
/// interval ends, so integrable end singularities are admitted.
/// Errors: invalid_argument (a >= b), non_finite, budget_exceeded.
QuadratureResult integrate(const ScalarFn& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Convenience overload with a relative tolerance.
QuadratureResult integrate(const ScalarFn& f, double a, double b, double rel_tol);

/// Integral towards an end where the integrand blows up (slope-infinite ends).
/// Integrates on [a, b - delta] with delta halved until the extrapolated
/// tail drops below tolerance, or caps at delta_min when the increments stop
/// contracting (divergent integral).
struct SingularEndResult {
  double value = 0.0;          ///< integral on [a, b - delta] (+ tail when converged)
  double tail_estimate = 0.0;  ///< extrapolated remainder on [b - delta, b]
  double delta = 0.0;          ///< last cut-off distance from b
  bool converged = false;      ///< false: the integral diverges or hit the cap
  std::size_t evaluations = 0;
};

SingularEndResult integrate_to_singular_end(const ScalarFn& f, double a, double b,
                                            const QuadratureOptions& options = {},
                                            double delta_min_fraction = 1e-13);

/// Root of g in [lo, hi] with a sign change, to a bracket width <= tol.
/// Errors: no_sign_change, non_finite, invalid_argument.
double bracket_root(const ScalarFn& g, double lo, double hi, double tol = 1e-13);

/// Final bracket of a root search, for callers that need the residual bound.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double root() const { return 0.5 * (lo + hi); }
};

RootBracket bracket_root_interval(const ScalarFn& g, double lo, double hi, double tol = 1e-13);

}  // namespace kflow
