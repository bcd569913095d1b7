#pragma once

// Differential-geometry primitives for parametrized surfaces: jets, the two
// fundamental forms, Gauss curvature, unit normal and the translator residual
// K^alpha - <N, v>.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kflow/error.hpp"

namespace kflow {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

bool is_finite(const Vec3& p);

/// Position and partial derivatives up to second order at one chart point.
struct SurfaceJet {
  Vec3 X = Vec3::Zero();
  Vec3 Xu = Vec3::Zero();
  Vec3 Xv = Vec3::Zero();
  Vec3 Xuu = Vec3::Zero();
  Vec3 Xuv = Vec3::Zero();
  Vec3 Xvv = Vec3::Zero();

  bool finite() const;
  /// Applies x -> R x to every component (R orthogonal).
  SurfaceJet rotated(const Mat3& R) const;
};

/// Closed rectangle [u0,u1] x [v0,v1] of chart coordinates.
struct ChartDomain {
  double u0 = 0.0, u1 = 1.0;
  double v0 = 0.0, v1 = 1.0;

  bool contains(double u, double v) const {
    return u >= u0 && u <= u1 && v >= v0 && v <= v1;
  }
  bool contains_open(double u, double v) const {
    return u > u0 && u < u1 && v > v0 && v < v1;
  }
};

enum class DerivativeMode { analytic, finite_difference };

/// A rectangular chart X(u,v). Jets come either from an analytic evaluator or
/// from central differences of the position map.
///
/// The orientation flag selects the unit normal: +1 gives Xu x Xv / |Xu x Xv|,
/// -1 the opposite side. Some translator families (odd integer exponents with
/// negative curvature branches) solve the equation only for the reversed side.
class ParamSurface {
 public:
  using PositionFn = std::function<Vec3(double, double)>;
  using JetFn = std::function<SurfaceJet(double, double)>;

  static constexpr double kDefaultStep = 1e-4;

  /// Analytic chart; `position` may be omitted and is then taken from `jet`.
  ParamSurface(ChartDomain domain, JetFn jet, PositionFn position = {},
               int orientation = 1);

  /// Position-only chart, always evaluated by finite differences.
  static ParamSurface from_position(ChartDomain domain, PositionFn position,
                                    double step = kDefaultStep,
                                    int orientation = 1);

  const ChartDomain& domain() const { return domain_; }
  DerivativeMode mode() const { return mode_; }
  double step() const { return step_; }
  int orientation() const { return orientation_; }
  bool has_analytic_jet() const { return static_cast<bool>(jet_); }

  /// Copy that evaluates jets by central differences with the given step.
  ParamSurface with_finite_differences(double step = kDefaultStep) const;
  /// Copy using the analytic evaluator; throws if there is none.
  ParamSurface with_analytic_jets() const;
  /// Copy with the unit normal flipped.
  ParamSurface reversed() const;
  /// The image of the surface under the rotation R (R orthogonal, det 1).
  ParamSurface rotated(const Mat3& R) const;

  /// Position on the closed chart domain.
  Vec3 position(double u, double v) const;

 private:
  friend SurfaceJet jet_at(const ParamSurface&, double, double);

  ChartDomain domain_;
  JetFn jet_;
  PositionFn position_;
  DerivativeMode mode_ = DerivativeMode::analytic;
  double step_ = kDefaultStep;
  int orientation_ = 1;
};

/// Jet at an interior chart point. Errors: out_of_domain, non_finite.
SurfaceJet jet_at(const ParamSurface& surface, double u, double v);

struct FormsAtPoint {
  double E = 0, F = 0, G = 0;
  double L = 0, M = 0, N2 = 0;
  double K = 0;
  Vec3 normal = Vec3::UnitZ();
};

/// First and second fundamental forms of a regular jet. `orientation` = -1
/// flips the normal (and with it L, M, N2; K is unchanged).
/// Errors: degenerate (EG - F^2 <= 0).
FormsAtPoint forms_at(const SurfaceJet& jet, int orientation = 1);

/// Exponent alpha != 0 and unit speed vector.
class TranslatorSpec {
 public:
  /// Errors: invalid_argument when alpha == 0 or |speed| != 1 (1e-12).
  TranslatorSpec(double alpha, Vec3 speed);

  double alpha() const { return alpha_; }
  const Vec3& speed() const { return speed_; }

 private:
  double alpha_;
  Vec3 speed_;
};

bool is_integer_exponent(double alpha);

/// Sign-aware power K^alpha. Negative K is admitted only for integer alpha;
/// K = 0 maps to 0 for alpha > 0 and is undefined for alpha < 0.
std::optional<double> curvature_power(double K, double alpha);

struct GridDims {
  std::size_t nu = 0;
  std::size_t nv = 0;
};

struct ChartPoint {
  double u = 0;
  double v = 0;
};

struct ResidualReport {
  GridDims grid;
  /// Row-major nu x nv; NaN marks a skipped point.
  std::vector<double> residuals;
  double max_abs = 0;
  double mean_abs = 0;
  std::vector<ChartPoint> skipped;
  /// True when <N, v> < 0 at every evaluated point (orientation suspect).
  bool normal_opposes_speed = false;

  double at(std::size_t i, std::size_t j) const { return residuals[i * grid.nv + j]; }
  std::size_t evaluated() const { return residuals.size() - skipped.size(); }
};

/// Cell-centred sample of a chart: u_i = u0 + (i + 1/2)(u1 - u0)/nu.
std::vector<double> cell_centres(double lo, double hi, std::size_t n);

/// K^alpha - <N, v> on an nu x nv cell-centred grid.
/// Errors: invalid_argument (n < 2), all_points_skipped, and whatever jet_at
/// or forms_at raise on a sampled point.
ResidualReport translator_residual(const ParamSurface& surface,
                                   const TranslatorSpec& spec, GridDims grid);

}  // namespace kflow
