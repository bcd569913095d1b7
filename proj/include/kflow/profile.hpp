#pragma once

// Sampled generating curves z = f(r) whose slope is known through
// f'(r)^2 = S(r). Rotational and helicoidal translators share this type.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kflow/quadrature.hpp"

namespace kflow {

enum class Branch { plus, minus };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

struct RotationalParams {
  double alpha = 0.25;
  double m = 1.0;
  Branch sign = Branch::plus;
  double c = 0.0;  ///< value of f at the integration anchor
};

struct HelicoidalParams {
  double alpha = 0.25;
  double m = 0.0;
  double h = 1.0;  ///< pitch
  Branch sign = Branch::plus;
  double c = 0.0;
};

using ProfileParams = std::variant<RotationalParams, HelicoidalParams>;

enum class ProfileFamily { rotational, helicoidal };

const char* to_string(ProfileFamily family);

struct ProfileSample {
  double r = 0, f = 0, fp = 0, fpp = 0;
};

/// How to place the r-samples of a profile.
struct SamplingPolicy {
  std::size_t count = 201;
  std::optional<double> r_min;
  std::optional<double> r_max;
  /// Sampled span when the domain is unbounded and r_max is not given.
  double unbounded_span = 5.0;
  /// Relative pull-in (times the domain width) from ends where f' or f''
  /// blow up.
  double end_margin = 1e-3;
};

/// Slope data of a generating curve, as functions of r on the domain.
struct SlopeModel {
  /// S(r) = f'(r)^2; negative or -inf outside the admissible set.
  std::function<double(double)> slope_squared;
  /// f'' for the + branch, including the one-sided limits at slope-zero ends.
  std::function<double(double)> curvature;
};

class ProfileCurve {
 public:
  /// Builds the sampled curve. The anchor is the point where f = params.c:
  /// the closed lower end when there is one, otherwise the closed upper end.
  /// Errors: empty_domain, out_of_domain (sampling outside the domain),
  /// budget_exceeded (quadrature).
  ProfileCurve(ProfileFamily family, ProfileParams params, Interval domain, SlopeModel model,
               Branch sign, double anchor_value, const SamplingPolicy& sampling,
               int orientation = 1);

  ProfileFamily family() const { return family_; }
  const ProfileParams& params() const { return params_; }
  const Interval& domain() const { return domain_; }
  Branch sign() const { return sign_; }
  /// +1 when the translator equation holds for the chart's natural normal,
  /// -1 when it holds for the reversed one.
  int orientation() const { return orientation_; }
  double anchor() const { return anchor_r_; }

  std::span<const ProfileSample> samples() const { return samples_; }
  double r_first() const { return samples_.front().r; }
  double r_last() const { return samples_.back().r; }

  /// Point evaluations anywhere in the domain. Errors: out_of_domain.
  double slope(double r) const;
  double curvature(double r) const;
  double height(double r) const;
  ProfileSample at(double r) const;

  /// Integral of |f'| from the anchor towards a slope-infinite upper end:
  /// the finite limit of f there, or nullopt when f diverges.
  std::optional<double> upper_end_height() const;

 private:
  void require_in_domain(double r) const;

  ProfileFamily family_;
  ProfileParams params_;
  Interval domain_;
  std::shared_ptr<const SlopeModel> model_;
  Branch sign_;
  double anchor_r_ = 0.0;
  double anchor_value_ = 0.0;
  int orientation_ = 1;
  std::vector<ProfileSample> samples_;
};

/// r positions chosen by a sampling policy for a given domain and slope
/// model (exposed for tests and the CLI).
std::vector<double> sample_positions(const Interval& domain, const SlopeModel& model,
                                     const SamplingPolicy& sampling);

}  // namespace kflow
