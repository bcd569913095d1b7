#include "kflow/rotational.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kflow/error.hpp"

namespace kflow::rotational {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_half(double alpha) { return alpha == 0.5; }

void check_constants(double alpha, double m) {
  if (!std::isfinite(alpha) || alpha == 0.0) {
    throw Error(ErrorCode::invalid_argument, "alpha must be nonzero");
  }
  if (!std::isfinite(m)) throw Error(ErrorCode::invalid_argument, "m must be finite");
  if (is_half(alpha) && !(m > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "m > 0 required for alpha = 1/2");
  }
}

// (2a-1)/(2a), the r^2 coefficient inside the base m - c r^2.
double base_coefficient(double alpha) { return (2.0 * alpha - 1.0) / (2.0 * alpha); }

// 2a/(1-2a), the exponent of the base in f'^2 + 1.
double slope_exponent(double alpha) { return 2.0 * alpha / (1.0 - 2.0 * alpha); }

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

}  // namespace

double slope_squared(double alpha, double m, double r) {
  check_constants(alpha, m);
  if (is_half(alpha)) return std::expm1(r * r - std::log(m));
  const double c = base_coefficient(alpha);
  const double p = slope_exponent(alpha);
  const double base_minus_one = (m - 1.0) - c * r * r;
  const double base = 1.0 + base_minus_one;
  if (base > 0.0) return std::expm1(p * std::log1p(base_minus_one));
  if (base == 0.0) return p < 0.0 ? kInf : -1.0;
  return -kInf;
}

double slope_squared_derivative(double alpha, double m, double r) {
  check_constants(alpha, m);
  if (is_half(alpha)) return 2.0 * r * std::exp(r * r) / m;
  const double base = m - base_coefficient(alpha) * r * r;
  if (!(base > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * r * std::pow(base, slope_exponent(alpha) - 1.0);
}

Interval maximal_domain(double alpha, double m) {
  check_constants(alpha, m);
  Interval d;
  d.lo_closed = true;
  double lo_sq;
  if (is_half(alpha)) {
    lo_sq = std::log(m);
  } else {
    const double k = 2.0 * alpha / (2.0 * alpha - 1.0);
    lo_sq = k * (m - 1.0);
    if (alpha < 0.0 || alpha > 0.5) {
      if (!(m > 0.0)) {
        std::ostringstream os;
        os << "empty maximal domain: m > 0 required for alpha = " << alpha;
        throw Error(ErrorCode::empty_domain, os.str());
      }
      d.hi = std::sqrt(k * m);
      d.hi_closed = false;
      d.hi_kind = EndKind::slope_infinite;
    }
  }
  if (lo_sq >= 0.0) {
    d.lo = std::sqrt(lo_sq);
    d.lo_kind = EndKind::slope_zero;
  } else {
    d.lo = 0.0;  // negative radicand at the left end clamps to the axis
    d.lo_kind = EndKind::regular;
  }
  if (!d.bounded()) {
    d.hi_closed = false;
    d.hi_kind = EndKind::unbounded;
  }
  return d;
}

SlopeModel slope_model(double alpha, double m) {
  check_constants(alpha, m);
  SlopeModel model;
  model.slope_squared = [alpha, m](double r) { return slope_squared(alpha, m, r); };
  model.curvature = [alpha, m](double r) {
    const double s2 = slope_squared(alpha, m, r);
    if (s2 > 0.0) return slope_squared_derivative(alpha, m, r) / (2.0 * std::sqrt(s2));
    // f'^2 ~ r^2 near the axis when m = 1, so f'' -> 1 there.
    if (s2 == 0.0 && r == 0.0) return 1.0;
    return kInf;
  };
  return model;
}

ProfileCurve profile(const RotationalParams& params, const SamplingPolicy& sampling) {
  const Interval domain = maximal_domain(params.alpha, params.m);
  return ProfileCurve(ProfileFamily::rotational, params, domain,
                      slope_model(params.alpha, params.m), params.sign, params.c, sampling);
}

double closed_form_profile(double alpha, double m, double r) {
  auto outside = [&](const char* range) {
    std::ostringstream os;
    os << "r = " << r << " outside the validity range " << range << " of the alpha = " << alpha
       << " antiderivative";
    return Error(ErrorCode::out_of_domain, os.str());
  };
  if (near(alpha, 0.25)) {
    const double q = m + r * r - 1.0;
    if (r < 0.0 || q < 0.0) throw outside("r >= sqrt(max(0, 1-m))");
    if (m == 1.0) return 0.5 * r * r;
    return 0.5 * (r * std::sqrt(q) + (m - 1.0) * std::log(std::sqrt(q) + r));
  }
  if (!near(m, 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                "closed forms for alpha in {1/3, 1/6, 1} are available for m = 1 only");
  }
  if (near(alpha, 1.0 / 3.0)) {
    if (r < 0.0) throw outside("[0, inf)");
    return std::pow(4.0 + r * r, 1.5) / 6.0;
  }
  if (near(alpha, 1.0 / 6.0)) {
    if (r < 0.0) throw outside("[0, inf)");
    if (r == 0.0) return -2.0 / 3.0;
    const double w = std::sqrt(2.0 * r * r + 1.0);
    return std::sqrt(w - 1.0) * (2.0 * r * r - w - 1.0) / (3.0 * r);
  }
  if (near(alpha, 1.0)) {
    if (r < 0.0 || r >= 2.0 || r == std::numbers::sqrt2) throw outside("[0, 2) minus sqrt(2)");
    const double s = std::sqrt(4.0 - r * r);
    const double x = s / std::numbers::sqrt2;
    // inverse hyperbolic tangent continued to |x| > 1 through the logarithm
    return -s + std::numbers::sqrt2 * 0.5 * std::log(std::abs((x + 1.0) / (x - 1.0)));
  }
  std::ostringstream os;
  os << "no closed-form antiderivative for alpha = " << alpha;
  throw Error(ErrorCode::invalid_argument, os.str());
}

ProfileCurve orthogonal_profile(double alpha, const SamplingPolicy& sampling) {
  if (!std::isfinite(alpha) || alpha == 0.0) {
    throw Error(ErrorCode::invalid_argument, "alpha must be nonzero");
  }
  return profile(RotationalParams{alpha, 1.0, Branch::plus, 0.0}, sampling);
}

Asymptote asymptotic_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorCode::invalid_argument, "asymptotics need alpha in (0, 1/2)");
  }
  const double one_minus = 1.0 - 2.0 * alpha;
  return {1.0 / one_minus,
          one_minus * std::pow(one_minus / (2.0 * alpha), alpha / one_minus)};
}

ParamSurface revolve(const ProfileCurve& profile) {
  const ChartDomain chart{profile.r_first(), profile.r_last(), 0.0, 2.0 * std::numbers::pi};
  auto jet = [profile](double r, double theta) {
    const ProfileSample s = profile.at(r);
    const double c = std::cos(theta), sn = std::sin(theta);
    SurfaceJet j;
    j.X = {r * c, r * sn, s.f};
    j.Xu = {c, sn, s.fp};
    j.Xv = {-r * sn, r * c, 0.0};
    j.Xuu = {0.0, 0.0, s.fpp};
    j.Xuv = {-sn, c, 0.0};
    j.Xvv = {-r * c, -r * sn, 0.0};
    return j;
  };
  auto position = [profile](double r, double theta) {
    return Vec3(r * std::cos(theta), r * std::sin(theta), profile.height(r));
  };
  return ParamSurface(chart, jet, position, profile.orientation());
}

double gauss_curvature(double r, double fp, double fpp) {
  const double w = 1.0 + fp * fp;
  if (r == 0.0) return fpp * fpp / (w * w);
  return fp * fpp / (r * w * w);
}

std::vector<AxisCoefficients> axis_obstruction(const ProfileCurve& profile, const Vec3& v) {
  const double alpha = std::get<RotationalParams>(profile.params()).alpha;
  std::vector<AxisCoefficients> out;
  out.reserve(profile.samples().size());
  for (const ProfileSample& s : profile.samples()) {
    const double inv = 1.0 / std::sqrt(1.0 + s.fp * s.fp);
    const auto ka = curvature_power(gauss_curvature(s.r, s.fp, s.fpp), alpha);
    AxisCoefficients a;
    a.r = s.r;
    a.A0 = ka ? *ka - v.z() * inv : std::numeric_limits<double>::quiet_NaN();
    a.A1 = v.x() * s.fp * inv;
    a.A2 = v.y() * s.fp * inv;
    out.push_back(a);
  }
  return out;
}

}  // namespace kflow::rotational
