#include "kflow/helicoidal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kflow/error.hpp"

namespace kflow::helicoidal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

void check_alpha_m(double alpha, double m) {
  if (!std::isfinite(alpha) || alpha == 0.0) {
    throw Error(ErrorCode::invalid_argument, "alpha must be nonzero");
  }
  if (!std::isfinite(m)) throw Error(ErrorCode::invalid_argument, "m must be finite");
  if (alpha == 0.5 && !(m > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "m > 0 required for alpha = 1/2");
  }
}

void check(const HelicoidalParams& p) {
  check_alpha_m(p.alpha, p.m);
  if (!std::isfinite(p.h) || p.h == 0.0) {
    throw Error(ErrorCode::invalid_argument, "pitch h must be nonzero");
  }
}

// x^e with a negative x admitted only for integer e.
double signed_pow(double x, double e) {
  if (x > 0.0) return std::pow(x, e);
  if (x == 0.0) return e > 0.0 ? 0.0 : (e == 0.0 ? 1.0 : kInf);
  if (is_integer_exponent(e)) return std::pow(x, std::round(e));
  return kNaN;
}

// 2a/(1-2a)
double slope_exponent(double alpha) { return 2.0 * alpha / (1.0 - 2.0 * alpha); }

// a/(1-2a)
double sigma_exponent(double alpha) { return alpha / (1.0 - 2.0 * alpha); }

// (2a-1)/(2a)
double bour_coefficient(double alpha) { return (2.0 * alpha - 1.0) / (2.0 * alpha); }

bool admissible(double s) { return s >= 0.0; }

struct Edge {
  double x = 0;
  bool closed = true;
  EndKind kind = EndKind::slope_zero;
};

// Boundary of the admissible set between an admissible point `in` and a
// non-admissible point `out`.
Edge locate_edge(const ScalarFn& S, double in, double out) {
  if (std::isfinite(S(out))) {
    return {bracket_root(S, std::min(in, out), std::max(in, out)), true, EndKind::slope_zero};
  }
  // S undefined at `out`: find where it stops being finite.
  double a = in, b = out;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    (std::isfinite(S(mid)) ? a : b) = mid;
  }
  if (admissible(S(a))) return {b, false, EndKind::slope_infinite};
  return {bracket_root(S, std::min(in, a), std::max(in, a)), true, EndKind::slope_zero};
}

// First admissible run of S over the increasing points xs.
Interval scan_run(const ScalarFn& S, const std::vector<double>& xs, double open_lo) {
  std::size_t i = 0;
  while (i < xs.size() && !admissible(S(xs[i]))) ++i;
  if (i == xs.size()) {
    throw Error(ErrorCode::empty_domain, "no admissible region found in the scan range");
  }
  std::size_t j = i;
  while (j + 1 < xs.size() && admissible(S(xs[j + 1]))) ++j;

  Interval d;
  if (i == 0) {
    d.lo = open_lo;
    d.lo_closed = false;
    d.lo_kind = EndKind::slope_infinite;
  } else {
    const Edge e = locate_edge(S, xs[i], xs[i - 1]);
    d.lo = e.x;
    d.lo_closed = e.closed;
    d.lo_kind = e.kind;
  }
  if (j + 1 == xs.size()) {
    d.hi.reset();
    d.hi_closed = false;
    d.hi_kind = EndKind::unbounded;
  } else {
    const Edge e = locate_edge(S, xs[j], xs[j + 1]);
    d.hi = e.x;
    d.hi_closed = e.closed;
    d.hi_kind = e.kind;
  }
  return d;
}

std::vector<double> log_points(double offset, const ScanOptions& scan) {
  if (!(scan.scan_lo > 0.0 && scan.scan_lo < scan.scan_hi) || scan.points < 2) {
    throw Error(ErrorCode::invalid_argument, "invalid scan range");
  }
  std::vector<double> xs(scan.points);
  const double l0 = std::log(scan.scan_lo), l1 = std::log(scan.scan_hi);
  for (std::size_t k = 0; k < scan.points; ++k) {
    xs[k] = offset + std::exp(l0 + (l1 - l0) * static_cast<double>(k) /
                                       static_cast<double>(scan.points - 1));
  }
  return xs;
}

// Curvature as the + branch f'' = S'/(2 sqrt S).
double plus_curvature(double s2, double ds2) {
  if (s2 > 0.0) return ds2 / (2.0 * std::sqrt(s2));
  return kInf;
}

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

}  // namespace

double base(const HelicoidalParams& p, double r) {
  check(p);
  if (p.alpha == 0.5) return p.m * std::exp(r * r);
  return -bour_coefficient(p.alpha) * r * r + p.m;
}

double slope_squared(const HelicoidalParams& p, double r) {
  check(p);
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "helicoidal slope needs r > 0");
  const double hr = p.h * p.h / (r * r);
  if (p.alpha == 0.5) return p.m * std::exp(r * r) - hr - 1.0;
  const double power = signed_pow(base(p, r), slope_exponent(p.alpha));
  if (std::isnan(power)) return -kInf;
  return power - hr - 1.0;
}

double slope_squared_derivative(const HelicoidalParams& p, double r) {
  check(p);
  const double tail = 2.0 * p.h * p.h / (r * r * r);
  if (p.alpha == 0.5) return 2.0 * r * p.m * std::exp(r * r) + tail;
  return 2.0 * r * signed_pow(base(p, r), slope_exponent(p.alpha) - 1.0) + tail;
}

Interval domain(const HelicoidalParams& p, const ScanOptions& scan) {
  check(p);
  const ScalarFn S = [p](double r) { return slope_squared(p, r); };
  return scan_run(S, log_points(0.0, scan), 0.0);
}

int orientation(const HelicoidalParams& p, const Interval& d) {
  const double probe = d.bounded() ? 0.5 * (d.lo + *d.hi) : d.lo + 1.0;
  return sign_of(base(p, probe));
}

ProfileCurve profile(const HelicoidalParams& p, const SamplingPolicy& sampling,
                     const ScanOptions& scan) {
  const Interval d = domain(p, scan);
  SlopeModel model;
  model.slope_squared = [p](double r) { return slope_squared(p, r); };
  model.curvature = [p](double r) {
    if (!(r > 0.0)) return kInf;
    return plus_curvature(slope_squared(p, r), slope_squared_derivative(p, r));
  };
  return ProfileCurve(ProfileFamily::helicoidal, p, d, std::move(model), p.sign, p.c, sampling,
                      orientation(p, d));
}

ParamSurface helicoid_surface(const ProfileCurve& profile) {
  const double h = std::get<HelicoidalParams>(profile.params()).h;
  const ChartDomain chart{profile.r_first(), profile.r_last(), 0.0, 2.0 * std::numbers::pi};
  auto jet = [profile, h](double r, double theta) {
    const ProfileSample s = profile.at(r);
    const double c = std::cos(theta), sn = std::sin(theta);
    SurfaceJet j;
    j.X = {r * c, r * sn, s.f + h * theta};
    j.Xu = {c, sn, s.fp};
    j.Xv = {-r * sn, r * c, h};
    j.Xuu = {0.0, 0.0, s.fpp};
    j.Xuv = {-sn, c, 0.0};
    j.Xvv = {-r * c, -r * sn, 0.0};
    return j;
  };
  auto position = [profile, h](double r, double theta) {
    return Vec3(r * std::cos(theta), r * std::sin(theta), profile.height(r) + h * theta);
  };
  return ParamSurface(chart, jet, position, profile.orientation());
}

double gauss_curvature(double r, double fp, double fpp, double h) {
  const double D = r * r * (1.0 + fp * fp) + h * h;
  return (r * r * r * fp * fpp - h * h) / (D * D);
}

double residual(const ProfileSample& s, double h, double alpha, int orientation) {
  const double D = s.r * s.r * (1.0 + s.fp * s.fp) + h * h;
  const auto ka = curvature_power(gauss_curvature(s.r, s.fp, s.fpp, h), alpha);
  if (!ka) return kNaN;
  return *ka - orientation * s.r / std::sqrt(D);
}

std::vector<AxisCoefficients> axis_obstruction(const ProfileCurve& profile, const Vec3& v) {
  const auto& p = std::get<HelicoidalParams>(profile.params());
  const double o = profile.orientation();
  std::vector<AxisCoefficients> out;
  out.reserve(profile.samples().size());
  for (const ProfileSample& s : profile.samples()) {
    const double rf = s.r * s.fp;
    const double sqD = std::sqrt(s.r * s.r * (1.0 + s.fp * s.fp) + p.h * p.h);
    const auto ka = curvature_power(gauss_curvature(s.r, s.fp, s.fpp, p.h), p.alpha);
    AxisCoefficients a;
    a.r = s.r;
    a.A0 = ka ? *ka - o * v.z() * s.r / sqD : kNaN;
    a.A1 = o * (v.x() * rf + v.y() * p.h) / sqD;
    a.A2 = -o * (v.x() * p.h - v.y() * rf) / sqD;
    a.v2_combination = p.h * a.A1 + rf * a.A2;
    out.push_back(a);
  }
  return out;
}

double bour_sigma(double alpha, double m, double U) {
  check_alpha_m(alpha, m);
  if (alpha == 0.5) return std::exp(0.5 * U * U) / m;
  return signed_pow(m - bour_coefficient(alpha) * U * U, sigma_exponent(alpha));
}

double bour_P(double alpha, double m, double U) { return 1.0 / bour_sigma(alpha, m, U); }

namespace {

// sigma'/sigma
double bour_log_sigma_prime(double alpha, double m, double U) {
  if (alpha == 0.5) return U;
  const double c = bour_coefficient(alpha);
  return sigma_exponent(alpha) * (-2.0 * c * U) / (m - c * U * U);
}

}  // namespace

double bour_K(double alpha, double m, double U) {
  const double P = bour_P(alpha, m, U);
  return bour_log_sigma_prime(alpha, m, U) * P * P / U;
}

double bour_s_of_U(double alpha, double m, double U) {
  check_alpha_m(alpha, m);
  if (!std::isfinite(U)) throw Error(ErrorCode::invalid_argument, "U must be finite");
  const double sigma = bour_sigma(alpha, m, U);
  if (!std::isfinite(sigma)) {
    std::ostringstream os;
    os << "ds/dU undefined at U = " << U << " (alpha = " << alpha << ", m = " << m << ")";
    throw Error(ErrorCode::out_of_domain, os.str());
  }
  if (near(alpha, 0.25)) {
    const double q = std::sqrt(m + U * U);
    if (m == 0.0) return 0.5 * U * U;
    return 0.5 * (U * q + m * std::log(std::abs(U + q)));
  }
  if (near(alpha, 1.0 / 3.0)) return m * U + U * U * U / 6.0;
  if (near(alpha, 1.0)) {
    if (m == 0.0) return 2.0 / U;
    if (m > 0.0) {
      const double x = U / std::sqrt(2.0 * m);
      // artanh, continued past |x| = 1 through the logarithm
      return std::sqrt(2.0 / m) * 0.5 * std::log(std::abs((1.0 + x) / (1.0 - x)));
    }
    return -std::sqrt(2.0 / -m) * std::atan(U / std::sqrt(-2.0 * m));
  }
  if (alpha != 0.5 && m == 0.0) {
    // sigma = (-c U^2)^n integrates to (-c)^n U^{2n+1}/(2n+1)
    const double n = sigma_exponent(alpha);
    return signed_pow(-bour_coefficient(alpha), n) * std::pow(std::abs(U), 2.0 * n + 1.0) *
           (U < 0.0 ? -1.0 : 1.0) / (2.0 * n + 1.0);
  }
  double anchor = 0.0;
  if (!std::isfinite(bour_sigma(alpha, m, 0.0))) {
    anchor = std::sqrt(m / bour_coefficient(alpha));  // zero of the base
  }
  auto integrand = [alpha, m](double u) { return bour_sigma(alpha, m, u); };
  if (U == anchor) return 0.0;
  if (U > anchor) return integrate(integrand, anchor, U).value;
  return -integrate(integrand, U, anchor).value;
}

double bour_U_of_s_alpha_one(double m, double s) {
  if (!(m > 0.0)) throw Error(ErrorCode::invalid_argument, "inverse needs m > 0");
  return std::sqrt(2.0 * m) * std::tanh(std::sqrt(0.5 * m) * s);
}

double bour_constant_from_direct(double alpha, double m_direct, double h) {
  check_alpha_m(alpha, m_direct);
  if (alpha == 0.5) return std::exp(0.5 * h * h) / std::sqrt(m_direct);
  return m_direct + bour_coefficient(alpha) * h * h;
}

double bour_radicand(const HelicoidalParams& p, double U) {
  check(p);
  const double P = bour_P(p.alpha, p.m, U);
  if (std::isnan(P)) return -kInf;
  return U * U * (1.0 - P * P) - p.h * p.h;
}

Interval bour_range(const HelicoidalParams& p, const ScanOptions& scan) {
  check(p);
  const double h = std::abs(p.h);
  const ScalarFn R = [p, h](double U) {
    if (!(U > h)) return -kInf;
    return bour_radicand(p, U);
  };
  return scan_run(R, log_points(h, scan), h);
}

namespace {

double bour_df(const HelicoidalParams& p, double U) {
  const double sigma = bour_sigma(p.alpha, p.m, U);
  const double R = std::max(0.0, bour_radicand(p, U));
  return branch_sign(p.sign) * U * std::sqrt(R) * sigma / (U * U - p.h * p.h);
}

double bour_ddf(const HelicoidalParams& p, double U) {
  const double F1 = bour_df(p, U);
  const double R = bour_radicand(p, U);
  if (!(R > 0.0)) return kInf;
  const double ls = bour_log_sigma_prime(p.alpha, p.m, U);
  const double P = bour_P(p.alpha, p.m, U);
  const double dR = 2.0 * U * (1.0 - P * P) + 2.0 * U * U * P * P * ls;
  const double w = U * U - p.h * p.h;
  return F1 * (1.0 / U - 2.0 * U / w + dR / (2.0 * R) + ls);
}

}  // namespace

BourChart::BourChart(const HelicoidalParams& p, const SamplingPolicy& sampling,
                     const ScanOptions& scan)
    : params_(p), range_(bour_range(p, scan)) {
  SlopeModel model;
  model.slope_squared = [p](double U) {
    const double F1 = bour_df(p, U);
    return F1 * F1;
  };
  model.curvature = [p](double U) { return bour_ddf(p, U); };
  const auto Us = sample_positions(range_, model, sampling);
  const double probe = range_.bounded() ? 0.5 * (range_.lo + *range_.hi) : range_.lo + 1.0;
  orientation_ = sign_of(bour_sigma(p.alpha, p.m, probe));

  double anchor;
  if (range_.lo_closed) {
    anchor = range_.lo;
  } else if (range_.bounded() && range_.hi_closed) {
    anchor = *range_.hi;
  } else {
    anchor = Us.front();
  }
  auto piece = [this](double a, double b, bool theta) {
    if (a == b) return 0.0;
    auto g = [this, theta](double U) {
      const double d = bour_df(params_, U);
      return theta ? params_.h * d / (U * U) : d;
    };
    if (a < b) return integrate(g, a, b).value;
    return -integrate(g, b, a).value;
  };
  std::size_t k = 0;
  for (std::size_t i = 1; i < Us.size(); ++i) {
    if (std::abs(Us[i] - anchor) < std::abs(Us[k] - anchor)) k = i;
  }
  samples_.resize(Us.size());
  for (std::size_t i = 0; i < Us.size(); ++i) {
    samples_[i].U = Us[i];
    samples_[i].s = bour_s_of_U(p.alpha, p.m, Us[i]);
  }
  samples_[k].f = piece(anchor, Us[k], false);
  samples_[k].Theta = piece(anchor, Us[k], true);
  for (std::size_t i = k + 1; i < Us.size(); ++i) {
    samples_[i].f = samples_[i - 1].f + piece(Us[i - 1], Us[i], false);
    samples_[i].Theta = samples_[i - 1].Theta + piece(Us[i - 1], Us[i], true);
  }
  for (std::size_t i = k; i-- > 0;) {
    samples_[i].f = samples_[i + 1].f - piece(Us[i], Us[i + 1], false);
    samples_[i].Theta = samples_[i + 1].Theta - piece(Us[i], Us[i + 1], true);
  }
}

double BourChart::df(double U) const { return bour_df(params_, U); }

double BourChart::ddf(double U) const { return bour_ddf(params_, U); }

double BourChart::integral_from_samples(double U, bool theta) const {
  if (!range_.contains(U)) {
    std::ostringstream os;
    os << "U = " << U << " outside the Bour range";
    throw Error(ErrorCode::out_of_domain, os.str());
  }
  auto it = std::lower_bound(samples_.begin(), samples_.end(), U,
                             [](const BourSample& s, double x) { return s.U < x; });
  const BourSample* b;
  if (it == samples_.end()) {
    b = &samples_.back();
  } else if (it == samples_.begin()) {
    b = &samples_.front();
  } else {
    b = (U - std::prev(it)->U <= it->U - U) ? &*std::prev(it) : &*it;
  }
  const double start = theta ? b->Theta : b->f;
  if (b->U == U) return start;
  auto g = [this, theta](double x) {
    const double d = bour_df(params_, x);
    return theta ? params_.h * d / (x * x) : d;
  };
  return start + (b->U < U ? integrate(g, b->U, U).value : -integrate(g, U, b->U).value);
}

double BourChart::f(double U) const { return integral_from_samples(U, false); }

double BourChart::theta(double U) const { return integral_from_samples(U, true); }

ParamSurface BourChart::surface() const {
  const ChartDomain chart{samples_.front().U, samples_.back().U, 0.0, 2.0 * std::numbers::pi};
  const BourChart self = *this;
  auto jet = [self](double U, double t) {
    const double h = self.params_.h;
    const double r = std::sqrt(U * U - h * h);
    const double r1 = U / r, r2 = -h * h / (r * r * r);
    const double F1 = self.df(U), F2 = self.ddf(U);
    const double T1 = h * F1 / (U * U);
    const double T2 = h * (F2 / (U * U) - 2.0 * F1 / (U * U * U));
    const double phi = t - self.theta(U);
    const double pu = -T1, puu = -T2;
    const Vec3 e(std::cos(phi), std::sin(phi), 0.0);
    const Vec3 ep(-std::sin(phi), std::cos(phi), 0.0);
    const Vec3 e3(0.0, 0.0, 1.0);
    SurfaceJet j;
    j.X = r * e + (self.f(U) + h * phi) * e3;
    j.Xu = r1 * e + r * pu * ep + (F1 + h * pu) * e3;
    j.Xv = r * ep + h * e3;
    j.Xuu = (r2 - r * pu * pu) * e + (2.0 * r1 * pu + r * puu) * ep + (F2 + h * puu) * e3;
    j.Xuv = r1 * ep - r * pu * e;
    j.Xvv = -r * e;
    return j;
  };
  auto position = [self](double U, double t) {
    const double h = self.params_.h;
    const double r = std::sqrt(U * U - h * h);
    const double phi = t - self.theta(U);
    return Vec3(r * std::cos(phi), r * std::sin(phi), self.f(U) + h * phi);
  };
  return ParamSurface(chart, jet, position, orientation_);
}

}  // namespace kflow::helicoidal
