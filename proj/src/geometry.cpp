#include "kflow/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace kflow {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::out_of_domain: return "out of domain";
    case ErrorCode::non_finite: return "non-finite evaluation";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::empty_domain: return "empty domain";
    case ErrorCode::no_sign_change: return "no sign change";
    case ErrorCode::budget_exceeded: return "budget exceeded";
    case ErrorCode::all_points_skipped: return "all points skipped";
  }
  return "unknown";
}

bool is_finite(const Vec3& p) {
  return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}

bool SurfaceJet::finite() const {
  return is_finite(X) && is_finite(Xu) && is_finite(Xv) && is_finite(Xuu) &&
         is_finite(Xuv) && is_finite(Xvv);
}

SurfaceJet SurfaceJet::rotated(const Mat3& R) const {
  return {R * X, R * Xu, R * Xv, R * Xuu, R * Xuv, R * Xvv};
}

ParamSurface::ParamSurface(ChartDomain domain, JetFn jet, PositionFn position,
                           int orientation)
    : domain_(domain),
      jet_(std::move(jet)),
      position_(std::move(position)),
      orientation_(orientation >= 0 ? 1 : -1) {
  if (!(domain_.u0 < domain_.u1 && domain_.v0 < domain_.v1)) {
    throw Error(ErrorCode::invalid_argument, "chart domain must be a nonempty rectangle");
  }
  if (!jet_) throw Error(ErrorCode::invalid_argument, "analytic chart needs a jet evaluator");
  if (!position_) {
    position_ = [jet = jet_](double u, double v) { return jet(u, v).X; };
  }
}

ParamSurface ParamSurface::from_position(ChartDomain domain, PositionFn position,
                                         double step, int orientation) {
  if (!position) throw Error(ErrorCode::invalid_argument, "chart needs a position map");
  if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "difference step must be positive");
  ParamSurface s(domain, [](double, double) { return SurfaceJet{}; }, std::move(position),
                 orientation);
  s.jet_ = nullptr;
  s.mode_ = DerivativeMode::finite_difference;
  s.step_ = step;
  return s;
}

ParamSurface ParamSurface::with_finite_differences(double step) const {
  if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "difference step must be positive");
  ParamSurface s = *this;
  s.mode_ = DerivativeMode::finite_difference;
  s.step_ = step;
  return s;
}

ParamSurface ParamSurface::with_analytic_jets() const {
  if (!jet_) throw Error(ErrorCode::invalid_argument, "surface has no analytic jet evaluator");
  ParamSurface s = *this;
  s.mode_ = DerivativeMode::analytic;
  return s;
}

ParamSurface ParamSurface::reversed() const {
  ParamSurface s = *this;
  s.orientation_ = -orientation_;
  return s;
}

ParamSurface ParamSurface::rotated(const Mat3& R) const {
  ParamSurface s = *this;
  s.position_ = [R, p = position_](double u, double v) { return Vec3(R * p(u, v)); };
  if (jet_) {
    s.jet_ = [R, j = jet_](double u, double v) { return j(u, v).rotated(R); };
  }
  return s;
}

Vec3 ParamSurface::position(double u, double v) const {
  if (!domain_.contains(u, v)) {
    std::ostringstream os;
    os << "chart point (" << u << ", " << v << ") outside the chart domain";
    throw Error(ErrorCode::out_of_domain, os.str());
  }
  Vec3 p = position_(u, v);
  if (!is_finite(p)) throw Error(ErrorCode::non_finite, "non-finite chart position");
  return p;
}

namespace {

// Central differences on the 5-point cross (second derivatives along the
// axes) plus the 4 diagonal points for the mixed derivative. O(step^2).
SurfaceJet difference_jet(const ParamSurface::PositionFn& X, double u, double v,
                          double h) {
  const Vec3 c = X(u, v);
  const Vec3 pu = X(u + h, v), mu = X(u - h, v);
  const Vec3 pv = X(u, v + h), mv = X(u, v - h);
  const Vec3 pp = X(u + h, v + h), pm = X(u + h, v - h);
  const Vec3 mp = X(u - h, v + h), mm = X(u - h, v - h);
  SurfaceJet j;
  j.X = c;
  j.Xu = (pu - mu) / (2 * h);
  j.Xv = (pv - mv) / (2 * h);
  j.Xuu = (pu - 2 * c + mu) / (h * h);
  j.Xvv = (pv - 2 * c + mv) / (h * h);
  j.Xuv = (pp - pm - mp + mm) / (4 * h * h);
  return j;
}

}  // namespace

SurfaceJet jet_at(const ParamSurface& surface, double u, double v) {
  const ChartDomain& d = surface.domain_;
  if (!d.contains_open(u, v)) {
    std::ostringstream os;
    os << "chart point (" << u << ", " << v << ") outside the open chart domain ["
       << d.u0 << "," << d.u1 << "]x[" << d.v0 << "," << d.v1 << "]";
    throw Error(ErrorCode::out_of_domain, os.str());
  }
  SurfaceJet jet;
  if (surface.mode_ == DerivativeMode::analytic) {
    jet = surface.jet_(u, v);
  } else {
    const double h = surface.step_;
    if (!d.contains(u - h, v - h) || !d.contains(u + h, v + h)) {
      throw Error(ErrorCode::out_of_domain, "difference stencil leaves the chart domain");
    }
    jet = difference_jet(surface.position_, u, v, h);
  }
  if (!jet.finite()) {
    std::ostringstream os;
    os << "non-finite jet at (" << u << ", " << v << ")";
    throw Error(ErrorCode::non_finite, os.str());
  }
  return jet;
}

FormsAtPoint forms_at(const SurfaceJet& jet, int orientation) {
  FormsAtPoint f;
  f.E = jet.Xu.dot(jet.Xu);
  f.F = jet.Xu.dot(jet.Xv);
  f.G = jet.Xv.dot(jet.Xv);
  const Vec3 n = jet.Xu.cross(jet.Xv);
  const double area2 = f.E * f.G - f.F * f.F;
  const double nn = n.norm();
  if (!(area2 > 0.0) || !(nn > 0.0)) {
    throw Error(ErrorCode::degenerate, "degenerate jet: Xu x Xv vanishes");
  }
  f.normal = (orientation >= 0 ? 1.0 : -1.0) * n / nn;
  f.L = jet.Xuu.dot(f.normal);
  f.M = jet.Xuv.dot(f.normal);
  f.N2 = jet.Xvv.dot(f.normal);
  f.K = (f.L * f.N2 - f.M * f.M) / area2;
  return f;
}

TranslatorSpec::TranslatorSpec(double alpha, Vec3 speed) : alpha_(alpha), speed_(speed) {
  if (!std::isfinite(alpha) || alpha == 0.0) {
    throw Error(ErrorCode::invalid_argument, "alpha must be nonzero");
  }
  if (!is_finite(speed) || std::abs(speed.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_argument, "speed vector must be unit length");
  }
}

bool is_integer_exponent(double alpha) { return std::nearbyint(alpha) == alpha; }

std::optional<double> curvature_power(double K, double alpha) {
  if (K > 0.0) return std::pow(K, alpha);
  if (K == 0.0) {
    if (alpha > 0.0) return 0.0;
    return std::nullopt;
  }
  if (!is_integer_exponent(alpha)) return std::nullopt;
  return std::pow(K, alpha);  // exact sign for integral exponents
}

std::vector<double> cell_centres(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (static_cast<double>(i) + 0.5) * h;
  return out;
}

ResidualReport translator_residual(const ParamSurface& surface, const TranslatorSpec& spec,
                                   GridDims grid) {
  if (grid.nu < 2 || grid.nv < 2) {
    throw Error(ErrorCode::invalid_argument, "residual grid needs at least 2x2 points");
  }
  const auto us = cell_centres(surface.domain().u0, surface.domain().u1, grid.nu);
  const auto vs = cell_centres(surface.domain().v0, surface.domain().v1, grid.nv);

  ResidualReport report;
  report.grid = grid;
  report.residuals.assign(grid.nu * grid.nv, std::numeric_limits<double>::quiet_NaN());

  double sum = 0.0;
  std::size_t opposing = 0;
  for (std::size_t i = 0; i < grid.nu; ++i) {
    for (std::size_t j = 0; j < grid.nv; ++j) {
      const FormsAtPoint f = forms_at(jet_at(surface, us[i], vs[j]), surface.orientation());
      const std::optional<double> ka = curvature_power(f.K, spec.alpha());
      if (!ka) {
        report.skipped.push_back({us[i], vs[j]});
        continue;
      }
      const double nv = f.normal.dot(spec.speed());
      if (nv < 0.0) ++opposing;
      const double r = *ka - nv;
      report.residuals[i * grid.nv + j] = r;
      report.max_abs = std::max(report.max_abs, std::abs(r));
      sum += std::abs(r);
    }
  }
  const std::size_t n = report.evaluated();
  if (n == 0) {
    throw Error(ErrorCode::all_points_skipped, "K^alpha is undefined at every grid point");
  }
  report.mean_abs = sum / static_cast<double>(n);
  report.normal_opposes_speed = opposing == n;
  return report;
}

}  // namespace kflow
