#include "kflow/translation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "kflow/error.hpp"

namespace kflow::translation {

const char* to_string(TranslationCase c) {
  switch (c) {
    case TranslationCase::additive_v3: return "additive-v3";
    case TranslationCase::additive_v2: return "additive-v2";
    case TranslationCase::graph_xz: return "graph-xz";
    case TranslationCase::homothetical: return "homothetical";
  }
  return "unknown";
}

namespace {

constexpr double kClip = 1e-3;

Error invalid(const std::string& what) { return Error(ErrorCode::invalid_argument, what); }

void check_chart(const ChartDomain& c) {
  if (!(c.u0 < c.u1 && c.v0 < c.v1) || !std::isfinite(c.u0 + c.u1 + c.v0 + c.v1)) {
    throw invalid("chart ranges must be finite with lo < hi");
  }
}

// Restrict [lo, hi] to {u(t) >= clip} for u affine in t with slope k.
void clip_affine(double& lo, double& hi, double u_at_zero, double k, const char* name) {
  const double edge = (kClip - u_at_zero) / k;
  if (k > 0.0) lo = std::max(lo, edge);
  else hi = std::min(hi, edge);
  if (!(lo < hi)) {
    std::ostringstream os;
    os << "chart leaves the region " << name << " > 0";
    throw invalid(os.str());
  }
}

// Graph of f(u) + g(v): layout 0 is (u, v, f + g), layout 1 is (u, f + g, v).
SurfaceJet additive_jet(const Jet1& f, const Jet1& g, double u, double v, int layout,
                        double scale) {
  SurfaceJet j;
  if (layout == 0) {  // (x, y, f + g)
    j.X = {u, v, f.v + g.v};
    j.Xu = {1, 0, f.d1};
    j.Xv = {0, 1, g.d1};
    j.Xuu = {0, 0, f.d2};
    j.Xuv = {0, 0, 0};
    j.Xvv = {0, 0, g.d2};
  } else {  // (x, f + g, z)
    j.X = {u, f.v + g.v, v};
    j.Xu = {1, f.d1, 0};
    j.Xv = {0, g.d1, 1};
    j.Xuu = {0, f.d2, 0};
    j.Xuv = {0, 0, 0};
    j.Xvv = {0, g.d2, 0};
  }
  if (scale != 1.0) {
    j.X *= scale;
    j.Xu *= scale;
    j.Xv *= scale;
    j.Xuu *= scale;
    j.Xuv *= scale;
    j.Xvv *= scale;
  }
  return j;
}

void require_positive_curvature(const ParamSurface& s) {
  const ChartDomain& c = s.domain();
  for (int i = 0; i < 9; ++i) {
    for (int k = 0; k < 9; ++k) {
      const double u = c.u0 + (c.u1 - c.u0) * (i + 0.5) / 9.0;
      const double v = c.v0 + (c.v1 - c.v0) * (k + 0.5) / 9.0;
      const FormsAtPoint forms = forms_at(jet_at(s, u, v), s.orientation());
      if (!(forms.K > 0.0)) {
        std::ostringstream os;
        os << "K = " << forms.K << " <= 0 at (" << u << ", " << v
           << "); exponent 1/4 needs K > 0";
        throw Error(ErrorCode::degenerate, os.str());
      }
    }
  }
}

}  // namespace

TranslationSurface build_quarter_solution(const TranslationParams& params) {
  TranslationParams p = params;
  check_chart(p.chart);
  if (!std::isfinite(p.m) || p.m == 0.0) throw invalid("m must be nonzero");
  const double m = p.m, a = p.a, b = p.b, c = p.c, d = p.d;

  CurveFn f, g;
  Vec3 raw(0, 0, 1);
  int layout = 0;
  switch (p.kind) {
    case TranslationCase::additive_v3:
      f = [m, a, b](double x) { return Jet1{x * x / m + a * x + b, 2 * x / m + a, 2 / m, 0}; };
      g = [m, c, d](double y) {
        return Jet1{m * y * y / 4 + c * y + d, m * y / 2 + c, m / 2, 0};
      };
      break;
    case TranslationCase::additive_v2: {
      clip_affine(p.chart.v0, p.chart.v1, 2 * c, m, "2c + m y");
      raw = Vec3(0, 1, p.v3);
      const double v3 = p.v3;
      const double k = std::pow(1.5, 2.0 / 3.0);
      f = [m, a, b](double x) { return Jet1{x * x / m + a * x + b, 2 * x / m + a, 2 / m, 0}; };
      g = [m, c, d, v3, k](double y) {
        const double u = 2 * c + m * y;
        const double cr = std::cbrt(u);
        return Jet1{v3 * u / m - k * cr * cr / m + d, v3 - (2.0 / 3.0) * k / cr,
                    (2.0 / 9.0) * k * m / (u * cr), -(8.0 / 27.0) * k * m * m / (u * u * cr)};
      };
      break;
    }
    case TranslationCase::graph_xz:
      clip_affine(p.chart.v0, p.chart.v1, c, -3 * m, "-3 m z + c");
      layout = 1;
      f = [m, a, b](double x) {
        return Jet1{x * x / (2 * m) + a * x + b, x / m + a, 1 / m, 0};
      };
      g = [m, c, d](double z) {
        const double u = c - 3 * m * z;
        const double cr = std::cbrt(u);
        return Jet1{-cr * cr / (2 * m) + d, 1 / cr, m / (u * cr), 4 * m * m / (u * u * cr)};
      };
      break;
    case TranslationCase::homothetical:
      throw invalid("homothetical surfaces are built by build_homothetical");
  }

  const double scale = raw.squaredNorm();  // dilation by |v|^2 turns speed |v| into 1
  auto jet = [f, g, layout, scale](double u, double v) {
    return additive_jet(f(u), g(v), u, v, layout, scale);
  };
  ParamSurface surface(p.chart, jet);
  require_positive_curvature(surface);
  return {surface, p, raw.normalized(), raw, scale, f, g};
}

namespace {

// f' as a function of f for the homothetical profile.
struct HomotheticF {
  double a, m2, sign;
  double slope(double f) const { return sign * std::sqrt(a * m2 * f / (1 - 2 * m2 * f)); }
  bool admissible(double f) const { return f > 0 && f < 1 / (2 * m2); }
  Jet1 jet(double f) const {
    const double w = 1 - 2 * m2 * f;
    const double d1 = slope(f);
    return {f, d1, a * m2 / (2 * w * w), 2 * a * m2 * m2 * d1 / (w * w * w)};
  }
};

double rk4_step(const HomotheticF& F, double f, double h) {
  auto rhs = [&F](double y) {
    if (!F.admissible(y)) {
      std::ostringstream os;
      os << "homothetical f = " << y << " left (0, 1/(2 m^2))";
      throw Error(ErrorCode::out_of_domain, os.str());
    }
    return F.slope(y);
  };
  const double k1 = rhs(f);
  const double k2 = rhs(f + 0.5 * h * k1);
  const double k3 = rhs(f + 0.5 * h * k2);
  const double k4 = rhs(f + h * k3);
  return f + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
}

// Step-doubling RK4 march from (z0, f0) to z1; returns the visited nodes.
std::vector<std::pair<double, double>> march(const HomotheticF& F, double z0, double f0, double z1,
                                             double tol = 1e-13) {
  std::vector<std::pair<double, double>> nodes{{z0, f0}};
  if (z0 == z1) return nodes;
  double z = z0, f = f0;
  double h = (z1 - z0) / 64.0;
  for (int guard = 0; guard < 1'000'000; ++guard) {
    if ((h > 0 && z + h > z1) || (h < 0 && z + h < z1)) h = z1 - z;
    const double big = rk4_step(F, f, h);
    const double half = rk4_step(F, rk4_step(F, f, 0.5 * h), 0.5 * h);
    const double err = std::abs(half - big) / 15.0;
    if (err <= tol * std::max(1.0, std::abs(half)) || std::abs(h) < 1e-14) {
      z += h;
      f = half + (half - big) / 15.0;
      nodes.emplace_back(z, f);
      if (z == z1) return nodes;
      if (err < 0.1 * tol) h *= 2;
    } else {
      h *= 0.5;
    }
  }
  throw Error(ErrorCode::budget_exceeded, "homothetical march did not reach the chart end");
}

struct HomotheticTable {
  HomotheticF F;
  std::vector<std::pair<double, double>> nodes;  // increasing z

  double at(double z) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), z,
                               [](const auto& n, double x) { return n.first < x; });
    const std::pair<double, double>* base;
    if (it == nodes.end()) base = &nodes.back();
    else if (it == nodes.begin()) base = &nodes.front();
    else base = (z - std::prev(it)->first <= it->first - z) ? &*std::prev(it) : &*it;
    if (base->first == z) return base->second;
    return march(F, base->first, base->second, z).back().second;
  }
};

}  // namespace

TranslationSurface build_homothetical(const TranslationParams& params) {
  TranslationParams p = params;
  p.kind = TranslationCase::homothetical;
  check_chart(p.chart);
  if (!(p.a_h > 0.0)) throw invalid("homothetical needs a > 0");
  if (!std::isfinite(p.m_h) || p.m_h == 0.0) throw invalid("homothetical needs m != 0");
  if (p.g_sign != 1.0 && p.g_sign != -1.0) throw invalid("g sign must be +1 or -1");
  const double m2 = p.m_h * p.m_h;
  if (!(p.f0 > 0.0 && p.f0 < 1.0 / (2.0 * m2))) throw invalid("f0 must lie in (0, 1/(2 m^2))");
  if (p.y_pole >= p.chart.v0 && p.y_pole <= p.chart.v1) {
    throw invalid("the pole of g lies inside the y-range");
  }
  if (p.z0 < p.chart.u0 || p.z0 > p.chart.u1) throw invalid("z0 must lie in the z-range");

  // <N, e3> = f' g / W, so f' takes the sign of g on the chart.
  const double g_side = p.y_pole > p.chart.v1 ? 1.0 : -1.0;
  const HomotheticF F{p.a_h, m2, p.g_sign * g_side};
  auto table = std::make_shared<HomotheticTable>();
  table->F = F;
  auto down = march(F, p.z0, p.f0, p.chart.u0);
  auto up = march(F, p.z0, p.f0, p.chart.u1);
  std::reverse(down.begin(), down.end());
  table->nodes = down;
  table->nodes.insert(table->nodes.end(), up.begin() + 1, up.end());

  CurveFn f = [table](double z) { return table->F.jet(table->at(z)); };
  const double A = std::sqrt(2.0 / p.a_h), s = p.g_sign, yp = p.y_pole;
  CurveFn g = [A, s, yp](double y) {
    const double w = yp - y;
    return Jet1{s * A / w, s * A / (w * w), 2 * s * A / (w * w * w), 6 * s * A / (w * w * w * w)};
  };
  auto jet = [f, g](double z, double y) {
    const Jet1 fz = f(z), gy = g(y);
    SurfaceJet j;
    j.X = {fz.v * gy.v, y, z};
    j.Xu = {fz.d1 * gy.v, 0, 1};
    j.Xv = {fz.v * gy.d1, 1, 0};
    j.Xuu = {fz.d2 * gy.v, 0, 0};
    j.Xuv = {fz.d1 * gy.d1, 0, 0};
    j.Xvv = {fz.v * gy.d2, 0, 0};
    return j;
  };
  ParamSurface surface(p.chart, jet);
  require_positive_curvature(surface);
  const Vec3 e3(0, 0, 1);
  return {surface, p, e3, e3, 1.0, f, g};
}

ResidualReport mismatch_obstruction(const TranslationSurface& s, double alpha, GridDims grid) {
  return translator_residual(s.surface, TranslatorSpec(alpha, s.speed), grid);
}

SeparationCoefficients separation_coefficients(const Jet1& f, const Vec3& v, double alpha) {
  const double Q = 1 + f.d1 * f.d1;
  const double P0 = v.z() - v.x() * f.d1;
  const double B = alpha * f.d3 / f.d2;
  const double W = v.x() * f.d2;
  const double lead = (4 * alpha - 1) * f.d1 * f.d2;
  return {lead * P0 - Q * (W + B * P0), -v.y() * lead + Q * B * v.y(), -(W + B * P0), B * v.y()};
}

double separation_equation(const Jet1& f, double gp, const Vec3& v, double alpha) {
  const double P = v.z() - v.x() * f.d1 - v.y() * gp;
  const double Q = 1 + f.d1 * f.d1 + gp * gp;
  return (4 * alpha - 1) * f.d1 * f.d2 * P -
         Q * (v.x() * f.d2 + alpha * f.d3 * P / f.d2);
}

double separation_identity(const TranslationSurface& s, double x, double y) {
  if (s.params.kind != TranslationCase::additive_v3 &&
      s.params.kind != TranslationCase::additive_v2) {
    throw invalid("separation identity applies to z = f(x) + g(y)");
  }
  const Jet1 f = s.f(x), g = s.g(y);
  const Vec3& v = s.raw_speed;
  return std::pow(f.d2 * g.d2, 0.25) + v.x() * f.d1 + v.y() * g.d1 - v.z();
}

double g_ode_residual(const TranslationSurface& s, double y) {
  if (s.params.kind != TranslationCase::additive_v2) throw invalid("additive-v2 surface required");
  const Jet1 g = s.g(y);
  return g.d2 - 0.5 * s.params.m * std::pow(s.params.v3 - g.d1, 4);
}

double f_ode_residual(const TranslationSurface& s, double z) {
  if (s.params.kind != TranslationCase::homothetical) throw invalid("homothetical surface required");
  const Jet1 f = s.f(z);
  return f.v * f.d2 - 0.5 * f.d1 * f.d1 - std::pow(f.d1, 4) / s.params.a_h;
}

}  // namespace kflow::translation
