#include "kflow/ruled.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kflow/error.hpp"

namespace kflow::ruled {

namespace {

Error invalid(const std::string& what) { return Error(ErrorCode::invalid_argument, what); }

std::vector<double> uniform(double t0, double t1, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = n == 1 ? t0 : t0 + (t1 - t0) * i / (n - 1);
  return t;
}

double integer_power(double x, double alpha) {
  if (!is_integer_exponent(alpha)) throw invalid("ruled surfaces have K < 0: alpha must be an integer");
  return std::pow(x, alpha);
}

}  // namespace

double distribution_parameter(const RuledData& data, double s) {
  const CurveJet g = data.gamma(s), w = data.w(s);
  const double n2 = w.d1.squaredNorm();
  if (!(n2 > 0.0)) {
    throw Error(ErrorCode::degenerate, "w' = 0: cylindrical rulings have K = 0 and are excluded");
  }
  return g.d1.dot(w.p.cross(w.d1)) / n2;
}

void validate(const RuledData& data, double s0, double s1, int n) {
  if (!data.gamma || !data.w || !data.lambda) throw invalid("ruled data needs gamma, w and lambda");
  if (!(s0 <= s1) || n < 1) throw invalid("validation range must satisfy s0 <= s1, n >= 1");
  for (double s : uniform(s0, s1, n)) {
    const CurveJet g = data.gamma(s), w = data.w(s);
    std::ostringstream os;
    os << "at s = " << s << ": ";
    if (w.d1.norm() < 1e-8) {
      throw Error(ErrorCode::degenerate,
                  os.str() + "w' = 0; cylindrical rulings have K = 0 and are excluded");
    }
    if (std::abs(g.d1.norm() - 1) > 1e-8) throw invalid(os.str() + "gamma is not unit speed");
    if (std::abs(w.p.norm() - 1) > 1e-8) throw invalid(os.str() + "|w| != 1");
    if (std::abs(g.d1.dot(w.d1)) > 1e-8) throw invalid(os.str() + "gamma is not the striction curve");
    const double lam = distribution_parameter(data, s);
    if (std::abs(lam - data.lambda(s)) > 1e-6) {
      os << "stored lambda " << data.lambda(s) << " differs from det(gamma', w, w')/|w'|^2 = " << lam;
      throw invalid(os.str());
    }
  }
}

double ruled_gauss(double lambda, double t) {
  const double q = lambda * lambda + t * t;
  if (q == 0.0) throw Error(ErrorCode::degenerate, "lambda = t = 0 is a singular point of the ruling");
  return -lambda * lambda / (q * q);
}

Vec3 ruled_normal(const RuledData& data, double s, double t) {
  const CurveJet w = data.w(s);
  const double lam = data.lambda(s);
  return (lam * w.d1 + t * w.d1.cross(w.p)) / (w.d1.norm() * std::sqrt(lam * lam + t * t));
}

ParamSurface ruled_surface(const RuledData& data, ChartDomain chart) {
  validate(data, chart.u0, chart.u1);
  auto jet = [data](double s, double t) {
    const CurveJet g = data.gamma(s), w = data.w(s);
    SurfaceJet j;
    j.X = g.p + t * w.p;
    j.Xu = g.d1 + t * w.d1;
    j.Xv = w.p;
    j.Xuu = g.d2 + t * w.d2;
    j.Xuv = w.d1;
    j.Xvv = Vec3::Zero();
    return j;
  };
  return ParamSurface(chart, jet);
}

RuledData helicoid_ruled_data(double pitch) {
  if (!(pitch > 0.0) || !std::isfinite(pitch)) throw invalid("helicoid pitch must be positive");
  const double h = pitch;
  RuledData d;
  d.gamma = [](double s) { return CurveJet{Vec3(0, 0, s), Vec3(0, 0, 1), Vec3::Zero()}; };
  d.w = [h](double s) {
    const double c = std::cos(s / h), sn = std::sin(s / h);
    return CurveJet{Vec3(c, sn, 0), Vec3(-sn, c, 0) / h, Vec3(-c, -sn, 0) / (h * h)};
  };
  d.lambda = [h](double) { return h; };
  return d;
}

double wronskian(double alpha, double lambda, double t) {
  const double q = lambda * lambda + t * t;
  return (4 * alpha - 1) * std::pow(q, 4 * alpha - 3) * (4 * alpha * t * t - lambda * lambda);
}

double gram_min_eigenvalue(const std::vector<std::function<double(double)>>& functions,
                           double t0, double t1, int n) {
  if (functions.empty()) throw invalid("Gram matrix of an empty set");
  if (n < 2) throw invalid("at least two samples are required");
  const std::vector<double> t = uniform(t0, t1, n);
  std::vector<double> distinct = t;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw Error(ErrorCode::degenerate, "fewer than three distinct t-samples");

  const std::size_t k = functions.size();
  Eigen::MatrixXd values(n, k);
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) values(i, j) = functions[j](t[i]);
  }
  Eigen::VectorXd weight = Eigen::VectorXd::Constant(n, (t1 - t0) / (n - 1));
  weight(0) *= 0.5;
  weight(n - 1) *= 0.5;
  const Eigen::MatrixXd gram = values.transpose() * weight.asDiagonal() * values;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double independence_probe(double alpha, double lambda, double t0, double t1, int n) {
  if (alpha == 0.0 || !is_integer_exponent(alpha)) throw invalid("alpha must be a nonzero integer");
  if (lambda == 0.0) throw invalid("lambda must be nonzero");
  if (n < 16) throw invalid("at least 16 samples are required");
  const double b = (4 * alpha - 1) / 2;
  const double l2 = lambda * lambda;
  return gram_min_eigenvalue({[](double) { return 1.0; },
                              [=](double t) { return std::pow(l2 + t * t, b); },
                              [=](double t) { return t * std::pow(l2 + t * t, b); }},
                             t0, t1, n);
}

double ruled_equation(const RuledData& data, const Vec3& v, double alpha, double s, double t) {
  const CurveJet w = data.w(s);
  const double lam = data.lambda(s);
  const double lead = integer_power(-1.0, alpha) * integer_power(lam * lam, alpha);
  const double q = lam * lam + t * t;
  const double triple = w.d1.dot(w.p.cross(v));
  return -lead * w.d1.norm() + (lam * w.d1.dot(v) + triple * t) * std::pow(q, (4 * alpha - 1) / 2);
}

double ruled_equation_residual(const RuledData& data, const Vec3& v, double alpha, double s,
                               double t0, double t1, int n) {
  if (n < 1) throw invalid("at least one sample is required");
  double worst = 0;
  for (double t : uniform(t0, t1, n)) worst = std::max(worst, std::abs(ruled_equation(data, v, alpha, s, t)));
  return worst;
}

}  // namespace kflow::ruled
