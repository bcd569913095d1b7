#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kflow/error.hpp"
#include "kflow/ruled.hpp"

using namespace kflow;
using namespace kflow::ruled;

namespace {

// x^2 + y^2 - z^2 = 1 ruled over its waist circle; lambda = -1.
RuledData hyperboloid() {
  RuledData d;
  d.gamma = [](double s) {
    return CurveJet{Vec3(std::cos(s), std::sin(s), 0), Vec3(-std::sin(s), std::cos(s), 0),
                    Vec3(-std::cos(s), -std::sin(s), 0)};
  };
  d.w = [](double s) {
    const double r = 1 / std::sqrt(2.0);
    return CurveJet{r * Vec3(-std::sin(s), std::cos(s), 1), r * Vec3(-std::cos(s), -std::sin(s), 0),
                    r * Vec3(std::sin(s), -std::cos(s), 0)};
  };
  d.lambda = [](double) { return -1.0; };
  return d;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

// Wronskian of {1, y1, y2} by central differences.
double fd_wronskian(double alpha, double lambda, double t) {
  const double b = (4 * alpha - 1) / 2, h = 1e-3;
  auto y1 = [&](double x) { return std::pow(lambda * lambda + x * x, b); };
  auto y2 = [&](double x) { return x * y1(x); };
  auto d1 = [&](auto f) { return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h); };
  auto d2 = [&](auto f) {
    return (-f(t - 2 * h) + 16 * f(t - h) - 30 * f(t) + 16 * f(t + h) - f(t + 2 * h)) / (12 * h * h);
  };
  return d1(y1) * d2(y2) - d2(y1) * d1(y2);
}

std::vector<Vec3> cube_directions() {
  std::vector<Vec3> out;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int k = -1; k <= 1; ++k) {
        if (i || j || k) out.push_back(Vec3(i, j, k).normalized());
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("ruled Gauss curvature examples") {
  CHECK(ruled_gauss(1, 0) == -1.0);
  CHECK(ruled_gauss(1, 1) == doctest::Approx(-0.25));
  CHECK(ruled_gauss(2, 0) == doctest::Approx(-0.25));
  CHECK(code_of([] { ruled_gauss(0, 0); }) == ErrorCode::degenerate);
}

TEST_CASE("data validation") {
  CHECK_NOTHROW(validate(helicoid_ruled_data(1.5), -2, 2));
  CHECK_NOTHROW(validate(hyperboloid(), 0, 6));
  CHECK(distribution_parameter(hyperboloid(), 0.3) == doctest::Approx(-1.0));
  CHECK(distribution_parameter(helicoid_ruled_data(0.7), 1.1) == doctest::Approx(0.7));

  auto wrong_lambda = hyperboloid();
  wrong_lambda.lambda = [](double) { return 1.0; };
  CHECK(code_of([&] { validate(wrong_lambda, 0, 1); }) == ErrorCode::invalid_argument);

  RuledData cylinder;
  cylinder.gamma = [](double s) { return CurveJet{Vec3(s, 0, 0), Vec3(1, 0, 0), Vec3::Zero()}; };
  cylinder.w = [](double) { return CurveJet{Vec3(0, 0, 1), Vec3::Zero(), Vec3::Zero()}; };
  cylinder.lambda = [](double) { return 0.0; };
  CHECK(code_of([&] { validate(cylinder, 0, 1); }) == ErrorCode::degenerate);
  CHECK(code_of([&] { distribution_parameter(cylinder, 0); }) == ErrorCode::degenerate);

  auto off_striction = hyperboloid();
  off_striction.gamma = [](double s) { return CurveJet{Vec3(s, 0, 0), Vec3(1, 0, 0), Vec3::Zero()}; };
  CHECK(code_of([&] { validate(off_striction, 0, 1); }) == ErrorCode::invalid_argument);

  auto slow = helicoid_ruled_data(1);
  slow.gamma = [](double s) { return CurveJet{Vec3(0, 0, 2 * s), Vec3(0, 0, 2), Vec3::Zero()}; };
  CHECK(code_of([&] { validate(slow, 0, 1); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { helicoid_ruled_data(0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("kernel agrees with the ruled formulas") {
  for (const auto& data : {helicoid_ruled_data(0.8), hyperboloid()}) {
    const ParamSurface surf = ruled_surface(data, {-1, 2, -3, 3});
    for (double s : {-0.5, 0.4, 1.7}) {
      for (double t : {-2.5, -0.3, 0.0, 1.1}) {
        const FormsAtPoint forms = forms_at(jet_at(surf, s, t));
        CHECK(forms.K == doctest::Approx(ruled_gauss(data.lambda(s), t)).epsilon(1e-8));
        CHECK((forms.normal - ruled_normal(data, s, t)).norm() < 1e-12);
        const auto fd = forms_at(jet_at(surf.with_finite_differences(), s, t));
        CHECK(std::abs(fd.K - forms.K) < 1e-6);
      }
    }
  }
}

TEST_CASE("Wronskian") {
  CHECK(wronskian(1, 1, 1) == doctest::Approx(18.0));
  CHECK(wronskian(1, 1, 0) == doctest::Approx(-3.0));
  for (double l : {0.3, 1.0, 2.0}) {
    for (double t : {-1.0, 0.0, 2.5}) CHECK(wronskian(0.25, l, t) == 0.0);
  }
  for (double alpha : {-1.0, 1.0, 2.0}) {
    for (double l : {0.5, 1.0, 2.0}) {
      for (double t : {-1.7, -0.4, 0.9, 1.6}) {
        CAPTURE(alpha);
        CAPTURE(l);
        CAPTURE(t);
        const double exact = wronskian(alpha, l, t);
        CHECK(std::abs(fd_wronskian(alpha, l, t) - exact) <= 1e-6 * std::abs(exact));
      }
    }
  }
  // zeros exactly on 4 alpha t^2 = lambda^2
  CHECK(wronskian(1, 1, 0.5) == 0.0);
  CHECK(std::abs(wronskian(2, 2, std::sqrt(0.5))) < 1e-10);
  for (double t : {0.0, 0.5, 1.0, 3.0}) CHECK(wronskian(-1, 1, t) > 0);
  CHECK(wronskian(1, 1, 0.4) < 0);
  CHECK(wronskian(1, 1, 0.6) > 0);
}

TEST_CASE("independence probe") {
  CHECK(independence_probe(1, 1, -2, 2, 128) > 1e-6);
  CHECK(independence_probe(-1, 0.5, -2, 2, 128) > 1e-8);
  for (double alpha : {-1.0, 1.0, 2.0}) {
    for (double l : {0.5, 1.0, 2.0}) CHECK(independence_probe(alpha, l, -2, 2, 64) > 1e-8);
  }
  // rank-deficient set
  const double min_eig = gram_min_eigenvalue(
      {[](double) { return 1.0; }, [](double t) { return std::pow(1 + t * t, 1.5); },
       [](double t) { return 2.0 - 3.0 * std::pow(1 + t * t, 1.5); }},
      -2, 2, 128);
  CHECK(std::abs(min_eig) < 1e-12);

  CHECK(code_of([] { independence_probe(0.5, 1, -2, 2, 64); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { independence_probe(0, 1, -2, 2, 64); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { independence_probe(1, 0, -2, 2, 64); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { independence_probe(1, 1, -2, 2, 8); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { independence_probe(1, 1, 1, 1, 64); }) == ErrorCode::degenerate);
}

TEST_CASE("ruled equation never vanishes along a ruling") {
  const RuledData data = helicoid_ruled_data(1.0);
  const ParamSurface surf = ruled_surface(data, {-1, 1, -2.5, 2.5});
  const double s = 0.3;
  const int n = 81;
  for (double alpha : {-1.0, 1.0, 2.0}) {
    for (const Vec3& v : cube_directions()) {
      // -|w'| q^(2 alpha) (K^alpha - <N, v>) from the kernel
      double oracle = 0;
      for (int i = 0; i < n; ++i) {
        const double t = -2 + 4.0 * i / (n - 1);
        const FormsAtPoint forms = forms_at(jet_at(surf, s, t));
        const double q = 1 + t * t;
        const double lhs = -data.w(s).d1.norm() * std::pow(q, 2 * alpha) *
                           (*curvature_power(forms.K, alpha) - forms.normal.dot(v));
        CHECK(ruled_equation(data, v, alpha, s, t) == doctest::Approx(lhs).epsilon(1e-9));
        oracle = std::max(oracle, std::abs(lhs));
      }
      const double res = ruled_equation_residual(data, v, alpha, s, -2, 2, n);
      CHECK(res == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(res > 0.1);
    }
  }
  CHECK(code_of([&] { ruled_equation(data, {0, 0, 1}, 0.5, 0, 0); }) == ErrorCode::invalid_argument);
}
