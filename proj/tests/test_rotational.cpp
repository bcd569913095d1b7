#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kflow/error.hpp"
#include "kflow/rotational.hpp"

using namespace kflow;
namespace rot = kflow::rotational;

namespace {

// Composite Simpson rule on a fine uniform mesh, used as an independent
// reference for f between two radii.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
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

}  // namespace

TEST_CASE("slope_squared examples") {
  CHECK(rot::slope_squared(0.25, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rot::slope_squared(0.5, 1.0, 0.0) == 0.0);
  CHECK(rot::slope_squared(1.0, 1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
  // alpha = 1 closed-form slope r sqrt(4-r^2)/(2-r^2)
  for (double r : {0.3, 0.8, 1.2, 1.4}) {
    const double fp = r * std::sqrt(4 - r * r) / (2 - r * r);
    CHECK(rot::slope_squared(1.0, 1.0, r) == doctest::Approx(fp * fp).epsilon(1e-12));
  }
  CHECK(rot::slope_squared(1.0, 1.0, 2.0) < 0.0);
  CHECK(code_of([] { rot::slope_squared(0.0, 1.0, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { rot::slope_squared(0.5, 0.0, 1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("slope_squared_derivative against central differences") {
  for (double alpha : {0.2, 0.25, 0.5, 1.0, 2.0, -1.0}) {
    for (double r : {0.3, 0.7, 1.1}) {
      const double m = 2.0;
      if (!(rot::slope_squared(alpha, m, r + 1e-3) > -1.0)) continue;
      const double h = 1e-5;
      const double fd =
          (rot::slope_squared(alpha, m, r + h) - rot::slope_squared(alpha, m, r - h)) / (2 * h);
      CHECK(rot::slope_squared_derivative(alpha, m, r) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("maximal_domain examples") {
  const Interval a = rot::maximal_domain(1.0, 1.0);
  CHECK(a.lo == 0.0);
  REQUIRE(a.bounded());
  CHECK(*a.hi == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
  CHECK_FALSE(a.hi_closed);
  CHECK(a.hi_kind == EndKind::slope_infinite);

  const Interval b = rot::maximal_domain(0.5, std::numbers::e);
  CHECK(b.lo == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(b.bounded());
  CHECK(b.lo_kind == EndKind::slope_zero);

  const Interval c = rot::maximal_domain(0.25, 0.5);
  CHECK(c.lo == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK_FALSE(c.bounded());

  // left radicand negative: the end clamps to the axis
  const Interval d = rot::maximal_domain(0.25, 3.0);
  CHECK(d.lo == 0.0);
  CHECK(d.lo_kind == EndKind::regular);

  CHECK(code_of([] { rot::maximal_domain(0.5, -1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { rot::maximal_domain(2.0, 0.0); }) == ErrorCode::empty_domain);
  CHECK(code_of([] { rot::maximal_domain(-1.0, -0.5); }) == ErrorCode::empty_domain);
}

TEST_CASE("paraboloid profile is r^2/2") {
  SamplingPolicy s;
  s.r_max = 3.0;
  const ProfileCurve p = rot::profile({0.25, 1.0, Branch::plus, 0.0}, s);
  CHECK(p.r_first() == 0.0);
  double worst = 0;
  for (const auto& q : p.samples()) {
    worst = std::max(worst, std::abs(q.f - 0.5 * q.r * q.r));
    CHECK(q.fp == doctest::Approx(q.r).epsilon(1e-12));
    CHECK(q.fpp == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(worst < 1e-9);
  CHECK(p.height(2.345) == doctest::Approx(0.5 * 2.345 * 2.345).epsilon(1e-12));
}

TEST_CASE("minus branch mirrors the plus branch") {
  SamplingPolicy s;
  s.r_max = 2.0;
  const ProfileCurve plus = rot::profile({1.0 / 3.0, 1.0, Branch::plus, 1.0}, s);
  const ProfileCurve minus = rot::profile({1.0 / 3.0, 1.0, Branch::minus, 1.0}, s);
  for (std::size_t i = 0; i < plus.samples().size(); ++i) {
    CHECK(minus.samples()[i].f - 1.0 == doctest::Approx(-(plus.samples()[i].f - 1.0)));
    CHECK(minus.samples()[i].fpp == -plus.samples()[i].fpp);
  }
}

TEST_CASE("closed forms against quadrature") {
  struct Case {
    double alpha, m, lo, hi;
  };
  for (const Case c : {Case{0.25, 2.0, 0.0, 3.0}, Case{1.0 / 3.0, 1.0, 0.0, 5.0},
                       Case{1.0 / 6.0, 1.0, 0.5, 5.0},
                       Case{1.0, 1.0, 0.0, 0.99 * std::numbers::sqrt2}}) {
    CAPTURE(c.alpha);
    SamplingPolicy s;
    s.r_min = c.lo;
    s.r_max = c.hi;
    const ProfileCurve p = rot::profile({c.alpha, c.m, Branch::plus, 0.0}, s);
    const double shift = p.samples().front().f - rot::closed_form_profile(c.alpha, c.m, c.lo);
    double worst = 0;
    for (const auto& q : p.samples()) {
      worst = std::max(worst, std::abs(q.f - shift - rot::closed_form_profile(c.alpha, c.m, q.r)));
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("closed_form_profile examples and ranges") {
  CHECK(rot::closed_form_profile(0.25, 1.0, 2.0) == doctest::Approx(2.0));
  CHECK(rot::closed_form_profile(0.25, 2.0, 1.0) ==
        doctest::Approx(0.5 * (std::numbers::sqrt2 + std::log(std::numbers::sqrt2 + 1.0))));
  CHECK(rot::closed_form_profile(1.0 / 3.0, 1.0, 0.0) == doctest::Approx(4.0 / 3.0));
  // alpha = 1/4, m = 2 against an independent Simpson integral of sqrt(1 + r^2)
  const double ref = simpson([](double r) { return std::sqrt(1.0 + r * r); }, 0.0, 1.0);
  CHECK(rot::closed_form_profile(0.25, 2.0, 1.0) - rot::closed_form_profile(0.25, 2.0, 0.0) ==
        doctest::Approx(ref).epsilon(1e-10));
  // alpha = 1 formula extends past sqrt(2) up to 2
  CHECK(std::isfinite(rot::closed_form_profile(1.0, 1.0, 1.9)));
  CHECK(code_of([] { rot::closed_form_profile(1.0, 1.0, 2.0); }) == ErrorCode::out_of_domain);
  CHECK(code_of([] { rot::closed_form_profile(0.25, 0.5, 0.1); }) == ErrorCode::out_of_domain);
  CHECK(code_of([] { rot::closed_form_profile(0.5, 1.0, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { rot::closed_form_profile(1.0 / 3.0, 2.0, 1.0); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("orthogonal profiles meet the axis at a right angle") {
  for (double alpha : {0.2, 0.25, 1.0 / 3.0, 0.5, 1.0, 2.0, -1.0}) {
    CAPTURE(alpha);
    const ProfileCurve p = rot::orthogonal_profile(alpha);
    CHECK(p.domain().lo == 0.0);
    CHECK(p.slope(0.0) == 0.0);
    CHECK(std::abs(p.curvature(1e-3) - 1.0) < 1e-3);
    CHECK(p.samples().front().fpp == doctest::Approx(1.0));
  }
  CHECK_FALSE(rot::orthogonal_profile(0.5).domain().bounded());
  CHECK(*rot::orthogonal_profile(1.0).domain().hi == doctest::Approx(std::numbers::sqrt2));
  CHECK(code_of([] { rot::orthogonal_profile(0.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("asymptotic coefficients") {
  const auto third = rot::asymptotic_coefficient(1.0 / 3.0);
  CHECK(third.exponent == doctest::Approx(3.0));
  CHECK(third.coefficient == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  const auto quarter = rot::asymptotic_coefficient(0.25);
  CHECK(quarter.exponent == doctest::Approx(2.0));
  CHECK(quarter.coefficient == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rot::asymptotic_coefficient(1e-9).exponent == doctest::Approx(1.0));
  CHECK(code_of([] { rot::asymptotic_coefficient(0.5); }) == ErrorCode::invalid_argument);
}

TEST_CASE("asymptotic growth at r = 50 for alpha in {1/4, 1/3, 2/5}") {
  for (double alpha : {0.25, 1.0 / 3.0, 0.4}) {
    CAPTURE(alpha);
    SamplingPolicy s;
    s.r_max = 50.0;
    s.count = 51;
    const ProfileCurve p = rot::orthogonal_profile(alpha, s);
    const auto a = rot::asymptotic_coefficient(alpha);
    CHECK(std::abs(p.samples().back().f / std::pow(50.0, a.exponent) - a.coefficient) < 1e-3);
  }
}

TEST_CASE("f'' agrees with differenced f' to second order") {
  for (double alpha : {0.2, 0.25, 0.5, 1.0, 2.0}) {
    CAPTURE(alpha);
    const ProfileCurve p = rot::profile({alpha, 1.5, Branch::plus, 0.0});
    const auto ss = p.samples();
    for (std::size_t i = 2; i + 2 < ss.size(); i += 7) {
      const double dr = ss[i + 1].r - ss[i - 1].r;
      const double fd = (ss[i + 1].fp - ss[i - 1].fp) / dr;
      const double fd2 = (ss[i + 2].fp - ss[i - 2].fp) / (ss[i + 2].r - ss[i - 2].r);
      // Richardson: the O(dr^2) error quarters when the spacing halves
      CHECK(std::abs(fd - ss[i].fpp) <= std::abs(fd2 - ss[i].fpp) * 0.3 + 1e-9 * std::abs(ss[i].fpp));
    }
  }
}

TEST_CASE("first-integral identity") {
  for (double alpha : {0.2, 0.25, 1.0 / 3.0, 0.5, 1.0, 2.0, -0.5}) {
    CAPTURE(alpha);
    const ProfileCurve p = rot::profile({alpha, 1.2, Branch::plus, 0.0});
    for (const auto& q : p.samples()) {
      if (q.r <= p.r_first() || q.r >= p.r_last()) continue;
      const double w = 1.0 + q.fp * q.fp;
      const double g = q.fp / std::sqrt(w);
      const double gp = q.fpp / std::pow(w, 1.5);
      // 1 - g^2 = 1/w, written without the cancellation
      const double lhs = g * gp / std::pow(1.0 / w, 1.0 / (2.0 * alpha));
      CHECK(lhs == doctest::Approx(q.r).epsilon(1e-6));
    }
  }
}

TEST_CASE("endpoint behaviour outside [0, 1/2]") {
  for (double alpha : {1.0, 2.0, -1.0}) {
    CAPTURE(alpha);
    const ProfileCurve p = rot::profile({alpha, 1.0, Branch::plus, 0.0});
    const double hi = *p.domain().hi;
    CHECK(p.slope(0.0) == 0.0);
    CHECK(p.slope(hi * (1 - 1e-12)) > 1e3);
  }
  // f blows up at the right end for alpha = 1; stays finite for alpha = 2
  CHECK_FALSE(rot::orthogonal_profile(1.0).upper_end_height().has_value());
  const auto h2 = rot::orthogonal_profile(2.0).upper_end_height();
  REQUIRE(h2.has_value());
  const double hi = std::sqrt(4.0 / 3.0);
  auto fp = [](double r) { return std::sqrt(std::max(0.0, rot::slope_squared(2.0, 1.0, r))); };
  // substitution r = hi (1 - u^3) removes the (hi - r)^(-2/3) end singularity
  auto g = [&](double u) { return fp(hi * (1 - u * u * u)) * 3 * hi * u * u; };
  const double ref = simpson([&](double u) { return g(std::max(u, 1e-5)); }, 0.0, 1.0);
  CHECK(*h2 == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("revolved surfaces pass the residual oracle") {
  SamplingPolicy s;
  s.r_min = 0.05;
  s.r_max = 3.0;
  const auto par = rot::revolve(rot::profile({0.25, 1.0, Branch::plus, 0.0}, s));
  CHECK(translator_residual(par, TranslatorSpec(0.25, {0, 0, 1}), {64, 32}).max_abs < 1e-9);

  SamplingPolicy t;
  t.r_min = 0.05;
  t.r_max = 0.95 * std::numbers::sqrt2;
  const auto one = rot::revolve(rot::orthogonal_profile(1.0, t));
  CHECK(translator_residual(one, TranslatorSpec(1.0, {0, 0, 1}), {40, 16}).max_abs < 1e-6);

  for (double alpha : {0.2, 0.5, 2.0}) {
    CAPTURE(alpha);
    const auto surf = rot::revolve(rot::profile({alpha, 1.3, Branch::plus, 0.0}));
    CHECK(translator_residual(surf, TranslatorSpec(alpha, {0, 0, 1}), {24, 8}).max_abs < 1e-6);
  }
}

TEST_CASE("flat profile gives residual -1") {
  SlopeModel flat{[](double) { return 0.0; }, [](double) { return 0.0; }};
  Interval d;
  d.lo = 0.0;
  d.hi = 2.0;
  d.hi_closed = true;
  d.hi_kind = EndKind::regular;
  SamplingPolicy s;
  s.count = 11;
  const ProfileCurve p(ProfileFamily::rotational, RotationalParams{}, d, flat, Branch::plus, 0.0, s);
  const auto rep = translator_residual(rot::revolve(p), TranslatorSpec(0.25, {0, 0, 1}), {8, 8});
  CHECK(rep.max_abs == doctest::Approx(1.0));
  CHECK(rep.mean_abs == doctest::Approx(1.0));
}

TEST_CASE("axis obstruction") {
  SamplingPolicy s;
  s.r_max = 2.0;
  const ProfileCurve par = rot::profile({0.25, 1.0, Branch::plus, 0.0}, s);
  for (const auto& a : rot::axis_obstruction(par, {0, 0, 1})) {
    CHECK(std::abs(a.A0) < 1e-12);
    CHECK(a.A1 == 0.0);
    CHECK(a.A2 == 0.0);
  }
  for (const auto& a : rot::axis_obstruction(par, {1, 0, 0})) {
    CHECK(a.A1 == doctest::Approx(a.r / std::sqrt(1 + a.r * a.r)));
  }
  bool nonzero = false;
  for (const auto& a : rot::axis_obstruction(par, {0, 1, 0})) nonzero |= std::abs(a.A2) > 1e-3;
  CHECK(nonzero);
}
