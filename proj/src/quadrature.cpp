#include "kflow/quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>

#include "kflow/error.hpp"

namespace kflow {

const char* to_string(EndKind kind) {
  switch (kind) {
    case EndKind::regular: return "regular";
    case EndKind::slope_zero: return "slope-zero";
    case EndKind::slope_infinite: return "slope-infinite";
    case EndKind::unbounded: return "unbounded";
  }
  return "unknown";
}

bool Interval::contains(double r) const {
  const bool lo_ok = lo_closed ? r >= lo : r > lo;
  if (!lo_ok) return false;
  if (!hi) return true;
  return hi_closed ? r <= *hi : r < *hi;
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (abscissae on [-1,1]).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0, b = 0;
  double value = 0, error = 0;
  double l1 = 0;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  double l1 = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(std::max(c - dx, std::nextafter(a, b)));
    const double f2 = f(std::min(c + dx, std::nextafter(b, a)));
    k += kWgk[j] * (f1 + f2);
    l1 += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, k * h, std::abs((k - g) * h), l1 * h};
}

}  // namespace

QuadratureResult integrate(const ScalarFn& f, double a, double b,
                           const QuadratureOptions& options) {
  if (!(a < b)) throw Error(ErrorCode::invalid_argument, "integration needs a < b");
  if (!(options.rel_tol > 0.0)) throw Error(ErrorCode::invalid_argument, "rel_tol must be positive");

  std::size_t count = 0;
  auto counted = [&](double t) {
    ++count;
    const double y = f(t);
    if (!std::isfinite(y)) {
      std::ostringstream os;
      os << "integrand not finite at t = " << t;
      throw Error(ErrorCode::non_finite, os.str());
    }
    return y;
  };

  // Global adaptive bisection: always split the panel with the largest
  // error estimate. Panels too narrow to split are retired with their error.
  std::priority_queue<Panel> open;
  double retired_value = 0.0, retired_error = 0.0;
  const Panel first = kronrod(counted, a, b);
  open.push(first);
  double value = first.value, error = first.error;
  // rounding floor: the sum cannot be resolved below a few ulps of its L1 mass
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * first.l1;
  auto target = [&](double v) {
    return std::max({options.rel_tol * std::abs(v), options.abs_tol, floor});
  };
  auto converged = [&] { return error <= target(value); };
  while (!converged() && !open.empty()) {
    if (count + 30 > options.max_evaluations) {
      std::ostringstream os;
      os << "quadrature on [" << a << ", " << b << "] reached error " << error << " after "
         << count << " evaluations";
      throw Error(ErrorCode::budget_exceeded, os.str());
    }
    const Panel worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a <= 8 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      retired_value += worst.value;
      retired_error += worst.error;
      continue;
    }
    const Panel left = kronrod(counted, worst.a, mid);
    const Panel right = kronrod(counted, mid, worst.b);
    open.push(left);
    open.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (open.size() % 64 == 0) {
      // refresh the running sums against drift
      value = retired_value;
      error = retired_error;
      auto copy = open;
      for (; !copy.empty(); copy.pop()) {
        value += copy.top().value;
        error += copy.top().error;
      }
    }
  }
  // exact resummation
  double total = retired_value, total_error = retired_error;
  for (; !open.empty(); open.pop()) {
    total += open.top().value;
    total_error += open.top().error;
  }
  if (total_error > target(total)) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] stalled at error " << total_error
       << " (panels at floating-point resolution)";
    throw Error(ErrorCode::budget_exceeded, os.str());
  }
  return {total, total_error, count};
}

QuadratureResult integrate(const ScalarFn& f, double a, double b, double rel_tol) {
  QuadratureOptions options;
  options.rel_tol = rel_tol;
  return integrate(f, a, b, options);
}

SingularEndResult integrate_to_singular_end(const ScalarFn& f, double a, double b,
                                            const QuadratureOptions& options,
                                            double delta_min_fraction) {
  if (!(a < b)) throw Error(ErrorCode::invalid_argument, "integration needs a < b");
  SingularEndResult out;
  const double width = b - a;
  const double delta_min = delta_min_fraction * std::max(width, std::abs(b));

  double delta = 0.5 * width;
  QuadratureResult head = integrate(f, a, b - delta, options);
  out.value = head.value;
  out.evaluations = head.evaluations;

  double prev_increment = 0.0;
  double prev_extrapolated = std::numeric_limits<double>::quiet_NaN();
  double last_jump = std::numeric_limits<double>::quiet_NaN();
  int stalled = 0;
  for (int k = 0; delta * 0.5 >= delta_min; ++k) {
    const double next = 0.5 * delta;
    if (!(b - delta < b - next && b - next < b)) break;
    QuadratureResult piece;
    try {
      piece = integrate(f, b - delta, b - next, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::budget_exceeded) throw;
      // integrand rounding noise near the end: keep the last stable extrapolation
      if (std::isfinite(prev_extrapolated) && stalled == 0 && std::isfinite(last_jump) &&
          last_jump <= 1e-6 * std::abs(prev_extrapolated)) {
        out.tail_estimate = prev_extrapolated - out.value;
        out.value = prev_extrapolated;
        out.delta = delta;
        out.converged = true;
        return out;
      }
      break;
    }
    out.value += piece.value;
    out.evaluations += piece.evaluations;
    delta = next;
    const double inc = piece.value;
    if (k > 0 && prev_increment != 0.0) {
      const double q = inc / prev_increment;
      if (q > 0.0 && q < 0.98) {
        // geometric tail of the remaining halvings
        const double tail = inc * q / (1.0 - q);
        const double extrapolated = out.value + tail;
        stalled = 0;
        const double tol = options.rel_tol * std::abs(extrapolated) + options.abs_tol;
        if (std::abs(tail) <= tol || std::abs(extrapolated - prev_extrapolated) <= tol) {
          out.tail_estimate = tail;
          out.value = extrapolated;
          out.delta = delta;
          out.converged = true;
          return out;
        }
        last_jump = std::abs(extrapolated - prev_extrapolated);
        prev_extrapolated = extrapolated;
      } else if (q >= 0.98) {
        // Halving the gap no longer shrinks the increments: log-type or worse.
        if (++stalled >= 8) break;
      }
    }
    prev_increment = inc;
  }
  out.delta = delta;
  out.converged = false;
  return out;
}

RootBracket bracket_root_interval(const ScalarFn& g, double lo, double hi, double tol) {
  if (!(lo < hi)) throw Error(ErrorCode::invalid_argument, "root bracket needs lo < hi");
  const double glo = g(lo);
  const double ghi = g(hi);
  if (!std::isfinite(glo) || !std::isfinite(ghi)) {
    throw Error(ErrorCode::non_finite, "root function not finite at the bracket ends");
  }
  if (glo == 0.0) return {lo, lo};
  if (ghi == 0.0) return {hi, hi};
  if ((glo < 0.0) == (ghi < 0.0)) {
    std::ostringstream os;
    os << "no sign change on [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::no_sign_change, os.str());
  }
  auto done = [tol](double a, double b) {
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    return std::abs(b - a) <= std::max(tol, floor);
  };
  std::uintmax_t iterations = 200;
  // TOMS 748: secant / inverse-cubic steps safeguarded by bisection.
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, done, iterations);
  // The library can stop on an exact zero before the width criterion.
  if (!done(a, b) && g(a) != 0.0 && g(b) != 0.0) {
    throw Error(ErrorCode::budget_exceeded, "root bracket did not shrink to tolerance");
  }
  return {a, b};
}

double bracket_root(const ScalarFn& g, double lo, double hi, double tol) {
  return bracket_root_interval(g, lo, hi, tol).root();
}

}  // namespace kflow
