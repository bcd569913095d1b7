#include "kflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kflow/error.hpp"

namespace kflow {

const char* to_string(ProfileFamily family) {
  switch (family) {
    case ProfileFamily::rotational: return "rotational";
    case ProfileFamily::helicoidal: return "helicoidal";
  }
  return "unknown";
}

namespace {

double domain_width(const Interval& d, const SamplingPolicy& s) {
  return d.bounded() ? *d.hi - d.lo : s.unbounded_span;
}

double unsigned_slope(const SlopeModel& m, double r) {
  const double s2 = m.slope_squared(r);
  return s2 > 0.0 ? std::sqrt(s2) : 0.0;
}

}  // namespace

std::vector<double> sample_positions(const Interval& domain, const SlopeModel& model,
                                     const SamplingPolicy& sampling) {
  if (sampling.count < 2) throw Error(ErrorCode::invalid_argument, "profile needs at least 2 samples");
  const double width = domain_width(domain, sampling);
  const double pull = sampling.end_margin * width;

  double r0;
  if (sampling.r_min) {
    r0 = *sampling.r_min;
  } else if (domain.lo_closed && std::isfinite(model.curvature(domain.lo))) {
    r0 = domain.lo;
  } else {
    r0 = domain.lo + pull;
  }

  double r1;
  if (sampling.r_max) {
    r1 = *sampling.r_max;
  } else if (!domain.bounded()) {
    r1 = domain.lo + sampling.unbounded_span;
  } else if (domain.hi_closed && std::isfinite(model.curvature(*domain.hi))) {
    r1 = *domain.hi;
  } else {
    r1 = *domain.hi - pull;
  }

  if (!(r0 < r1)) {
    std::ostringstream os;
    os << "empty sampling range [" << r0 << ", " << r1 << "]";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  if (!domain.contains(r0) || !domain.contains(r1)) {
    std::ostringstream os;
    os << "sampling range [" << r0 << ", " << r1 << "] leaves the profile domain";
    throw Error(ErrorCode::out_of_domain, os.str());
  }

  std::vector<double> rs(sampling.count);
  const double step = (r1 - r0) / static_cast<double>(sampling.count - 1);
  for (std::size_t i = 0; i < sampling.count; ++i) rs[i] = r0 + static_cast<double>(i) * step;
  rs.back() = r1;
  return rs;
}

ProfileCurve::ProfileCurve(ProfileFamily family, ProfileParams params, Interval domain,
                           SlopeModel model, Branch sign, double anchor_value,
                           const SamplingPolicy& sampling, int orientation)
    : family_(family),
      params_(std::move(params)),
      domain_(domain),
      model_(std::make_shared<const SlopeModel>(std::move(model))),
      sign_(sign),
      anchor_value_(anchor_value),
      orientation_(orientation >= 0 ? 1 : -1) {
  const auto rs = sample_positions(domain_, *model_, sampling);

  if (domain_.lo_closed) {
    anchor_r_ = domain_.lo;
  } else if (domain_.bounded() && domain_.hi_closed) {
    anchor_r_ = *domain_.hi;
  } else {
    anchor_r_ = rs.front();
  }

  const double sgn = branch_sign(sign_);
  auto piece = [this](double a, double b) {
    if (a == b) return 0.0;
    const auto& m = *model_;
    auto fp = [&m](double t) { return unsigned_slope(m, t); };
    if (a < b) return integrate(fp, a, b).value;
    return -integrate(fp, b, a).value;
  };

  std::size_t k = 0;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    if (std::abs(rs[i] - anchor_r_) < std::abs(rs[k] - anchor_r_)) k = i;
  }
  std::vector<double> fs(rs.size());
  fs[k] = anchor_value_ + sgn * piece(anchor_r_, rs[k]);
  for (std::size_t i = k + 1; i < rs.size(); ++i) fs[i] = fs[i - 1] + sgn * piece(rs[i - 1], rs[i]);
  for (std::size_t i = k; i-- > 0;) fs[i] = fs[i + 1] - sgn * piece(rs[i], rs[i + 1]);

  samples_.reserve(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    samples_.push_back({rs[i], fs[i], sgn * unsigned_slope(*model_, rs[i]),
                        sgn * model_->curvature(rs[i])});
  }
}

void ProfileCurve::require_in_domain(double r) const {
  if (!domain_.contains(r)) {
    std::ostringstream os;
    os << "r = " << r << " outside the profile domain";
    throw Error(ErrorCode::out_of_domain, os.str());
  }
}

double ProfileCurve::slope(double r) const {
  require_in_domain(r);
  return branch_sign(sign_) * unsigned_slope(*model_, r);
}

double ProfileCurve::curvature(double r) const {
  require_in_domain(r);
  return branch_sign(sign_) * model_->curvature(r);
}

double ProfileCurve::height(double r) const {
  require_in_domain(r);
  auto it = std::lower_bound(samples_.begin(), samples_.end(), r,
                             [](const ProfileSample& s, double x) { return s.r < x; });
  const ProfileSample* base;
  if (it == samples_.end()) {
    base = &samples_.back();
  } else if (it == samples_.begin()) {
    base = &samples_.front();
  } else {
    base = (r - std::prev(it)->r <= it->r - r) ? &*std::prev(it) : &*it;
  }
  if (base->r == r) return base->f;
  const auto& m = *model_;
  auto fp = [&m](double t) { return unsigned_slope(m, t); };
  const double integral = base->r < r ? integrate(fp, base->r, r).value
                                      : -integrate(fp, r, base->r).value;
  return base->f + branch_sign(sign_) * integral;
}

ProfileSample ProfileCurve::at(double r) const {
  return {r, height(r), slope(r), curvature(r)};
}

std::optional<double> ProfileCurve::upper_end_height() const {
  if (!domain_.bounded()) return std::nullopt;
  if (domain_.hi_closed) return height(*domain_.hi);
  const auto& m = *model_;
  auto fp = [&m](double t) { return unsigned_slope(m, t); };
  const SingularEndResult tail = integrate_to_singular_end(fp, anchor_r_, *domain_.hi);
  if (!tail.converged) return std::nullopt;
  return anchor_value_ + branch_sign(sign_) * tail.value;
}

}  // namespace kflow
