#pragma once

#include <stdexcept>
#include <string>

namespace kflow {

enum class ErrorCode {
  invalid_argument,   // a precondition on parameters was violated
  out_of_domain,      // evaluation point outside the chart or profile domain
  non_finite,         // an evaluation produced NaN or infinity
  degenerate,         // singular jet, cylindrical ruling, rank deficiency
  empty_domain,       // no admissible interval for the requested parameters
  no_sign_change,     // root bracketing failed
  budget_exceeded,    // quadrature or ODE march did not converge in budget
  all_points_skipped  // K^alpha undefined on every sampled point
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kflow
