#pragma once

// Command-line front end: argument parsing into a Command and its execution.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kflow/geometry.hpp"
#include "kflow/profile.hpp"
#include "kflow/translation.hpp"

namespace kflow::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_verification_failed = 1,
  exit_usage = 2,
  exit_runtime = 3,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Command {
  std::string subcommand;  ///< rotational, helicoidal, translation, ruled, verify, mesh, help
  std::string family;      ///< surface family for verify and mesh

  double alpha = 0.25;
  std::optional<double> surface_alpha;  ///< verify: build exponent if it differs from alpha
  std::optional<double> m;
  double pitch = 1.0;
  Branch sign = Branch::plus;
  double anchor = 0.0;
  bool orthogonal = false;
  std::size_t samples = 201;
  std::optional<double> r_min, r_max;

  translation::TranslationParams translation;

  double lambda = 1.0;
  double t0 = -2.0, t1 = 2.0;
  ChartDomain ruled_chart{-1.0, 1.0, -2.0, 2.0};

  GridDims grid{32, 32};
  double tolerance = 1e-8;

  std::optional<std::string> out, svg, json, out_dir, figure;
  std::string help;
};

/// Parses argv without the program name. Errors: UsageError naming the
/// offending flag or value.
Command parse(const std::vector<std::string>& args);

/// Runs a parsed command; artifacts are written to disk, reports to `out`.
/// Returns an ExitCode.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

/// parse + execute with exit-code mapping.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Relative paths resolve against --out-dir, then $KFLOW_OUTPUT_DIR, then
/// the working directory.
std::filesystem::path resolve_output(const Command& cmd, const std::string& path);

}  // namespace kflow::cli
