#include "kflow/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "kflow/error.hpp"
#include "kflow/helicoidal.hpp"
#include "kflow/io.hpp"
#include "kflow/rotational.hpp"
#include "kflow/ruled.hpp"

namespace kflow::cli {

namespace {

using translation::TranslationCase;

const std::map<std::string, TranslationCase> kCases{
    {"additive-v3", TranslationCase::additive_v3},
    {"additive-v2", TranslationCase::additive_v2},
    {"graph-xz", TranslationCase::graph_xz},
    {"homothetical", TranslationCase::homothetical},
};

// Values bound to CLI11 options before they are folded into a Command.
struct Raw {
  std::string sign = "plus";
  std::string tcase = "additive-v3";
  double m = 0, r_min = 0, r_max = 0;
  std::vector<double> chart, ruled_chart, t_range;
  std::vector<std::size_t> grid;
};

void add_profile_flags(CLI::App* app, Command& cmd, Raw& raw) {
  app->add_option("--alpha", cmd.alpha, "Exponent alpha (nonzero)");
  app->add_option("--m", raw.m, "Integration constant m");
  app->add_option("--sign", raw.sign, "Branch of the square root")->check(CLI::IsMember({"plus", "minus"}));
  app->add_option("--anchor", cmd.anchor, "Value of f at the integration anchor");
  app->add_option("--samples", cmd.samples, "Number of r-samples");
  app->add_option("--r-min", raw.r_min, "Smallest sampled r");
  app->add_option("--r-max", raw.r_max, "Largest sampled r");
}

void add_translation_flags(CLI::App* app, Command& cmd, Raw& raw) {
  auto& t = cmd.translation;
  app->add_option("--case", raw.tcase, "additive-v3, additive-v2, graph-xz or homothetical")
      ->check(CLI::IsMember({"additive-v3", "additive-v2", "graph-xz", "homothetical"}));
  app->add_option("--a", t.a, "Constant a");
  app->add_option("--b", t.b, "Constant b");
  app->add_option("--c", t.c, "Constant c");
  app->add_option("--d", t.d, "Constant d");
  app->add_option("--v3", t.v3, "Third speed component (additive-v2)");
  app->add_option("--chart", raw.chart, "u0,u1,v0,v1")->delimiter(',')->expected(4);
  app->add_option("--a-h", t.a_h, "Homothetical constant a");
  app->add_option("--m-h", t.m_h, "Homothetical constant m");
  app->add_option("--y-pole", t.y_pole, "Pole of g");
  app->add_option("--g-sign", t.g_sign, "Sign of g (+1 or -1)");
  app->add_option("--z0", t.z0, "Anchor height of f");
  app->add_option("--f0", t.f0, "Value f(z0)");
}

void add_grid_flag(CLI::App* app, Raw& raw) {
  app->add_option("--grid", raw.grid, "nu,nv")->delimiter(',')->expected(2);
}

void add_output_flags(CLI::App* app, Command& cmd) {
  app->add_option("--out-dir", cmd.out_dir, "Base directory for relative output paths");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

bool finite(double x) { return std::isfinite(x); }

void validate_profile(const Command& c, bool helicoidal) {
  require(finite(c.alpha) && c.alpha != 0.0, "--alpha: alpha must be nonzero and finite");
  if (c.surface_alpha) {
    require(finite(*c.surface_alpha) && *c.surface_alpha != 0.0,
            "--surface-alpha: alpha must be nonzero and finite");
  }
  const double build_alpha = c.surface_alpha.value_or(c.alpha);
  if (c.m) {
    require(finite(*c.m), "--m: must be finite");
    if (build_alpha == 0.5) require(*c.m > 0.0, "--m: m > 0 required for alpha = 1/2");
  }
  if (helicoidal) require(finite(c.pitch), "--pitch: must be finite");
  require(c.samples >= 2, "--samples: at least 2 samples are required");
  if (c.r_min) require(finite(*c.r_min) && *c.r_min >= 0.0, "--r-min: must be finite and >= 0");
  if (c.r_max) require(finite(*c.r_max), "--r-max: must be finite");
  if (c.r_min && c.r_max) require(*c.r_min < *c.r_max, "--r-min must be smaller than --r-max");
}

void validate_translation(const Command& c) {
  const auto& t = c.translation;
  const ChartDomain& ch = t.chart;
  require(ch.u0 < ch.u1 && ch.v0 < ch.v1, "--chart: need u0 < u1 and v0 < v1");
  if (t.kind == TranslationCase::homothetical) {
    require(t.a_h > 0.0, "--a-h: a must be positive");
    require(t.m_h != 0.0 && finite(t.m_h), "--m-h: m must be nonzero");
    require(t.g_sign == 1.0 || t.g_sign == -1.0, "--g-sign: must be +1 or -1");
    require(t.f0 > 0.0 && t.f0 < 1.0 / (2.0 * t.m_h * t.m_h), "--f0: must lie in (0, 1/(2 m^2))");
    require(!(t.y_pole >= ch.v0 && t.y_pole <= ch.v1), "--y-pole: pole lies inside the y-range");
  } else {
    require(t.m != 0.0 && finite(t.m), "--m: m must be nonzero");
  }
  if (c.surface_alpha) require(*c.surface_alpha == 0.25, "--surface-alpha: translation surfaces exist only for alpha = 1/4");
}

void validate_ruled(const Command& c) {
  require(c.alpha != 0.0 && is_integer_exponent(c.alpha), "--alpha: ruled probes need a nonzero integer alpha");
  require(c.lambda != 0.0 && finite(c.lambda), "--lambda: lambda must be nonzero");
  require(c.t0 < c.t1, "--t-range: need t0 < t1");
  require(c.samples >= 16, "--samples: at least 16 samples are required");
}

void validate_grid(const Command& c) {
  require(c.grid.nu >= 2 && c.grid.nv >= 2, "--grid: both sizes must be at least 2");
}

void validate_family(const Command& c) {
  const std::string& f = c.family;
  if (f == "rotational") validate_profile(c, false);
  else if (f == "helicoidal" || f == "bour") validate_profile(c, true);
  else if (f == "translation") validate_translation(c);
  else if (f == "ruled") {
    require(c.pitch > 0.0 && finite(c.pitch), "--pitch: ruled helicoid needs pitch > 0");
    const ChartDomain& ch = c.ruled_chart;
    require(ch.u0 < ch.u1 && ch.v0 < ch.v1, "--ruled-chart: need s0 < s1 and t0 < t1");
  }
}

}  // namespace

Command parse(const std::vector<std::string>& args) {
  Command cmd;
  Raw raw;
  CLI::App app{"Translating solitons of the K^alpha Gauss curvature flow", "kflow"};
  app.require_subcommand(1);

  auto* rot = app.add_subcommand("rotational", "Generating curve of a rotational translator");
  add_profile_flags(rot, cmd, raw);
  rot->add_flag("--orthogonal", cmd.orthogonal, "Use the member meeting the axis orthogonally");
  rot->add_option("--out", cmd.out, "CSV output");
  rot->add_option("--svg", cmd.svg, "SVG output");
  rot->add_option("--figure", cmd.figure, "Write a figure family (fig14 or fig2)")
      ->check(CLI::IsMember({"fig14", "fig2"}));
  add_output_flags(rot, cmd);

  auto* hel = app.add_subcommand("helicoidal", "Generating curve of a helicoidal translator");
  add_profile_flags(hel, cmd, raw);
  hel->add_option("--pitch", cmd.pitch, "Pitch h");
  hel->add_option("--out", cmd.out, "CSV output");
  hel->add_option("--svg", cmd.svg, "SVG output");
  hel->add_option("--figure", cmd.figure, "Write a figure family (fig3)")->check(CLI::IsMember({"fig3"}));
  add_output_flags(hel, cmd);

  auto* tr = app.add_subcommand("translation", "Build a translation-type solution and report its residual");
  add_translation_flags(tr, cmd, raw);
  tr->add_option("--m", raw.m, "Constant m");
  add_grid_flag(tr, raw);
  tr->add_option("--json", cmd.json, "JSON output");
  add_output_flags(tr, cmd);

  auto* ru = app.add_subcommand("ruled", "Linear-independence probe for ruled surfaces");
  ru->add_option("--alpha", cmd.alpha, "Integer exponent")->required();
  ru->add_option("--lambda", cmd.lambda, "Distribution parameter");
  ru->add_option("--t-range", raw.t_range, "t0,t1")->delimiter(',')->expected(2);
  ru->add_option("--samples", cmd.samples, "Number of t-samples");
  ru->add_option("--json", cmd.json, "JSON output");
  add_output_flags(ru, cmd);

  const std::vector<std::string> families{"rotational", "helicoidal", "bour", "translation", "ruled"};
  auto add_family = [&](CLI::App* sub, bool with_ruled) {
    auto fam = families;
    if (!with_ruled) fam.pop_back();
    sub->add_option("--family", cmd.family, "Surface family")->required()->check(CLI::IsMember(fam));
    add_profile_flags(sub, cmd, raw);
    sub->add_option("--pitch", cmd.pitch, "Pitch h");
    sub->add_flag("--orthogonal", cmd.orthogonal, "Rotational member meeting the axis orthogonally");
    add_translation_flags(sub, cmd, raw);
    add_grid_flag(sub, raw);
    add_output_flags(sub, cmd);
  };

  auto* ve = app.add_subcommand("verify", "Residual K^alpha - <N,v> of a built surface against a tolerance");
  add_family(ve, false);
  ve->add_option("--surface-alpha", cmd.surface_alpha, "Exponent used to build the surface (default: --alpha)");
  ve->add_option("--tol", cmd.tolerance, "Tolerance on the max-abs residual");
  ve->add_option("--json", cmd.json, "JSON output");

  auto* me = app.add_subcommand("mesh", "Triangulated OBJ of a built surface chart");
  add_family(me, true);
  me->add_option("--ruled-chart", raw.ruled_chart, "s0,s1,t0,t1 for the ruled helicoid")
      ->delimiter(',')
      ->expected(4);
  me->add_option("--out", cmd.out, "OBJ output")->required();

  if (!args.empty() && !args.front().starts_with("-") && !app.get_subcommand_no_throw(args.front())) {
    throw UsageError("unknown subcommand '" + args.front() + "'");
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cmd.subcommand = "help";
    const auto subs = app.get_subcommands();
    cmd.help = subs.empty() ? app.help() : subs.back()->help();
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  cmd.subcommand = chosen->get_name();
  cmd.sign = raw.sign == "plus" ? Branch::plus : Branch::minus;
  auto given = [chosen](const char* name) {
    return chosen->get_option_no_throw(name) != nullptr && chosen->count(name) > 0;
  };
  if (given("--m")) cmd.m = raw.m;
  if (given("--r-min")) cmd.r_min = raw.r_min;
  if (given("--r-max")) cmd.r_max = raw.r_max;
  cmd.translation.kind = kCases.at(raw.tcase);
  if (cmd.m) cmd.translation.m = *cmd.m;
  if (!raw.chart.empty()) cmd.translation.chart = {raw.chart[0], raw.chart[1], raw.chart[2], raw.chart[3]};
  if (!raw.ruled_chart.empty()) {
    cmd.ruled_chart = {raw.ruled_chart[0], raw.ruled_chart[1], raw.ruled_chart[2], raw.ruled_chart[3]};
  }
  if (!raw.t_range.empty()) cmd.t0 = raw.t_range[0], cmd.t1 = raw.t_range[1];
  if (!raw.grid.empty()) cmd.grid = {raw.grid[0], raw.grid[1]};
  if (cmd.subcommand == "ruled" && !given("--samples")) cmd.samples = 128;

  if (cmd.subcommand == "rotational") {
    cmd.family = "rotational";
    if (!cmd.figure) validate_profile(cmd, false);
  } else if (cmd.subcommand == "helicoidal") {
    cmd.family = "helicoidal";
    if (!cmd.figure) validate_profile(cmd, true);
  } else if (cmd.subcommand == "translation") {
    cmd.family = "translation";
    validate_translation(cmd);
    validate_grid(cmd);
  } else if (cmd.subcommand == "ruled") {
    validate_ruled(cmd);
  } else {
    validate_family(cmd);
    validate_grid(cmd);
    if (cmd.subcommand == "verify") require(cmd.tolerance > 0.0, "--tol: tolerance must be positive");
  }
  return cmd;
}

std::filesystem::path resolve_output(const Command& cmd, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  if (cmd.out_dir) return std::filesystem::path(*cmd.out_dir) / p;
  if (const char* env = std::getenv("KFLOW_OUTPUT_DIR"); env && *env) return std::filesystem::path(env) / p;
  return p;
}

namespace {

SamplingPolicy sampling_of(const Command& c) {
  SamplingPolicy s;
  s.count = c.samples;
  s.r_min = c.r_min;
  s.r_max = c.r_max;
  return s;
}

HelicoidalParams helicoidal_params(const Command& c, double alpha) {
  return {alpha, c.m.value_or(alpha == 0.5 ? 1.0 : 0.0), c.pitch, c.sign, c.anchor};
}

ProfileCurve build_profile(const Command& c, double alpha) {
  if (c.family == "rotational") {
    if (c.orthogonal) return rotational::orthogonal_profile(alpha, sampling_of(c));
    return rotational::profile({alpha, c.m.value_or(1.0), c.sign, c.anchor}, sampling_of(c));
  }
  return helicoidal::profile(helicoidal_params(c, alpha), sampling_of(c));
}

struct Built {
  ParamSurface surface;
  Vec3 speed;
};

Built build_surface(const Command& c, double alpha) {
  const Vec3 e3 = Vec3::UnitZ();
  if (c.family == "rotational") return {rotational::revolve(build_profile(c, alpha)), e3};
  if (c.family == "helicoidal") return {helicoidal::helicoid_surface(build_profile(c, alpha)), e3};
  if (c.family == "bour") return {helicoidal::BourChart(helicoidal_params(c, alpha), sampling_of(c)).surface(), e3};
  if (c.family == "ruled") {
    return {ruled::ruled_surface(ruled::helicoid_ruled_data(c.pitch), c.ruled_chart), e3};
  }
  const auto s = c.translation.kind == TranslationCase::homothetical
                     ? translation::build_homothetical(c.translation)
                     : translation::build_quarter_solution(c.translation);
  return {s.surface, s.speed};
}

void emit(const Command& c, const std::string& path, const std::string& content, std::ostream& out) {
  const auto p = resolve_output(c, path);
  io::write_text(p, content);
  out << "wrote " << p.string() << '\n';
}

std::vector<ProfileSample> copy_samples(const ProfileCurve& curve) {
  return {curve.samples().begin(), curve.samples().end()};
}

void write_family(const Command& c, const std::string& stem,
                  const std::vector<std::pair<std::string, ProfileCurve>>& curves, std::ostream& out) {
  std::vector<io::SvgCurve> svg;
  for (const auto& [label, curve] : curves) {
    emit(c, stem + "_" + label + ".csv", io::curve_csv(curve.samples()), out);
    svg.push_back({label, copy_samples(curve)});
  }
  emit(c, stem + ".svg", io::curves_svg(svg), out);
}

std::string label_of(const char* key, double x) {
  std::ostringstream os;
  os << key << x;
  return os.str();
}

int run_figure(const Command& c, std::ostream& out) {
  SamplingPolicy s;
  s.count = c.samples;
  std::vector<std::pair<std::string, ProfileCurve>> curves;
  if (*c.figure == "fig14") {
    s.r_max = 3.0;
    for (double m : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      curves.emplace_back(label_of("m", m), rotational::profile({0.25, m, Branch::plus, 0.0}, s));
    }
  } else if (*c.figure == "fig2") {
    s.r_max = 3.0;
    curves.emplace_back("alpha0.5", rotational::orthogonal_profile(0.5, s));
    SamplingPolicy full;
    full.count = c.samples;
    curves.emplace_back("alpha1", rotational::orthogonal_profile(1.0, full));
  } else {
    s.r_max = 3.0;
    curves.emplace_back("alpha0.5", helicoidal::profile({0.5, 1.0, 1.0, Branch::plus, 0.0}, s));
    curves.emplace_back("alpha0.25", helicoidal::profile({0.25, 0.0, 1.0, Branch::plus, 0.0}, s));
    SamplingPolicy near_axis;
    near_axis.count = c.samples;
    near_axis.r_min = 0.2;
    curves.emplace_back("alpha1", helicoidal::profile({1.0, 0.0, 1.0, Branch::plus, 0.0}, near_axis));
  }
  write_family(c, *c.figure, curves, out);
  return exit_ok;
}

int run_curve(const Command& c, std::ostream& out) {
  if (c.figure) return run_figure(c, out);
  const ProfileCurve curve = build_profile(c, c.alpha);
  const std::string csv = io::curve_csv(curve.samples());
  if (c.out) emit(c, *c.out, csv, out);
  if (c.svg) emit(c, *c.svg, io::curves_svg({{c.family, copy_samples(curve)}}), out);
  if (!c.out && !c.svg) out << csv;
  return exit_ok;
}

void report(const Command& c, const nlohmann::ordered_json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (c.json) emit(c, *c.json, text, out);
  out << text;
}

int run_translation(const Command& c, std::ostream& out) {
  const auto s = c.translation.kind == TranslationCase::homothetical
                     ? translation::build_homothetical(c.translation)
                     : translation::build_quarter_solution(c.translation);
  const ResidualReport r = translator_residual(s.surface, TranslatorSpec(0.25, s.speed), c.grid);
  const ChartDomain& ch = s.params.chart;
  nlohmann::ordered_json j;
  j["case"] = translation::to_string(s.params.kind);
  j["chart"] = {ch.u0, ch.u1, ch.v0, ch.v1};
  j["raw_speed"] = {s.raw_speed.x(), s.raw_speed.y(), s.raw_speed.z()};
  j["scale"] = s.scale;
  j["report"] = io::residual_json({"translation", 0.25, s.speed, 1e-8}, r);
  report(c, j, out);
  return exit_ok;
}

int run_ruled(const Command& c, std::ostream& out) {
  const double min_eig = ruled::independence_probe(c.alpha, c.lambda, c.t0, c.t1, static_cast<int>(c.samples));
  nlohmann::ordered_json j;
  j["alpha"] = c.alpha;
  j["lambda"] = c.lambda;
  j["t_range"] = {c.t0, c.t1};
  j["samples"] = c.samples;
  j["min_eigenvalue"] = min_eig;
  auto zeros = nlohmann::ordered_json::array();
  if (c.alpha > 0) {
    const double t = std::abs(c.lambda) / (2 * std::sqrt(c.alpha));
    zeros = {-t, t};
  }
  j["wronskian_zeros"] = zeros;
  j["independent"] = min_eig > 1e-8;
  report(c, j, out);
  return min_eig > 1e-8 ? exit_ok : exit_verification_failed;
}

int run_verify(const Command& c, std::ostream& out) {
  const double build_alpha = c.family == "translation" ? 0.25 : c.surface_alpha.value_or(c.alpha);
  const Built b = build_surface(c, build_alpha);
  const ResidualReport r = translator_residual(b.surface, TranslatorSpec(c.alpha, b.speed), c.grid);
  const auto j = io::residual_json({c.family, c.alpha, b.speed, c.tolerance}, r);
  report(c, j, out);
  return j["pass"].get<bool>() ? exit_ok : exit_verification_failed;
}

int run_mesh(const Command& c, std::ostream& out) {
  const double alpha = c.family == "translation" ? 0.25 : c.alpha;
  const Built b = build_surface(c, alpha);
  const io::Mesh mesh = io::triangulate(b.surface, c.grid);
  emit(c, *c.out, io::mesh_obj(mesh), out);
  out << mesh.vertices.size() << " vertices, " << mesh.faces.size() << " faces\n";
  return exit_ok;
}

}  // namespace

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    if (cmd.subcommand == "help") {
      out << cmd.help;
      return exit_ok;
    }
    if (cmd.subcommand == "rotational" || cmd.subcommand == "helicoidal") return run_curve(cmd, out);
    if (cmd.subcommand == "translation") return run_translation(cmd, out);
    if (cmd.subcommand == "ruled") return run_ruled(cmd, out);
    if (cmd.subcommand == "verify") return run_verify(cmd, out);
    if (cmd.subcommand == "mesh") return run_mesh(cmd, out);
    err << "error: unknown subcommand " << cmd.subcommand << '\n';
    return exit_usage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_runtime;
  } catch (const io::IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return exit_runtime;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun 'kflow --help' for usage\n";
    return exit_usage;
  }
  return execute(cmd, out, err);
}

}  // namespace kflow::cli
