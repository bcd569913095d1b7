#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kflow/cli.hpp"
#include "kflow/io.hpp"
#include "kflow/rotational.hpp"
#include "kflow/translation.hpp"

using namespace kflow;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "kflow_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("parse examples") {
  const auto cmd = cli::parse({"rotational", "--alpha", "0.25", "--m", "1", "--out", "c.csv"});
  CHECK(cmd.subcommand == "rotational");
  CHECK(cmd.alpha == 0.25);
  CHECK(cmd.m == 1.0);
  CHECK(cmd.out == "c.csv");

  CHECK_THROWS_WITH_AS(cli::parse({"rotational", "--alpha", "0"}), doctest::Contains("alpha must be nonzero"),
                       cli::UsageError);
  CHECK_THROWS_WITH_AS(cli::parse({"helicoidal", "--alpha", "0.5", "--m", "-1", "--pitch", "1"}),
                       doctest::Contains("m > 0 required for alpha = 1/2"), cli::UsageError);
  CHECK_THROWS_WITH_AS(cli::parse({"spiral"}), doctest::Contains("unknown subcommand"), cli::UsageError);
  CHECK_THROWS_WITH_AS(cli::parse({"mesh", "--family", "rotational"}), doctest::Contains("--out"),
                       cli::UsageError);
  CHECK_THROWS_WITH_AS(cli::parse({"rotational", "--m", "one"}), doctest::Contains("--m"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({}), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"verify", "--family", "rotational", "--grid", "1,4"}), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"verify", "--family", "rotational", "--tol", "0"}), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"ruled", "--alpha", "1", "--lambda", "0"}), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"translation", "--case", "homothetical", "--f0", "0.7"}), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"translation", "--case", "spiral"}), cli::UsageError);

  const auto tr = cli::parse({"translation", "--case", "graph-xz", "--m", "-1", "--chart=-1,1,0,1", "--grid", "8,9"});
  CHECK(tr.translation.kind == translation::TranslationCase::graph_xz);
  CHECK(tr.translation.m == -1.0);
  CHECK(tr.translation.chart.v0 == 0.0);
  CHECK(tr.grid.nu == 8);
  CHECK(tr.grid.nv == 9);

  CHECK(cli::parse({"--help"}).subcommand == "help");
  CHECK(run({"verify", "--help"}).out.find("--surface-alpha") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"verify", "--family", "rotational", "--alpha", "0.25", "--m", "1", "--tol", "1e-8"}).code == 0);
  const Run fail = run({"verify", "--family", "rotational", "--surface-alpha", "0.25", "--alpha", "0.5", "--m",
                        "1", "--tol", "1e-8"});
  CHECK(fail.code == 1);
  const auto j = nlohmann::json::parse(fail.out);
  CHECK(j["max_abs"].get<double>() > 0.1);
  CHECK(run({"rotational", "--alpha", "0"}).code == 2);
  // empty domain surfaces as a construction error
  CHECK(run({"rotational", "--alpha", "0.25", "--m", "-2", "--r-max", "0.5"}).code == 3);
  CHECK(run({"mesh", "--family", "rotational", "--out", "/proc/kflow/none.obj"}).code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify report fields") {
  const Run r = run({"verify", "--family", "translation", "--case", "additive-v3", "--alpha", "0.25", "--tol",
                     "1e-10", "--grid", "16,8"});
  CHECK(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"family", "alpha", "speed", "grid", "max_abs", "mean_abs", "skipped",
                                         "tolerance", "pass"});
  CHECK(j["grid"][0] == 16);
  CHECK(j["grid"][1] == 8);
  CHECK(j["pass"] == true);

  CHECK(run({"verify", "--family", "translation", "--alpha", "0.5", "--tol", "1e-3"}).code == 1);
  CHECK(run({"verify", "--family", "bour", "--alpha", "0.25", "--m", "-1", "--tol", "1e-6"}).code == 0);
  CHECK(run({"verify", "--family", "helicoidal", "--alpha", "1", "--m", "0", "--tol", "1e-6", "--r-min", "0.3"})
            .code == 0);
}

TEST_CASE("CSV export") {
  const auto dir = scratch("csv");
  REQUIRE(run({"rotational", "--alpha", "0.25", "--m", "1", "--samples", "11", "--r-max", "2", "--out",
               (dir / "c.csv").string()})
              .code == 0);
  const std::string text = slurp(dir / "c.csv");
  CHECK(text.find('\r') == std::string::npos);
  const auto rows = lines(text);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == "r,f,fprime,fsecond");
  const auto curve = rotational::profile({0.25, 1.0, Branch::plus, 0.0}, {.count = 11, .r_min = {}, .r_max = 2.0});
  for (std::size_t i = 0; i < 11; ++i) {
    std::istringstream row(rows[i + 1]);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 4);
    // lossless round trip
    CHECK(v[0] == curve.samples()[i].r);
    CHECK(v[1] == curve.samples()[i].f);
    CHECK(v[2] == curve.samples()[i].fp);
    CHECK(v[3] == curve.samples()[i].fpp);
    CHECK(v[1] == doctest::Approx(v[0] * v[0] / 2));
  }
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("SVG export") {
  const std::vector<ProfileSample> a{{0, 0, 0, 1}, {1, 2, 0, 0}};
  const std::vector<ProfileSample> b{{0.5, -1, 0, 0}, {3, 1, 0, 0}};
  const std::string svg = io::curves_svg({{"a", a}, {"b", b}});
  CHECK(svg.find("viewBox=\"-0.150000 -2.150000 3.300000 3.300000\"") != std::string::npos);
  CHECK(svg.find("id=\"a\" points=\"0.000000,0.000000 1.000000,2.000000\"") != std::string::npos);
  CHECK(svg.find("id=\"b\"") != std::string::npos);
}

TEST_CASE("mesh export and round trip") {
  auto p = translation::TranslationParams{};
  const auto s = translation::build_quarter_solution(p);
  const io::Mesh mesh = io::triangulate(s.surface, {3, 2});
  CHECK(mesh.vertices.size() == 12);
  CHECK(mesh.faces.size() == 12);
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
    const ChartPoint c = mesh.parameters[k];
    CHECK(mesh.vertices[k] == s.surface.position(c.u, c.v));
  }
  CHECK(mesh.parameters.front().u == s.surface.domain().u0);
  CHECK(mesh.parameters.back().v == s.surface.domain().v1);
  const auto obj = lines(io::mesh_obj(mesh));
  REQUIRE(obj.size() == 24);
  CHECK(obj[0].starts_with("v "));
  CHECK(obj[12] == "f 1 4 5");
  CHECK(obj[13] == "f 1 5 2");
  CHECK_THROWS_AS(io::triangulate(s.surface, {0, 2}), Error);

  // OBJ written by the CLI parses back to chart evaluations
  const auto dir = scratch("mesh");
  REQUIRE(run({"mesh", "--family", "translation", "--grid", "3,2", "--out", (dir / "t.obj").string()}).code == 0);
  const auto written = lines(slurp(dir / "t.obj"));
  REQUIRE(written.size() == 24);
  for (std::size_t k = 0; k < 12; ++k) {
    std::istringstream in(written[k]);
    std::string tag;
    double x, y, z;
    in >> tag >> x >> y >> z;
    CHECK(Vec3(x, y, z) == mesh.vertices[k]);
  }
}

TEST_CASE("figure families are deterministic") {
  const auto a = scratch("fig_a"), b = scratch("fig_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run({"rotational", "--figure", "fig14", "--out-dir", dir.string()}).code == 0);
    REQUIRE(run({"rotational", "--figure", "fig2", "--out-dir", dir.string()}).code == 0);
    REQUIRE(run({"helicoidal", "--figure", "fig3", "--out-dir", dir.string()}).code == 0);
  }
  const std::vector<std::string> names{"fig14_m0.25.csv", "fig14_m0.5.csv", "fig14_m1.csv", "fig14_m2.csv",
                                       "fig14_m4.csv",    "fig14.svg",      "fig2_alpha0.5.csv",
                                       "fig2_alpha1.csv", "fig2.svg",       "fig3_alpha0.5.csv",
                                       "fig3_alpha0.25.csv", "fig3_alpha1.csv", "fig3.svg"};
  for (const auto& n : names) {
    CAPTURE(n);
    REQUIRE(fs::exists(a / n));
    CHECK(slurp(a / n) == slurp(b / n));
  }
  // fig2 right-hand curve stays inside [0, sqrt 2)
  const auto rows = lines(slurp(a / "fig2_alpha1.csv"));
  CHECK(std::stod(rows.back()) < std::sqrt(2.0));
  CHECK(std::stod(rows[1]) == 0.0);
}

TEST_CASE("output directory resolution") {
  const auto dir = scratch("env");
  ::setenv("KFLOW_OUTPUT_DIR", dir.string().c_str(), 1);
  cli::Command cmd;
  CHECK(cli::resolve_output(cmd, "x.csv") == dir / "x.csv");
  CHECK(cli::resolve_output(cmd, "/abs/x.csv") == fs::path("/abs/x.csv"));
  cmd.out_dir = "elsewhere";
  CHECK(cli::resolve_output(cmd, "x.csv") == fs::path("elsewhere/x.csv"));
  REQUIRE(run({"ruled", "--alpha", "2", "--lambda", "1", "--json", "probe.json"}).code == 0);
  ::unsetenv("KFLOW_OUTPUT_DIR");
  const auto j = nlohmann::json::parse(slurp(dir / "probe.json"));
  CHECK(j["min_eigenvalue"].get<double>() > 1e-8);
  CHECK(j["samples"] == 128);
  CHECK(j["wronskian_zeros"][1].get<double>() == doctest::Approx(1 / (2 * std::sqrt(2.0))));
}

TEST_CASE("translation subcommand") {
  const Run r = run({"translation", "--case", "additive-v2", "--m", "1", "--c", "1", "--v3", "0.5", "--grid", "12,12"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["case"] == "additive-v2");
  CHECK(j["scale"].get<double>() == doctest::Approx(1.25));
  CHECK(j["report"]["max_abs"].get<double>() < 1e-8);
  CHECK(run({"translation", "--case", "additive-v2", "--m", "1", "--c", "-5"}).code == 3);
}
