#pragma once

// Text exports: generating curves as CSV and SVG polylines, chart meshes as
// Wavefront OBJ and residual reports as JSON.

#include <array>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kflow/geometry.hpp"
#include "kflow/profile.hpp"

namespace kflow::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header `r,f,fprime,fsecond`, one row per sample, 17 significant digits.
std::string curve_csv(std::span<const ProfileSample> samples);

struct SvgCurve {
  std::string label;
  std::vector<ProfileSample> samples;
};

/// (r, f) polylines in one drawing with a viewBox fitted to the data.
std::string curves_svg(const std::vector<SvgCurve>& curves);

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<ChartPoint> parameters;  ///< chart point of each vertex
  std::vector<std::array<std::size_t, 3>> faces;  ///< zero-based
};

/// (nu + 1) x (nv + 1) vertices on the closed chart, each quad split along
/// its (i, j)-(i+1, j+1) diagonal. Errors: invalid_argument (nu or nv < 1).
Mesh triangulate(const ParamSurface& surface, GridDims cells);

/// `v x y z` lines then one-based `f i j k` lines.
std::string mesh_obj(const Mesh& mesh);

struct ReportContext {
  std::string family;
  double alpha = 0;
  Vec3 speed = Vec3::UnitZ();
  double tolerance = 0;
};

nlohmann::ordered_json residual_json(const ReportContext& context, const ResidualReport& report);

/// Writes `content` to `path`, creating parent directories. Errors: IoError.
void write_text(const std::filesystem::path& path, const std::string& content);

/// %.17g rendering.
std::string format_double(double x);

}  // namespace kflow::io
