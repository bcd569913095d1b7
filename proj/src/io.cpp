#include "kflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kflow/error.hpp"

namespace kflow::io {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string curve_csv(std::span<const ProfileSample> samples) {
  std::string out = "r,f,fprime,fsecond\n";
  for (const ProfileSample& s : samples) {
    out += format_double(s.r) + ',' + format_double(s.f) + ',' + format_double(s.fp) + ',' +
           format_double(s.fpp) + '\n';
  }
  return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string curves_svg(const std::vector<SvgCurve>& curves) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const SvgCurve& c : curves) {
    for (const ProfileSample& s : c.samples) {
      if (!std::isfinite(s.r) || !std::isfinite(s.f)) continue;
      x0 = std::min(x0, s.r);
      x1 = std::max(x1, s.r);
      y0 = std::min(y0, s.f);
      y1 = std::max(y1, s.f);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  const double pad = 0.05 * std::max({x1 - x0, y1 - y0, 1e-9});
  x0 -= pad, x1 += pad, y0 -= pad, y1 += pad;
  const double stroke = 0.004 * std::max(x1 - x0, y1 - y0);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fixed(x0) << ' ' << fixed(-y1)
     << ' ' << fixed(x1 - x0) << ' ' << fixed(y1 - y0) << "\" width=\"600\" height=\"600\""
     << " preserveAspectRatio=\"xMidYMid meet\">\n";
  os << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << fixed(stroke) << "\">\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    os << "<polyline stroke=\"" << kPalette[k % std::size(kPalette)] << "\"";
    if (!curves[k].label.empty()) os << " id=\"" << curves[k].label << "\"";
    os << " points=\"";
    bool first = true;
    for (const ProfileSample& s : curves[k].samples) {
      if (!std::isfinite(s.r) || !std::isfinite(s.f)) continue;
      os << (first ? "" : " ") << fixed(s.r) << ',' << fixed(s.f);
      first = false;
    }
    os << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

Mesh triangulate(const ParamSurface& surface, GridDims cells) {
  if (cells.nu < 1 || cells.nv < 1) throw Error(ErrorCode::invalid_argument, "mesh needs at least one cell");
  const ChartDomain& d = surface.domain();
  const std::size_t nu = cells.nu, nv = cells.nv;
  Mesh mesh;
  mesh.vertices.reserve((nu + 1) * (nv + 1));
  for (std::size_t i = 0; i <= nu; ++i) {
    const double u = i == nu ? d.u1 : d.u0 + (d.u1 - d.u0) * static_cast<double>(i) / nu;
    for (std::size_t j = 0; j <= nv; ++j) {
      const double v = j == nv ? d.v1 : d.v0 + (d.v1 - d.v0) * static_cast<double>(j) / nv;
      mesh.parameters.push_back({u, v});
      mesh.vertices.push_back(surface.position(u, v));
    }
  }
  auto id = [nv](std::size_t i, std::size_t j) { return i * (nv + 1) + j; };
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      mesh.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return mesh;
}

std::string mesh_obj(const Mesh& mesh) {
  std::string out;
  for (const Vec3& p : mesh.vertices) {
    out += "v " + format_double(p.x()) + ' ' + format_double(p.y()) + ' ' + format_double(p.z()) + '\n';
  }
  for (const auto& f : mesh.faces) {
    out += "f " + std::to_string(f[0] + 1) + ' ' + std::to_string(f[1] + 1) + ' ' +
           std::to_string(f[2] + 1) + '\n';
  }
  return out;
}

nlohmann::ordered_json residual_json(const ReportContext& context, const ResidualReport& report) {
  nlohmann::ordered_json j;
  j["family"] = context.family;
  j["alpha"] = context.alpha;
  j["speed"] = {context.speed.x(), context.speed.y(), context.speed.z()};
  j["grid"] = {report.grid.nu, report.grid.nv};
  j["max_abs"] = report.max_abs;
  j["mean_abs"] = report.mean_abs;
  j["skipped"] = report.skipped.size();
  j["tolerance"] = context.tolerance;
  j["pass"] = report.max_abs <= context.tolerance;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file << content;
  file.close();
  if (!file) throw IoError("write to " + path.string() + " failed");
}

}  // namespace kflow::io
