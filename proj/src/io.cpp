#include "sgraph/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sgraph {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path + "' for writing");
  os << std::setprecision(17);
  return os;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

std::string config_hash(const nlohmann::json& run_config) {
  return hex64(fnv1a(run_config.dump()));
}

void write_raster_csv(const RasterGrid& grid, const std::string& path,
                      const std::string& cfg_hash) {
  std::ofstream os = open_out(path);
  os << "# config " << cfg_hash << "\n";
  os << "re,im,member\n";
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const Complex z = grid.center(i, j);
      os << fmt(z.real()) << ',' << fmt(z.imag()) << ','
         << int(grid.at(i, j)) << '\n';
    }
  if (!os) throw ParseError("write failed for '" + path + "'");
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const std::string& cfg_hash) {
  std::ofstream os = open_out(path);
  os << "# config " << cfg_hash << "\n";
  const int m = traj.u.empty() ? 0 : static_cast<int>(traj.u.front().size());
  const int n = traj.x.empty() ? 0 : static_cast<int>(traj.x.front().size());
  os << "t";
  for (int i = 0; i < m; ++i) os << ",u" << i;
  for (int i = 0; i < n; ++i) os << ",x" << i;
  for (int i = 0; i < m; ++i) os << ",y" << i;
  os << ",event_flag,mode\n";
  for (size_t k = 0; k < traj.t.size(); ++k) {
    os << fmt(traj.t[k]);
    for (int i = 0; i < m; ++i) os << ',' << fmt(traj.u[k](i));
    for (int i = 0; i < n; ++i) os << ',' << fmt(traj.x[k](i));
    for (int i = 0; i < m; ++i) os << ',' << fmt(traj.y[k](i));
    os << ',' << int(traj.event_flag[k]) << ',' << traj.mode[k] << '\n';
  }
  if (!os) throw ParseError("write failed for '" + path + "'");
}

void write_cloud_csv(const std::vector<SGSample>& cloud,
                     const std::string& path, const std::string& cfg_hash) {
  std::ofstream os = open_out(path);
  os << "# config " << cfg_hash << "\n";
  os << "re,im,rho,theta,trusted\n";
  for (const SGSample& s : cloud)
    os << fmt(s.z.real()) << ',' << fmt(s.z.imag()) << ',' << fmt(s.rho)
       << ',' << fmt(s.theta) << ',' << int(s.trusted) << '\n';
  if (!os) throw ParseError("write failed for '" + path + "'");
}

nlohmann::json sweep_report(const SweepResult& result,
                            const nlohmann::json& run_config) {
  nlohmann::json entries = nlohmann::json::array();
  for (const SweepEntry& e : result.entries) {
    nlohmann::json row = {
        {"lambda_c", e.lambda_c},
        {"sigma", e.sigma},
        {"status", status_name(e.status)},
        {"verified", e.verified},
        {"capped", e.capped},
        {"degenerate", e.degenerate},
        {"emitted", bool(e.region)},
    };
    if (std::isfinite(e.rho)) {
      row["rho"] = e.rho;
      row["r"] = e.r;
    }
    entries.push_back(std::move(row));
  }
  nlohmann::json halfplanes = nlohmann::json::array();
  for (const HalfplaneEntry& e : result.halfplanes) {
    nlohmann::json row = {
        {"sign", e.sign},
        {"status", status_name(e.status)},
        {"verified", e.verified},
        {"emitted", bool(e.region)},
    };
    if (std::isfinite(e.c)) row["c"] = e.c;
    halfplanes.push_back(std::move(row));
  }
  return {
      {"config_hash", config_hash(run_config)},
      {"config", run_config},
      {"system_hash", result.sys_hash},
      {"mode", result.hard ? "hard" : "soft"},
      {"gain_bound", result.gain_bound},
      {"rho_cap", result.rho_cap},
      {"wall_seconds", result.wall_seconds},
      {"region_count", result.approx.regions.size()},
      {"regions", to_json(result.approx)},
      {"entries", entries},
      {"halfplanes", halfplanes},
  };
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
  if (!os) throw ParseError("write failed for '" + path + "'");
}

namespace {

struct SvgMap {
  Window win;
  double sx, sy;
  double px(Complex z) const { return (z.real() - win.re0) * sx; }
  double py(Complex z) const { return (win.im1 - z.imag()) * sy; }
};

void emit_path(std::ofstream& os, const SvgMap& map,
               const std::vector<Complex>& line, bool close) {
  os << "M";
  for (size_t i = 0; i < line.size(); ++i)
    os << (i ? " L" : " ") << map.px(line[i]) << ' ' << map.py(line[i]);
  if (close) os << " Z";
}

}  // namespace

void write_svg(const Window& win, const std::vector<SvgLayer>& layers,
               int pixels, const std::string& path,
               const std::string& cfg_hash) {
  win.validate();
  if (pixels < 16) throw GeometryError("svg needs at least 16 pixels");
  const double w = pixels;
  const double h = pixels * win.height() / win.width();
  SvgMap map{win, w / win.width(), h / win.height()};

  std::ofstream os = open_out(path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
     << "\">\n";
  os << "<!-- config " << cfg_hash << " -->\n";
  os << "<rect width=\"" << w << "\" height=\"" << h
     << "\" fill=\"white\"/>\n";
  // axes
  if (win.re0 < 0.0 && win.re1 > 0.0)
    os << "<line x1=\"" << map.px(Complex(0, 0)) << "\" y1=\"0\" x2=\""
       << map.px(Complex(0, 0)) << "\" y2=\"" << h
       << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  if (win.im0 < 0.0 && win.im1 > 0.0)
    os << "<line x1=\"0\" y1=\"" << map.py(Complex(0, 0)) << "\" x2=\"" << w
       << "\" y2=\"" << map.py(Complex(0, 0))
       << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";

  for (const SvgLayer& layer : layers) {
    switch (layer.kind) {
      case SvgLayer::Kind::region_fill:
        for (const auto& line : layer.polylines) {
          if (line.size() < 3) continue;
          os << "<path d=\"";
          emit_path(os, map, line, true);
          os << "\" fill=\"" << layer.color << "\" fill-opacity=\""
             << layer.opacity << "\" stroke=\"none\"/>\n";
        }
        break;
      case SvgLayer::Kind::polyline:
      case SvgLayer::Kind::segment:
        for (const auto& line : layer.polylines) {
          if (line.size() < 2) continue;
          os << "<path d=\"";
          emit_path(os, map, line, false);
          os << "\" fill=\"none\" stroke=\"" << layer.color
             << "\" stroke-opacity=\"" << layer.opacity
             << "\" stroke-width=\"" << layer.stroke_width << "\"/>\n";
        }
        break;
      case SvgLayer::Kind::dots:
        for (Complex z : layer.points)
          os << "<circle cx=\"" << map.px(z) << "\" cy=\"" << map.py(z)
             << "\" r=\"" << layer.stroke_width << "\" fill=\"" << layer.color
             << "\" fill-opacity=\"" << layer.opacity << "\"/>\n";
        break;
    }
  }
  os << "</svg>\n";
  if (!os) throw ParseError("write failed for '" + path + "'");
}

}  // namespace sgraph
