#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgraph/feedback.hpp"
#include "sgraph/sim.hpp"
#include "sgraph/solve.hpp"

namespace sgraph {

// Every artifact carries the fingerprint of the run configuration that
// produced it (JSON field "config_hash", CSV/SVG header comment).
std::string config_hash(const nlohmann::json& run_config);

void write_raster_csv(const RasterGrid& grid, const std::string& path,
                      const std::string& cfg_hash);
void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const std::string& cfg_hash);
void write_cloud_csv(const std::vector<SGSample>& cloud,
                     const std::string& path, const std::string& cfg_hash);

// Sweep report: per-lambda status table, gain bound, timing, config hash.
nlohmann::json sweep_report(const SweepResult& result,
                            const nlohmann::json& run_config);
void write_json(const nlohmann::json& j, const std::string& path);

struct SvgLayer {
  enum class Kind { region_fill, polyline, dots, segment } kind;
  std::vector<std::vector<Complex>> polylines;  // fill / polyline / segment
  std::vector<Complex> points;                  // dots
  std::string color = "#336699";
  double opacity = 1.0;
  double stroke_width = 1.0;  // pixels; dot radius for dots
};

// Minimal standalone SVG: axes plus the given layers, window coordinates.
void write_svg(const Window& win, const std::vector<SvgLayer>& layers,
               int pixels, const std::string& path,
               const std::string& cfg_hash);

}  // namespace sgraph
