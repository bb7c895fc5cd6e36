#include "sgraph/feedback.hpp"

#include <cmath>

namespace sgraph {

SGApproximation inverse_negated_graph(const SGApproximation& approx) {
  SGApproximation out;
  out.mode = approx.mode;
  out.source_hash = approx.source_hash;
  out.regions.reserve(approx.regions.size());
  for (const RegionSpec& region : approx.regions)
    out.regions.push_back(invert_region(negate_region(region)));
  return out;
}

std::vector<double> default_tau_grid() {
  std::vector<double> grid;
  grid.reserve(33);
  const int n = 32;
  const double lo = std::log(1e-3);
  const double hi = std::log(1.0);
  for (int i = 0; i < n; ++i)
    grid.push_back(std::exp(lo + (hi - lo) * i / (n - 1)));
  grid.push_back(1.0);
  return grid;
}

std::string verdict_name(FeedbackReport::Verdict v) {
  switch (v) {
    case FeedbackReport::Verdict::separated: return "separated";
    case FeedbackReport::Verdict::overlapping: return "overlapping";
    case FeedbackReport::Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json to_json(const FeedbackReport& report) {
  nlohmann::json per_tau = nlohmann::json::array();
  for (const auto& [tau, dist] : report.per_tau)
    per_tau.push_back({{"tau", tau},
                       {"distance", std::isfinite(dist)
                                        ? nlohmann::json(dist)
                                        : nlohmann::json()}});
  return {
      {"verdict", verdict_name(report.verdict)},
      {"r_min", report.r_min},
      {"tau_at_min", report.tau_at_min},
      {"uncertainty", report.uncertainty},
      {"gain_bound", std::isfinite(report.gain_bound)
                         ? nlohmann::json(report.gain_bound)
                         : nlohmann::json()},
      {"per_tau", per_tau},
      {"window",
       {{"re0", report.window.re0},
        {"re1", report.window.re1},
        {"im0", report.window.im0},
        {"im1", report.window.im1}}},
      {"resolution", report.resolution},
  };
}

FeedbackReport check_feedback(const SGApproximation& sg1,
                              const SGApproximation& sg2,
                              const FeedbackOptions& opt) {
  if (sg1.empty() || sg2.empty())
    throw GeometryError("feedback test needs two non-empty region sets");
  opt.window.validate();
  if (opt.resolution < 2)
    throw GeometryError("feedback raster needs at least 2 cells per axis");
  std::vector<double> taus =
      opt.tau_grid.empty() ? default_tau_grid() : opt.tau_grid;
  for (double tau : taus)
    if (!(tau > 0.0)) throw GeometryError("tau grid values must be positive");

  FeedbackReport report;
  report.window = opt.window;
  report.resolution = opt.resolution;

  const SGApproximation image = inverse_negated_graph(sg1);
  const RasterGrid a = rasterize(image, opt.window, opt.resolution, opt.mode);
  if (a.count_filled() == 0)
    throw GeometryError("window does not meet the inverse graph");

  report.r_min = std::numeric_limits<double>::infinity();
  for (double tau : taus) {
    SGApproximation scaled;
    scaled.mode = sg2.mode;
    for (const RegionSpec& region : sg2.regions)
      scaled.regions.push_back(scale_region(region, tau));
    const RasterGrid b =
        rasterize(scaled, opt.window, opt.resolution, opt.mode);
    double dist = std::numeric_limits<double>::infinity();
    if (b.count_filled() > 0) {
      const SetDistance sd = set_distance(a, b, opt.mode);
      dist = sd.value;
      report.uncertainty = sd.uncertainty;
    }
    report.per_tau.emplace_back(tau, dist);
    if (dist < report.r_min) {
      report.r_min = dist;
      report.tau_at_min = tau;
    }
  }
  if (!std::isfinite(report.r_min))
    throw GeometryError("window does not meet the scaled graph at any tau");

  if (report.r_min == 0.0) {
    report.verdict = FeedbackReport::Verdict::overlapping;
  } else if (report.r_min > report.uncertainty) {
    report.verdict = FeedbackReport::Verdict::separated;
    report.gain_bound = 1.0 / report.r_min;
  } else {
    report.verdict = FeedbackReport::Verdict::inconclusive;
  }
  return report;
}

}  // namespace sgraph
