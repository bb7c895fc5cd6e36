#pragma once

#include <nlohmann/json.hpp>

#include "sgraph/raster.hpp"

namespace sgraph {

// Region-wise image of the graph under u/y exchange composed with negation:
// every region is negated and then mapped through z -> (1/|z|) e^{j angle z}.
SGApproximation inverse_negated_graph(const SGApproximation& approx);

// 32 log-spaced values in [1e-3, 1] plus tau = 1.
std::vector<double> default_tau_grid();

struct FeedbackOptions {
  std::vector<double> tau_grid;  // empty: default grid
  Window window;
  int resolution = 512;
  RunMode mode = RunMode::parallel;
};

struct FeedbackReport {
  enum class Verdict { separated, inconclusive, overlapping };

  Verdict verdict = Verdict::inconclusive;
  double r_min = 0.0;        // min over tau of the raster set distance
  double tau_at_min = 1.0;
  double uncertainty = 0.0;  // sqrt(2) * grid spacing
  double gain_bound = std::numeric_limits<double>::infinity();  // 1 / r_min
  std::vector<std::pair<double, double>> per_tau;  // (tau, distance)
  Window window;
  int resolution = 0;
};

std::string verdict_name(FeedbackReport::Verdict v);
nlohmann::json to_json(const FeedbackReport& report);

// Separation test for the loop y1 = H1(u1), y2 = H2(u2), u1 = -y2 + d1,
// u2 = y1 + d2: checks dist(inverse graph of -H1, graph of tau H2) >= r over
// the tau grid.  `sg1` approximates the graph of H1, `sg2` of H2.
FeedbackReport check_feedback(const SGApproximation& sg1,
                              const SGApproximation& sg2,
                              const FeedbackOptions& opt);

}  // namespace sgraph
