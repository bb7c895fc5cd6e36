#pragma once

#include <string>
#include <vector>

#include "sgraph/model.hpp"

namespace sgraph {

// Bundled example systems with their published sweep grids.
struct Preset {
  std::string name;
  SystemModel system;
  SweepConfig config;  // lambda grids (soft mode; callers may flip `hard`)
};

// paper-ex1: third-order lag 1/(s^3 + 5 s^2 + 2 s + 1).
// paper-ex2: two-state reset system with output-crossing state reset.
// paper-ex3: four-mode piecewise-linear system on sign-quadrant cones.
Preset preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace sgraph
