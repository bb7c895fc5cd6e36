#pragma once

#include <optional>

#include "sgraph/raster.hpp"
#include "sgraph/sdp.hpp"

namespace sgraph {

struct SweepEntry {
  double lambda_c = 0.0;
  int sigma = 0;  // -1 interior disk, +1 exterior disk
  SolveStatus status = SolveStatus::numerical_failure;
  double rho = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  bool capped = false;      // exterior search stopped at rho_cap
  bool degenerate = false;  // radius below the emission threshold
  bool verified = false;    // a-posteriori certificate check passed
  RegionCertificate cert;
  std::optional<RegionSpec> region;
};

struct HalfplaneEntry {
  int sign = 0;
  SolveStatus status = SolveStatus::numerical_failure;
  double c = std::numeric_limits<double>::quiet_NaN();
  bool verified = false;
  RegionCertificate cert;
  std::optional<RegionSpec> region;
};

struct SweepResult {
  SGApproximation approx;
  std::vector<SweepEntry> entries;
  std::vector<HalfplaneEntry> halfplanes;
  double gain_bound = std::numeric_limits<double>::quiet_NaN();  // r at lambda_c = 0
  double rho_cap = std::numeric_limits<double>::quiet_NaN();
  bool hard = false;
  std::string sys_hash;
  double wall_seconds = 0.0;
};

struct SolveOptions {
  const SdpBackend* backend = nullptr;  // nullptr: shared barrier backend
  RunMode mode = RunMode::parallel;
  double cap_gain_multiple = 10.0;      // rho_cap = (multiple * gain)^2
};

const SdpBackend& default_backend();

SweepEntry solve_interior(const SystemModel& sys, double lambda_c, bool hard,
                          const SdpBackend& backend);
SweepEntry solve_exterior(const SystemModel& sys, double lambda_c, bool hard,
                          const SdpBackend& backend, double rho_cap);
HalfplaneEntry solve_halfplane(const SystemModel& sys, int sign, bool hard,
                               const SdpBackend& backend, double c_cap);

// L2-gain bound: interior radius at lambda_c = 0.  Throws SolveError when
// that problem cannot be certified.
double gain_bound(const SystemModel& sys, bool hard, const SdpBackend& backend);

// Default grids: 81 interior points spanning [-2 g, 2 g] and 81 exterior
// points spanning [-5 g, 5 g] around the gain bound g.
SweepConfig default_config(const SystemModel& sys, bool hard,
                           const SdpBackend& backend);

SweepResult sweep(const SystemModel& sys, const SweepConfig& cfg,
                  const SolveOptions& opt = {});

// Default raster window [-(g + 0.1), g + 0.1]^2 for a sweep with gain bound g.
Window default_window(const SweepResult& result);

}  // namespace sgraph
