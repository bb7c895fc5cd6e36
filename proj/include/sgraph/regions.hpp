#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgraph/common.hpp"

namespace sgraph {

// Symmetric 2x2 form [[a, b], [b, c]]; the planar set it induces is
// S = { z : a|z|^2 + 2 b Re(z) + c >= 0 }.  Admissible region forms have
// det = ac - b^2 < 0 so that S is a disk, a disk complement or a half-plane.
struct PiMatrix {
  double a = 0, b = 0, c = 0;
  double det() const { return a * c - b * b; }
  double quad_form(Complex z) const {
    return a * std::norm(z) + 2.0 * b * z.real() + c;
  }
};

// Circle family: sigma * [[1, -lambda_c], [-lambda_c, lambda_c^2 - r^2]].
// sigma = -1 keeps the closed disk, sigma = +1 keeps the closed complement.
PiMatrix make_pi(int sigma, double lambda_c, double r);
// Half-plane family [[0, sign], [sign, c]]: sign=+1 keeps Re z >= -c/2,
// sign=-1 keeps Re z <= c/2.
PiMatrix make_halfplane_pi(int sign, double c);

enum class RegionKind { disk_interior, disk_exterior, half_plane };

std::string kind_name(RegionKind kind);

struct RegionSpec {
  RegionKind kind = RegionKind::disk_interior;
  double lambda_c = 0.0;  // disk center (real axis)
  double r = 0.0;         // disk radius
  int sign = 1;           // half-plane orientation
  double c = 0.0;         // half-plane offset
  PiMatrix pi;            // the matching quadratic form
  bool grid_redundant = false;  // did not change the intersection on a grid
  bool degenerate = false;      // produced by a near-singular inversion

  static RegionSpec disk_interior(double lambda_c, double r);
  static RegionSpec disk_exterior(double lambda_c, double r);
  static RegionSpec half_plane(int sign, double c);

  double quad_form(Complex z) const { return pi.quad_form(z); }
  bool contains(Complex z, double slack = tol::membership) const {
    return quad_form(z) >= -slack;
  }
  // Euclidean distance to the boundary, negative inside the kept set.
  double signed_distance(Complex z) const;
  void validate() const;
};

// Classify an admissible quadratic form (det < 0) into a region.
RegionSpec region_from_pi(const PiMatrix& pi);

// Image of the region under z -> (1/|z|) e^{j angle(z)}  (equals 1/conj(z)).
// Disks whose boundary passes through the origin invert to half-planes;
// near-singular cases (| |lambda_c| - r | below relative tolerance) still
// produce the huge disk but carry the `degenerate` flag.
RegionSpec invert_region(const RegionSpec& region);
// Image under z -> -z.
RegionSpec negate_region(const RegionSpec& region);
// Image under z -> tau z for tau > 0.
RegionSpec scale_region(const RegionSpec& region, double tau);

// Certificate attached to one region of a sweep: storage function and
// multipliers that prove the containment, plus solver diagnostics.
struct RegionCertificate {
  Matrix P;
  double tau1 = 0.0, tau2 = 0.0;  // reset flow/jump multipliers
  std::vector<Matrix> U;          // per-mode cone multipliers
  double rho = 0.0;               // r^2 at the solution
  double objective = 0.0;
  double max_block_eig = 0.0;     // a-posteriori residual
  bool capped = false;            // exterior search stopped at the cap
};

// Intersection of finitely many regions over-approximating a scaled graph.
struct SGApproximation {
  enum class Mode { soft, hard };

  std::vector<RegionSpec> regions;
  std::vector<RegionCertificate> certificates;  // empty or aligned
  Mode mode = Mode::soft;
  std::string source_hash;  // fingerprint of the generating system

  bool contains(Complex z, double slack = tol::membership) const;
  // max over regions of signed_distance: <= 0 inside the intersection,
  // and a lower bound on the Euclidean distance to the kept set outside.
  double max_signed_distance(Complex z) const;
  bool empty() const { return regions.empty(); }
  void validate() const;
};

// Append `region` to a copy of `approx`.  When a probe grid is supplied the
// region is flagged (never dropped) if it does not change membership on the
// grid.
SGApproximation intersect(const SGApproximation& approx, RegionSpec region,
                          const std::vector<Complex>* probe_grid = nullptr);

// Region-set file format: a JSON array of region objects.
nlohmann::json to_json(const RegionSpec& region);
RegionSpec region_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SGApproximation& approx);
SGApproximation regions_from_json(const nlohmann::json& j);
SGApproximation load_regions(const std::string& path);
void save_regions(const SGApproximation& approx, const std::string& path);

}  // namespace sgraph
