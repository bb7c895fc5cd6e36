#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgraph/common.hpp"

namespace sgraph {

// Continuous-time LTI system x' = Ax + Bu, y = Cx + Du with square D
// (io_dim inputs and outputs).  A may be 0x0 for a static gain y = Du.
struct StateSpace {
  Matrix A, B, C, D;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int io_dim() const { return static_cast<int>(D.rows()); }

  // Shape/finiteness checks; throws ModelError.
  void validate() const;
  // True iff all eigenvalues of A satisfy Re < -margin.
  bool is_hurwitz(double margin = tol::hurwitz) const;
  void require_hurwitz() const;
  // Transfer matrix C (sI - A)^{-1} B + D.
  ComplexMatrix transfer(Complex s) const;
  // Slowest/fastest time constants 1/|Re eig(A)| (used for step control).
  double min_time_constant() const;
};

// LTI flow plus state reset x+ = R x fired on leaving {xi : xi' M xi >= 0},
// xi = (x, u).  M is symmetric with both signs present in general.
struct ResetSystem {
  StateSpace base;
  Matrix R;  // state_dim x state_dim
  Matrix M;  // (state_dim + io_dim) square, symmetric

  int state_dim() const { return base.state_dim(); }
  int io_dim() const { return base.io_dim(); }
  void validate() const;
};

// One piece of a piecewise-linear system: LTI data valid on the cone
// {xi : E xi >= 0 componentwise}, xi = (x, u).
struct PwlMode {
  StateSpace dyn;
  Matrix E;  // guard_rows x (state_dim + io_dim)
};

struct PwlSystem {
  std::vector<PwlMode> modes;

  int state_dim() const { return modes.front().dyn.state_dim(); }
  int io_dim() const { return modes.front().dyn.io_dim(); }
  int guard_rows() const { return static_cast<int>(modes.front().E.rows()); }
  void validate() const;
  // Fraction of random points xi in [-10,10]^{m+n} covered by some mode cone.
  // Coverage gaps are a modeling smell but not an error.
  double cone_coverage(int samples, std::uint64_t seed) const;
};

using SystemModel = std::variant<StateSpace, ResetSystem, PwlSystem>;

int state_dim(const SystemModel& sys);
int io_dim(const SystemModel& sys);
std::string kind_name(const SystemModel& sys);
// A-matrix used for step-size heuristics: base/mode-0 dynamics.
const StateSpace& nominal_dynamics(const SystemModel& sys);
void validate(const SystemModel& sys);

// JSON round-trip.  Doubles serialize losslessly (shortest round-trip form).
nlohmann::json to_json(const SystemModel& sys);
SystemModel system_from_json(const nlohmann::json& j);
SystemModel load_system(const std::string& path);
void save_system(const SystemModel& sys, const std::string& path);

// Content fingerprint of the canonical JSON serialization.
std::string system_hash(const SystemModel& sys);

// Strictly-proper SISO realization of H(s) = 1 / (a_0 s^k + ... + a_k),
// coefficients in descending powers; companion (controllable) form.
StateSpace realize_tf_denominator(const std::vector<double>& coeffs);

// Sweep request: which circle centers to certify, soft or hard flavor,
// optional half-plane certificates (sign +1 keeps Re z >= -c/2, sign -1
// keeps Re z <= c/2).
struct SweepConfig {
  std::vector<double> lambda_interior;
  std::vector<double> lambda_exterior;
  bool hard = false;
  std::vector<int> halfplane_signs;
  void validate() const;
};

// Uniform grid a, a+step, ..., b used by CLI sweep arguments a:b:n.
std::vector<double> uniform_grid(double a, double b, int n);

}  // namespace sgraph
