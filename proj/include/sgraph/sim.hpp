#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgraph/model.hpp"
#include "sgraph/regions.hpp"

namespace sgraph {

// Exponentially damped multi-sine test input: per channel
//   u_ch(t) = (sum_k amp_k sin(omega_k t + phase_k)) * exp(mu t),  mu < 0.
struct MultiSine {
  struct Term {
    double amp = 1.0, omega = 1.0, phase = 0.0;
  };
  std::vector<std::vector<Term>> channels;
  double mu = -0.5;

  int channel_count() const { return static_cast<int>(channels.size()); }
  Vector eval(double t) const;
  void validate() const;
  // Seeded random input with at most `max_terms` sines per channel.
  static MultiSine random(int channels, std::uint64_t seed, int max_terms = 20);
};

struct SimOptions {
  double step_factor = 0.02;   // h = step_factor * fastest time constant
  double horizon = 0.0;        // 0: derived from mu and the slowest mode
  int max_events = 10000;      // reset chattering guard
  double dwell_steps = 10.0;   // post-reset refractory time in units of h
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vector> u, x, y;
  std::vector<std::uint8_t> event_flag;
  std::vector<int> mode;       // active piecewise mode, -1 for plain flows
  double h = 0.0;
  int events = 0;
  bool trusted = true;
  std::string note;            // why the run is untrusted, if it is
  std::string selection_rule = "lowest-index";
};

Trajectory simulate(const SystemModel& sys, const MultiSine& input,
                    const SimOptions& opt = {});

// L2 functionals of the truncated signals; for plain LTI flows the output
// tail beyond the horizon is integrated exactly through a Lyapunov equation,
// for hybrid runs the tail is dropped and reported as a bound.
struct Functionals {
  double uu = 0.0, yy = 0.0, uy = 0.0;
  double tail = 0.0;     // exact tail (LTI) or bound estimate (hybrid)
  bool tail_exact = false;
};
Functionals l2_functionals(const Trajectory& traj, const SystemModel& sys);

struct SGSample {
  double rho = 0.0, theta = 0.0;
  Complex z;           // rho * exp(j theta), upper branch
  bool trusted = true;
  std::uint64_t seed = 0;
};
SGSample sg_sample(const Trajectory& traj, const SystemModel& sys);

// Independent per-sample seeding: results do not depend on scheduling.
std::vector<SGSample> sample_cloud(const SystemModel& sys, int count,
                                   std::uint64_t seed,
                                   RunMode mode = RunMode::parallel,
                                   const SimOptions& opt = {});

// Integral quadratic constraint test for the supply [y;u]' (Pi (x) I) [y;u].
struct IqcResult {
  double total = 0.0;        // integral over [0, infinity) (truncated input)
  double min_running = 0.0;  // smallest running integral over the horizon
  double slack = 0.0;        // tolerance used for the verdicts
  bool soft = false;         // total >= -slack
  bool hard = false;         // every running integral >= -slack
};
IqcResult iqc_check(const Trajectory& traj, const SystemModel& sys,
                    const PiMatrix& pi);

}  // namespace sgraph
