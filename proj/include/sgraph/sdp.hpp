#pragma once

#include <limits>
#include <string>

#include "sgraph/lmi.hpp"

namespace sgraph {

enum class SolveStatus { optimal, infeasible, marginal, numerical_failure };

std::string status_name(SolveStatus s);

struct SdpResult {
  SolveStatus status = SolveStatus::numerical_failure;
  Vector v;
  double objective = std::numeric_limits<double>::quiet_NaN();
  // Phase-1 margin t*: strictly negative means a strictly feasible point
  // exists; values in a +-1e-9 band are classified marginal.
  double phase1_margin = std::numeric_limits<double>::quiet_NaN();
  int newton_iterations = 0;
  std::string message;
};

class SdpBackend {
 public:
  virtual ~SdpBackend() = default;
  virtual SdpResult solve(const LmiProblem& prob) const = 0;
  virtual std::string name() const = 0;
};

struct BarrierOptions {
  double mu0 = 1.0;
  double mu_min = 1e-11;
  double mu_factor = 0.2;
  int max_newton_per_stage = 40;
  double newton_tol = 1e-10;       // stop stage when decrement^2/2 below
  double strict_margin = 1e-9;     // phase-1 feasibility classification band
  double var_bound = 1e8;          // box on every decision variable
  int total_newton_budget = 20000;
};

// Dense primal log-barrier path-following with a phase-1 feasibility stage,
// per-block facial reduction and a proximal refinement loop that keeps flat
// directions of the feasible set from drifting.
class BarrierBackend final : public SdpBackend {
 public:
  explicit BarrierBackend(BarrierOptions opt = {}) : opt_(opt) {}
  SdpResult solve(const LmiProblem& prob) const override;
  std::string name() const override { return "barrier"; }

 private:
  BarrierOptions opt_;
};

// Bisection on the scalar objective variable with a feasibility solve per
// probe; returns the conservative (certified-feasible) end of the bracket.
class BisectionBackend final : public SdpBackend {
 public:
  explicit BisectionBackend(int iterations = 30, BarrierOptions opt = {})
      : iterations_(iterations), opt_(opt) {}
  SdpResult solve(const LmiProblem& prob) const override;
  std::string name() const override { return "bisection"; }

 private:
  int iterations_;
  BarrierOptions opt_;
};

}  // namespace sgraph
