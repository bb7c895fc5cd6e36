#include "sgraph/sdp.hpp"

#include <algorithm>
#include <cmath>

namespace sgraph {

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::marginal: return "marginal";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "?";
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// One normalized cone constraint f0 + sum v_i F_i <= 0 after facial
// reduction; 1x1 cones carry scalar constraints and variable bounds.
struct Cone {
  Matrix f0;
  std::vector<std::pair<int, Matrix>> coeff;
  int dim = 0;
};

struct Flattened {
  std::vector<Cone> cones;
  int nvars = 0;
};

// Project a block onto the joint range of its coefficient matrices; nullspace
// directions are structurally zero in every matrix of the pencil, so dropping
// them preserves feasibility exactly (needed for structurally singular jump
// blocks, which otherwise have no strictly feasible point).
void add_block_reduced(Flattened& flat, const AffineBlock& block) {
  const int d = block.dim();
  Matrix gram = block.constant * block.constant;
  for (const auto& [idx, f] : block.coeff) gram += f * f;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double tol = 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff());
  int keep = 0;
  for (int i = 0; i < d; ++i)
    if (es.eigenvalues()[i] > tol) ++keep;
  if (keep == 0) return;  // identically zero block
  const Matrix Q = es.eigenvectors().rightCols(keep);
  Cone cone;
  cone.dim = keep;
  cone.f0 = Q.transpose() * block.constant * Q;
  double scale = std::max(1.0, cone.f0.cwiseAbs().maxCoeff());
  std::vector<std::pair<int, Matrix>> reduced;
  for (const auto& [idx, f] : block.coeff) {
    Matrix rf = Q.transpose() * f * Q;
    if (rf.cwiseAbs().maxCoeff() == 0.0) continue;
    scale = std::max(scale, rf.cwiseAbs().maxCoeff());
    reduced.emplace_back(idx, std::move(rf));
  }
  cone.f0 /= scale;
  for (auto& [idx, f] : reduced) f /= scale;
  cone.coeff = std::move(reduced);
  flat.cones.push_back(std::move(cone));
}

void add_linear_cone(Flattened& flat, const LinearConstraint& lc) {
  double scale = std::max(1.0, std::abs(lc.offset));
  for (const auto& [idx, g] : lc.terms) scale = std::max(scale, std::abs(g));
  Cone cone;
  cone.dim = 1;
  cone.f0 = Matrix::Constant(1, 1, -lc.offset / scale);
  for (const auto& [idx, g] : lc.terms)
    if (g != 0.0) cone.coeff.emplace_back(idx, Matrix::Constant(1, 1, -g / scale));
  flat.cones.push_back(std::move(cone));
}

Flattened flatten(const LmiProblem& prob, double var_bound) {
  Flattened flat;
  flat.nvars = prob.layout.num_vars;
  for (const AffineBlock& block : prob.blocks) add_block_reduced(flat, block);
  for (const LinearConstraint& lc : prob.linear) add_linear_cone(flat, lc);
  // Box |v_i| <= var_bound keeps recession directions of the feasible set
  // from running away during centering.
  for (int i = 0; i < flat.nvars; ++i) {
    Cone up;
    up.dim = 1;
    up.f0 = Matrix::Constant(1, 1, -1.0);
    up.coeff.emplace_back(i, Matrix::Constant(1, 1, 1.0 / var_bound));
    flat.cones.push_back(std::move(up));
    Cone dn;
    dn.dim = 1;
    dn.f0 = Matrix::Constant(1, 1, -1.0);
    dn.coeff.emplace_back(i, Matrix::Constant(1, 1, -1.0 / var_bound));
    flat.cones.push_back(std::move(dn));
  }
  return flat;
}

// Barrier machinery over a fixed cone list.  `aug` adds the phase-1 slack
// variable t with coefficient -I on every cone.
class BarrierCore {
 public:
  BarrierCore(const Flattened& flat, bool aug, const BarrierOptions& opt)
      : cones_(flat.cones), aug_(aug), nv_(flat.nvars + (aug ? 1 : 0)), opt_(opt) {}

  int nvars() const { return nv_; }
  int t_index() const { return nv_ - 1; }

  // S_b(v) = -(f0 + sum v_i F_i) [+ t I].
  Matrix slack(const Cone& cone, const Vector& v) const {
    Matrix s = -cone.f0;
    for (const auto& [idx, f] : cone.coeff) s -= v[idx] * f;
    if (aug_) s += v[nv_ - 1] * Matrix::Identity(cone.dim, cone.dim);
    return s;
  }

  bool strictly_feasible(const Vector& v) const {
    for (const Cone& cone : cones_) {
      Matrix s = slack(cone, v);
      if (cone.dim == 1) {
        if (!(s(0, 0) > 0.0)) return false;
        continue;
      }
      Eigen::LLT<Matrix> llt(s);
      if (llt.info() != Eigen::Success) return false;
    }
    return true;
  }

  // Barrier value sum_b -logdet S_b; +inf outside the cone.
  double barrier(const Vector& v) const {
    double val = 0.0;
    for (const Cone& cone : cones_) {
      Matrix s = slack(cone, v);
      if (cone.dim == 1) {
        if (!(s(0, 0) > 0.0)) return std::numeric_limits<double>::infinity();
        val -= std::log(s(0, 0));
        continue;
      }
      Eigen::LLT<Matrix> llt(s);
      if (llt.info() != Eigen::Success)
        return std::numeric_limits<double>::infinity();
      const Matrix& L = llt.matrixLLT();
      for (int i = 0; i < cone.dim; ++i) val -= 2.0 * std::log(L(i, i));
    }
    return val;
  }

  // Gradient and Hessian of the barrier at a strictly feasible v.
  void derivatives(const Vector& v, Vector& grad, Matrix& hess) const {
    grad.setZero(nv_);
    hess.setZero(nv_, nv_);
    std::vector<int> idx_list;
    std::vector<Matrix> y_list;
    for (const Cone& cone : cones_) {
      Matrix s = slack(cone, v);
      idx_list.clear();
      y_list.clear();
      if (cone.dim == 1) {
        const double inv = 1.0 / s(0, 0);
        for (const auto& [idx, f] : cone.coeff) {
          idx_list.push_back(idx);
          y_list.push_back(Matrix::Constant(1, 1, f(0, 0) * inv));
        }
        if (aug_) {
          idx_list.push_back(nv_ - 1);
          y_list.push_back(Matrix::Constant(1, 1, -inv));
        }
      } else {
        Eigen::LLT<Matrix> llt(s);
        for (const auto& [idx, f] : cone.coeff) {
          idx_list.push_back(idx);
          y_list.push_back(llt.solve(f));
        }
        if (aug_) {
          idx_list.push_back(nv_ - 1);
          y_list.push_back(-llt.solve(Matrix::Identity(cone.dim, cone.dim)));
        }
      }
      // d/dv_i (-logdet S) = tr(S^{-1} F_i) since dS/dv_i = -F_i.
      const size_t k = idx_list.size();
      for (size_t a = 0; a < k; ++a) grad[idx_list[a]] += y_list[a].trace();
      for (size_t a = 0; a < k; ++a)
        for (size_t b = a; b < k; ++b) {
          const double h =
              (y_list[a].array() * y_list[b].transpose().array()).sum();
          hess(idx_list[a], idx_list[b]) += h;
          if (idx_list[a] != idx_list[b]) hess(idx_list[b], idx_list[a]) += h;
        }
    }
  }

  // Path-following minimization of (c.v + prox_eps |v - ref|^2)/mu + barrier.
  // Early exit as soon as objective < exit_below (used by phase 1).
  struct PathResult {
    Vector v;
    bool ok = false;
    int newton_iters = 0;
  };
  PathResult follow_path(const Vector& c, Vector v, const Vector& ref,
                         double prox_eps, double exit_below,
                         int* budget) const {
    PathResult res;
    if (!strictly_feasible(v)) return res;
    Vector grad(nv_), g(nv_);
    Matrix hess(nv_, nv_);
    for (double mu = opt_.mu0; mu > opt_.mu_min; mu *= opt_.mu_factor) {
      for (int it = 0; it < opt_.max_newton_per_stage; ++it) {
        if (c.dot(v) < exit_below) {
          res.v = std::move(v);
          res.ok = true;
          return res;
        }
        if (*budget <= 0) return res;
        --(*budget);
        ++res.newton_iters;
        derivatives(v, grad, hess);
        g = grad + (c + 2.0 * prox_eps * (v - ref)) / mu;
        Matrix h = hess;
        h.diagonal().array() += 2.0 * prox_eps / mu;
        // Levenberg regularization ladder for near-singular Hessians.
        Vector step;
        double ridge = 1e-13 * (1.0 + h.diagonal().maxCoeff());
        bool solved = false;
        for (int attempt = 0; attempt < 6; ++attempt) {
          Matrix hr = h;
          hr.diagonal().array() += ridge;
          Eigen::LDLT<Matrix> ldlt(hr);
          if (ldlt.info() == Eigen::Success) {
            step = -ldlt.solve(g);
            if (step.allFinite() && g.dot(step) < 0.0) {
              solved = true;
              break;
            }
          }
          ridge *= 1e3;
        }
        if (!solved) return res;
        const double decrement2 = -g.dot(step);
        if (decrement2 * 0.5 < opt_.newton_tol) break;
        // Backtracking line search staying strictly inside the cone.
        const double phi0 = (c.dot(v) + prox_eps * (v - ref).squaredNorm()) / mu +
                            barrier(v);
        double alpha = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
          Vector vn = v + alpha * step;
          const double phin =
              (c.dot(vn) + prox_eps * (vn - ref).squaredNorm()) / mu +
              barrier(vn);
          if (std::isfinite(phin) && phin <= phi0 + 0.01 * alpha * g.dot(step)) {
            v = std::move(vn);
            moved = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!moved) break;  // stuck at this stage; tighten mu and retry
      }
    }
    res.v = std::move(v);
    res.ok = true;
    return res;
  }

 private:
  const std::vector<Cone>& cones_;
  bool aug_;
  int nv_;
  BarrierOptions opt_;
};

struct Phase1Result {
  Vector v;        // strictly feasible point when margin < 0
  double margin = kNan;
  bool ok = false;
  int newton_iters = 0;
};

// Minimize t subject to A_b(v) <= t I from (v, t) = (0, max eig + 1).
Phase1Result phase1(const Flattened& flat, const BarrierOptions& opt,
                    int* budget, double exit_margin) {
  BarrierCore core(flat, /*aug=*/true, opt);
  Vector v0 = Vector::Zero(core.nvars());
  double worst = -std::numeric_limits<double>::infinity();
  for (const Cone& cone : flat.cones) {
    if (cone.dim == 1) {
      worst = std::max(worst, cone.f0(0, 0));
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> es(cone.f0, Eigen::EigenvaluesOnly);
      worst = std::max(worst, es.eigenvalues().maxCoeff());
    }
  }
  v0[core.t_index()] = worst + 1.0;
  Vector c = Vector::Zero(core.nvars());
  c[core.t_index()] = 1.0;
  Phase1Result res;
  auto path = core.follow_path(c, v0, v0, /*prox_eps=*/1e-10,
                               /*exit_below=*/-exit_margin, budget);
  res.newton_iters = path.newton_iters;
  if (!path.ok) return res;
  res.v = path.v.head(core.nvars() - 1);
  res.margin = path.v[core.t_index()];
  res.ok = true;
  return res;
}

}  // namespace

SdpResult BarrierBackend::solve(const LmiProblem& prob) const {
  SdpResult result;
  if (prob.objective.size() != prob.layout.num_vars) {
    result.message = "objective size mismatch";
    return result;
  }
  Flattened flat = flatten(prob, opt_.var_bound);
  int budget = opt_.total_newton_budget;
  Phase1Result p1 = phase1(flat, opt_, &budget, /*exit_margin=*/1e-3);
  result.newton_iterations += p1.newton_iters;
  if (!p1.ok) {
    result.message = "phase-1 path did not converge";
    return result;
  }
  result.phase1_margin = p1.margin;
  if (p1.margin >= opt_.strict_margin) {
    result.status = SolveStatus::infeasible;
    result.message = "no feasible point (phase-1 margin " +
                     std::to_string(p1.margin) + ")";
    return result;
  }
  if (p1.margin > -opt_.strict_margin) {
    result.status = SolveStatus::marginal;
    result.message = "feasible set has no interior within tolerance";
    return result;
  }
  BarrierCore core(flat, /*aug=*/false, opt_);
  Vector v = p1.v;
  if (!core.strictly_feasible(v)) {
    result.message = "phase-1 point lost strict feasibility";
    return result;
  }
  // Proximal refinement: re-center the quadratic pull while shrinking it, so
  // flat optimal faces cannot drift yet the final objective bias vanishes.
  const Vector c = prob.objective;
  for (double prox : {1e-6, 1e-9, 1e-12}) {
    auto path = core.follow_path(
        c, v, v, prox, -std::numeric_limits<double>::infinity(), &budget);
    result.newton_iterations += path.newton_iters;
    if (!path.ok) {
      result.message = "phase-2 path stalled";
      return result;
    }
    v = path.v;
  }
  result.v = std::move(v);
  result.objective = c.dot(result.v);
  result.status = SolveStatus::optimal;
  return result;
}

namespace {

// Freeze variable `k` at `value`, folding it into the constant parts.
LmiProblem substitute(const LmiProblem& prob, int k, double value) {
  LmiProblem out = prob;
  for (AffineBlock& block : out.blocks) {
    std::vector<std::pair<int, Matrix>> kept;
    for (auto& [idx, f] : block.coeff) {
      if (idx == k)
        block.constant += value * f;
      else
        kept.emplace_back(idx, std::move(f));
    }
    block.coeff = std::move(kept);
  }
  for (LinearConstraint& lc : out.linear) {
    std::vector<std::pair<int, double>> kept;
    for (auto& [idx, g] : lc.terms) {
      if (idx == k)
        lc.offset += value * g;
      else
        kept.emplace_back(idx, g);
    }
    lc.terms = std::move(kept);
  }
  return out;
}

}  // namespace

SdpResult BisectionBackend::solve(const LmiProblem& prob) const {
  SdpResult result;
  // The scalar objective variable is the bisected quantity.
  int k = -1;
  double sign = 0.0;
  for (int i = 0; i < prob.objective.size(); ++i) {
    if (prob.objective[i] == 0.0) continue;
    if (k >= 0) {
      result.message = "bisection needs a single-variable objective";
      return result;
    }
    k = i;
    sign = prob.objective[i];
  }
  if (k < 0) {
    result.message = "objective is identically zero";
    return result;
  }
  const bool minimize = sign > 0.0;
  int budget = opt_.total_newton_budget * 40;

  struct Probe {
    bool feasible = false;
    Vector v;
  };
  auto probe = [&](double value) {
    Probe p;
    LmiProblem frozen = substitute(prob, k, value);
    Flattened flat = flatten(frozen, opt_.var_bound);
    Phase1Result p1 = phase1(flat, opt_, &budget, 1e-3);
    result.newton_iterations += p1.newton_iters;
    if (!p1.ok) return p;
    if (p1.margin < -opt_.strict_margin) {
      p.feasible = true;
      p.v = p1.v;
      p.v[k] = value;
    }
    return p;
  };

  // Search interval from the problem's own single-variable bounds on v_k:
  // g v_k + offset >= 0 gives a floor for g > 0 and a cap for g < 0.
  double floor_b = 0.0, cap = kNan;
  bool has_floor = false;
  for (const LinearConstraint& lc : prob.linear) {
    if (lc.terms.size() != 1 || lc.terms[0].first != k) continue;
    const double g = lc.terms[0].second;
    const double bound = -lc.offset / g;
    if (g > 0.0) {
      floor_b = has_floor ? std::max(floor_b, bound) : bound;
      has_floor = true;
    } else if (g < 0.0) {
      cap = std::isnan(cap) ? bound : std::min(cap, bound);
    }
  }
  if (!has_floor) floor_b = 0.0;
  double lo = floor_b, hi;
  Probe lo_probe, hi_probe;
  if (minimize) {
    hi_probe = probe(floor_b);
    if (hi_probe.feasible) {
      // The floor itself is feasible: the minimum sits at (or below) it.
      result.status = SolveStatus::optimal;
      result.v = hi_probe.v;
      result.objective = prob.objective.dot(result.v);
      result.message = "objective floor feasible";
      return result;
    }
    // Grow the interval until feasible when no explicit cap exists.
    hi = std::isnan(cap) ? floor_b + 1.0 : cap;
    hi_probe = probe(hi);
    while (!hi_probe.feasible && std::isnan(cap) && hi - floor_b < 1e12) {
      hi = floor_b + 16.0 * (hi - floor_b);
      hi_probe = probe(hi);
    }
    if (!hi_probe.feasible) {
      result.status = SolveStatus::infeasible;
      result.message = "no feasible value up to the cap";
      return result;
    }
  } else {
    if (std::isnan(cap)) {
      result.message = "maximization needs an explicit cap constraint";
      return result;
    }
    lo_probe = probe(lo);
    if (!lo_probe.feasible) {
      result.status = SolveStatus::infeasible;
      result.message = "not feasible at the objective floor";
      return result;
    }
    hi = cap;
    hi_probe = probe(hi);
    if (hi_probe.feasible) {
      // Cap is feasible: report it (callers detect the cap hit).
      result.status = SolveStatus::optimal;
      result.v = hi_probe.v;
      result.objective = prob.objective.dot(result.v);
      result.message = "cap feasible";
      return result;
    }
  }
  // Invariant: exactly one end feasible; return the feasible end's point.
  for (int it = 0; it < iterations_; ++it) {
    const double mid = 0.5 * (lo + hi);
    Probe pm = probe(mid);
    if (pm.feasible == minimize) {
      hi = mid;
      if (pm.feasible) hi_probe = pm;
    } else {
      lo = mid;
      if (pm.feasible) lo_probe = pm;
    }
  }
  const Probe& final_probe = minimize ? hi_probe : lo_probe;
  result.status = SolveStatus::optimal;
  result.v = final_probe.v;
  result.objective = prob.objective.dot(result.v);
  return result;
}

}  // namespace sgraph
