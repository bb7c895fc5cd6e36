#include "sgraph/sim.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace sgraph {

Vector MultiSine::eval(double t) const {
  Vector u(channel_count());
  const double damp = std::exp(mu * t);
  for (int ch = 0; ch < channel_count(); ++ch) {
    double s = 0.0;
    for (const Term& term : channels[static_cast<size_t>(ch)])
      s += term.amp * std::sin(term.omega * t + term.phase);
    u(ch) = s * damp;
  }
  return u;
}

void MultiSine::validate() const {
  if (channels.empty()) throw SimError("input needs at least one channel");
  if (!(mu < 0.0)) throw SimError("input damping must be negative");
  for (const auto& terms : channels)
    for (const Term& term : terms)
      if (!(term.omega >= 0.0) || !std::isfinite(term.amp))
        throw SimError("input term has an invalid amplitude or frequency");
}

MultiSine MultiSine::random(int channels, std::uint64_t seed, int max_terms) {
  if (channels <= 0) throw SimError("input needs at least one channel");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, std::max(1, max_terms));
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> logw(std::log(0.05), std::log(20.0));
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MultiSine input;
  input.mu = -(0.2 + 0.8 * unit(rng));
  input.channels.resize(static_cast<size_t>(channels));
  for (auto& terms : input.channels) {
    const int n = count(rng);
    terms.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
      terms.push_back({amp(rng), std::exp(logw(rng)), phase(rng)});
  }
  return input;
}

namespace {

struct DecayRates {
  double fast = 0.0;  // largest |Re eig|
  double slow = std::numeric_limits<double>::infinity();
};

void accumulate_rates(const Matrix& A, DecayRates& rates) {
  if (A.rows() == 0) return;
  const Eigen::VectorXcd eigs = A.eigenvalues();
  for (int i = 0; i < eigs.size(); ++i) {
    const double a = -eigs(i).real();
    rates.fast = std::max(rates.fast, std::abs(eigs(i).real()));
    rates.slow = std::min(rates.slow, a);
  }
}

DecayRates system_rates(const SystemModel& sys) {
  DecayRates rates;
  if (const auto* lti = std::get_if<StateSpace>(&sys)) {
    accumulate_rates(lti->A, rates);
  } else if (const auto* reset = std::get_if<ResetSystem>(&sys)) {
    accumulate_rates(reset->base.A, rates);
  } else {
    for (const PwlMode& m : std::get<PwlSystem>(sys).modes)
      accumulate_rates(m.dyn.A, rates);
  }
  return rates;
}

double max_input_rate(const MultiSine& input) {
  double w = std::abs(input.mu);
  for (const auto& terms : input.channels)
    for (const auto& term : terms) w = std::max(w, term.omega);
  return w;
}

struct Grid {
  double h = 0.0;
  int steps = 0;  // even
};

Grid make_grid(const SystemModel& sys, const MultiSine& input,
               const SimOptions& opt, Trajectory& traj) {
  const DecayRates rates = system_rates(sys);
  const double fast = std::max({rates.fast, max_input_rate(input), 1e-3});
  Grid grid;
  grid.h = opt.step_factor / fast;
  double T = opt.horizon;
  if (T <= 0.0) {
    const double slow = std::min(std::abs(input.mu), rates.slow);
    if (!(slow > 0.0))
      throw SimError(
          "cannot derive a horizon for non-decaying dynamics; set one");
    T = 14.0 / slow;
  }
  long long n = static_cast<long long>(std::ceil(T / grid.h));
  if (n > 400000) {
    n = 400000;
    traj.trusted = false;
    traj.note = "horizon clamped at the step budget";
  }
  if (n < 2) n = 2;
  if (n % 2) ++n;
  grid.steps = static_cast<int>(n);
  grid.h = T / static_cast<double>(n);
  return grid;
}

Vector rk4_step(const Matrix& A, const Matrix& B, const MultiSine& input,
                double t, const Vector& x, double h) {
  const Vector k1 = A * x + B * input.eval(t);
  const Vector k2 = A * (x + 0.5 * h * k1) + B * input.eval(t + 0.5 * h);
  const Vector k3 = A * (x + 0.5 * h * k2) + B * input.eval(t + 0.5 * h);
  const Vector k4 = A * (x + h * k3) + B * input.eval(t + h);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void init_arrays(Trajectory& traj, const Grid& grid, int n, int m) {
  const size_t count = static_cast<size_t>(grid.steps) + 1;
  traj.h = grid.h;
  traj.t.resize(count);
  traj.u.assign(count, Vector::Zero(m));
  traj.x.assign(count, Vector::Zero(n));
  traj.y.assign(count, Vector::Zero(m));
  traj.event_flag.assign(count, 0);
  traj.mode.assign(count, -1);
  for (size_t k = 0; k < count; ++k)
    traj.t[k] = grid.h * static_cast<double>(k);
}

void sim_lti(const StateSpace& sys, const MultiSine& input, const Grid& grid,
             Trajectory& traj) {
  init_arrays(traj, grid, sys.state_dim(), sys.io_dim());
  Vector x = Vector::Zero(sys.state_dim());
  for (int k = 0; k <= grid.steps; ++k) {
    const double t = traj.t[static_cast<size_t>(k)];
    traj.u[static_cast<size_t>(k)] = input.eval(t);
    traj.x[static_cast<size_t>(k)] = x;
    traj.y[static_cast<size_t>(k)] =
        sys.C * x + sys.D * traj.u[static_cast<size_t>(k)];
    if (k < grid.steps) x = rk4_step(sys.A, sys.B, input, t, x, grid.h);
  }
}

double guard_value(const Matrix& M, const Vector& x, const Vector& u) {
  Vector xi(x.size() + u.size());
  xi << x, u;
  return xi.dot(M * xi);
}

void sim_reset(const ResetSystem& sys, const MultiSine& input,
               const Grid& grid, const SimOptions& opt, Trajectory& traj) {
  const StateSpace& base = sys.base;
  init_arrays(traj, grid, base.state_dim(), base.io_dim());
  Vector x = Vector::Zero(base.state_dim());
  double next_allowed = 0.0;
  const double dwell = opt.dwell_steps * grid.h;
  bool capped = false;

  traj.u[0] = input.eval(0.0);
  traj.x[0] = x;
  traj.y[0] = base.C * x + base.D * traj.u[0];
  for (int k = 0; k < grid.steps; ++k) {
    const double t = traj.t[static_cast<size_t>(k)];
    Vector x_next = rk4_step(base.A, base.B, input, t, x, grid.h);
    const Vector u_next = input.eval(t + grid.h);
    const double g_next = guard_value(sys.M, x_next, u_next);
    const double scale =
        1.0 + sys.M.norm() * (x_next.squaredNorm() + u_next.squaredNorm());
    bool fired = false;
    if (!capped && t + grid.h >= next_allowed && g_next < -1e-14 * scale) {
      double g_lo = guard_value(sys.M, x, traj.u[static_cast<size_t>(k)]);
      double tau = 0.0;
      Vector x_minus = x;
      if (g_lo < 0.0) {
        // Already inside the jump set when the dwell expired: jump in place.
        tau = 0.0;
        x_minus = x;
      } else {
        double lo = 0.0, hi = grid.h;
        const double gscale = std::max({1.0, std::abs(g_lo), std::abs(g_next)});
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          const Vector xm = rk4_step(base.A, base.B, input, t, x, mid);
          const double gm = guard_value(sys.M, xm, input.eval(t + mid));
          if (std::abs(gm) <= tol::event * gscale) {
            lo = mid;
            break;
          }
          (gm >= 0.0 ? lo : hi) = mid;
        }
        tau = lo;
        x_minus = rk4_step(base.A, base.B, input, t, x, tau);
      }
      const Vector x_plus = sys.R * x_minus;
      x_next = rk4_step(base.A, base.B, input, t + tau, x_plus, grid.h - tau);
      traj.event_flag[static_cast<size_t>(k) + 1] = 1;
      traj.events += 1;
      next_allowed = t + tau + dwell;
      fired = true;
      if (traj.events >= opt.max_events) {
        capped = true;
        traj.trusted = false;
        traj.note = "event cap reached; later jumps suppressed";
      }
    }
    (void)fired;
    x = x_next;
    const size_t idx = static_cast<size_t>(k) + 1;
    traj.u[idx] = u_next;
    traj.x[idx] = x;
    traj.y[idx] = base.C * x + base.D * u_next;
  }
}

int select_mode(const PwlSystem& sys, const Vector& x, const Vector& u) {
  Vector xi(x.size() + u.size());
  xi << x, u;
  const double slack = 1e-12 * (1.0 + xi.norm());
  for (size_t i = 0; i < sys.modes.size(); ++i) {
    const Matrix& E = sys.modes[i].E;
    if (E.rows() == 0 || (E * xi).minCoeff() >= -slack)
      return static_cast<int>(i);
  }
  return -1;
}

void sim_pwl(const PwlSystem& sys, const MultiSine& input, const Grid& grid,
             Trajectory& traj) {
  const int n = sys.modes.front().dyn.state_dim();
  const int m = sys.modes.front().dyn.io_dim();
  init_arrays(traj, grid, n, m);
  Vector x = Vector::Zero(n);
  int current = 0;
  for (int k = 0; k <= grid.steps; ++k) {
    const double t = traj.t[static_cast<size_t>(k)];
    const Vector u = input.eval(t);
    int active = select_mode(sys, x, u);
    if (active < 0) {
      if (traj.trusted) {
        traj.trusted = false;
        traj.note = "state left every mode cone";
      }
      active = current;
    }
    current = active;
    const StateSpace& dyn = sys.modes[static_cast<size_t>(active)].dyn;
    traj.u[static_cast<size_t>(k)] = u;
    traj.x[static_cast<size_t>(k)] = x;
    traj.y[static_cast<size_t>(k)] = dyn.C * x + dyn.D * u;
    traj.mode[static_cast<size_t>(k)] = active;
    if (k < grid.steps) x = rk4_step(dyn.A, dyn.B, input, t, x, grid.h);
  }
}

// A^T L + L A = -Q solved densely through the Kronecker identity.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) return Matrix(0, 0);
  Matrix K = Matrix::Zero(n * n, n * n);
  const Matrix At = A.transpose();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        K(i + n * j, k + n * j) += At(i, k);  // A^T L term
        K(i + n * j, i + n * k) += A(k, j);   // L A term
      }
  Vector q(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) q(i + n * j) = -Q(i, j);
  const Vector l = K.partialPivLu().solve(q);
  Matrix L(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) L(i, j) = l(i + n * j);
  return 0.5 * (L + L.transpose());
}

std::vector<double> simpson_weights(size_t count, double h) {
  std::vector<double> w(count, 0.0);
  if (count == 0) return w;
  if (count == 1) return w;
  if (count == 2) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  size_t pairs = (count - 1) / 2;
  for (size_t p = 0; p < pairs; ++p) {
    w[2 * p] += h / 3.0;
    w[2 * p + 1] += 4.0 * h / 3.0;
    w[2 * p + 2] += h / 3.0;
  }
  if ((count - 1) % 2) {  // odd interval count: trapezoid on the last one
    w[count - 2] += 0.5 * h;
    w[count - 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

Trajectory simulate(const SystemModel& sys, const MultiSine& input,
                    const SimOptions& opt) {
  validate(sys);
  input.validate();
  if (input.channel_count() != io_dim(sys))
    throw SimError("input channel count does not match the system");
  if (!(opt.step_factor > 0.0) || !(opt.dwell_steps >= 0.0))
    throw SimError("invalid simulation options");
  Trajectory traj;
  const Grid grid = make_grid(sys, input, opt, traj);
  if (const auto* lti = std::get_if<StateSpace>(&sys)) {
    sim_lti(*lti, input, grid, traj);
  } else if (const auto* reset = std::get_if<ResetSystem>(&sys)) {
    sim_reset(*reset, input, grid, opt, traj);
  } else {
    sim_pwl(std::get<PwlSystem>(sys), input, grid, traj);
  }
  return traj;
}

Functionals l2_functionals(const Trajectory& traj, const SystemModel& sys) {
  if (traj.t.size() < 2) throw SimError("trajectory is too short");
  Functionals f;
  const std::vector<double> w = simpson_weights(traj.t.size(), traj.h);
  for (size_t k = 0; k < traj.t.size(); ++k) {
    f.uu += w[k] * traj.u[k].squaredNorm();
    f.yy += w[k] * traj.y[k].squaredNorm();
    f.uy += w[k] * traj.u[k].dot(traj.y[k]);
  }
  const Vector& xT = traj.x.back();
  if (const auto* lti = std::get_if<StateSpace>(&sys)) {
    if (lti->state_dim() > 0) {
      const Matrix L =
          solve_lyapunov(lti->A, lti->C.transpose() * lti->C);
      f.tail = xT.dot(L * xT);
      f.yy += f.tail;
    }
    f.tail_exact = true;
  } else {
    const StateSpace& nom = nominal_dynamics(sys);
    const StateSpace* dyn = &nom;
    if (const auto* pwl = std::get_if<PwlSystem>(&sys)) {
      const int last = traj.mode.back();
      if (last >= 0) dyn = &pwl->modes[static_cast<size_t>(last)].dyn;
    }
    if (dyn->state_dim() > 0 && dyn->is_hurwitz()) {
      const Matrix L = solve_lyapunov(dyn->A, dyn->C.transpose() * dyn->C);
      f.tail = std::abs(xT.dot(L * xT));
    }
    f.tail_exact = false;
  }
  return f;
}

SGSample sg_sample(const Trajectory& traj, const SystemModel& sys) {
  const Functionals f = l2_functionals(traj, sys);
  if (!(f.uu > 0.0))
    throw SimError("gain and phase are undefined for a zero input");
  SGSample s;
  s.rho = std::sqrt(std::max(0.0, f.yy) / f.uu);
  if (f.yy > 0.0) {
    const double c = std::clamp(f.uy / std::sqrt(f.uu * f.yy), -1.0, 1.0);
    s.theta = std::acos(c);
  }
  s.z = Complex(s.rho * std::cos(s.theta), s.rho * std::sin(s.theta));
  s.trusted =
      traj.trusted && (f.tail_exact || f.tail <= tol::decay * f.uu);
  return s;
}

std::vector<SGSample> sample_cloud(const SystemModel& sys, int count,
                                   std::uint64_t seed, RunMode mode,
                                   const SimOptions& opt) {
  if (count < 0) throw SimError("sample count must be non-negative");
  validate(sys);
  const int m = io_dim(sys);
  std::vector<SGSample> out(static_cast<size_t>(count));
  std::vector<std::string> errors(static_cast<size_t>(count));
  auto run_one = [&](int i) {
    const std::uint64_t s =
        seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i + 1));
    try {
      const MultiSine input = MultiSine::random(m, s);
      const Trajectory traj = simulate(sys, input, opt);
      out[static_cast<size_t>(i)] = sg_sample(traj, sys);
    } catch (const std::exception& e) {
      errors[static_cast<size_t>(i)] = e.what();
    }
    out[static_cast<size_t>(i)].seed = s;
  };
  if (mode == RunMode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) run_one(i);
  } else {
    for (int i = 0; i < count; ++i) run_one(i);
  }
  for (const std::string& e : errors)
    if (!e.empty()) throw SimError("sample failed: " + e);
  return out;
}

IqcResult iqc_check(const Trajectory& traj, const SystemModel& sys,
                    const PiMatrix& pi) {
  if (traj.t.size() < 2) throw SimError("trajectory is too short");
  const size_t count = traj.t.size();
  std::vector<double> supply(count);
  for (size_t k = 0; k < count; ++k) {
    supply[k] = pi.a * traj.y[k].squaredNorm() +
                2.0 * pi.b * traj.y[k].dot(traj.u[k]) +
                pi.c * traj.u[k].squaredNorm();
  }
  IqcResult res;
  const double h = traj.h;
  std::vector<double> running(count, 0.0);
  for (size_t k = 1; k < count; ++k) {
    if (k + 1 < count && k % 2 == 1) {
      // Close the Simpson pair at the next even index.
      running[k] = running[k - 1] + 0.5 * h * (supply[k - 1] + supply[k]);
      running[k + 1] =
          running[k - 1] +
          h / 3.0 * (supply[k - 1] + 4.0 * supply[k] + supply[k + 1]);
      ++k;
    } else {
      running[k] = running[k - 1] + 0.5 * h * (supply[k - 1] + supply[k]);
    }
  }
  const Functionals f = l2_functionals(traj, sys);
  res.total = running.back();
  if (f.tail_exact && std::holds_alternative<StateSpace>(sys))
    res.total += pi.a * f.tail;
  res.min_running = res.total;
  for (double r : running) res.min_running = std::min(res.min_running, r);
  res.slack = tol::iqc * (1.0 + f.uu + std::abs(f.yy));
  res.soft = res.total >= -res.slack;
  res.hard = res.min_running >= -res.slack;
  return res;
}

}  // namespace sgraph
