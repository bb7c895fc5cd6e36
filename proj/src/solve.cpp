#include "sgraph/solve.hpp"

#include <chrono>
#include <cmath>

namespace sgraph {

const SdpBackend& default_backend() {
  static const BarrierBackend backend;
  return backend;
}

namespace {

SweepEntry make_entry(const SystemModel& sys, int sigma, double lambda_c,
                      bool hard, const SdpBackend& backend, double rho_cap) {
  SweepEntry entry;
  entry.lambda_c = lambda_c;
  entry.sigma = sigma;
  LmiProblem prob = build_problem(sys, sigma, lambda_c, hard);
  if (sigma > 0) {
    if (!(rho_cap > 0.0)) throw SolveError("exterior solve needs a positive cap");
    prob.add_linear({"rho_cap", {{prob.layout.rho, -1.0}}, rho_cap});
  }
  SdpResult res = backend.solve(prob);
  entry.status = res.status;
  if (res.status != SolveStatus::optimal) return entry;
  entry.cert = extract_certificate(prob, res.v);
  entry.rho = entry.cert.rho;
  entry.r = std::sqrt(std::max(entry.rho, 0.0));
  const CertificateCheck check = check_certificate(prob, res.v);
  entry.verified = check.feasible() &&
                   (!hard || check.min_P_eig >= -tol::psd);
  entry.cert.max_block_eig = check.max_block_eig;
  if (sigma > 0) {
    entry.capped = entry.rho >= rho_cap * (1.0 - 1e-6);
    entry.cert.capped = entry.capped;
  }
  entry.degenerate = entry.r < tol::min_region_radius;
  if (entry.verified && !entry.degenerate) {
    entry.region = sigma < 0 ? RegionSpec::disk_interior(lambda_c, entry.r)
                             : RegionSpec::disk_exterior(lambda_c, entry.r);
  }
  return entry;
}

}  // namespace

SweepEntry solve_interior(const SystemModel& sys, double lambda_c, bool hard,
                          const SdpBackend& backend) {
  return make_entry(sys, -1, lambda_c, hard, backend, 0.0);
}

SweepEntry solve_exterior(const SystemModel& sys, double lambda_c, bool hard,
                          const SdpBackend& backend, double rho_cap) {
  return make_entry(sys, +1, lambda_c, hard, backend, rho_cap);
}

HalfplaneEntry solve_halfplane(const SystemModel& sys, int sign, bool hard,
                               const SdpBackend& backend, double c_cap) {
  HalfplaneEntry entry;
  entry.sign = sign;
  LmiProblem prob = build_halfplane(sys, sign, hard);
  prob.add_linear({"hp_floor", {{prob.layout.hp_offset, 1.0}}, c_cap});
  prob.add_linear({"hp_cap", {{prob.layout.hp_offset, -1.0}}, c_cap});
  SdpResult res = backend.solve(prob);
  entry.status = res.status;
  if (res.status != SolveStatus::optimal) return entry;
  entry.cert = extract_certificate(prob, res.v);
  entry.c = entry.cert.rho;
  const CertificateCheck check = check_certificate(prob, res.v);
  entry.verified =
      check.feasible() && (!hard || check.min_P_eig >= -tol::psd);
  if (entry.verified) entry.region = RegionSpec::half_plane(sign, entry.c);
  return entry;
}

double gain_bound(const SystemModel& sys, bool hard,
                  const SdpBackend& backend) {
  SweepEntry entry = solve_interior(sys, 0.0, hard, backend);
  if (entry.status != SolveStatus::optimal || !entry.verified)
    throw SolveError("cannot certify a finite gain bound (interior problem at "
                     "lambda_c = 0 returned " +
                     status_name(entry.status) + ")");
  return entry.r;
}

SweepConfig default_config(const SystemModel& sys, bool hard,
                           const SdpBackend& backend) {
  const double g = gain_bound(sys, hard, backend);
  SweepConfig cfg;
  cfg.hard = hard;
  cfg.lambda_interior = uniform_grid(-2.0 * g, 2.0 * g, 81);
  cfg.lambda_exterior = uniform_grid(-5.0 * g, 5.0 * g, 81);
  return cfg;
}

SweepResult sweep(const SystemModel& sys, const SweepConfig& cfg,
                  const SolveOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  validate(sys);
  cfg.validate();
  const SdpBackend& backend = opt.backend ? *opt.backend : default_backend();

  SweepResult result;
  result.hard = cfg.hard;
  result.sys_hash = system_hash(sys);
  result.gain_bound = gain_bound(sys, cfg.hard, backend);
  result.rho_cap = std::pow(opt.cap_gain_multiple * result.gain_bound, 2);

  struct Job {
    int sigma;
    double lambda_c;
  };
  std::vector<Job> jobs;
  jobs.reserve(cfg.lambda_interior.size() + cfg.lambda_exterior.size());
  for (double l : cfg.lambda_interior) jobs.push_back({-1, l});
  for (double l : cfg.lambda_exterior) jobs.push_back({+1, l});
  result.entries.resize(jobs.size());

  const long long n = static_cast<long long>(jobs.size());
  if (opt.mode == RunMode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
      const Job& job = jobs[static_cast<size_t>(i)];
      result.entries[static_cast<size_t>(i)] =
          make_entry(sys, job.sigma, job.lambda_c, cfg.hard, backend,
                     result.rho_cap);
    }
  } else {
    for (long long i = 0; i < n; ++i) {
      const Job& job = jobs[static_cast<size_t>(i)];
      result.entries[static_cast<size_t>(i)] =
          make_entry(sys, job.sigma, job.lambda_c, cfg.hard, backend,
                     result.rho_cap);
    }
  }

  const double c_cap = 1000.0 * (1.0 + result.gain_bound);
  for (int sign : cfg.halfplane_signs)
    result.halfplanes.push_back(
        solve_halfplane(sys, sign, cfg.hard, backend, c_cap));

  result.approx.mode =
      cfg.hard ? SGApproximation::Mode::hard : SGApproximation::Mode::soft;
  result.approx.source_hash = result.sys_hash;
  for (const SweepEntry& entry : result.entries)
    if (entry.region) {
      result.approx.regions.push_back(*entry.region);
      result.approx.certificates.push_back(entry.cert);
    }
  for (const HalfplaneEntry& entry : result.halfplanes)
    if (entry.region) {
      result.approx.regions.push_back(*entry.region);
      result.approx.certificates.push_back(entry.cert);
    }
  if (result.approx.regions.empty())
    throw SolveError("sweep produced no certified regions");
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

Window default_window(const SweepResult& result) {
  return Window::square(result.gain_bound + 0.1);
}

}  // namespace sgraph
