// Compares the OpenMP kernels against their serial reference twins.
#include <chrono>
#include <cstdio>

#include "sgraph/raster.hpp"
#include "sgraph/sim.hpp"
#include "sgraph/solve.hpp"

using namespace sgraph;

namespace {

template <typename F>
double time_ms(F&& fn, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  SGApproximation approx;
  for (int k = 0; k < 80; ++k) {
    const double lc = -2.0 + 0.05 * k;
    approx.regions.push_back(RegionSpec::disk_interior(lc, 1.0 + 0.1 * k));
    approx.regions.push_back(RegionSpec::disk_exterior(lc - 3.0, 0.5));
  }
  const Window win = Window::square(2.0);

  report("rasterize 768^2",
         time_ms([&] { rasterize(approx, win, 768, RunMode::serial); }),
         time_ms([&] { rasterize(approx, win, 768, RunMode::parallel); }));

  const RasterGrid grid = rasterize(approx, win, 768, RunMode::serial);
  report("distance transform 768^2",
         time_ms([&] { squared_distance_transform(grid, RunMode::serial); }),
         time_ms([&] { squared_distance_transform(grid, RunMode::parallel); }));

  RasterGrid shifted = grid;
  for (auto& c : shifted.cells) c = !c;
  report("set distance 768^2",
         time_ms([&] { set_distance(grid, shifted, RunMode::serial); }),
         time_ms([&] { set_distance(grid, shifted, RunMode::parallel); }));

  StateSpace sys = realize_tf_denominator({1.0, 5.0, 2.0, 1.0});
  const SystemModel model = sys;
  report("sample cloud 24 runs",
         time_ms([&] { sample_cloud(model, 24, 7, RunMode::serial); }, 1),
         time_ms([&] { sample_cloud(model, 24, 7, RunMode::parallel); }, 1));

  SweepConfig cfg;
  cfg.lambda_interior = uniform_grid(-1.0, 1.0, 9);
  cfg.lambda_exterior = uniform_grid(-3.0, 3.0, 9);
  SolveOptions serial_opt, parallel_opt;
  serial_opt.mode = RunMode::serial;
  parallel_opt.mode = RunMode::parallel;
  report("sweep 18 certificates",
         time_ms([&] { sweep(model, cfg, serial_opt); }, 1),
         time_ms([&] { sweep(model, cfg, parallel_opt); }, 1));
  return 0;
}
