#include <doctest.h>

#include <cmath>
#include <random>

#include "sgraph/raster.hpp"

using namespace sgraph;

namespace {

SGApproximation unit_disk() {
  SGApproximation approx;
  approx.regions = {RegionSpec::disk_interior(0.0, 1.0)};
  return approx;
}

}  // namespace

TEST_CASE("window validation") {
  const Window flipped{1.0, -1.0, -1.0, 1.0};
  const Window flat{-1.0, 1.0, 2.0, 2.0};
  CHECK_THROWS_AS(flipped.validate(), GeometryError);
  CHECK_THROWS_AS(flat.validate(), GeometryError);
  Window ok = Window::square(2.0);
  ok.validate();
  CHECK(ok.contains(Complex(2.0, -2.0)));
  CHECK_FALSE(ok.contains(Complex(2.1, 0.0)));
  CHECK(ok.padded(0.5).contains(Complex(2.4, 0.0)));
}

TEST_CASE("rasterized unit disk has area pi") {
  const RasterGrid grid =
      rasterize(unit_disk(), Window::square(1.5), 512, RunMode::parallel);
  const double area = grid.count_filled() * grid.cell_area();
  CHECK(area == doctest::Approx(M_PI).epsilon(0.02));
}

TEST_CASE("serial and parallel rasterization agree bitwise") {
  SGApproximation approx = unit_disk();
  approx.regions.push_back(RegionSpec::half_plane(1, 0.3));
  const RasterGrid par =
      rasterize(approx, Window::square(2.0), 257, RunMode::parallel);
  const RasterGrid ser =
      rasterize(approx, Window::square(2.0), 257, RunMode::serial);
  REQUIRE(par.cells.size() == ser.cells.size());
  CHECK(symmetric_difference(par, ser) == 0);
}

TEST_CASE("distance transform matches brute force on a random grid") {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution fill(0.12);
  RasterGrid grid;
  grid.win = Window{-1.0, 1.0, -0.5, 0.7};
  grid.nx = 32;
  grid.ny = 24;
  grid.cells.assign(static_cast<size_t>(grid.nx) * grid.ny, 0);
  for (auto& c : grid.cells) c = fill(rng) ? 1 : 0;
  grid.at(3, 5) = 1;  // guarantee non-empty

  const std::vector<double> par = squared_distance_transform(grid, RunMode::parallel);
  const std::vector<double> ser = squared_distance_transform(grid, RunMode::serial);
  REQUIRE(par.size() == grid.cells.size());
  CHECK(par == ser);

  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int q = 0; q < grid.ny; ++q)
        for (int p = 0; p < grid.nx; ++p)
          if (grid.at(p, q))
            best = std::min(best, std::norm(grid.center(i, j) - grid.center(p, q)));
      const double got = par[static_cast<size_t>(j) * grid.nx + i];
      CHECK(got == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("set distance between two disks matches the analytic value") {
  SGApproximation a, b;
  a.regions = {RegionSpec::disk_interior(-1.0, 0.4)};
  b.regions = {RegionSpec::disk_interior(1.2, 0.3)};
  const Window win = Window::square(2.0);
  const RasterGrid ga = rasterize(a, win, 512);
  const RasterGrid gb = rasterize(b, win, 512);
  const SetDistance d = set_distance(ga, gb);
  const SetDistance d_swapped = set_distance(gb, ga);
  CHECK(d.value == doctest::Approx(d_swapped.value).epsilon(1e-12));
  const double exact =
      disk_interior_distance(Complex(-1.0, 0.0), 0.4, Complex(1.2, 0.0), 0.3);
  CHECK(exact == doctest::Approx(2.2 - 0.7).epsilon(1e-12));
  CHECK(std::abs(d.value - exact) <= d.uncertainty + 1e-12);

  const SetDistance ds = set_distance(ga, gb, RunMode::serial);
  CHECK(ds.value == d.value);

  RasterGrid empty = ga;
  std::fill(empty.cells.begin(), empty.cells.end(), 0);
  CHECK_THROWS_AS(set_distance(ga, empty), GeometryError);
}

TEST_CASE("overlapping sets have zero distance") {
  SGApproximation a, b;
  a.regions = {RegionSpec::disk_interior(0.0, 1.0)};
  b.regions = {RegionSpec::disk_interior(0.5, 1.0)};
  const Window win = Window::square(2.0);
  const SetDistance d =
      set_distance(rasterize(a, win, 256), rasterize(b, win, 256));
  CHECK(d.value == 0.0);
}

TEST_CASE("boundary polylines trace the circle") {
  const RasterGrid grid = rasterize(unit_disk(), Window::square(1.5), 256);
  const auto loops = boundary_polylines(grid);
  REQUIRE(!loops.empty());
  std::size_t total = 0;
  double max_err = 0.0;
  for (const auto& loop : loops) {
    REQUIRE(loop.size() >= 4);
    CHECK(std::abs(loop.front() - loop.back()) < 1e-12);  // closed
    for (const Complex& p : loop) {
      ++total;
      max_err = std::max(max_err, std::abs(std::abs(p) - 1.0));
    }
  }
  CHECK(total > 100);
  // Marching squares on cell centers stays within one cell diagonal.
  CHECK(max_err < 2.0 * std::hypot(grid.dx(), grid.dy()));
}

TEST_CASE("subset and symmetric difference behave on nested disks") {
  SGApproximation small_disk, big_disk;
  small_disk.regions = {RegionSpec::disk_interior(0.0, 0.6)};
  big_disk.regions = {RegionSpec::disk_interior(0.0, 1.0)};
  const Window win = Window::square(1.2);
  const RasterGrid gs = rasterize(small_disk, win, 128);
  const RasterGrid gb = rasterize(big_disk, win, 128);
  CHECK(raster_subset(gs, gb));
  CHECK_FALSE(raster_subset(gb, gs));
  CHECK(symmetric_difference(gs, gb) == gb.count_filled() - gs.count_filled());
  CHECK(symmetric_difference(gs, gs) == 0);
}

TEST_CASE("cloud grid marks exactly the occupied cells") {
  const Window win = Window::square(1.0);
  std::vector<Complex> pts = {Complex(0.0, 0.0), Complex(0.01, 0.01),
                              Complex(0.9, -0.9), Complex(5.0, 5.0)};
  const RasterGrid grid = cloud_grid(pts, win, 16);
  CHECK(grid.count_filled() == 2);  // two in-window cells, duplicate collapses
  bool origin_cell = false;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.at(i, j) && std::abs(grid.center(i, j)) < grid.dx())
        origin_cell = true;
  CHECK(origin_cell);
}

TEST_CASE("euclidean-slack rasterization grows the set") {
  const Window win = Window::square(1.5);
  const RasterGrid tight = rasterize(unit_disk(), win, 128);
  const RasterGrid grown = rasterize_within(unit_disk(), win, 128, 0.2);
  CHECK(raster_subset(tight, grown));
  const double grown_area = grown.count_filled() * grown.cell_area();
  CHECK(grown_area == doctest::Approx(M_PI * 1.2 * 1.2).epsilon(0.05));
}
