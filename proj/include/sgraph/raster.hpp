#pragma once

#include <functional>
#include <vector>

#include "sgraph/regions.hpp"

namespace sgraph {

struct Window {
  double re0 = -1, re1 = 1, im0 = -1, im1 = 1;
  static Window square(double half) { return Window{-half, half, -half, half}; }
  double width() const { return re1 - re0; }
  double height() const { return im1 - im0; }
  void validate() const;
  bool contains(Complex z) const {
    return z.real() >= re0 && z.real() <= re1 && z.imag() >= im0 &&
           z.imag() <= im1;
  }
  Window padded(double pad) const {
    return Window{re0 - pad, re1 + pad, im0 - pad, im1 + pad};
  }
};

// Boolean occupancy grid over a window; cell (i, j) is sampled at its center.
struct RasterGrid {
  Window win;
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> cells;  // row-major, index j*nx + i

  double dx() const { return win.width() / nx; }
  double dy() const { return win.height() / ny; }
  Complex center(int i, int j) const {
    return {win.re0 + (i + 0.5) * dx(), win.im0 + (j + 0.5) * dy()};
  }
  std::uint8_t at(int i, int j) const { return cells[static_cast<size_t>(j) * nx + i]; }
  std::uint8_t& at(int i, int j) { return cells[static_cast<size_t>(j) * nx + i]; }
  std::size_t count_filled() const;
  double filled_fraction() const;
  double cell_area() const { return dx() * dy(); }
};

using MembershipFn = std::function<bool(Complex)>;

// Sample a membership predicate at every cell center.
RasterGrid rasterize_fn(const MembershipFn& member, Window win, int resolution,
                        RunMode mode = RunMode::parallel);
// Quadratic-form membership with default slack.
RasterGrid rasterize(const SGApproximation& approx, Window win, int resolution,
                     RunMode mode = RunMode::parallel,
                     double slack = tol::membership);
// Euclidean-slack membership: keeps cells within `dist_slack` of the set.
RasterGrid rasterize_within(const SGApproximation& approx, Window win,
                            int resolution, double dist_slack,
                            RunMode mode = RunMode::parallel);
// Mark cells containing at least one point of the cloud.
RasterGrid cloud_grid(const std::vector<Complex>& points, Window win,
                      int resolution);

// Closed/open polylines along the boundary of the filled set (marching
// squares over cell centers, window coordinates).
std::vector<std::vector<Complex>> boundary_polylines(const RasterGrid& grid);

// Exact Euclidean distance transform: squared distance from every cell
// center to the nearest filled cell center (infinity when the grid is empty).
std::vector<double> squared_distance_transform(const RasterGrid& grid,
                                               RunMode mode = RunMode::parallel);

struct SetDistance {
  double value = 0.0;
  double uncertainty = 0.0;  // sqrt(2) * max cell spacing
};

// Minimum distance between the filled cell boxes of two grids over the same
// window (adjacent cells have distance zero).  Throws GeometryError when
// either grid is empty.
SetDistance set_distance(const RasterGrid& a, const RasterGrid& b,
                         RunMode mode = RunMode::parallel);

// True when every filled cell of `inner` is filled in `outer`.
bool raster_subset(const RasterGrid& inner, const RasterGrid& outer);
std::size_t symmetric_difference(const RasterGrid& a, const RasterGrid& b);

// Distance between two closed disk interiors (analytic cross-check).
double disk_interior_distance(Complex c1, double r1, Complex c2, double r2);

}  // namespace sgraph
