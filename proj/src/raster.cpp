#include "sgraph/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace sgraph {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Sentinel for "no source cell"; large enough to dominate any in-window
// squared distance, small enough for exact finite arithmetic.
constexpr double kFar = 1e30;
}

void Window::validate() const {
  if (!(re1 > re0) || !(im1 > im0) || !std::isfinite(re0) ||
      !std::isfinite(re1) || !std::isfinite(im0) || !std::isfinite(im1))
    throw GeometryError("window must be a finite non-empty box");
}

std::size_t RasterGrid::count_filled() const {
  std::size_t n = 0;
  for (std::uint8_t c : cells) n += c != 0;
  return n;
}

double RasterGrid::filled_fraction() const {
  return cells.empty() ? 0.0
                       : static_cast<double>(count_filled()) / cells.size();
}

RasterGrid rasterize_fn(const MembershipFn& member, Window win, int resolution,
                        RunMode mode) {
  win.validate();
  if (resolution < 1) throw GeometryError("resolution must be positive");
  RasterGrid grid;
  grid.win = win;
  grid.nx = resolution;
  grid.ny = resolution;
  grid.cells.assign(static_cast<size_t>(resolution) * resolution, 0);
  if (mode == RunMode::parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        grid.at(i, j) = member(grid.center(i, j)) ? 1 : 0;
  } else {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        grid.at(i, j) = member(grid.center(i, j)) ? 1 : 0;
  }
  return grid;
}

RasterGrid rasterize(const SGApproximation& approx, Window win, int resolution,
                     RunMode mode, double slack) {
  approx.validate();
  return rasterize_fn(
      [&approx, slack](Complex z) { return approx.contains(z, slack); }, win,
      resolution, mode);
}

RasterGrid rasterize_within(const SGApproximation& approx, Window win,
                            int resolution, double dist_slack, RunMode mode) {
  approx.validate();
  return rasterize_fn(
      [&approx, dist_slack](Complex z) {
        return approx.max_signed_distance(z) <= dist_slack;
      },
      win, resolution, mode);
}

RasterGrid cloud_grid(const std::vector<Complex>& points, Window win,
                      int resolution) {
  win.validate();
  if (resolution < 1) throw GeometryError("resolution must be positive");
  RasterGrid grid;
  grid.win = win;
  grid.nx = resolution;
  grid.ny = resolution;
  grid.cells.assign(static_cast<size_t>(resolution) * resolution, 0);
  for (Complex z : points) {
    if (!win.contains(z)) continue;
    int i = static_cast<int>((z.real() - win.re0) / grid.dx());
    int j = static_cast<int>((z.imag() - win.im0) / grid.dy());
    i = std::clamp(i, 0, grid.nx - 1);
    j = std::clamp(j, 0, grid.ny - 1);
    grid.at(i, j) = 1;
  }
  return grid;
}

namespace {

// Edge identifiers for marching-squares stitching: every crossing point sits
// on a unique lattice edge between adjacent cell centers.
inline std::uint64_t edge_id(int i, int j, bool vertical) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(j)) << 33) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 1) |
         (vertical ? 1u : 0u);
}

struct Segment {
  std::uint64_t e0, e1;
};

Complex edge_point(const RasterGrid& g, std::uint64_t id) {
  const bool vertical = id & 1;
  const int i = static_cast<int>((id >> 1) & 0xffffffffu);
  const int j = static_cast<int>(id >> 33);
  Complex base = g.center(i, j);
  if (vertical) return base + Complex(0.0, g.dy() / 2.0);
  return base + Complex(g.dx() / 2.0, 0.0);
}

}  // namespace

std::vector<std::vector<Complex>> boundary_polylines(const RasterGrid& grid) {
  std::vector<Segment> segments;
  auto bottom = [&](int i, int j) { return edge_id(i, j, false); };
  auto top = [&](int i, int j) { return edge_id(i, j + 1, false); };
  auto left = [&](int i, int j) { return edge_id(i, j, true); };
  auto right = [&](int i, int j) { return edge_id(i + 1, j, true); };
  for (int j = 0; j + 1 < grid.ny; ++j) {
    for (int i = 0; i + 1 < grid.nx; ++i) {
      const int mask = (grid.at(i, j) ? 1 : 0) | (grid.at(i + 1, j) ? 2 : 0) |
                       (grid.at(i + 1, j + 1) ? 4 : 0) |
                       (grid.at(i, j + 1) ? 8 : 0);
      switch (mask) {
        case 0: case 15: break;
        case 1: case 14: segments.push_back({left(i, j), bottom(i, j)}); break;
        case 2: case 13: segments.push_back({bottom(i, j), right(i, j)}); break;
        case 3: case 12: segments.push_back({left(i, j), right(i, j)}); break;
        case 4: case 11: segments.push_back({right(i, j), top(i, j)}); break;
        case 6: case 9: segments.push_back({bottom(i, j), top(i, j)}); break;
        case 7: case 8: segments.push_back({left(i, j), top(i, j)}); break;
        case 5:  // saddle: treat the center as empty
          segments.push_back({left(i, j), bottom(i, j)});
          segments.push_back({right(i, j), top(i, j)});
          break;
        case 10:
          segments.push_back({bottom(i, j), right(i, j)});
          segments.push_back({left(i, j), top(i, j)});
          break;
      }
    }
  }
  // Stitch segments into chains by walking shared edge ids.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> incident;
  incident.reserve(segments.size() * 2);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].e0].push_back(s);
    incident[segments[s].e1].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<std::vector<Complex>> polylines;
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    std::vector<std::uint64_t> chain{segments[s0].e0, segments[s0].e1};
    used[s0] = true;
    for (int dir = 0; dir < 2; ++dir) {
      while (true) {
        const std::uint64_t tip = dir == 0 ? chain.back() : chain.front();
        const auto it = incident.find(tip);
        std::size_t next = segments.size();
        for (std::size_t cand : it->second)
          if (!used[cand]) { next = cand; break; }
        if (next == segments.size()) break;
        used[next] = true;
        const std::uint64_t other =
            segments[next].e0 == tip ? segments[next].e1 : segments[next].e0;
        if (dir == 0)
          chain.push_back(other);
        else
          chain.insert(chain.begin(), other);
        if (chain.front() == chain.back()) break;  // closed loop
      }
    }
    std::vector<Complex> poly;
    poly.reserve(chain.size());
    for (std::uint64_t id : chain) poly.push_back(edge_point(grid, id));
    polylines.push_back(std::move(poly));
  }
  return polylines;
}

namespace {

// 1-D squared distance transform of a sampled function (lower envelope of
// parabolas), spacing h between samples.  Missing sources carry kFar.
void dt1d(const double* f, double* d, int n, double h) {
  static thread_local std::vector<int> v;
  static thread_local std::vector<double> z;
  v.assign(static_cast<size_t>(n), 0);
  z.assign(static_cast<size_t>(n) + 1, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  const double h2 = h * h;
  auto crossing = [&](int q, int p) {
    return ((f[q] + h2 * q * q) - (f[p] + h2 * p * p)) / (2.0 * h2 * (q - p));
  };
  for (int q = 1; q < n; ++q) {
    double s = crossing(q, v[static_cast<size_t>(k)]);
    while (s <= z[static_cast<size_t>(k)]) {
      --k;
      s = crossing(q, v[static_cast<size_t>(k)]);
    }
    ++k;
    v[static_cast<size_t>(k)] = q;
    z[static_cast<size_t>(k)] = s;
    z[static_cast<size_t>(k) + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<size_t>(k)];
    d[q] = h2 * (q - p) * (q - p) + f[p];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(const RasterGrid& grid,
                                               RunMode mode) {
  const int nx = grid.nx, ny = grid.ny;
  std::vector<double> d(static_cast<size_t>(nx) * ny, kFar);
  for (size_t idx = 0; idx < grid.cells.size(); ++idx)
    if (grid.cells[idx]) d[idx] = 0.0;
  // Rows (spacing dx), then columns (spacing dy).
  if (mode == RunMode::parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
      std::vector<double> row(static_cast<size_t>(nx));
      std::copy_n(d.begin() + static_cast<size_t>(j) * nx, nx, row.begin());
      dt1d(row.data(), d.data() + static_cast<size_t>(j) * nx, nx, grid.dx());
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx; ++i) {
      std::vector<double> col(static_cast<size_t>(ny)), out(static_cast<size_t>(ny));
      for (int j = 0; j < ny; ++j) col[static_cast<size_t>(j)] = d[static_cast<size_t>(j) * nx + i];
      dt1d(col.data(), out.data(), ny, grid.dy());
      for (int j = 0; j < ny; ++j) d[static_cast<size_t>(j) * nx + i] = out[static_cast<size_t>(j)];
    }
  } else {
    std::vector<double> row(static_cast<size_t>(nx));
    for (int j = 0; j < ny; ++j) {
      std::copy_n(d.begin() + static_cast<size_t>(j) * nx, nx, row.begin());
      dt1d(row.data(), d.data() + static_cast<size_t>(j) * nx, nx, grid.dx());
    }
    std::vector<double> col(static_cast<size_t>(ny)), out(static_cast<size_t>(ny));
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) col[static_cast<size_t>(j)] = d[static_cast<size_t>(j) * nx + i];
      dt1d(col.data(), out.data(), ny, grid.dy());
      for (int j = 0; j < ny; ++j) d[static_cast<size_t>(j) * nx + i] = out[static_cast<size_t>(j)];
    }
  }
  return d;
}

SetDistance set_distance(const RasterGrid& a, const RasterGrid& b,
                         RunMode mode) {
  if (a.nx != b.nx || a.ny != b.ny)
    throw GeometryError("set distance requires matching grids");
  if (a.count_filled() == 0 || b.count_filled() == 0)
    throw GeometryError("set distance of an empty set within the window");
  // Measure the gap between occupied cell boxes instead of cell centers:
  // dilating one raster by a cell in each direction shortens every index
  // offset by one per axis, which is exactly the box-to-box distance.
  RasterGrid bd = b;
  for (int j = 0; j < b.ny; ++j)
    for (int i = 0; i < b.nx; ++i) {
      if (b.at(i, j)) continue;
      bool near = false;
      for (int dj = -1; dj <= 1 && !near; ++dj)
        for (int di = -1; di <= 1 && !near; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && ii < b.nx && jj >= 0 && jj < b.ny && b.at(ii, jj))
            near = true;
        }
      if (near) bd.at(i, j) = 1;
    }
  const std::vector<double> dtb = squared_distance_transform(bd, mode);
  double best = kInf;
  if (mode == RunMode::parallel) {
#pragma omp parallel for reduction(min : best) schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(a.cells.size()); ++idx)
      if (a.cells[static_cast<size_t>(idx)])
        best = std::min(best, dtb[static_cast<size_t>(idx)]);
  } else {
    for (size_t idx = 0; idx < a.cells.size(); ++idx)
      if (a.cells[idx]) best = std::min(best, dtb[idx]);
  }
  SetDistance out;
  out.value = std::sqrt(best);
  out.uncertainty = std::sqrt(2.0) * std::max(a.dx(), a.dy());
  return out;
}

bool raster_subset(const RasterGrid& inner, const RasterGrid& outer) {
  if (inner.nx != outer.nx || inner.ny != outer.ny)
    throw GeometryError("subset test requires matching grids");
  for (size_t idx = 0; idx < inner.cells.size(); ++idx)
    if (inner.cells[idx] && !outer.cells[idx]) return false;
  return true;
}

std::size_t symmetric_difference(const RasterGrid& a, const RasterGrid& b) {
  if (a.nx != b.nx || a.ny != b.ny)
    throw GeometryError("symmetric difference requires matching grids");
  std::size_t n = 0;
  for (size_t idx = 0; idx < a.cells.size(); ++idx)
    n += (a.cells[idx] != 0) != (b.cells[idx] != 0);
  return n;
}

double disk_interior_distance(Complex c1, double r1, Complex c2, double r2) {
  return std::max(0.0, std::abs(c1 - c2) - r1 - r2);
}

}  // namespace sgraph
