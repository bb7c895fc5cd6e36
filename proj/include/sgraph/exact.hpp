#pragma once

#include <vector>

#include "sgraph/model.hpp"
#include "sgraph/raster.hpp"

namespace sgraph {

// Conformal-style chart used for the exact construction: maps the closed
// upper half-plane bijectively onto the closed unit disk minus {1},
//   w = (conj(z) - j)(z - j) / (1 + |z|^2)
//     = ((|z|^2 - 1) - 2j Re z) / (1 + |z|^2).
// Conjugate points collapse (the chart depends on |z| and Re z only), which
// matches the conjugate symmetry of scaled graphs.
Complex disk_chart(Complex z);
// Upper-half-plane branch of the inverse chart; the other branch is the
// conjugate.  Throws GeometryError at the puncture w = 1 and for |w| > 1
// beyond roundoff.
Complex disk_chart_inverse(Complex w);

// Monotone-chain convex hull (counter-clockwise, collinear points dropped).
std::vector<Complex> convex_hull(std::vector<Complex> points);

// Frequency response samples: eigenvalues of H(j w) over the grid plus the
// DC and high-frequency limits.
std::vector<Complex> spectrum_samples(const StateSpace& sys,
                                      const std::vector<double>& freq_grid);
// Normality of H(j w) (commutator Frobenius test) at every grid frequency.
bool is_normal(const StateSpace& sys, const std::vector<double>& freq_grid);
// 1024 log-spaced frequencies spanning [1e-3 |eig|_min, 1e3 |eig|_max],
// with 0 appended (the high-frequency limit is handled via D).
std::vector<double> default_frequency_grid(const StateSpace& sys);

// Exact scaled graph of a normal LTI system: the chart image of the graph is
// the convex hull of the chart image of the spectrum samples.
struct ExactSG {
  std::vector<Complex> spectrum;    // frequency-response eigenvalues
  std::vector<Complex> hull;        // chart-plane hull, CCW; may degenerate
  std::vector<std::vector<Complex>> boundary;  // z-plane polylines (upper + lower)

  bool degenerate() const { return hull.size() < 3; }
  // Membership via the chart-plane hull; `pad` is a chart-plane tolerance.
  bool contains(Complex z, double pad = 1e-12) const;
  // Distance from z to the boundary polylines, negative inside a fat set.
  double signed_distance(Complex z) const;
  double max_gain() const;  // largest |spectrum| sample
};

struct ExactOptions {
  std::vector<double> freq_grid;   // empty: use the default grid
  int boundary_samples_per_edge = 24;
};

// Throws ModelError when the transfer matrix is not normal on the grid and
// GeometryError when the graph is unbounded (hull touches w = 1).
ExactSG exact_sg(const StateSpace& sys, const ExactOptions& opt = {});

}  // namespace sgraph
