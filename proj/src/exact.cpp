#include "sgraph/exact.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace sgraph {

Complex disk_chart(Complex z) {
  const double n = 1.0 + std::norm(z);
  return Complex(std::norm(z) - 1.0, -2.0 * z.real()) / n;
}

Complex disk_chart_inverse(Complex w) {
  const double r = std::abs(w);
  if (r > 1.0 + 1e-9)
    throw GeometryError("chart inverse outside the closed disk: |w| = " +
                        std::to_string(r));
  const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
  const double den = 1.0 - w.real();
  if (den < tol::degenerate_inversion)
    throw GeometryError("chart inverse at the puncture w = 1");
  return Complex(-w.imag(), s) / den;
}

namespace {

double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p.real() - a.real()) * d.real() +
              (p.imag() - a.imag()) * d.imag()) /
             len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

}  // namespace

std::vector<Complex> convex_hull(std::vector<Complex> points) {
  std::sort(points.begin(), points.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const size_t n = points.size();
  if (n < 3) return points;

  std::vector<Complex> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0)
      --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);  // last point equals the first
  if (hull.size() < 3) {
    // All input collinear: collapse to the extreme pair.
    return {points.front(), points.back()};
  }
  // Rounding noise turns collinear clouds into slivers whose vertices
  // straddle the line; collapse anything thinner than 1e-9 relative to
  // its diameter back to a segment.
  size_t ia = 0, ib = 0;
  double diam = 0.0;
  for (size_t i = 0; i < hull.size(); ++i)
    for (size_t j = i + 1; j < hull.size(); ++j) {
      const double d = std::abs(hull[i] - hull[j]);
      if (d > diam) {
        diam = d;
        ia = i;
        ib = j;
      }
    }
  double width = 0.0;
  for (Complex p : hull)
    width = std::max(width, segment_distance(p, hull[ia], hull[ib]));
  if (width <= 1e-9 * (1.0 + diam)) return {hull[ia], hull[ib]};
  return hull;
}

std::vector<Complex> spectrum_samples(const StateSpace& sys,
                                      const std::vector<double>& freq_grid) {
  sys.validate();
  const int m = sys.io_dim();
  std::vector<Complex> out;
  out.reserve((freq_grid.size() + 2) * static_cast<size_t>(m));
  auto add_eigs = [&](const ComplexMatrix& H) {
    if (m == 1) {
      out.push_back(H(0, 0));
      return;
    }
    Eigen::ComplexEigenSolver<ComplexMatrix> es(H, false);
    if (es.info() != Eigen::Success)
      throw ModelError("eigenvalue computation failed on a frequency sample");
    for (int i = 0; i < m; ++i) out.push_back(es.eigenvalues()(i));
  };
  bool saw_zero = false;
  for (double w : freq_grid) {
    if (w == 0.0) saw_zero = true;
    add_eigs(sys.transfer(Complex(0.0, w)));
  }
  if (!saw_zero) add_eigs(sys.transfer(Complex(0.0, 0.0)));
  add_eigs(sys.D.cast<Complex>());  // high-frequency limit
  return out;
}

bool is_normal(const StateSpace& sys, const std::vector<double>& freq_grid) {
  auto normal = [](const ComplexMatrix& H) {
    const ComplexMatrix c = H * H.adjoint() - H.adjoint() * H;
    return c.norm() <= 1e-8 * (1.0 + H.norm());
  };
  for (double w : freq_grid)
    if (!normal(sys.transfer(Complex(0.0, w)))) return false;
  return normal(sys.D.cast<Complex>());
}

std::vector<double> default_frequency_grid(const StateSpace& sys) {
  if (sys.state_dim() == 0) return {0.0};
  const Eigen::VectorXcd eigs = sys.A.eigenvalues();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < eigs.size(); ++i) {
    const double a = std::abs(eigs(i));
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  const double w0 = 1e-3 * lo;
  const double w1 = 1e3 * hi;
  const int n = 1024;
  std::vector<double> grid;
  grid.reserve(n + 1);
  const double step = std::log(w1 / w0) / (n - 1);
  for (int i = 0; i < n; ++i) grid.push_back(w0 * std::exp(step * i));
  grid.push_back(0.0);
  return grid;
}

bool ExactSG::contains(Complex z, double pad) const {
  if (hull.empty()) return false;
  const Complex w = disk_chart(z);
  if (hull.size() == 1) return std::abs(w - hull[0]) <= pad;
  if (hull.size() == 2) return segment_distance(w, hull[0], hull[1]) <= pad;
  const size_t n = hull.size();
  for (size_t i = 0; i < n; ++i) {
    const Complex a = hull[i];
    const Complex b = hull[(i + 1) % n];
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    if (cross(a, b, w) < -pad * len) return false;
  }
  return true;
}

double ExactSG::signed_distance(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& line : boundary) {
    if (line.size() == 1) d = std::min(d, std::abs(z - line[0]));
    for (size_t i = 0; i + 1 < line.size(); ++i)
      d = std::min(d, segment_distance(z, line[i], line[i + 1]));
  }
  if (!degenerate() && contains(z)) return -d;
  return d;
}

double ExactSG::max_gain() const {
  double g = 0.0;
  for (Complex z : spectrum) g = std::max(g, std::abs(z));
  return g;
}

ExactSG exact_sg(const StateSpace& sys, const ExactOptions& opt) {
  sys.validate();
  sys.require_hurwitz();
  const std::vector<double> grid =
      opt.freq_grid.empty() ? default_frequency_grid(sys) : opt.freq_grid;
  if (!is_normal(sys, grid))
    throw ModelError(
        "exact construction needs a normal transfer matrix on the grid");

  ExactSG sg;
  sg.spectrum = spectrum_samples(sys, grid);
  std::vector<Complex> charted;
  charted.reserve(sg.spectrum.size());
  for (Complex z : sg.spectrum) charted.push_back(disk_chart(z));
  sg.hull = convex_hull(std::move(charted));
  for (Complex w : sg.hull)
    if (std::abs(w - 1.0) < 1e-12)
      throw GeometryError("graph is unbounded (hull reaches the puncture)");

  const int per_edge = std::max(2, opt.boundary_samples_per_edge);
  auto trace = [&](Complex a, Complex b, std::vector<Complex>& line) {
    for (int k = 0; k < per_edge; ++k) {
      const double t = static_cast<double>(k) / per_edge;
      line.push_back(disk_chart_inverse(a + t * (b - a)));
    }
  };
  std::vector<Complex> upper;
  if (sg.hull.size() == 1) {
    upper.push_back(disk_chart_inverse(sg.hull[0]));
  } else if (sg.hull.size() == 2) {
    trace(sg.hull[0], sg.hull[1], upper);
    upper.push_back(disk_chart_inverse(sg.hull[1]));
  } else {
    const size_t n = sg.hull.size();
    for (size_t i = 0; i < n; ++i)
      trace(sg.hull[i], sg.hull[(i + 1) % n], upper);
    upper.push_back(upper.front());  // close the loop
  }
  std::vector<Complex> lower;
  lower.reserve(upper.size());
  for (Complex z : upper) lower.push_back(std::conj(z));
  sg.boundary.push_back(std::move(upper));
  sg.boundary.push_back(std::move(lower));
  return sg;
}

}  // namespace sgraph
