#include "sgraph/regions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace sgraph {

PiMatrix make_pi(int sigma, double lambda_c, double r) {
  if (sigma != 1 && sigma != -1) throw GeometryError("sigma must be +1 or -1");
  if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(lambda_c))
    throw GeometryError("disk needs finite lambda_c and r > 0");
  const double s = static_cast<double>(sigma);
  return PiMatrix{s, -s * lambda_c, s * (lambda_c * lambda_c - r * r)};
}

PiMatrix make_halfplane_pi(int sign, double c) {
  if (sign != 1 && sign != -1)
    throw GeometryError("half-plane sign must be +1 or -1");
  if (!std::isfinite(c)) throw GeometryError("half-plane offset must be finite");
  return PiMatrix{0.0, static_cast<double>(sign), c};
}

std::string kind_name(RegionKind kind) {
  switch (kind) {
    case RegionKind::disk_interior: return "disk_in";
    case RegionKind::disk_exterior: return "disk_out";
    case RegionKind::half_plane: return "halfplane";
  }
  return "?";
}

RegionSpec RegionSpec::disk_interior(double lambda_c, double r) {
  RegionSpec s;
  s.kind = RegionKind::disk_interior;
  s.lambda_c = lambda_c;
  s.r = r;
  s.pi = make_pi(-1, lambda_c, r);
  return s;
}

RegionSpec RegionSpec::disk_exterior(double lambda_c, double r) {
  RegionSpec s;
  s.kind = RegionKind::disk_exterior;
  s.lambda_c = lambda_c;
  s.r = r;
  s.pi = make_pi(+1, lambda_c, r);
  return s;
}

RegionSpec RegionSpec::half_plane(int sign, double c) {
  RegionSpec s;
  s.kind = RegionKind::half_plane;
  s.sign = sign;
  s.c = c;
  s.pi = make_halfplane_pi(sign, c);
  return s;
}

double RegionSpec::signed_distance(Complex z) const {
  switch (kind) {
    case RegionKind::disk_interior:
      return std::abs(z - Complex(lambda_c, 0.0)) - r;
    case RegionKind::disk_exterior:
      return r - std::abs(z - Complex(lambda_c, 0.0));
    case RegionKind::half_plane:
      // sign=+1 keeps Re z >= -c/2, sign=-1 keeps Re z <= c/2.
      return sign > 0 ? (-c / 2.0 - z.real()) : (z.real() - c / 2.0);
  }
  return 0.0;
}

void RegionSpec::validate() const {
  if (kind == RegionKind::half_plane) {
    if (sign != 1 && sign != -1)
      throw GeometryError("half-plane sign must be +1 or -1");
    if (!std::isfinite(c)) throw GeometryError("half-plane offset not finite");
  } else {
    if (!(r > 0.0) || !std::isfinite(lambda_c))
      throw GeometryError("disk region needs r > 0 and finite center");
  }
  // det(pi) = -r^2 analytically, but for r << |lambda_c| the subtraction
  // rounds to zero, so only a clearly positive value signals a bad form.
  const double scale =
      std::max({std::abs(pi.a), std::abs(pi.b), std::abs(pi.c), 1.0});
  if (pi.det() > 1e-12 * scale * scale)
    throw GeometryError("region form must have negative determinant");
}

RegionSpec region_from_pi(const PiMatrix& pi) {
  const double scale =
      std::max({std::abs(pi.a), std::abs(pi.b), std::abs(pi.c), 1.0});
  if (pi.det() >= -1e-12 * scale * scale)
    throw GeometryError("quadratic form is not an admissible region");
  if (std::abs(pi.a) <= 1e-14 * scale) {
    // a = 0: half-plane 2 b Re z + c >= 0.
    const int sign = pi.b > 0 ? 1 : -1;
    RegionSpec s = RegionSpec::half_plane(sign, pi.c / std::abs(pi.b));
    return s;
  }
  const double lambda_c = -pi.b / pi.a;
  const double r2 = (pi.b * pi.b - pi.a * pi.c) / (pi.a * pi.a);
  const double r = std::sqrt(std::max(r2, 0.0));
  return pi.a > 0 ? RegionSpec::disk_exterior(lambda_c, r)
                  : RegionSpec::disk_interior(lambda_c, r);
}

RegionSpec invert_region(const RegionSpec& region) {
  // The pointwise map is w = (1/|z|) e^{j angle z} = 1 / conj(z).
  if (region.kind == RegionKind::half_plane) {
    // c |w|^2 + 2 sign Re w >= 0.
    if (region.c == 0.0) return region;  // boundary passes through the origin
    const double c = region.c;
    const double center = -region.sign / c;
    const double radius = 1.0 / std::abs(c);
    return c > 0 ? RegionSpec::disk_exterior(center, radius)
                 : RegionSpec::disk_interior(center, radius);
  }
  const double lc = region.lambda_c;
  const double r = region.r;
  const double d = lc * lc - r * r;
  const double rel = std::abs(std::abs(lc) - r) / std::max({std::abs(lc), r, 1e-300});
  const bool interior = region.kind == RegionKind::disk_interior;
  if (std::abs(lc) == r) {
    // Boundary through the origin: the image is the half-plane with edge at
    // Re w = 1/(2 lambda_c); the disk keeps lambda_c Re w >= 1/2, the
    // complement keeps lambda_c Re w <= 1/2.
    if (lc == 0.0)
      throw GeometryError("cannot invert a disk centered at the origin with r = |lambda_c| = 0");
    const double edge = 1.0 / (2.0 * lc);
    int sign;
    if (interior)
      sign = lc > 0 ? +1 : -1;  // Re w >= edge : Re w <= edge
    else
      sign = lc > 0 ? -1 : +1;
    RegionSpec out = RegionSpec::half_plane(sign, sign > 0 ? -2.0 * edge : 2.0 * edge);
    return out;
  }
  const double lc_img = lc / d;
  const double r_img = r / std::abs(d);
  const bool image_interior = interior == (d > 0);
  RegionSpec out = image_interior ? RegionSpec::disk_interior(lc_img, r_img)
                                  : RegionSpec::disk_exterior(lc_img, r_img);
  out.degenerate = rel <= tol::degenerate_inversion;
  return out;
}

RegionSpec negate_region(const RegionSpec& region) {
  switch (region.kind) {
    case RegionKind::disk_interior:
      return RegionSpec::disk_interior(-region.lambda_c, region.r);
    case RegionKind::disk_exterior:
      return RegionSpec::disk_exterior(-region.lambda_c, region.r);
    case RegionKind::half_plane:
      return RegionSpec::half_plane(-region.sign, region.c);
  }
  return region;
}

RegionSpec scale_region(const RegionSpec& region, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw GeometryError("scale factor must be positive and finite");
  switch (region.kind) {
    case RegionKind::disk_interior:
      return RegionSpec::disk_interior(tau * region.lambda_c, tau * region.r);
    case RegionKind::disk_exterior:
      return RegionSpec::disk_exterior(tau * region.lambda_c, tau * region.r);
    case RegionKind::half_plane:
      return RegionSpec::half_plane(region.sign, tau * region.c);
  }
  return region;
}

bool SGApproximation::contains(Complex z, double slack) const {
  for (const RegionSpec& region : regions)
    if (!region.contains(z, slack)) return false;
  return true;
}

double SGApproximation::max_signed_distance(Complex z) const {
  double d = -std::numeric_limits<double>::infinity();
  for (const RegionSpec& region : regions)
    d = std::max(d, region.signed_distance(z));
  return d;
}

void SGApproximation::validate() const {
  if (regions.empty())
    throw GeometryError("approximation must contain at least one region");
  for (const RegionSpec& region : regions) region.validate();
  if (!certificates.empty() && certificates.size() != regions.size())
    throw GeometryError("certificate list must align with the region list");
}

SGApproximation intersect(const SGApproximation& approx, RegionSpec region,
                          const std::vector<Complex>* probe_grid) {
  region.validate();
  SGApproximation out = approx;
  if (probe_grid != nullptr && !out.regions.empty()) {
    bool changed = false;
    for (Complex z : *probe_grid) {
      if (out.contains(z) && !region.contains(z)) {
        changed = true;
        break;
      }
    }
    region.grid_redundant = !changed;
  }
  out.regions.push_back(std::move(region));
  if (!out.certificates.empty()) out.certificates.emplace_back();
  return out;
}

nlohmann::json to_json(const RegionSpec& region) {
  nlohmann::json j;
  j["variant"] = kind_name(region.kind);
  j["lambda_c"] = region.lambda_c;
  j["r"] = region.r;
  j["sign"] = region.sign;
  j["c"] = region.c;
  j["pi"] = {{region.pi.a, region.pi.b}, {region.pi.b, region.pi.c}};
  if (region.grid_redundant) j["grid_redundant"] = true;
  if (region.degenerate) j["degenerate"] = true;
  return j;
}

RegionSpec region_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("variant"))
    throw ParseError("region object needs a 'variant' field");
  const std::string variant = j.at("variant").get<std::string>();
  RegionSpec region;
  if (variant == "disk_in")
    region = RegionSpec::disk_interior(j.at("lambda_c").get<double>(),
                                       j.at("r").get<double>());
  else if (variant == "disk_out")
    region = RegionSpec::disk_exterior(j.at("lambda_c").get<double>(),
                                       j.at("r").get<double>());
  else if (variant == "halfplane")
    region = RegionSpec::half_plane(j.at("sign").get<int>(),
                                    j.at("c").get<double>());
  else
    throw ParseError("unknown region variant '" + variant + "'");
  if (j.contains("pi")) {
    const auto& p = j.at("pi");
    if (!p.is_array() || p.size() != 2 || p[0].size() != 2 || p[1].size() != 2)
      throw ParseError("region 'pi' must be a 2x2 array");
    const double a = p[0][0].get<double>(), b = p[0][1].get<double>(),
                 b2 = p[1][0].get<double>(), c = p[1][1].get<double>();
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1.0});
    if (std::abs(b - b2) > 1e-9 * scale ||
        std::abs(a - region.pi.a) > 1e-9 * scale ||
        std::abs(b - region.pi.b) > 1e-9 * scale ||
        std::abs(c - region.pi.c) > 1e-9 * scale)
      throw ParseError("region 'pi' does not match the region parameters");
  }
  if (j.contains("grid_redundant"))
    region.grid_redundant = j.at("grid_redundant").get<bool>();
  if (j.contains("degenerate")) region.degenerate = j.at("degenerate").get<bool>();
  region.validate();
  return region;
}

nlohmann::json to_json(const SGApproximation& approx) {
  nlohmann::json arr = nlohmann::json::array();
  for (const RegionSpec& region : approx.regions) arr.push_back(to_json(region));
  return arr;
}

SGApproximation regions_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("region-set file must be a JSON array");
  SGApproximation approx;
  for (const auto& rj : j) approx.regions.push_back(region_from_json(rj));
  approx.validate();
  return approx;
}

SGApproximation load_regions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open region file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return regions_from_json(j);
}

void save_regions(const SGApproximation& approx, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write region file '" + path + "'");
  out << to_json(approx).dump(2) << "\n";
}

}  // namespace sgraph
