// Command-line front end: sweeps, exact constructions, sampling, feedback
// checks and artifact rendering for scaled-graph over-approximations.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sgraph/exact.hpp"
#include "sgraph/feedback.hpp"
#include "sgraph/io.hpp"
#include "sgraph/presets.hpp"
#include "sgraph/sim.hpp"
#include "sgraph/solve.hpp"

namespace {

using namespace sgraph;
namespace fs = std::filesystem;

struct Triple {
  double a = 0.0, b = 0.0;
  int n = 0;
};

Triple parse_triple(const std::string& s, const std::string& what) {
  Triple t;
  char c1 = 0, c2 = 0;
  std::istringstream ss(s);
  if (!(ss >> t.a >> c1 >> t.b >> c2 >> t.n) || c1 != ':' || c2 != ':' ||
      !ss.eof() || t.n < 1)
    throw ParseError(what + " expects the form a:b:n, got '" + s + "'");
  return t;
}

Window parse_window(const std::string& s) {
  const long colons = std::count(s.begin(), s.end(), ':');
  std::istringstream ss(s);
  Window win;
  if (colons == 0) {
    double half = 0.0;
    if (!(ss >> half) || !ss.eof() || !(half > 0.0))
      throw ParseError("--window expects a half-width or re0:re1:im0:im1");
    win = Window::square(half);
  } else if (colons == 3) {
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ss >> win.re0 >> c1 >> win.re1 >> c2 >> win.im0 >> c3 >> win.im1) ||
        c1 != ':' || c2 != ':' || c3 != ':' || !ss.eof())
      throw ParseError("--window expects a half-width or re0:re1:im0:im1");
  } else {
    throw ParseError("--window expects a half-width or re0:re1:im0:im1");
  }
  win.validate();
  return win;
}

std::vector<double> parse_tau_grid(const std::string& s) {
  const Triple t = parse_triple(s, "--tau-grid");
  if (!(t.a > 0.0) || !(t.b >= t.a))
    throw ParseError("--tau-grid needs 0 < a <= b");
  std::vector<double> taus;
  if (t.n == 1) {
    taus.push_back(t.a);
    return taus;
  }
  const double la = std::log(t.a), lb = std::log(t.b);
  for (int i = 0; i < t.n; ++i)
    taus.push_back(std::exp(la + (lb - la) * i / (t.n - 1)));
  return taus;
}

fs::path prepare_out(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ParseError("cannot create output directory '" + out + "'");
  return dir;
}

// Shared flags for the commands that take a system.
struct SystemArgs {
  std::string system_path;
  std::string preset_name;

  void attach(CLI::App* cmd, bool preset_allowed = true) {
    cmd->add_option("--system", system_path, "system JSON file");
    if (preset_allowed)
      cmd->add_option("--preset", preset_name,
                      "bundled example (paper-ex1, paper-ex2, paper-ex3)");
  }
  SystemModel resolve(SweepConfig* cfg = nullptr) const {
    if (preset_name.empty() && system_path.empty())
      throw ParseError("need --system or --preset");
    std::optional<SystemModel> sys;
    if (!preset_name.empty()) {
      Preset p = preset(preset_name);
      if (cfg) *cfg = p.config;
      sys = std::move(p.system);
    }
    if (!system_path.empty()) sys = load_system(system_path);
    return std::move(*sys);
  }
};

nlohmann::json window_json(const Window& w) {
  return {{"re0", w.re0}, {"re1", w.re1}, {"im0", w.im0}, {"im1", w.im1}};
}

SvgLayer raster_fill_layer(const RasterGrid& grid, const std::string& color,
                           double opacity) {
  SvgLayer layer;
  layer.kind = SvgLayer::Kind::region_fill;
  layer.polylines = boundary_polylines(grid);
  layer.color = color;
  layer.opacity = opacity;
  return layer;
}

std::vector<Complex> read_cloud_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open cloud file '" + path + "'");
  std::vector<Complex> pts;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // column header row
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(ss >> re >> comma >> im) || comma != ',')
      throw ParseError("bad cloud row '" + line + "' in " + path);
    pts.emplace_back(re, im);
  }
  return pts;
}

int run_compute(const SystemArgs& sysargs, const std::string& lambda_i,
                const std::string& lambda_e, bool hard, bool halfplanes,
                bool serial, const std::string& backend_name,
                const std::string& window_arg, int resolution,
                const std::string& out) {
  SweepConfig cfg;
  SystemModel sys = sysargs.resolve(&cfg);
  SolveOptions sopt;
  sopt.mode = serial ? RunMode::serial : RunMode::parallel;
  static const BisectionBackend bisection;
  if (backend_name == "bisection")
    sopt.backend = &bisection;
  else if (backend_name != "barrier")
    throw ParseError("--backend must be 'barrier' or 'bisection'");

  if (!lambda_i.empty()) {
    const Triple t = parse_triple(lambda_i, "--lambda-i");
    cfg.lambda_interior = uniform_grid(t.a, t.b, t.n);
  }
  if (!lambda_e.empty()) {
    const Triple t = parse_triple(lambda_e, "--lambda-e");
    cfg.lambda_exterior = uniform_grid(t.a, t.b, t.n);
  }
  if (cfg.lambda_interior.empty() && cfg.lambda_exterior.empty())
    cfg = default_config(sys, hard,
                         sopt.backend ? *sopt.backend : default_backend());
  cfg.hard = hard;
  if (halfplanes) cfg.halfplane_signs = {+1, -1};

  const SweepResult result = sweep(sys, cfg, sopt);
  const Window win = window_arg.empty() ? default_window(result)
                                        : parse_window(window_arg);
  const RasterGrid raster =
      rasterize(result.approx, win, resolution, sopt.mode);

  nlohmann::json rc = {
      {"command", "compute"},
      {"system", to_json(sys)},
      {"lambda_interior", cfg.lambda_interior},
      {"lambda_exterior", cfg.lambda_exterior},
      {"hard", hard},
      {"halfplanes", halfplanes},
      {"backend", backend_name},
      {"window", window_json(win)},
      {"resolution", resolution},
  };
  const std::string hash = config_hash(rc);
  const fs::path dir = prepare_out(out);
  save_regions(result.approx, (dir / "regions.json").string());
  nlohmann::json report = sweep_report(result, rc);
  report["region_set_file"] = "regions.json";
  write_json(report, (dir / "report.json").string());
  write_raster_csv(raster, (dir / "raster.csv").string(), hash);
  write_svg(win, {raster_fill_layer(raster, "#336699", 0.4)}, 640,
            (dir / "region.svg").string(), hash);

  std::cout << "gain bound " << result.gain_bound << ", "
            << result.approx.regions.size() << " regions, wall "
            << result.wall_seconds << " s\nwrote " << (dir / "report.json").string()
            << "\n";
  return 0;
}

int run_exact(const SystemArgs& sysargs, const std::string& window_arg,
              int resolution, const std::string& out) {
  SystemModel sys = sysargs.resolve();
  const auto* lti = std::get_if<StateSpace>(&sys);
  if (!lti) throw ParseError("exact construction needs an LTI system");
  const ExactSG sg = exact_sg(*lti);

  const Window win = window_arg.empty()
                         ? Window::square(sg.max_gain() + 0.1)
                         : parse_window(window_arg);
  nlohmann::json rc = {
      {"command", "exact"},
      {"system", to_json(sys)},
      {"window", window_json(win)},
      {"resolution", resolution},
  };
  const std::string hash = config_hash(rc);
  const fs::path dir = prepare_out(out);

  std::ofstream csv((dir / "exact.csv").string());
  if (!csv) throw ParseError("cannot write exact boundary CSV");
  csv << std::setprecision(17) << "# config " << hash << "\nline,re,im\n";
  for (size_t li = 0; li < sg.boundary.size(); ++li)
    for (const Complex& z : sg.boundary[li])
      csv << li << ',' << z.real() << ',' << z.imag() << '\n';
  csv.close();

  SvgLayer curve;
  curve.kind = SvgLayer::Kind::polyline;
  curve.polylines = sg.boundary;
  curve.color = "#222222";
  curve.stroke_width = 1.5;
  SvgLayer dots;
  dots.kind = SvgLayer::Kind::dots;
  dots.points = sg.spectrum;
  dots.color = "#cc3333";
  dots.stroke_width = 1.2;
  write_svg(win, {curve, dots}, 640, (dir / "exact.svg").string(), hash);
  std::cout << (sg.degenerate() ? "degenerate (curve) graph" : "filled graph")
            << ", max gain " << sg.max_gain() << "\nwrote "
            << (dir / "exact.svg").string() << "\n";
  (void)resolution;
  return 0;
}

int run_sample(const SystemArgs& sysargs, int count, std::uint64_t seed,
               const std::string& regions_path, bool serial,
               const std::string& out) {
  SystemModel sys = sysargs.resolve();
  if (count <= 0) throw ParseError("--count must be positive");
  const RunMode mode = serial ? RunMode::serial : RunMode::parallel;
  const std::vector<SGSample> cloud = sample_cloud(sys, count, seed, mode);

  nlohmann::json rc = {
      {"command", "sample"},
      {"system", to_json(sys)},
      {"count", count},
      {"seed", seed},
      {"regions", regions_path},
  };
  const std::string hash = config_hash(rc);
  const fs::path dir = prepare_out(out);
  write_cloud_csv(cloud, (dir / "cloud.csv").string(), hash);

  nlohmann::json summary = {
      {"config_hash", hash},
      {"count", count},
      {"seed", seed},
      {"trusted", static_cast<int>(std::count_if(
                      cloud.begin(), cloud.end(),
                      [](const SGSample& s) { return s.trusted; }))},
  };
  if (!regions_path.empty()) {
    const SGApproximation approx = load_regions(regions_path);
    int inside = 0;
    for (const SGSample& s : cloud)
      if (approx.contains(s.z)) ++inside;
    summary["containment"] = static_cast<double>(inside) / count;
    std::cout << "containment " << summary["containment"] << "\n";
  }
  write_json(summary, (dir / "sample_summary.json").string());
  std::cout << "wrote " << (dir / "cloud.csv").string() << "\n";
  return 0;
}

int run_feedback(const std::string& regions1, const std::string& regions2,
                 const std::string& tau_arg, const std::string& window_arg,
                 int resolution, bool serial, const std::string& out) {
  const SGApproximation sg1 = load_regions(regions1);
  const SGApproximation sg2 = load_regions(regions2);
  FeedbackOptions opt;
  opt.resolution = resolution;
  opt.mode = serial ? RunMode::serial : RunMode::parallel;
  if (!tau_arg.empty()) opt.tau_grid = parse_tau_grid(tau_arg);
  if (!window_arg.empty()) {
    opt.window = parse_window(window_arg);
  } else {
    // Cover the bounded graph of H2 with room for the separating gap.
    double g2 = std::numeric_limits<double>::infinity();
    for (const RegionSpec& region : sg2.regions)
      if (region.kind == RegionKind::disk_interior)
        g2 = std::min(g2, std::abs(region.lambda_c) + region.r);
    const double half = std::isfinite(g2) ? std::max(1.0, 1.5 * g2 + 0.5) : 3.0;
    opt.window = Window::square(half);
  }

  const FeedbackReport report = check_feedback(sg1, sg2, opt);

  nlohmann::json rc = {
      {"command", "feedback"},
      {"regions_1", regions1},
      {"regions_2", regions2},
      {"tau_grid", opt.tau_grid.empty() ? default_tau_grid() : opt.tau_grid},
      {"window", window_json(opt.window)},
      {"resolution", resolution},
  };
  const std::string hash = config_hash(rc);
  const fs::path dir = prepare_out(out);
  nlohmann::json rj = to_json(report);
  rj["config_hash"] = hash;
  write_json(rj, (dir / "feedback.json").string());

  // Overlay: inverse graph of H1 (grey), graph of H2 at tau = 1 (blue), and
  // the closest boundary-vertex pair as the min-distance segment.
  const SGApproximation image = inverse_negated_graph(sg1);
  const RasterGrid ra = rasterize(image, opt.window, resolution, opt.mode);
  const RasterGrid rb = rasterize(sg2, opt.window, resolution, opt.mode);
  std::vector<SvgLayer> layers;
  layers.push_back(raster_fill_layer(ra, "#888888", 0.5));
  layers.push_back(raster_fill_layer(rb, "#336699", 0.5));
  Complex best_a, best_b;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& la : boundary_polylines(ra))
    for (const Complex& za : la)
      for (const auto& lb : boundary_polylines(rb))
        for (const Complex& zb : lb) {
          const double d = std::abs(za - zb);
          if (d < best) {
            best = d;
            best_a = za;
            best_b = zb;
          }
        }
  if (std::isfinite(best)) {
    SvgLayer seg;
    seg.kind = SvgLayer::Kind::segment;
    seg.polylines = {{best_a, best_b}};
    seg.color = "#cc3333";
    seg.stroke_width = 2.0;
    layers.push_back(seg);
  }
  write_svg(opt.window, layers, 640, (dir / "feedback.svg").string(), hash);

  std::cout << "verdict " << verdict_name(report.verdict) << ", r_min "
            << report.r_min << " (tau " << report.tau_at_min << ")";
  if (std::isfinite(report.gain_bound))
    std::cout << ", gain bound " << report.gain_bound;
  std::cout << "\nwrote " << (dir / "feedback.json").string() << "\n";
  return 0;
}

int run_invert(const std::string& regions_path, const std::string& out) {
  const SGApproximation approx = load_regions(regions_path);
  const SGApproximation image = inverse_negated_graph(approx);
  const fs::path dir = prepare_out(out);
  save_regions(image, (dir / "inverse_regions.json").string());
  int degenerate = 0;
  for (const RegionSpec& region : image.regions)
    if (region.degenerate) ++degenerate;
  std::cout << image.regions.size() << " regions (" << degenerate
            << " degenerate)\nwrote "
            << (dir / "inverse_regions.json").string() << "\n";
  return 0;
}

int run_render(const std::string& regions_path, const std::string& cloud_path,
               const std::string& window_arg, int resolution, bool serial,
               const std::string& out) {
  if (regions_path.empty() && cloud_path.empty())
    throw ParseError("render needs --regions and/or --cloud");
  const RunMode mode = serial ? RunMode::serial : RunMode::parallel;

  std::optional<SGApproximation> approx;
  if (!regions_path.empty()) approx = load_regions(regions_path);
  std::vector<Complex> cloud;
  if (!cloud_path.empty()) cloud = read_cloud_points(cloud_path);

  Window win;
  if (!window_arg.empty()) {
    win = parse_window(window_arg);
  } else {
    double half = 1.0;
    if (approx)
      for (const RegionSpec& region : approx->regions)
        if (region.kind == RegionKind::disk_interior)
          half = std::max(half, std::abs(region.lambda_c) + region.r + 0.1);
    for (Complex z : cloud)
      half = std::max({half, std::abs(z.real()) + 0.1, std::abs(z.imag()) + 0.1});
    win = Window::square(half);
  }

  nlohmann::json rc = {
      {"command", "render"},
      {"regions", regions_path},
      {"cloud", cloud_path},
      {"window", window_json(win)},
      {"resolution", resolution},
  };
  const std::string hash = config_hash(rc);
  const fs::path dir = prepare_out(out);
  std::vector<SvgLayer> layers;
  if (approx) {
    const RasterGrid grid = rasterize(*approx, win, resolution, mode);
    layers.push_back(raster_fill_layer(grid, "#336699", 0.4));
  }
  if (!cloud.empty()) {
    SvgLayer dots;
    dots.kind = SvgLayer::Kind::dots;
    dots.points = cloud;
    dots.color = "#cc3333";
    dots.stroke_width = 1.2;
    layers.push_back(dots);
  }
  write_svg(win, layers, 640, (dir / "render.svg").string(), hash);
  std::cout << "wrote " << (dir / "render.svg").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaled-graph over-approximation toolkit"};
  app.require_subcommand(1);

  // compute
  auto* compute = app.add_subcommand(
      "compute", "sweep the circle-parametrized certificates");
  SystemArgs compute_sys;
  compute_sys.attach(compute);
  std::string lambda_i, lambda_e, backend_name = "barrier";
  std::string window_arg, out_dir;
  bool hard = false, halfplanes = false, serial = false;
  int resolution = 512;
  compute->add_option("--lambda-i", lambda_i, "interior centers a:b:n");
  compute->add_option("--lambda-e", lambda_e, "exterior centers a:b:n");
  compute->add_flag("--hard", hard, "certify running integrals as well");
  compute->add_flag("--halfplanes", halfplanes, "add half-plane certificates");
  compute->add_flag("--serial", serial, "single-threaded kernels");
  compute->add_option("--backend", backend_name, "barrier | bisection");
  compute->add_option("--window", window_arg,
                      "half-width or re0:re1:im0:im1");
  compute->add_option("--resolution", resolution, "raster cells per axis");
  compute->add_option("--out", out_dir, "output directory");

  // exact
  auto* exact = app.add_subcommand(
      "exact", "exact construction for normal LTI systems");
  SystemArgs exact_sys;
  exact_sys.attach(exact);
  std::string e_window, e_out;
  int e_resolution = 512;
  exact->add_option("--window", e_window, "half-width or re0:re1:im0:im1");
  exact->add_option("--resolution", e_resolution, "raster cells per axis");
  exact->add_option("--out", e_out, "output directory");

  // sample
  auto* sample = app.add_subcommand(
      "sample", "time-domain multi-sine sample cloud");
  SystemArgs sample_sys;
  sample_sys.attach(sample);
  int count = 500;
  std::uint64_t seed = 1;
  std::string sample_regions, s_out;
  bool s_serial = false;
  sample->add_option("--count", count, "number of samples");
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--regions", sample_regions,
                     "region-set file for a containment summary");
  sample->add_flag("--serial", s_serial, "single-threaded sampling");
  sample->add_option("--out", s_out, "output directory");

  // feedback
  auto* feedback = app.add_subcommand(
      "feedback", "separation test for a negative feedback loop");
  std::string regions1, regions2, tau_arg, f_window, f_out;
  int f_resolution = 512;
  bool f_serial = false;
  feedback->add_option("--regions-1", regions1, "region-set of H1")
      ->required();
  feedback->add_option("--regions-2", regions2, "region-set of H2")
      ->required();
  feedback->add_option("--tau-grid", tau_arg, "log-spaced grid a:b:n");
  feedback->add_option("--window", f_window, "half-width or re0:re1:im0:im1");
  feedback->add_option("--resolution", f_resolution, "raster cells per axis");
  feedback->add_flag("--serial", f_serial, "single-threaded kernels");
  feedback->add_option("--out", f_out, "output directory");

  // invert
  auto* invert = app.add_subcommand(
      "invert", "inverse-negated image of a region set");
  std::string inv_regions, inv_out;
  invert->add_option("--regions", inv_regions, "region-set file")->required();
  invert->add_option("--out", inv_out, "output directory");

  // render
  auto* render = app.add_subcommand("render", "SVG overlay of artifacts");
  std::string r_regions, r_cloud, r_window, r_out;
  int r_resolution = 512;
  bool r_serial = false;
  render->add_option("--regions", r_regions, "region-set file");
  render->add_option("--cloud", r_cloud, "sample-cloud CSV");
  render->add_option("--window", r_window, "half-width or re0:re1:im0:im1");
  render->add_option("--resolution", r_resolution, "raster cells per axis");
  render->add_flag("--serial", r_serial, "single-threaded kernels");
  render->add_option("--out", r_out, "output directory");

  try {
    app.parse(argc, argv);
    if (*compute)
      return run_compute(compute_sys, lambda_i, lambda_e, hard, halfplanes,
                         serial, backend_name, window_arg, resolution,
                         out_dir);
    if (*exact) return run_exact(exact_sys, e_window, e_resolution, e_out);
    if (*sample)
      return run_sample(sample_sys, count, seed, sample_regions, s_serial,
                        s_out);
    if (*feedback)
      return run_feedback(regions1, regions2, tau_arg, f_window, f_resolution,
                          f_serial, f_out);
    if (*invert) return run_invert(inv_regions, inv_out);
    if (*render)
      return run_render(r_regions, r_cloud, r_window, r_resolution, r_serial,
                        r_out);
    throw ParseError("no command given");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
