#include "sgraph/model.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace sgraph {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require(bool cond, const std::string& msg) {
  if (!cond) throw ModelError(msg);
}

}  // namespace

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

void StateSpace::validate() const {
  const int m = state_dim();
  const int n = io_dim();
  require(n >= 1, "io dimension must be at least 1");
  require(A.rows() == m && A.cols() == m, "A must be square");
  require(B.rows() == m && B.cols() == n, "B must be state_dim x io_dim");
  require(C.rows() == n && C.cols() == m, "C must be io_dim x state_dim");
  require(D.rows() == n && D.cols() == n, "D must be io_dim x io_dim");
  require(all_finite(A) && all_finite(B) && all_finite(C) && all_finite(D),
          "system matrices must be finite");
}

bool StateSpace::is_hurwitz(double margin) const {
  if (state_dim() == 0) return true;
  Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
  return (es.eigenvalues().real().array() < -margin).all();
}

void StateSpace::require_hurwitz() const {
  if (!is_hurwitz())
    throw ModelError("system matrix A is not Hurwitz (strict margin 1e-9)");
}

ComplexMatrix StateSpace::transfer(Complex s) const {
  const int m = state_dim();
  if (m == 0) return D.cast<Complex>();
  ComplexMatrix sIA = ComplexMatrix::Identity(m, m) * s - A.cast<Complex>();
  ComplexMatrix x = sIA.partialPivLu().solve(B.cast<Complex>());
  return C.cast<Complex>() * x + D.cast<Complex>();
}

double StateSpace::min_time_constant() const {
  if (state_dim() == 0) return 1.0;
  Eigen::EigenSolver<Matrix> es(A, false);
  double fastest = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    fastest = std::max(fastest, std::abs(es.eigenvalues()[i]));
  return fastest > 0 ? 1.0 / fastest : 1.0;
}

void ResetSystem::validate() const {
  base.validate();
  const int m = state_dim();
  const int q = m + io_dim();
  require(R.rows() == m && R.cols() == m, "R must be state_dim x state_dim");
  require(M.rows() == q && M.cols() == q,
          "M must act on the stacked (state, input) vector");
  require(all_finite(R) && all_finite(M), "R and M must be finite");
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  require((M - M.transpose()).cwiseAbs().maxCoeff() <= tol::symmetry * scale,
          "M must be symmetric");
}

void PwlSystem::validate() const {
  require(!modes.empty(), "piecewise system needs at least one mode");
  const int m = modes.front().dyn.state_dim();
  const int n = modes.front().dyn.io_dim();
  const int p = static_cast<int>(modes.front().E.rows());
  require(p >= 1, "guard matrices need at least one row");
  for (const PwlMode& mode : modes) {
    mode.dyn.validate();
    require(mode.dyn.state_dim() == m && mode.dyn.io_dim() == n,
            "all modes must share state and io dimensions");
    require(mode.E.rows() == p && mode.E.cols() == m + n,
            "guard matrices must be guard_rows x (state_dim + io_dim)");
    require(all_finite(mode.E), "guard matrices must be finite");
  }
}

double PwlSystem::cone_coverage(int samples, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-10.0, 10.0);
  const int q = state_dim() + io_dim();
  int covered = 0;
  Vector xi(q);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < q; ++i) xi[i] = box(rng);
    for (const PwlMode& mode : modes) {
      if (((mode.E * xi).array() >= 0.0).all()) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(samples);
}

int state_dim(const SystemModel& sys) {
  return std::visit([](const auto& s) { return s.state_dim(); }, sys);
}

int io_dim(const SystemModel& sys) {
  return std::visit([](const auto& s) { return s.io_dim(); }, sys);
}

std::string kind_name(const SystemModel& sys) {
  if (std::holds_alternative<StateSpace>(sys)) return "lti";
  if (std::holds_alternative<ResetSystem>(sys)) return "reset";
  return "pwl";
}

const StateSpace& nominal_dynamics(const SystemModel& sys) {
  if (const auto* lti = std::get_if<StateSpace>(&sys)) return *lti;
  if (const auto* rst = std::get_if<ResetSystem>(&sys)) return rst->base;
  return std::get<PwlSystem>(sys).modes.front().dyn;
}

void validate(const SystemModel& sys) {
  std::visit([](const auto& s) { s.validate(); }, sys);
}

namespace {

nlohmann::json mat_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix mat_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array())
    throw ParseError("matrix '" + name + "' must be an array of rows");
  const auto rows = j.size();
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array())
    throw ParseError("matrix '" + name + "' must be an array of rows");
  const auto cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError("matrix '" + name + "' has ragged rows");
    for (size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number())
        throw ParseError("matrix '" + name + "' has a non-numeric entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          j[i][k].get<double>();
    }
  }
  if (!m.allFinite()) throw ParseError("matrix '" + name + "' is not finite");
  return m;
}

StateSpace state_space_from_json(const nlohmann::json& j) {
  StateSpace ss;
  for (const char* key : {"A", "B", "C", "D"})
    if (!j.contains(key))
      throw ParseError(std::string("missing matrix '") + key + "'");
  ss.A = mat_from_json(j.at("A"), "A");
  ss.B = mat_from_json(j.at("B"), "B");
  ss.C = mat_from_json(j.at("C"), "C");
  ss.D = mat_from_json(j.at("D"), "D");
  return ss;
}

nlohmann::json state_space_to_json(const StateSpace& ss) {
  nlohmann::json j;
  j["A"] = mat_to_json(ss.A);
  j["B"] = mat_to_json(ss.B);
  j["C"] = mat_to_json(ss.C);
  j["D"] = mat_to_json(ss.D);
  return j;
}

}  // namespace

nlohmann::json to_json(const SystemModel& sys) {
  nlohmann::json j;
  j["kind"] = kind_name(sys);
  if (const auto* lti = std::get_if<StateSpace>(&sys)) {
    nlohmann::json base = state_space_to_json(*lti);
    j.update(base);
  } else if (const auto* rst = std::get_if<ResetSystem>(&sys)) {
    nlohmann::json base = state_space_to_json(rst->base);
    j.update(base);
    j["R"] = mat_to_json(rst->R);
    j["M"] = mat_to_json(rst->M);
  } else {
    const auto& pwl = std::get<PwlSystem>(sys);
    nlohmann::json modes = nlohmann::json::array();
    for (const PwlMode& mode : pwl.modes) {
      nlohmann::json mj = state_space_to_json(mode.dyn);
      mj["E"] = mat_to_json(mode.E);
      modes.push_back(std::move(mj));
    }
    j["modes"] = std::move(modes);
  }
  return j;
}

SystemModel system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("system file must be an object with a 'kind' string");
  const std::string kind = j.at("kind").get<std::string>();
  SystemModel sys;
  if (kind == "lti") {
    sys = state_space_from_json(j);
  } else if (kind == "reset") {
    ResetSystem rst;
    rst.base = state_space_from_json(j);
    if (!j.contains("R") || !j.contains("M"))
      throw ParseError("reset system needs matrices 'R' and 'M'");
    rst.R = mat_from_json(j.at("R"), "R");
    rst.M = mat_from_json(j.at("M"), "M");
    sys = std::move(rst);
  } else if (kind == "pwl") {
    if (!j.contains("modes") || !j.at("modes").is_array() ||
        j.at("modes").empty())
      throw ParseError("pwl system needs a non-empty 'modes' array");
    PwlSystem pwl;
    for (const auto& mj : j.at("modes")) {
      PwlMode mode;
      mode.dyn = state_space_from_json(mj);
      if (!mj.contains("E")) throw ParseError("every mode needs a guard 'E'");
      mode.E = mat_from_json(mj.at("E"), "E");
      pwl.modes.push_back(std::move(mode));
    }
    sys = std::move(pwl);
  } else {
    throw ParseError("unknown system kind '" + kind + "'");
  }
  validate(sys);
  return sys;
}

SystemModel load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open system file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return system_from_json(j);
}

void save_system(const SystemModel& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write system file '" + path + "'");
  out << to_json(sys).dump(2) << "\n";
}

std::string system_hash(const SystemModel& sys) {
  return hex64(fnv1a(to_json(sys).dump()));
}

StateSpace realize_tf_denominator(const std::vector<double>& coeffs) {
  if (coeffs.empty() || coeffs.front() == 0.0)
    throw ModelError("denominator needs a nonzero leading coefficient");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw ModelError("denominator must be finite");
  const int k = static_cast<int>(coeffs.size()) - 1;
  const double lead = coeffs.front();
  StateSpace ss;
  if (k == 0) {
    ss.A = Matrix(0, 0);
    ss.B = Matrix(0, 1);
    ss.C = Matrix(1, 0);
    ss.D = Matrix::Constant(1, 1, 1.0 / lead);
    return ss;
  }
  ss.A = Matrix::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) ss.A(i, i + 1) = 1.0;
  for (int i = 0; i < k; ++i) ss.A(k - 1, i) = -coeffs[coeffs.size() - 1 - i] / lead;
  ss.B = Matrix::Zero(k, 1);
  ss.B(k - 1, 0) = 1.0;
  ss.C = Matrix::Zero(1, k);
  ss.C(0, 0) = 1.0 / lead;
  ss.D = Matrix::Zero(1, 1);
  return ss;
}

void SweepConfig::validate() const {
  auto check = [](const std::vector<double>& grid, const char* what) {
    for (double v : grid)
      if (!std::isfinite(v))
        throw ModelError(std::string("non-finite value in ") + what);
  };
  check(lambda_interior, "interior grid");
  check(lambda_exterior, "exterior grid");
  for (int s : halfplane_signs)
    if (s != 1 && s != -1)
      throw ModelError("half-plane signs must be +1 or -1");
}

std::vector<double> uniform_grid(double a, double b, int n) {
  if (n < 1) throw ModelError("grid needs at least one point");
  std::vector<double> g(static_cast<size_t>(n));
  if (n == 1) {
    g[0] = a;
    return g;
  }
  const double step = (b - a) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = a + step * i;
  return g;
}

}  // namespace sgraph
