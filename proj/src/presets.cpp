#include "sgraph/presets.hpp"

namespace sgraph {

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(rows.begin()->size());
  Matrix m(nr, nc);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Preset make_ex1() {
  Preset p;
  p.name = "paper-ex1";
  p.system = realize_tf_denominator({1.0, 5.0, 2.0, 1.0});
  p.config.lambda_interior = uniform_grid(-2.0, 2.0, 81);
  p.config.lambda_exterior = uniform_grid(-10.0, 10.0, 81);
  return p;
}

Preset make_ex2() {
  Preset p;
  p.name = "paper-ex2";
  ResetSystem sys;
  sys.base.A = mat({{-1.0, 0.0}, {1.0, -1.0}});
  sys.base.B = mat({{1.0}, {0.0}});
  sys.base.C = mat({{0.0, 1.0}});
  sys.base.D = mat({{0.0}});
  sys.R = Matrix::Zero(2, 2);
  sys.M = Matrix::Zero(3, 3);
  sys.M(0, 0) = 0.81;
  sys.M(1, 1) = -1.0;
  p.system = sys;
  p.config.lambda_interior = uniform_grid(-1.0, 3.0, 81);
  p.config.lambda_exterior = uniform_grid(-1.0, 19.0, 81);
  return p;
}

Preset make_ex3() {
  Preset p;
  p.name = "paper-ex3";
  PwlSystem sys;
  // Quadrant-switched damping: the two mode families share the oscillator
  // structure and differ only in the x2 damping entry (-2 vs -1).  Zeroing
  // A13(0, 1) instead would decouple x1 from the driven state and pin the
  // output at zero from rest, leaving a degenerate point graph.
  const Matrix A13 = mat({{-0.1, 1.0}, {-1.0, -2.0}});
  const Matrix A24 = mat({{-0.1, 1.0}, {-1.0, -1.0}});
  const Matrix B = mat({{0.0}, {1.0}});
  const Matrix C = mat({{1.0, 0.0}});
  const Matrix D = mat({{0.0}});
  const Matrix E1 = mat({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  const Matrix E2 = mat({{-1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  sys.modes.push_back({{A13, B, C, D}, E1});
  sys.modes.push_back({{A24, B, C, D}, E2});
  sys.modes.push_back({{A13, B, C, D}, -E1});
  sys.modes.push_back({{A24, B, C, D}, -E2});
  p.system = sys;
  p.config.lambda_interior = uniform_grid(-20.0, 1.0, 211);
  p.config.lambda_exterior = uniform_grid(-50.0, 55.0, 301);
  return p;
}

}  // namespace

Preset preset(const std::string& name) {
  if (name == "paper-ex1") return make_ex1();
  if (name == "paper-ex2") return make_ex2();
  if (name == "paper-ex3") return make_ex3();
  throw ParseError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"paper-ex1", "paper-ex2", "paper-ex3"};
}

}  // namespace sgraph
