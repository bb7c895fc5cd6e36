#include <doctest.h>

#include <sstream>

#include "sgraph/lmi.hpp"

using namespace sgraph;

namespace {

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }

StateSpace first_order(double a) {
  StateSpace sys;
  sys.A = m1(-a);
  sys.B = m1(1.0);
  sys.C = m1(1.0);
  sys.D = m1(0.0);
  return sys;
}

const AffineBlock* find_block(const LmiProblem& prob, const std::string& name) {
  for (const AffineBlock& block : prob.blocks)
    if (block.name == name) return &block;
  return nullptr;
}

bool has_linear(const LmiProblem& prob, const std::string& name) {
  for (const LinearConstraint& lc : prob.linear)
    if (lc.name == name) return true;
  return false;
}

}  // namespace

TEST_CASE("filter form of the quadratic constraint on a frozen example") {
  Matrix C(1, 2);
  C << 0.0, 1.0;
  const Matrix D = m1(0.0);
  const Matrix T = theta(PiMatrix{-1.0, 0.5, 0.0}, C, D);
  Matrix expect(3, 3);
  expect << 0, 0, 0, 0, -1, 0.5, 0, 0.5, 0;
  CHECK((T - expect).cwiseAbs().maxCoeff() == 0.0);
  CHECK(T.isApprox(T.transpose()));
}

TEST_CASE("dissipation form for scalar data") {
  const Matrix K = kyp_form(m1(-2.0), m1(3.0), m1(1.5));
  Matrix expect(2, 2);
  expect << -6.0, 4.5, 4.5, 0.0;
  CHECK((K - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("first-order interior problem matches the hand-computed block") {
  const LmiProblem prob = build_lti(first_order(1.0), -1, 0.5, false);
  REQUIRE(prob.blocks.size() == 1);
  REQUIRE(prob.layout.num_vars == 2);
  CHECK(prob.layout.p_offset == 0);
  CHECK(prob.layout.rho == 1);
  CHECK(prob.kind == ObjectiveKind::min_rho);
  CHECK(prob.objective[prob.layout.rho] == 1.0);
  CHECK(has_linear(prob, "rho_nonneg"));

  auto eval = [&](double P, double rho) {
    Vector v(2);
    v << P, rho;
    return prob.blocks[0].evaluate(v);
  };
  // F(P, rho) = [[1 - 2P, P - 1/2], [P - 1/2, 1/4 - rho]].
  const Matrix at = eval(0.3, 0.1);
  CHECK(at(0, 0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(at(0, 1) == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(at(1, 1) == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(eval(0.5, 0.25).cwiseAbs().maxCoeff() < 1e-15);

  Vector opt(2);
  opt << 0.5, 0.25;
  const CertificateCheck good = check_certificate(prob, opt);
  CHECK(good.feasible());
  CHECK(good.max_block_eig == doctest::Approx(0.0).epsilon(1e-12));
  Vector bad(2);
  bad << 0.0, 0.0;
  CHECK_FALSE(check_certificate(prob, bad).feasible());

  const RegionCertificate cert = extract_certificate(prob, opt);
  CHECK(cert.rho == doctest::Approx(0.25));
  CHECK(cert.P(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("exterior problems maximize the squared radius") {
  const LmiProblem prob = build_lti(first_order(1.0), +1, 0.5, false);
  CHECK(prob.kind == ObjectiveKind::max_rho);
  CHECK(prob.objective[prob.layout.rho] == -1.0);
  // The rho coefficient flips sign with sigma.
  const LmiProblem inner = build_lti(first_order(1.0), -1, 0.5, false);
  Matrix outer_coeff, inner_coeff;
  for (const auto& [idx, mat] : prob.blocks[0].coeff)
    if (idx == prob.layout.rho) outer_coeff = mat;
  for (const auto& [idx, mat] : inner.blocks[0].coeff)
    if (idx == inner.layout.rho) inner_coeff = mat;
  CHECK((outer_coeff + inner_coeff).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(outer_coeff(1, 1) == 1.0);
  CHECK(outer_coeff(0, 0) == 0.0);
}

TEST_CASE("hard flavor adds the storage positivity block") {
  const LmiProblem soft = build_lti(first_order(1.0), -1, 0.5, false);
  const LmiProblem hard = build_lti(first_order(1.0), -1, 0.5, true);
  CHECK(find_block(soft, "storage_psd") == nullptr);
  const AffineBlock* psd = find_block(hard, "storage_psd");
  REQUIRE(psd != nullptr);
  // Block is -P <= 0, i.e. the coefficient of P is -identity for scalars.
  REQUIRE(psd->coeff.size() == 1);
  CHECK(psd->coeff[0].first == hard.layout.p_offset);
  CHECK(psd->coeff[0].second(0, 0) == -1.0);
}

TEST_CASE("reset problems carry jump block and sign-constrained multipliers") {
  ResetSystem sys;
  sys.base = first_order(1.0);
  sys.base.A = m1(-0.1);
  sys.R = m1(0.5);
  sys.M = Matrix::Identity(2, 2);
  sys.M(1, 1) = -1.0;
  const LmiProblem prob = build_reset(sys, -1, 0.0, false);
  REQUIRE(find_block(prob, "flow") != nullptr);
  const AffineBlock* jump = find_block(prob, "jump");
  REQUIRE(jump != nullptr);
  CHECK(has_linear(prob, "tau_flow_nonneg"));
  CHECK(has_linear(prob, "tau_jump_nonneg"));
  CHECK(prob.layout.tau_flow >= 0);
  CHECK(prob.layout.tau_jump >= 0);

  // Jump block at tau2 = 0 evaluates to [[R'PR - P, 0], [0, 0]].
  Vector v = Vector::Zero(prob.layout.num_vars);
  v[prob.layout.p_offset] = 2.0;
  const Matrix J = jump->evaluate(v);
  CHECK(J(0, 0) == doctest::Approx(0.25 * 2.0 - 2.0));
  CHECK(J(1, 1) == 0.0);
  // tau2 subtracts M from the jump block.
  v[prob.layout.tau_jump] = 1.0;
  const Matrix J2 = jump->evaluate(v);
  CHECK(J2(0, 0) == doctest::Approx(-1.5 - 1.0));
  CHECK(J2(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("piecewise problems get one block per mode and entrywise multipliers") {
  PwlMode up, down;
  up.dyn = first_order(1.0);
  down.dyn = first_order(2.0);
  up.E = Matrix::Zero(2, 2);
  up.E(0, 0) = 1.0;
  down.E = -up.E;
  PwlSystem sys;
  sys.modes = {up, down};
  const LmiProblem prob = build_pwl(sys, -1, 0.0, false);
  REQUIRE(find_block(prob, "mode_0") != nullptr);
  REQUIRE(find_block(prob, "mode_1") != nullptr);
  CHECK(prob.layout.u_offset.size() == 2);
  // guard_rows = 2 -> three packed entries per mode, each sign-constrained.
  int entry_constraints = 0;
  for (const LinearConstraint& lc : prob.linear)
    if (lc.name.rfind("u", 0) == 0) ++entry_constraints;
  CHECK(entry_constraints == 2 * 3);
  // No semidefinite block for the multipliers themselves.
  CHECK(prob.blocks.size() == 2);
}

TEST_CASE("half-plane certificates minimize the offset") {
  const LmiProblem prob = build_halfplane(SystemModel(first_order(1.0)), +1, false);
  CHECK(prob.kind == ObjectiveKind::min_hp);
  CHECK(prob.layout.rho == -1);
  REQUIRE(prob.layout.hp_offset >= 0);
  CHECK(prob.objective[prob.layout.hp_offset] == 1.0);
  // The offset enters the block as -c * diag(0, I).
  Matrix coeff;
  for (const auto& [idx, mat] : prob.blocks[0].coeff)
    if (idx == prob.layout.hp_offset) coeff = mat;
  CHECK(coeff(1, 1) == -1.0);
  CHECK(coeff(0, 0) == 0.0);
  // No rho positivity constraint in this family.
  CHECK_FALSE(has_linear(prob, "rho_nonneg"));
}

TEST_CASE("problem dump lists variables and blocks") {
  std::ostringstream os;
  dump_problem(build_lti(first_order(1.0), -1, 0.5, true), os);
  const std::string text = os.str();
  CHECK(text.find("vars 2") != std::string::npos);
  CHECK(text.find("storage_psd") != std::string::npos);
}
