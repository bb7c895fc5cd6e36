#include "sgraph/lmi.hpp"

#include <cmath>
#include <ostream>

namespace sgraph {

Matrix AffineBlock::evaluate(const Vector& v) const {
  Matrix m = constant;
  for (const auto& [idx, f] : coeff) m += v[idx] * f;
  return m;
}

double LinearConstraint::evaluate(const Vector& v) const {
  double s = offset;
  for (const auto& [idx, g] : terms) s += v[idx] * g;
  return s;
}

Matrix VarLayout::unpack_sym(const Vector& v, int offset, int n) const {
  Matrix m = Matrix::Zero(n, n);
  int idx = offset;
  for (int l = 0; l < n; ++l)
    for (int k = l; k < n; ++k) {
      m(k, l) = v[idx];
      m(l, k) = v[idx];
      ++idx;
    }
  return m;
}

std::vector<Matrix> VarLayout::U(const Vector& v) const {
  std::vector<Matrix> out;
  out.reserve(u_offset.size());
  for (int off : u_offset) out.push_back(unpack_sym(v, off, guard_rows));
  return out;
}

void LmiProblem::add_linear(LinearConstraint c) {
  linear.push_back(std::move(c));
}

Matrix theta(const PiMatrix& pi, const Matrix& C, const Matrix& D) {
  const int m = static_cast<int>(C.cols());
  const int n = static_cast<int>(C.rows());
  Matrix CD(n, m + n);
  CD << C, D;
  Matrix ZI = Matrix::Zero(n, m + n);
  ZI.rightCols(n) = Matrix::Identity(n, n);
  return pi.a * CD.transpose() * CD +
         pi.b * (CD.transpose() * ZI + ZI.transpose() * CD) +
         pi.c * ZI.transpose() * ZI;
}

Matrix kyp_form(const Matrix& A, const Matrix& B, const Matrix& P) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(B.cols());
  Matrix out = Matrix::Zero(m + n, m + n);
  out.topLeftCorner(m, m) = A.transpose() * P + P * A;
  out.topRightCorner(m, n) = P * B;
  out.bottomLeftCorner(n, m) = B.transpose() * P;
  return out;
}

namespace {

// Iterate the packed lower triangle of an n x n symmetric variable,
// producing the symmetric basis matrix for each scalar slot.
template <typename Fn>
void for_each_sym_basis(int n, Fn&& fn) {
  int slot = 0;
  for (int l = 0; l < n; ++l)
    for (int k = l; k < n; ++k) {
      Matrix e = Matrix::Zero(n, n);
      e(k, l) = 1.0;
      e(l, k) = 1.0;
      fn(slot, e);
      ++slot;
    }
}

int packed_size(int n) { return n * (n + 1) / 2; }

// The circle family splits as Pi = Pi0 + scalar * dPi with the scalar being
// rho = r^2 (disks) or the offset c (half-planes); in the constraint the
// scalar enters as `scalar_sign * scalar * diag(0, I_n)`.
struct ScalarFamily {
  PiMatrix pi0;
  double scalar_sign = 0.0;
  ObjectiveKind kind = ObjectiveKind::min_rho;
};

ScalarFamily make_family(int sigma, double lambda_c, int hp_sign) {
  ScalarFamily fam;
  if (hp_sign != 0) {
    fam.pi0 = PiMatrix{0.0, static_cast<double>(hp_sign), 0.0};
    fam.scalar_sign = -1.0;  // block gains -c * diag(0, I)
    fam.kind = ObjectiveKind::min_hp;
    return fam;
  }
  if (sigma != 1 && sigma != -1) throw SolveError("sigma must be +1 or -1");
  const double s = static_cast<double>(sigma);
  fam.pi0 = PiMatrix{s, -s * lambda_c, s * lambda_c * lambda_c};
  fam.scalar_sign = s;  // block gains sigma * rho * diag(0, I)
  fam.kind = sigma < 0 ? ObjectiveKind::min_rho : ObjectiveKind::max_rho;
  return fam;
}

Matrix scalar_coeff(int m, int n, double sign) {
  Matrix c = Matrix::Zero(m + n, m + n);
  c.bottomRightCorner(n, n) = sign * Matrix::Identity(n, n);
  return c;
}

struct Builder {
  LmiProblem prob;
  ScalarFamily fam;
  int scalar_var = -1;

  Builder(int state_dim, int sigma, double lambda_c, int hp_sign, bool hard) {
    fam = make_family(sigma, lambda_c, hp_sign);
    prob.sigma = sigma;
    prob.lambda_c = lambda_c;
    prob.hp_sign = hp_sign;
    prob.hard = hard;
    prob.kind = fam.kind;
    prob.layout.state_dim = state_dim;
    prob.layout.p_offset = 0;
    int next = packed_size(state_dim);
    if (hp_sign == 0)
      prob.layout.rho = next++;
    else
      prob.layout.hp_offset = next++;
    scalar_var = next - 1;
    prob.layout.num_vars = next;
  }

  int add_var() { return prob.layout.num_vars++; }

  // KYP flow block of one LTI piece: kyp(P) - Theta(Pi(scalar)) <= 0.
  AffineBlock& add_flow(const std::string& name, const StateSpace& dyn) {
    const int m = dyn.state_dim();
    const int n = dyn.io_dim();
    AffineBlock block;
    block.name = name;
    block.constant = -theta(fam.pi0, dyn.C, dyn.D);
    for_each_sym_basis(m, [&](int slot, const Matrix& e) {
      block.coeff.emplace_back(prob.layout.p_offset + slot,
                               kyp_form(dyn.A, dyn.B, e));
    });
    block.coeff.emplace_back(scalar_var, scalar_coeff(m, n, fam.scalar_sign));
    prob.blocks.push_back(std::move(block));
    return prob.blocks.back();
  }

  void add_reset_parts(const ResetSystem& sys) {
    prob.layout.tau_flow = add_var();
    prob.layout.tau_jump = add_var();
    add_flow("flow", sys.base)
        .coeff.emplace_back(prob.layout.tau_flow, sys.M);
    const int m = sys.state_dim();
    const int n = sys.io_dim();
    AffineBlock jump;
    jump.name = "jump";
    jump.constant = Matrix::Zero(m + n, m + n);
    for_each_sym_basis(m, [&](int slot, const Matrix& e) {
      Matrix f = Matrix::Zero(m + n, m + n);
      f.topLeftCorner(m, m) = sys.R.transpose() * e * sys.R - e;
      jump.coeff.emplace_back(prob.layout.p_offset + slot, std::move(f));
    });
    jump.coeff.emplace_back(prob.layout.tau_jump, (-sys.M).eval());
    prob.blocks.push_back(std::move(jump));
    prob.add_linear({"tau_flow_nonneg", {{prob.layout.tau_flow, 1.0}}, 0.0});
    prob.add_linear({"tau_jump_nonneg", {{prob.layout.tau_jump, 1.0}}, 0.0});
  }

  void add_pwl_parts(const PwlSystem& sys) {
    const int p = sys.guard_rows();
    prob.layout.guard_rows = p;
    for (size_t i = 0; i < sys.modes.size(); ++i) {
      prob.layout.u_offset.push_back(prob.layout.num_vars);
      prob.layout.num_vars += packed_size(p);
    }
    for (size_t i = 0; i < sys.modes.size(); ++i) {
      const PwlMode& mode = sys.modes[i];
      AffineBlock& block = add_flow("mode_" + std::to_string(i), mode.dyn);
      for_each_sym_basis(p, [&](int slot, const Matrix& e) {
        block.coeff.emplace_back(prob.layout.u_offset[i] + slot,
                                 (mode.E.transpose() * e * mode.E).eval());
      });
      // The cone multiplier needs elementwise nonnegativity only, expressed
      // as scalar constraints on the packed entries (not a semidefinite cone).
      for (int slot = 0; slot < packed_size(p); ++slot)
        prob.add_linear(
            {"u" + std::to_string(i) + "_entry_" + std::to_string(slot),
             {{prob.layout.u_offset[i] + slot, 1.0}},
             0.0});
    }
  }

  void add_hard_block() {
    const int m = prob.layout.state_dim;
    if (m == 0) return;  // empty storage matrix: nothing to constrain
    AffineBlock block;
    block.name = "storage_psd";
    block.constant = Matrix::Zero(m, m);
    for_each_sym_basis(m, [&](int slot, const Matrix& e) {
      block.coeff.emplace_back(prob.layout.p_offset + slot, -e);
    });
    prob.blocks.push_back(std::move(block));
  }

  LmiProblem finish() {
    if (prob.hard) add_hard_block();
    Vector c = Vector::Zero(prob.layout.num_vars);
    c[scalar_var] = fam.kind == ObjectiveKind::max_rho ? -1.0 : 1.0;
    prob.objective = std::move(c);
    if (fam.kind != ObjectiveKind::min_hp)
      prob.add_linear({"rho_nonneg", {{prob.layout.rho, 1.0}}, 0.0});
    return std::move(prob);
  }
};

LmiProblem build_any(const SystemModel& sys, int sigma, double lambda_c,
                     int hp_sign, bool hard) {
  validate(sys);
  Builder b(state_dim(sys), sigma, lambda_c, hp_sign, hard);
  if (const auto* lti = std::get_if<StateSpace>(&sys))
    b.add_flow("flow", *lti);
  else if (const auto* rst = std::get_if<ResetSystem>(&sys))
    b.add_reset_parts(*rst);
  else
    b.add_pwl_parts(std::get<PwlSystem>(sys));
  return b.finish();
}

}  // namespace

LmiProblem build_lti(const StateSpace& sys, int sigma, double lambda_c,
                     bool hard) {
  return build_any(sys, sigma, lambda_c, 0, hard);
}

LmiProblem build_reset(const ResetSystem& sys, int sigma, double lambda_c,
                       bool hard) {
  return build_any(sys, sigma, lambda_c, 0, hard);
}

LmiProblem build_pwl(const PwlSystem& sys, int sigma, double lambda_c,
                     bool hard) {
  return build_any(sys, sigma, lambda_c, 0, hard);
}

LmiProblem build_halfplane(const SystemModel& sys, int sign, bool hard) {
  if (sign != 1 && sign != -1)
    throw SolveError("half-plane sign must be +1 or -1");
  return build_any(sys, 0, 0.0, sign, hard);
}

LmiProblem build_problem(const SystemModel& sys, int sigma, double lambda_c,
                         bool hard) {
  return build_any(sys, sigma, lambda_c, 0, hard);
}

CertificateCheck check_certificate(const LmiProblem& prob, const Vector& v) {
  CertificateCheck check;
  check.max_block_eig = -std::numeric_limits<double>::infinity();
  for (const AffineBlock& block : prob.blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(block.evaluate(v),
                                             Eigen::EigenvaluesOnly);
    check.max_block_eig =
        std::max(check.max_block_eig, es.eigenvalues().maxCoeff());
  }
  check.worst_linear = std::numeric_limits<double>::infinity();
  for (const LinearConstraint& lc : prob.linear)
    check.worst_linear = std::min(check.worst_linear, lc.evaluate(v));
  if (prob.linear.empty()) check.worst_linear = 0.0;
  if (prob.hard && prob.layout.state_dim > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(prob.layout.P(v),
                                             Eigen::EigenvaluesOnly);
    check.min_P_eig = es.eigenvalues().minCoeff();
  }
  return check;
}

RegionCertificate extract_certificate(const LmiProblem& prob, const Vector& v) {
  RegionCertificate cert;
  cert.P = prob.layout.P(v);
  if (prob.layout.tau_flow >= 0) cert.tau1 = v[prob.layout.tau_flow];
  if (prob.layout.tau_jump >= 0) cert.tau2 = v[prob.layout.tau_jump];
  cert.U = prob.layout.U(v);
  cert.rho =
      prob.layout.rho >= 0 ? v[prob.layout.rho] : v[prob.layout.hp_offset];
  cert.objective = prob.objective.dot(v);
  cert.max_block_eig = check_certificate(prob, v).max_block_eig;
  return cert;
}

void dump_problem(const LmiProblem& prob, std::ostream& os) {
  os << "vars " << prob.layout.num_vars << "\n";
  os << "objective";
  for (int i = 0; i < prob.objective.size(); ++i)
    if (prob.objective[i] != 0.0) os << " " << i << ":" << prob.objective[i];
  os << "\n";
  for (size_t b = 0; b < prob.blocks.size(); ++b) {
    const AffineBlock& block = prob.blocks[b];
    os << "block " << b << " '" << block.name << "' dim " << block.dim()
       << "\n";
    auto triplets = [&](const Matrix& m, const std::string& tag) {
      for (int i = 0; i < m.rows(); ++i)
        for (int j = i; j < m.cols(); ++j)
          if (m(i, j) != 0.0)
            os << "  " << tag << " " << i << " " << j << " " << m(i, j) << "\n";
    };
    triplets(block.constant, "const");
    for (const auto& [idx, f] : block.coeff)
      triplets(f, "v" + std::to_string(idx));
  }
  for (const LinearConstraint& lc : prob.linear) {
    os << "linear '" << lc.name << "' offset " << lc.offset;
    for (const auto& [idx, g] : lc.terms) os << " v" << idx << ":" << g;
    os << "\n";
  }
}

}  // namespace sgraph
