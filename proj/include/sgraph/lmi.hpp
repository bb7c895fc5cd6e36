#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sgraph/model.hpp"
#include "sgraph/regions.hpp"

namespace sgraph {

// One matrix constraint F0 + sum_i v_i F_i <= 0 (negative semidefinite).
struct AffineBlock {
  std::string name;
  Matrix constant;
  std::vector<std::pair<int, Matrix>> coeff;  // (variable index, symmetric F_i)

  int dim() const { return static_cast<int>(constant.rows()); }
  Matrix evaluate(const Vector& v) const;
};

// Scalar constraint sum_i g_i v_i + offset >= 0.
struct LinearConstraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;
  double offset = 0.0;

  double evaluate(const Vector& v) const;
};

// Where each semantic variable lives inside the flat decision vector.
// Symmetric matrices are packed lower-triangular column-major with
// off-diagonal entries stored once (coefficient matrices absorb the 2x).
struct VarLayout {
  int num_vars = 0;
  int state_dim = 0;
  int p_offset = -1;        // packed storage matrix P
  int rho = -1;             // squared radius variable
  int hp_offset = -1;       // half-plane offset variable c
  int tau_flow = -1;        // reset flow multiplier
  int tau_jump = -1;        // reset jump multiplier
  int guard_rows = 0;       // rows of the mode guard matrices
  std::vector<int> u_offset;  // per-mode packed symmetric multiplier U_i

  Matrix unpack_sym(const Vector& v, int offset, int n) const;
  Matrix P(const Vector& v) const { return unpack_sym(v, p_offset, state_dim); }
  std::vector<Matrix> U(const Vector& v) const;
};

// What the scalar objective variable means.
enum class ObjectiveKind {
  min_rho,  // smallest certified disk (interior family, sigma = -1)
  max_rho,  // largest certified complement (exterior family, sigma = +1)
  min_hp,   // tightest half-plane offset c
};

struct LmiProblem {
  VarLayout layout;
  std::vector<AffineBlock> blocks;
  std::vector<LinearConstraint> linear;
  Vector objective;  // minimize objective . v
  ObjectiveKind kind = ObjectiveKind::min_rho;
  int sigma = 0;
  double lambda_c = 0.0;
  int hp_sign = 0;
  bool hard = false;

  void add_linear(LinearConstraint c);
};

// [C D; 0 I]^T (Pi (x) I_n) [C D; 0 I] as an (m+n) x (m+n) matrix.
Matrix theta(const PiMatrix& pi, const Matrix& C, const Matrix& D);
// [A B; I 0]^T [0 P; P 0] [A B; I 0] = [[A'P + PA, PB], [B'P, 0]].
Matrix kyp_form(const Matrix& A, const Matrix& B, const Matrix& P);

// Constraint families indexed by the circle parameter.  sigma = -1 asks for
// the smallest disk around lambda_c containing the scaled graph (objective
// min rho), sigma = +1 for the largest excluded open disk (objective max
// rho).  `hard` adds P >= 0 so certificates also bound running integrals.
LmiProblem build_lti(const StateSpace& sys, int sigma, double lambda_c,
                     bool hard);
LmiProblem build_reset(const ResetSystem& sys, int sigma, double lambda_c,
                       bool hard);
LmiProblem build_pwl(const PwlSystem& sys, int sigma, double lambda_c,
                     bool hard);
// Half-plane certificate: minimize c subject to the same machinery with
// Pi = [[0, sign], [sign, c]].
LmiProblem build_halfplane(const SystemModel& sys, int sign, bool hard);
LmiProblem build_problem(const SystemModel& sys, int sigma, double lambda_c,
                         bool hard);

// A-posteriori verification: largest eigenvalue over all blocks and the
// worst linear-constraint violation when substituting v.
struct CertificateCheck {
  double max_block_eig = 0.0;
  double worst_linear = 0.0;  // most negative constraint value
  double min_P_eig = 0.0;     // only meaningful in hard mode
  bool feasible(double eps = tol::feasibility) const {
    return max_block_eig <= eps && worst_linear >= -eps;
  }
};
CertificateCheck check_certificate(const LmiProblem& prob, const Vector& v);

RegionCertificate extract_certificate(const LmiProblem& prob, const Vector& v);

// Sparse triplet dump of every block for debugging.
void dump_problem(const LmiProblem& prob, std::ostream& os);

}  // namespace sgraph
