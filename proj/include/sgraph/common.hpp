#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sgraph {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Error categories map onto CLI exit codes: usage/config/parse errors exit
// with 2, computational failures (solver, simulation, geometry) with 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class SolveError : public Error {
 public:
  using Error::Error;
};

class SimError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

enum class RunMode { serial, parallel };

namespace tol {
// Strict-stability margin on Re(eig(A)).
inline constexpr double hurwitz = 1e-9;
// Symmetry tolerance for user-supplied quadratic forms (relative).
inline constexpr double symmetry = 1e-9;
// Slack on the quadratic-form membership test [z;1]^* Pi [z;1] >= -eps.
inline constexpr double membership = 1e-9;
// A-posteriori bound on max eigenvalue of every constraint block.
inline constexpr double feasibility = 1e-7;
// Eigenvalue floor for storage-function positive-semidefiniteness checks.
inline constexpr double psd = 1e-9;
// Relative tail-energy threshold for truncated L2 functionals.
inline constexpr double decay = 1e-6;
// Base scale of the integral-quadratic-constraint slack.
inline constexpr double iqc = 1e-6;
// Bisection tolerance on the reset surface value during event localization.
inline constexpr double event = 1e-10;
// Relative tolerance for flagging a near-degenerate region inversion.
inline constexpr double degenerate_inversion = 1e-9;
// Radii below this are treated as degenerate: no region is emitted.
inline constexpr double min_region_radius = 1e-6;
}  // namespace tol

// FNV-1a, used to fingerprint systems and run configurations in artifacts.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value);

}  // namespace sgraph
