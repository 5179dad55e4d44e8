#pragma once

// Dense complex operator algebra shared by the spin and optical modules.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

namespace opobs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-10;

// Error taxonomy. The CLI maps these onto exit codes.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A pure state vector or a density matrix. Validated on construction and
/// immutable afterwards.
class QuantumState {
 public:
  static QuantumState pure(ComplexVector psi, double tol = 1e-12);
  static QuantumState mixed(ComplexMatrix rho, double hermitian_tol = 1e-12,
                            double trace_tol = 1e-10, double eig_tol = 1e-10);
  static QuantumState maximally_mixed(Eigen::Index dim);
  /// |k><k| as a pure state in a space of dimension `dim`.
  static QuantumState basis(Eigen::Index dim, Eigen::Index k);

  bool is_pure() const { return std::holds_alternative<ComplexVector>(data_); }
  Eigen::Index dim() const;
  /// Throws InvalidInput for mixed states.
  const ComplexVector& vector() const;
  ComplexMatrix density() const;

 private:
  explicit QuantumState(ComplexVector v) : data_(std::move(v)) {}
  explicit QuantumState(ComplexMatrix m) : data_(std::move(m)) {}
  std::variant<ComplexVector, ComplexMatrix> data_;
};

ComplexMatrix adjoint(const ComplexMatrix& m);

/// <psi|M|psi> for pure states, Tr(rho M) for mixed ones.
Complex expectation(const QuantumState& state, const ComplexMatrix& m);

/// exp(M). Hermitian and skew-Hermitian inputs go through the Hermitian
/// eigendecomposition; everything else through scaling-and-squaring with a
/// degree-13 Pade approximant.
ComplexMatrix matrix_exponential(const ComplexMatrix& m);

struct HermiticityReport {
  bool hermitian;
  double max_deviation;
};
HermiticityReport hermiticity_check(const ComplexMatrix& m, double tol = kDefaultTol);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_distance(const ComplexMatrix& a, const ComplexMatrix& b);

void require_square(const ComplexMatrix& m, const char* what);

}  // namespace opobs
