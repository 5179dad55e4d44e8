#pragma once

// Spin-s Malus filter: coherent states, the coherent-state POVM and the
// operational operators it induces. Basis ordering is m = -s, ..., +s
// everywhere (row/column k holds m = k - s).

#include "opobs/core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace opobs::spin {

class SpinQuantumNumber {
 public:
  explicit SpinQuantumNumber(int twice_s);
  /// Accepts half-integers only (0.5, 1, 1.5, ...).
  static SpinQuantumNumber from_double(double s);

  int twice() const { return twice_s_; }
  double value() const { return 0.5 * twice_s_; }
  int dim() const { return twice_s_ + 1; }
  /// Magnetic quantum number of basis index k.
  double m(int k) const { return k - value(); }

  friend bool operator==(SpinQuantumNumber, SpinQuantumNumber) = default;

 private:
  int twice_s_;
};

/// Direction on the unit sphere, theta in [0, pi], phi wrapped to [0, 2 pi).
class SolidAngle {
 public:
  SolidAngle(double theta, double phi);
  double theta() const { return theta_; }
  double phi() const { return phi_; }

 private:
  double theta_;
  double phi_;
};

/// Relative angle alpha between two directions (the angular metric).
double angular_distance(const SolidAngle& a, const SolidAngle& b);

struct SpinAlgebra {
  explicit SpinAlgebra(SpinQuantumNumber s);

  SpinQuantumNumber s;
  ComplexMatrix s_plus;
  ComplexMatrix s_minus;
  ComplexMatrix s_3;

  ComplexMatrix s_1() const { return 0.5 * (s_plus + s_minus); }
  ComplexMatrix s_2() const { return Complex(0.0, -0.5) * (s_plus - s_minus); }
  /// i in {1, 2, 3}.
  ComplexMatrix component(int i) const;
  ComplexMatrix identity() const { return ComplexMatrix::Identity(s.dim(), s.dim()); }
};

struct SphereQuadrature {
  std::vector<SolidAngle> nodes;
  std::vector<double> weights;  // sum to 4 pi
  int max_degree_theta = 0;
  int max_degree_phi = 0;
};

/// Tensor rule: Gauss-Legendre in theta on [0, pi] (the sin(theta) Jacobian
/// folded into the weights) times a uniform phi grid. The phi grid integrates
/// trigonometric polynomials up to `max_degree_phi` exactly; the theta rule
/// has max_degree_theta + 12 nodes, which drives the error on trigonometric
/// polynomials of the declared degree below 1e-14.
SphereQuadrature sphere_quadrature(int max_degree_theta, int max_degree_phi);

/// |Omega> = exp(tau S+ - tau* S-)|s,-s>, tau = (theta/2) e^{-i phi}, by
/// literal exponentiation.
QuantumState coherent_state(SpinQuantumNumber s, const SolidAngle& omega);

/// Closed-form amplitudes of the same state:
/// <m|Omega> = sqrt(C(2s, s+m)) cos(theta/2)^{s-m} (sin(theta/2) e^{-i phi})^{s+m}.
ComplexVector coherent_amplitudes(SpinQuantumNumber s, const SolidAngle& omega);

/// |<Omega|Omega'>|^2 from the state vectors.
double malus_transmission(SpinQuantumNumber s, const SolidAngle& omega,
                          const SolidAngle& omega_prime);
/// (cos(alpha/2))^{4s}.
double malus_law(SpinQuantumNumber s, double alpha);

/// F(Omega) = (2s+1)/(4 pi) |Omega><Omega|.
ComplexMatrix povm_density(SpinQuantumNumber s, const SolidAngle& omega);

/// Pr(Omega) = (2s+1)/(4 pi) <Omega|rho|Omega>.
double propensity(const QuantumState& state, SpinQuantumNumber s, const SolidAngle& omega);

enum class SpinKind { AzimuthalCosine, PolarPhasor, Direction };
enum class Provenance { ClosedForm, Quadrature };

std::string to_string(SpinKind kind);
std::string to_string(Provenance p);

struct OperationalSpinOperator {
  SpinKind kind;
  int order;
  int axis;  // 1..3 for Direction, 0 otherwise
  SpinQuantumNumber s;
  ComplexMatrix matrix;
  Provenance provenance;
};

/// Theta^(n) = 2F1(-n, s + S3 + 1; 2s + 2; 2), diagonal in the S3 basis.
OperationalSpinOperator azimuthal_cosine_op(SpinQuantumNumber s, int n);

/// E^(n) = S+^n Gamma(s-S3+1-n/2) Gamma(s+S3+1+n/2) / (Gamma(s+S3+n+1) Gamma(s-S3+1)),
/// the diagonal factor acting first. Zero for n > 2s; E^(-n) = E^(n)^dagger.
OperationalSpinOperator polar_phasor_op(SpinQuantumNumber s, int n);

/// Sigma_i^(n) = int dOmega (n_i)^n F(Omega), n = (cos phi sin theta,
/// sin phi sin theta, -cos theta). Always by quadrature.
OperationalSpinOperator direction_op(SpinQuantumNumber s, int axis, int n);

/// Closed forms for n = 0, 1, 2:
/// Sigma^(1) = S_i/(1+s), Sigma^(2) = 2 S_i^2/((1+s)(3+2s)) + 1/(3+2s).
OperationalSpinOperator direction_closed_form(SpinQuantumNumber s, int axis, int n);

using SphereWeight = std::function<Complex(const SolidAngle&)>;

/// sum_k w_k weight(Omega_k) F(Omega_k).
ComplexMatrix operator_by_quadrature(SpinQuantumNumber s, const SphereWeight& weight,
                                     int degree_theta, int degree_phi);

/// Quadrature oracle for any of the three kinds, sized with L and M large
/// enough for integrands of degree 2s + |n| in theta and phi.
OperationalSpinOperator quadrature_oracle(SpinKind kind, SpinQuantumNumber s, int n, int axis = 0);

/// sum_k w_k f(Omega_k) Pr(Omega_k): moments of the propensity.
double propensity_moment(const QuantumState& state, SpinQuantumNumber s,
                         const std::function<double(const SolidAngle&)>& f, int degree_theta,
                         int degree_phi);

}  // namespace opobs::spin
