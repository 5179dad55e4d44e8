#pragma once

// Squeezed quantum trigonometry of the eight-port homodyne filter with a
// squeezed vacuum in the unused ports.

#include "opobs/core.hpp"

#include <map>
#include <string>
#include <vector>

namespace opobs::optics {

/// Fock levels |0>..|n_max-1>. Operators built by exponentiation live on
/// n_max + buffer levels and are projected back to n_max.
class FockSpace {
 public:
  explicit FockSpace(int n_max, int buffer = 16);
  int n_max() const { return n_max_; }
  int buffer() const { return buffer_; }
  int full_dim() const { return n_max_ + buffer_; }

 private:
  int n_max_;
  int buffer_;
};

/// Squeezed-vacuum amplitude s >= 0 and phase phi in [0, 2 pi).
class SqueezeParams {
 public:
  SqueezeParams(double s = 0.0, double phi = 0.0);
  double s() const { return s_; }
  double phi() const { return phi_; }

 private:
  double s_;
  double phi_;
};

ComplexMatrix annihilation(int dim);
/// b|n> = sqrt(n)|n-1> on the n_max levels; b^dagger drops |n_max-1> -> |n_max>.
ComplexMatrix annihilation(const FockSpace& space);

/// D(w) = exp(w b^dagger - w* b) built on the buffered space and projected.
/// Outside |w|^2 <= n_max/4 a message is appended to `warnings` (if given).
ComplexMatrix displacement(Complex w, const FockSpace& space,
                           std::vector<std::string>* warnings = nullptr);

/// S(s, phi) = exp((s/2)(e^{-i phi} b^2 - e^{i phi} b^dagger^2)), so that
/// S^dagger b S = b cosh s - b^dagger e^{i phi} sinh s. Requires s <= 3.
ComplexMatrix squeeze(const SqueezeParams& params, const FockSpace& space);

/// Exact <k|D(beta)|j> for k, j < n via associated Laguerre polynomials;
/// no truncation of intermediate sums.
ComplexMatrix displacement_elements(Complex beta, int n);

/// Exact amplitudes <k|w,s> = <k|D(w) S(s,phi)|0>, k < n, from the three-term
/// recurrence sqrt(k+1) cosh(s) a_{k+1} = (w cosh s + w* e^{i phi} sinh s) a_k
///                                        - e^{i phi} sinh(s) sqrt(k) a_{k-1}.
ComplexVector squeezed_coherent_amplitudes(Complex w, const SqueezeParams& params, int n);

struct SqueezedCoherentState {
  Complex w;
  SqueezeParams params;
  QuantumState state;
  double leakage;  // 1 - |P_nmax |w,s>|^2 before renormalization
};

/// D(w) S(s,phi)|0> on n_max levels. Renormalized when leakage exceeds 1e-10;
/// leakage above 1e-4 throws TruncationError.
SqueezedCoherentState squeezed_coherent_state(Complex w, const SqueezeParams& params,
                                              const FockSpace& space);

/// Polar quadrature over the plane: radial Gauss-Legendre on [0, r_max], uniform
/// angles. Zero fields select the defaults
/// r_max = e^s (sqrt(n_max) + 6), radial = 4 ceil(r_max),
/// angular = (2 n_max + 2|n| + 4) ceil(e^s).
struct PlaneQuadratureSpec {
  int radial_nodes = 0;
  int angular_nodes = 0;
  double r_max = 0.0;
  double tolerance = 1e-7;  // Frobenius change under node doubling
  int max_doublings = 4;
};

struct PlaneIntegral {
  ComplexMatrix matrix;
  int radial_nodes = 0;
  int angular_nodes = 0;
  double r_max = 0.0;
  double convergence_delta = 0.0;
};

/// int d^2w/pi e^{i n arg w} |w,s><w,s| on the n_max levels, certified by
/// node doubling. n = 0 gives the POVM completeness integral.
PlaneIntegral plane_integral(int n, const SqueezeParams& params, const FockSpace& space,
                             const PlaneQuadratureSpec& quad = {});

/// E^(n)(s, phi) for n != 0, |n| <= 8. Negative orders are adjoints.
PlaneIntegral phasor_op(int n, const SqueezeParams& params, const FockSpace& space,
                        const PlaneQuadratureSpec& quad = {});

enum class TrigKind { Cosine, Sine };

/// C^(1) = (E1 + E-1)/2, C^(2) = 1/2 + (E2 + E-2)/4,
/// S^(1) = (E1 - E-1)/(2i), S^(2) = 1/2 - (E2 + E-2)/4.
ComplexMatrix trig_op(TrigKind kind, int k, const SqueezeParams& params, const FockSpace& space,
                      const PlaneQuadratureSpec& quad = {});

using FourierCoefficients = std::map<int, Complex>;

/// Fourier coefficients of the classical functions behind trig_op.
FourierCoefficients trig_coefficients(TrigKind kind, int k);

/// sum_n c_n E^(n), E^(0) = 1. With `hermitian` set the coefficients must
/// satisfy c_{-n} = conj(c_n).
ComplexMatrix periodic_function_op(const FourierCoefficients& coeffs, const SqueezeParams& params,
                                   const FockSpace& space, const PlaneQuadratureSpec& quad = {},
                                   bool hermitian = false);

struct PropensityTable {
  std::vector<double> angles;
  std::vector<double> densities;
  double normalization = 0.0;  // int dphi/(2 pi) Pr
  int radial_nodes = 0;
  double r_max = 0.0;
  double convergence_delta = 0.0;
  double tail_ratio = 0.0;  // radial integrand at r_max over its peak
};

struct PropensitySpec {
  int radial_nodes = 0;  // 0: 4 ceil(r_max)
  double r_max = 0.0;    // 0: e^s (sqrt(n_max) + 6)
  double tolerance = 1e-9;
  double tail_tolerance = 1e-10;
};

/// Pr(phi; s, phi_sq) = int_0^inf dI <w,s|rho|w,s>, w = sqrt(I) e^{i phi}, on
/// `angle_nodes` uniform angles.
PropensityTable phase_propensity(const QuantumState& rho, const SqueezeParams& params,
                                 const FockSpace& space, int angle_nodes,
                                 const PropensitySpec& spec = {});

}  // namespace opobs::optics
