#pragma once

// Wigner functions over the (I, theta) plane, w = sqrt(I) e^{i theta}.
// Normalization: W_A(w) = 2 Tr[A D(w) P D(-w)], P the photon-number parity,
// so the vacuum peaks at 2 and a density matrix integrates to 1 under d^2w/pi.

#include "opobs/optics.hpp"

#include <string>
#include <vector>

namespace opobs::optics {

/// Uniform intensities I_j = j i_max/(n_intensity-1) unless `intensities` is
/// given explicitly (then it must be strictly increasing and >= 0). Angles are
/// always uniform on [0, 2 pi).
struct PhaseGridSpec {
  double i_max = 8.0;
  int n_intensity = 60;
  int n_theta = 72;
  std::vector<double> intensities;
};

struct PhaseGrid {
  std::vector<double> intensities;
  std::vector<double> thetas;
  ComplexMatrix values;  // rows follow intensities, columns thetas
  bool real_valued = false;
  double max_imag = 0.0;  // largest |Im W| before it was dropped
  std::string route;      // "displaced_parity" or "povm_kernel"
  int n_max = 0;          // displaced parity only
  int angular_nodes = 0;  // povm kernel only: largest rule used
  double convergence_delta = 0.0;
};

/// Resolved intensity nodes of a spec; throws InvalidInput on a bad grid.
std::vector<double> grid_intensities(const PhaseGridSpec& spec);

/// Displaced-parity evaluation of a truncated operator with exact displacement
/// matrix elements. Every grid intensity must satisfy I <= n_max/4. For
/// Hermitian A the imaginary part must stay below 1e-8 and is dropped.
PhaseGrid wigner_of_operator(const ComplexMatrix& a, const FockSpace& space,
                             const PhaseGridSpec& grid);

/// Wigner function of sum_n c_n E^(n)(s, phi) evaluated without truncation:
/// W_{E(n)}(w) = int d^2w'/pi e^{i n arg w'} W_{|w',s><w',s|}(w). The radial
/// integral is done in closed form; the angular one by the trapezoid rule,
/// doubled until successive values differ by less than `tolerance`.
PhaseGrid operational_wigner(const FourierCoefficients& coeffs, const SqueezeParams& params,
                             const PhaseGridSpec& grid, bool hermitian = true,
                             double tolerance = 1e-11);

/// Single-point version of operational_wigner.
Complex operational_wigner_at(const FourierCoefficients& coeffs, const SqueezeParams& params,
                              Complex w, double tolerance = 1e-11);

/// Plot presets for the C^(2) Wigner surface: 1 is s = 0.5, phi = pi/2 and
/// 2 is s = 1.5, phi = 0, both on I in [0, 8] x 60 and 72 angles.
struct WignerPreset {
  int id;
  SqueezeParams params;
  FourierCoefficients coeffs;
  PhaseGridSpec grid;
};
WignerPreset wigner_preset(int id);

enum class FitModel { SqrtICos, Constant };

std::string to_string(FitModel model);

struct SmallIFit {
  FitModel model;
  /// SqrtICos: A in W = sqrt(I) A cos(theta). Constant: c in W = (1 - c)/2.
  double parameter = 0.0;
  double mean = 0.0;               // mean of Re W over the fitted points
  double relative_residual = 0.0;  // |W - fit| / |W| (SqrtICos), rms / |mean| (Constant)
  bool poor_fit = false;           // relative_residual > 5%
  int points = 0;
};

/// Least-squares fit of Re W over the rows with I <= i_limit (I > 0 for
/// SqrtICos). Throws InvalidInput if no row qualifies.
SmallIFit small_I_fit(const PhaseGrid& grid, FitModel model, double i_limit = 0.05);

}  // namespace opobs::optics
