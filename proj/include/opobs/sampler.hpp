#pragma once

// Synthetic measurement records drawn from the spin and optical propensities,
// and the empirical operational moments rebuilt from them.
//
// RNG stream layout: each batch owns one std::mt19937_64 seeded with the batch
// seed; draws are consumed strictly in order. A uniform variate is
// (x >> 11) * 2^-53 for one 64-bit output x.

#include "opobs/optics.hpp"
#include "opobs/spin.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace opobs::sampler {

enum class BatchKind { Spin, Phase };

struct SampleBatch {
  BatchKind kind = BatchKind::Spin;
  std::string source;
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<spin::SolidAngle> directions;  // Spin
  std::vector<double> phases;                // Phase
  // Spin: proposals drawn and the analytic acceptance 1/(2s+1).
  long long proposals = 0;
  double acceptance_rate = 0.0;
  double analytic_acceptance = 0.0;
  // Phase: cells of the tabulated CDF.
  int table_nodes = 0;
};

/// Rejection sampling from Pr(Omega) with the uniform envelope (2s+1)/(4 pi).
SampleBatch sample_spin(const QuantumState& state, spin::SpinQuantumNumber s, int count,
                        std::uint64_t seed);

/// Tabulated CDF of the optical phase propensity, linear between nodes. The
/// table is refined until the first four Fourier moments move by less than
/// 0.1 standard error for `count` draws.
struct PhaseCdf {
  std::vector<double> cdf;   // nodes + 1 values, 0 .. 1
  std::vector<double> mass;  // per cell
  int nodes = 0;
  std::string source;
};
PhaseCdf phase_cdf(const QuantumState& rho, const optics::SqueezeParams& params,
                   const optics::FockSpace& space, int count);

/// Inverse-CDF draws from a prepared table.
SampleBatch sample_phase(const PhaseCdf& table, int count, std::uint64_t seed);

SampleBatch sample_phase(const QuantumState& rho, const optics::SqueezeParams& params,
                         const optics::FockSpace& space, int count, std::uint64_t seed);

enum class MomentKind {
  Phasor,           // e^{i n phi}
  AzimuthalCosine,  // cos^n theta (spin only)
  Direction,        // (n_axis)^n, n = (cos phi sin theta, sin phi sin theta, -cos theta)
};

std::string to_string(MomentKind kind);

struct MomentEstimate {
  MomentKind kind = MomentKind::Phasor;
  int order = 0;
  int axis = 0;
  Complex estimate{};
  double standard_error = 0.0;  // jackknife, |Re| and |Im| combined in quadrature
  int count = 0;
  std::uint64_t seed = 0;
};

/// Sample means of the requested functions with jackknife standard errors.
/// Order 0 returns exactly 1 with zero error.
std::vector<MomentEstimate> empirical_moments(const SampleBatch& batch,
                                              const std::vector<int>& orders,
                                              MomentKind kind = MomentKind::Phasor, int axis = 0);

}  // namespace opobs::sampler
