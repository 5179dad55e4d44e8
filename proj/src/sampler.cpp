#include "opobs/sampler.hpp"

#include "opobs/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace opobs::sampler {

namespace {
constexpr double kPi = std::numbers::pi;

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::string describe_state(const QuantumState& state) {
  std::ostringstream out;
  out << (state.is_pure() ? "pure" : "mixed") << " dim=" << state.dim();
  return out.str();
}

// Moments int dphi/(2 pi) e^{i n phi} p(phi) of the piecewise-constant density
// with cell masses `mass` on a uniform grid of K cells starting at 0.
Complex cell_moment(const std::vector<double>& mass, int n) {
  const int k_cells = static_cast<int>(mass.size());
  const double h = 2.0 * kPi / k_cells;
  // average of e^{i n phi} over a cell of width h starting at phi_k
  const Complex cell_avg = std::abs(n * h) < 1e-12
                               ? Complex(1.0)
                               : (std::polar(1.0, n * h) - 1.0) / Complex(0.0, n * h);
  Complex total = 0.0;
  for (int k = 0; k < k_cells; ++k) total += mass[k] * std::polar(1.0, n * h * k);
  return total * cell_avg;
}

// Cell masses from densities at the nodes (trapezoid per cell), normalized.
std::vector<double> cell_masses(const std::vector<double>& density) {
  const std::size_t k_cells = density.size();
  std::vector<double> mass(k_cells);
  double total = 0.0;
  for (std::size_t k = 0; k < k_cells; ++k) {
    mass[k] = 0.5 * (density[k] + density[(k + 1) % k_cells]);
    total += mass[k];
  }
  for (double& m : mass) m /= total;
  return mass;
}

}  // namespace

SampleBatch sample_spin(const QuantumState& state, spin::SpinQuantumNumber s, int count,
                        std::uint64_t seed) {
  if (count < 1) throw InvalidInput("sample_spin: count must be >= 1");
  if (state.dim() != s.dim()) throw InvalidInput("sample_spin: state dimension must be 2s+1");
  const int two_s = s.twice();
  std::vector<double> root_binomial(two_s + 1);
  for (int k = 0; k <= two_s; ++k) {
    root_binomial[k] = std::exp(
        0.5 * (log_gamma(two_s + 1.0) - log_gamma(k + 1.0) - log_gamma(two_s - k + 1.0)));
  }
  const ComplexMatrix rho = state.density();

  SampleBatch batch;
  batch.kind = BatchKind::Spin;
  std::ostringstream src;
  src << "spin s=" << s.value() << " " << describe_state(state);
  batch.source = src.str();
  batch.seed = seed;
  batch.count = count;
  batch.analytic_acceptance = 1.0 / s.dim();
  batch.directions.reserve(count);

  UniformStream rng(seed);
  ComplexVector amp(two_s + 1);
  while (static_cast<int>(batch.directions.size()) < count) {
    const double u = 2.0 * rng.next() - 1.0;
    const double phi = 2.0 * kPi * rng.next();
    const double accept = rng.next();
    ++batch.proposals;
    const double theta = std::acos(std::clamp(u, -1.0, 1.0));
    const double c = std::cos(0.5 * theta);
    const double sn = std::sin(0.5 * theta);
    const Complex step = std::polar(sn, -phi);
    Complex power = 1.0;
    for (int k = 0; k <= two_s; ++k) {
      amp(k) = root_binomial[k] * std::pow(c, two_s - k) * power;
      power *= step;
    }
    // <Omega|rho|Omega> <= 1 so the envelope (2s+1)/(4 pi) dominates Pr.
    const double target = amp.dot(rho * amp).real();
    if (accept < target) batch.directions.emplace_back(theta, phi);
  }
  batch.acceptance_rate = static_cast<double>(count) / static_cast<double>(batch.proposals);
  return batch;
}

PhaseCdf phase_cdf(const QuantumState& rho, const optics::SqueezeParams& params,
                   const optics::FockSpace& space, int count) {
  if (count < 1) throw InvalidInput("phase_cdf: count must be >= 1");
  const double budget = 0.1 / std::sqrt(static_cast<double>(count));
  int nodes = 256;
  std::vector<double> coarse =
      cell_masses(optics::phase_propensity(rho, params, space, nodes).densities);
  PhaseCdf table;
  for (;;) {
    std::vector<double> fine =
        cell_masses(optics::phase_propensity(rho, params, space, 2 * nodes).densities);
    double change = 0.0;
    for (int n = 1; n <= 4; ++n) {
      change = std::max(change, std::abs(cell_moment(fine, n) - cell_moment(coarse, n)));
    }
    nodes *= 2;
    table.mass = std::move(fine);
    if (change < budget) break;
    if (nodes >= 16384) {
      std::ostringstream msg;
      msg << "phase_cdf: table did not resolve the moments to " << budget << " (last change "
          << change << ")";
      throw NonConvergence(msg.str());
    }
    coarse = table.mass;
  }
  table.nodes = nodes;
  table.cdf.assign(nodes + 1, 0.0);
  for (int k = 0; k < nodes; ++k) table.cdf[k + 1] = table.cdf[k] + table.mass[k];
  table.cdf[nodes] = 1.0;
  std::ostringstream src;
  src << "phase s=" << params.s() << " phi=" << params.phi() << " n_max=" << space.n_max() << " "
      << describe_state(rho);
  table.source = src.str();
  return table;
}

SampleBatch sample_phase(const PhaseCdf& table, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("sample_phase: count must be >= 1");
  const int nodes = table.nodes;
  if (nodes < 1 || static_cast<int>(table.cdf.size()) != nodes + 1) {
    throw InvalidInput("sample_phase: malformed CDF table");
  }
  SampleBatch batch;
  batch.kind = BatchKind::Phase;
  batch.source = table.source;
  batch.seed = seed;
  batch.count = count;
  batch.table_nodes = nodes;
  batch.phases.reserve(count);
  const double h = 2.0 * kPi / nodes;
  UniformStream rng(seed);
  for (int i = 0; i < count; ++i) {
    const double u = rng.next();
    auto it = std::upper_bound(table.cdf.begin(), table.cdf.end(), u);
    int k = std::clamp(static_cast<int>(it - table.cdf.begin()) - 1, 0, nodes - 1);
    while (table.mass[k] <= 0.0 && k + 1 < nodes) ++k;
    const double frac =
        table.mass[k] > 0.0 ? std::clamp((u - table.cdf[k]) / table.mass[k], 0.0, 1.0) : 0.0;
    double phi = h * (k + frac);
    if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
    batch.phases.push_back(phi);
  }
  return batch;
}

SampleBatch sample_phase(const QuantumState& rho, const optics::SqueezeParams& params,
                         const optics::FockSpace& space, int count, std::uint64_t seed) {
  return sample_phase(phase_cdf(rho, params, space, count), count, seed);
}

std::string to_string(MomentKind kind) {
  switch (kind) {
    case MomentKind::Phasor: return "phasor";
    case MomentKind::AzimuthalCosine: return "azimuthal_cosine";
    case MomentKind::Direction: return "direction";
  }
  return "unknown";
}

std::vector<MomentEstimate> empirical_moments(const SampleBatch& batch,
                                              const std::vector<int>& orders, MomentKind kind,
                                              int axis) {
  const int count = batch.kind == BatchKind::Spin ? static_cast<int>(batch.directions.size())
                                                  : static_cast<int>(batch.phases.size());
  if (count < 2) throw InvalidInput("empirical_moments: need at least two outcomes");
  if (batch.kind == BatchKind::Phase && kind != MomentKind::Phasor) {
    throw InvalidInput("empirical_moments: phase batches only carry phasor moments");
  }
  if (kind == MomentKind::Direction && (axis < 1 || axis > 3)) {
    throw InvalidInput("empirical_moments: direction axis must be 1, 2 or 3");
  }
  std::vector<MomentEstimate> out;
  std::vector<Complex> values(count);
  for (int order : orders) {
    if (kind != MomentKind::Phasor && order < 0) {
      throw InvalidInput("empirical_moments: real moments need order >= 0");
    }
    MomentEstimate est;
    est.kind = kind;
    est.order = order;
    est.axis = kind == MomentKind::Direction ? axis : 0;
    est.count = count;
    est.seed = batch.seed;
    if (order == 0) {
      est.estimate = 1.0;
      out.push_back(est);
      continue;
    }
    for (int i = 0; i < count; ++i) {
      if (batch.kind == BatchKind::Phase) {
        values[i] = std::polar(1.0, order * batch.phases[i]);
        continue;
      }
      const auto& d = batch.directions[i];
      switch (kind) {
        case MomentKind::Phasor: values[i] = std::polar(1.0, order * d.phi()); break;
        case MomentKind::AzimuthalCosine: values[i] = std::pow(std::cos(d.theta()), order); break;
        case MomentKind::Direction: {
          const double comp = axis == 1   ? std::cos(d.phi()) * std::sin(d.theta())
                              : axis == 2 ? std::sin(d.phi()) * std::sin(d.theta())
                                          : -std::cos(d.theta());
          values[i] = std::pow(comp, order);
          break;
        }
      }
    }
    Complex sum = 0.0;
    for (const Complex& v : values) sum += v;
    est.estimate = sum / static_cast<double>(count);
    // Delete-one jackknife of the mean.
    double acc = 0.0;
    for (const Complex& v : values) {
      const Complex loo = (sum - v) / static_cast<double>(count - 1);
      acc += std::norm(loo - est.estimate);
    }
    est.standard_error = std::sqrt(acc * (count - 1.0) / count);
    out.push_back(est);
  }
  return out;
}

}  // namespace opobs::sampler
