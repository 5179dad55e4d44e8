#include "opobs/verify.hpp"

#include "opobs/core.hpp"
#include "opobs/optics.hpp"
#include "opobs/sampler.hpp"
#include "opobs/spin.hpp"
#include "opobs/wigner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

namespace opobs::verify {

namespace {
constexpr double kPi = std::numbers::pi;

using optics::FockSpace;
using optics::SqueezeParams;
using optics::TrigKind;
using spin::SolidAngle;
using spin::SpinKind;
using spin::SpinQuantumNumber;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<SpinQuantumNumber> spins_up_to(double max_spin) {
  std::vector<SpinQuantumNumber> out;
  const int top = static_cast<int>(std::floor(2.0 * max_spin + 1e-9));
  for (int t = 1; t <= top; ++t) out.emplace_back(t);
  return out;
}

ComplexVector random_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

QuantumState random_mixed(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState::mixed(rho);
}

// Pure state on the first `support` Fock levels of an n_max space.
QuantumState random_low_photon(int n_max, int support, std::mt19937_64& rng) {
  ComplexVector v = ComplexVector::Zero(n_max);
  v.head(support) = random_vector(support, rng);
  return QuantumState::pure(v);
}

CheckResult make(std::string id, std::string name, double tolerance) {
  CheckResult r;
  r.id = std::move(id);
  r.name = std::move(name);
  r.tolerance = tolerance;
  return r;
}

// Several sub-checks folded into one result: deviation is the largest
// measured/tolerance ratio, so the criterion passes when it stays <= 1.
class Ratio {
 public:
  void add(const std::string& label, double measured, double tolerance, bool strict = false) {
    const double ratio = measured / tolerance;
    worst_ = std::max(worst_, ratio);
    if (strict ? !(measured < tolerance) : !(measured <= tolerance)) ok_ = false;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += label + " " + fmt(measured) + " (tol " + fmt(tolerance) + ")";
  }
  void note(const std::string& text) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += text;
  }
  void finish(CheckResult& r) const {
    r.passed = ok_;
    r.deviation = worst_;
    r.tolerance = 1.0;
    r.detail = detail_;
  }

 private:
  double worst_ = 0.0;
  bool ok_ = true;
  std::string detail_;
};

// ---------------------------------------------------------------- criteria

CheckResult criterion_spin_oracles(const VerifyOptions& opt) {
  Stopwatch clock;
  CheckResult r = make("1", "spin closed forms match quadrature oracles", 1e-9);
  double worst = 0.0;
  std::string where = "-";
  auto track = [&](double d, const std::string& label) {
    if (d > worst) {
      worst = d;
      where = label;
    }
  };
  for (const auto s : spins_up_to(opt.max_spin)) {
    const int top = std::min(s.twice(), 4);
    const std::string tag = "s=" + fmt(s.value());
    for (int n = 0; n <= top; ++n) {
      track(frobenius_distance(spin::azimuthal_cosine_op(s, n).matrix,
                               spin::quadrature_oracle(SpinKind::AzimuthalCosine, s, n).matrix),
            tag + " theta n=" + std::to_string(n));
    }
    for (int n = -top; n <= top; ++n) {
      if (n == 0) continue;
      track(frobenius_distance(spin::polar_phasor_op(s, n).matrix,
                               spin::quadrature_oracle(SpinKind::PolarPhasor, s, n).matrix),
            tag + " phasor n=" + std::to_string(n));
    }
    for (int axis = 1; axis <= 3; ++axis) {
      for (int n = 1; n <= 2; ++n) {
        track(frobenius_distance(spin::direction_closed_form(s, axis, n).matrix,
                                 spin::direction_op(s, axis, n).matrix),
              tag + " sigma_" + std::to_string(axis) + " n=" + std::to_string(n));
      }
    }
  }
  r.seconds = clock.seconds();
  r.deviation = worst;
  r.passed = worst <= r.tolerance && r.seconds < 10.0;
  r.detail = "worst at " + where + ", runtime " + fmt(r.seconds) + " s (limit 10 s)";
  return r;
}

CheckResult criterion_completeness(const VerifyOptions& opt) {
  Stopwatch clock;
  CheckResult r = make("2", "POVM completeness on the sphere and the plane", 1.0);
  Ratio ratio;
  double spin_worst = 0.0;
  for (const auto s : spins_up_to(opt.max_spin)) {
    const auto id = spin::quadrature_oracle(SpinKind::PolarPhasor, s, 0).matrix;
    spin_worst = std::max(spin_worst, frobenius_distance(id, ComplexMatrix::Identity(s.dim(), s.dim())));
  }
  ratio.add("sphere", spin_worst, 1e-10);
  const FockSpace space(opt.n_max);
  const int interior = std::max(1, space.n_max() - space.buffer());
  for (double s : {0.0, 0.5, 1.5}) {
    const auto integral = optics::plane_integral(0, SqueezeParams(s, 0.0), space);
    const double d = frobenius_distance(integral.matrix.topLeftCorner(interior, interior),
                                        ComplexMatrix::Identity(interior, interior));
    const double full = frobenius_distance(integral.matrix,
                                           ComplexMatrix::Identity(space.n_max(), space.n_max()));
    ratio.add("plane s=" + fmt(s), d, 1e-6);
    ratio.note("full block " + fmt(full));
  }
  r.seconds = clock.seconds();
  ratio.add("runtime", r.seconds, 60.0, true);
  ratio.finish(r);
  return r;
}

CheckResult criterion_vanishing_band(const VerifyOptions& opt) {
  Stopwatch clock;
  CheckResult r = make("3", "polar phasors vanish identically above 2s", 0.0);
  double worst = 0.0;
  for (const auto s : spins_up_to(opt.max_spin)) {
    for (int n = s.twice() + 1; n <= s.twice() + 3; ++n) {
      worst = std::max(worst, spin::polar_phasor_op(s, n).matrix.cwiseAbs().maxCoeff());
      worst = std::max(worst, spin::polar_phasor_op(s, -n).matrix.cwiseAbs().maxCoeff());
    }
  }
  r.seconds = clock.seconds();
  r.deviation = worst;
  r.passed = worst == 0.0;
  r.detail = "largest |entry| over 2s < |n| <= 2s+3";
  return r;
}

CheckResult criterion_elements(const VerifyOptions&) {
  Stopwatch clock;
  CheckResult r = make("4", "specific spin-1/2 matrix elements", 1.0);
  Ratio ratio;
  const SpinQuantumNumber half(1);
  const Complex e = spin::polar_phasor_op(half, 1).matrix(1, 0);
  const Complex e_oracle = spin::quadrature_oracle(SpinKind::PolarPhasor, half, 1).matrix(1, 0);
  ratio.add("E1 element - pi/4", std::abs(e - kPi / 4.0), 1e-10);
  ratio.add("oracle element - pi/4", std::abs(e_oracle - kPi / 4.0), 1e-10);
  const ComplexMatrix theta2 = spin::azimuthal_cosine_op(half, 2).matrix;
  ratio.add("theta2 - 1/3", max_abs_distance(theta2, ComplexMatrix::Identity(2, 2) / 3.0), 1e-12);
  r.seconds = clock.seconds();
  ratio.finish(r);
  return r;
}

CheckResult criterion_vacuum(const VerifyOptions& opt) {
  Stopwatch clock;
  CheckResult r = make("5", "vacuum phase facts", 1.0);
  Ratio ratio;
  const FockSpace space(opt.n_max);
  const SqueezeParams none(0.0, 0.0);
  const auto vacuum = QuantumState::basis(space.n_max(), 0);
  const auto table = optics::phase_propensity(vacuum, none, space, 64);
  double pr_dev = 0.0;
  for (double p : table.densities) pr_dev = std::max(pr_dev, std::abs(p - 1.0));
  ratio.add("Pr(phi) - 1", pr_dev, 1e-6);
  const ComplexMatrix c2 = optics::trig_op(TrigKind::Cosine, 2, none, space);
  ratio.add("<C2>_vac - 1/2", std::abs(expectation(vacuum, c2) - 0.5), 1e-6);
  const auto c1_coeffs = optics::trig_coefficients(TrigKind::Cosine, 1);
  ratio.add("W_C1(0) kernel", std::abs(optics::operational_wigner_at(c1_coeffs, none, 0.0)), 1e-6);
  const ComplexMatrix c1 = optics::trig_op(TrigKind::Cosine, 1, none, space);
  optics::PhaseGridSpec origin;
  origin.intensities = {0.0};
  origin.n_theta = 1;
  const auto parity = optics::wigner_of_operator(c1, space, origin);
  ratio.add("W_C1(0) displaced parity", std::abs(parity.values(0, 0)), 1e-6);
  r.seconds = clock.seconds();
  ratio.finish(r);
  return r;
}

double c2_wigner_origin(const SqueezeParams& p) {
  return optics::operational_wigner_at(optics::trig_coefficients(TrigKind::Cosine, 2), p, 0.0)
      .real();
}

CheckResult criterion_c2_limits(const VerifyOptions&) {
  Stopwatch clock;
  CheckResult r = make("6", "small-I limits of the C2 Wigner function", 1.0);
  Ratio ratio;
  optics::PhaseGridSpec small;
  small.intensities = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  small.n_theta = 36;
  const auto c2 = optics::trig_coefficients(TrigKind::Cosine, 2);
  auto limit = [&](double s, double phi) {
    const auto grid = optics::operational_wigner(c2, SqueezeParams(s, phi), small);
    const auto fit = optics::small_I_fit(grid, optics::FitModel::Constant);
    ratio.note("s=" + fmt(s) + " phi=" + fmt(phi) + ": W(I=0) " + fmt(grid.values(0, 0).real()) +
               ", c " + fmt(fit.parameter));
    return grid.values(0, 0).real();
  };
  for (double s : {0.5, 1.5}) {
    ratio.add("|W - 1/2| phi=pi/2 s=" + fmt(s), std::abs(limit(s, 0.5 * kPi) - 0.5), 0.01);
  }
  ratio.add("W phi=0 s=1.5", limit(1.5, 0.0), 0.15, true);
  ratio.add("1 - W phi=pi s=1.5", 1.0 - limit(1.5, kPi), 0.15, true);
  r.seconds = clock.seconds();
  ratio.add("runtime", r.seconds, 120.0, true);
  ratio.finish(r);
  return r;
}

CheckResult criterion_classical_limit(const VerifyOptions&) {
  Stopwatch clock;
  CheckResult r = make("7", "classical limit of <C1> for |beta| = 6", 1.0);
  Ratio ratio;
  const FockSpace space(80);
  std::vector<std::vector<double>> values;
  for (double s : {0.0, 0.5}) {
    const SqueezeParams p(s, 0.0);
    const ComplexMatrix c1 = optics::trig_op(TrigKind::Cosine, 1, p, space);
    double worst = 0.0;
    std::vector<double> row;
    for (int k = 0; k < 8; ++k) {
      const double arg = 2.0 * kPi * k / 8.0;
      const auto probe = optics::squeezed_coherent_state(std::polar(6.0, arg), SqueezeParams(), space);
      const double v = expectation(probe.state, c1).real();
      row.push_back(v);
      worst = std::max(worst, std::abs(v - std::cos(arg)));
    }
    values.push_back(row);
    ratio.add("s=" + fmt(s) + " |<C1> - cos|", worst, 0.03);
  }
  double spread = 0.0;
  for (int k = 0; k < 8; ++k) spread = std::max(spread, std::abs(values[0][k] - values[1][k]));
  ratio.add("squeeze dependence", spread, 0.03, true);
  r.seconds = clock.seconds();
  ratio.finish(r);
  return r;
}

CheckResult criterion_c1_scaling(const VerifyOptions&) {
  Stopwatch clock;
  CheckResult r = make("8", "small-I sqrt(I) cos(theta) scaling of the C1 Wigner function", 0.05);
  optics::PhaseGridSpec small;
  for (int j = 1; j <= 10; ++j) small.intensities.push_back(0.005 * j);
  small.n_theta = 72;
  const auto c1 = optics::trig_coefficients(TrigKind::Cosine, 1);
  double worst = 0.0;
  std::string detail;
  for (double s : {0.0, 1.0}) {
    for (double phi : {0.0, kPi}) {
      const auto grid = optics::operational_wigner(c1, SqueezeParams(s, phi), small);
      const auto fit = optics::small_I_fit(grid, optics::FitModel::SqrtICos);
      worst = std::max(worst, fit.relative_residual);
      if (!detail.empty()) detail += "; ";
      detail += "s=" + fmt(s) + " phi=" + fmt(phi) + ": A " + fmt(fit.parameter) + " residual " +
                fmt(fit.relative_residual);
    }
  }
  r.seconds = clock.seconds();
  r.deviation = worst;
  r.passed = worst < r.tolerance;
  r.detail = detail;
  return r;
}

struct Expected {
  sampler::MomentKind kind;
  int order;
  int axis;
  Complex value;
};

struct SpinCase {
  SpinQuantumNumber s;
  QuantumState state;
  std::vector<Expected> expected;
};

struct PhaseCase {
  sampler::PhaseCdf table;
  std::vector<Expected> expected;
};

SpinCase spin_case(SpinQuantumNumber s, QuantumState state) {
  SpinCase c{s, std::move(state), {}};
  const int top = std::min(s.twice(), 2);
  for (int n = 1; n <= 2; ++n) {
    c.expected.push_back({sampler::MomentKind::AzimuthalCosine, n, 0,
                          expectation(c.state, spin::azimuthal_cosine_op(s, n).matrix)});
  }
  for (int n = 1; n <= top; ++n) {
    c.expected.push_back({sampler::MomentKind::Phasor, n, 0,
                          expectation(c.state, spin::polar_phasor_op(s, n).matrix)});
  }
  for (int axis = 1; axis <= 3; ++axis) {
    for (int n = 1; n <= 2; ++n) {
      c.expected.push_back({sampler::MomentKind::Direction, n, axis,
                            expectation(c.state, spin::direction_closed_form(s, axis, n).matrix)});
    }
  }
  return c;
}

PhaseCase phase_case(const QuantumState& rho, const SqueezeParams& p, const FockSpace& space,
                     int count, int max_order) {
  PhaseCase c{sampler::phase_cdf(rho, p, space, count), {}};
  for (int n = 1; n <= max_order; ++n) {
    c.expected.push_back({sampler::MomentKind::Phasor, n, 0,
                          expectation(rho, optics::phasor_op(n, p, space).matrix)});
  }
  return c;
}

bool within_gate(const sampler::SampleBatch& batch, const std::vector<Expected>& expected,
                 double& worst_z) {
  bool ok = true;
  for (const auto& e : expected) {
    const auto est = sampler::empirical_moments(batch, {e.order}, e.kind, e.axis).front();
    const double diff = std::abs(est.estimate - e.value);
    const double z = est.standard_error > 0.0 ? diff / est.standard_error
                                              : (diff == 0.0 ? 0.0 : 1e300);
    worst_z = std::max(worst_z, z);
    if (!(z <= 5.0)) ok = false;
  }
  return ok;
}

CheckResult criterion_sampler(const VerifyOptions& opt) {
  Stopwatch clock;
  CheckResult r = make("9", "sampler estimators agree with operator expectations", 1.0);
  std::vector<SpinCase> spin_cases;
  spin_cases.push_back(spin_case(SpinQuantumNumber(1), QuantumState::basis(2, 0)));
  spin_cases.push_back(spin_case(SpinQuantumNumber(2),
                                 spin::coherent_state(SpinQuantumNumber(2), SolidAngle(1.1, 0.7))));
  const FockSpace small(16);
  const FockSpace medium(32);
  std::vector<PhaseCase> phase_cases;
  phase_cases.push_back(phase_case(QuantumState::basis(16, 0), SqueezeParams(), small,
                                   opt.sample_count, 2));
  const auto probe =
      optics::squeezed_coherent_state(std::polar(1.5, 0.9), SqueezeParams(), medium).state;
  phase_cases.push_back(phase_case(probe, SqueezeParams(0.5, 0.6), medium, opt.sample_count, 3));

  int passing = 0;
  double worst_z = 0.0;
  for (int t = 0; t < opt.trials; ++t) {
    const std::uint64_t base = opt.seed + 1000ULL * static_cast<std::uint64_t>(t);
    bool ok = true;
    std::uint64_t stream = 0;
    for (const auto& c : spin_cases) {
      const auto batch = sampler::sample_spin(c.state, c.s, opt.sample_count, base + stream++);
      ok = within_gate(batch, c.expected, worst_z) && ok;
    }
    for (const auto& c : phase_cases) {
      const auto batch = sampler::sample_phase(c.table, opt.sample_count, base + stream++);
      ok = within_gate(batch, c.expected, worst_z) && ok;
    }
    if (ok) ++passing;
  }
  r.seconds = clock.seconds();
  const int required = static_cast<int>(std::ceil(0.99 * opt.trials));
  r.deviation = static_cast<double>(opt.trials - passing);
  r.tolerance = static_cast<double>(opt.trials - required);
  r.passed = passing >= required && r.seconds < 120.0;
  r.detail = std::to_string(passing) + "/" + std::to_string(opt.trials) +
             " trials pass (need " + std::to_string(required) + "), largest |z| " +
             fmt(worst_z) + ", count " + std::to_string(opt.sample_count) + ", runtime " +
             fmt(r.seconds) + " s (limit 120 s)";
  return r;
}

// Peak-to-peak oscillation of each intensity row.
std::vector<double> row_amplitudes(const optics::PhaseGrid& g) {
  std::vector<double> out;
  for (Eigen::Index j = 0; j < g.values.rows(); ++j) {
    const Eigen::ArrayXd row = g.values.row(j).real().transpose().array();
    out.push_back(row.maxCoeff() - row.minCoeff());
  }
  return out;
}

// Share of the oscillating (k != 0) power of a row carried by harmonics +-2.
double second_harmonic_share(const optics::PhaseGrid& g, Eigen::Index row) {
  const auto n = static_cast<int>(g.thetas.size());
  double total = 0.0;
  double second = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    Complex c = 0.0;
    for (int m = 0; m < n; ++m) c += g.values(row, m).real() * std::polar(1.0, -k * g.thetas[m]);
    const double power = std::norm(c);
    total += power;
    if (k == 2) second = power;
  }
  return total > 0.0 ? second / total : 0.0;
}

CheckResult criterion_presets(const VerifyOptions&) {
  Stopwatch clock;
  CheckResult r = make("10", "preset C2 Wigner grids: small-I limits and large-I cos^2 shape", 1.0);
  Ratio ratio;
  for (int id : {1, 2}) {
    const auto preset = optics::wigner_preset(id);
    const auto grid = optics::operational_wigner(preset.coeffs, preset.params, preset.grid);
    const std::string tag = "preset " + std::to_string(id);
    const double w0 = grid.values(0, 0).real();
    if (id == 1) {
      ratio.add(tag + " |W(I=0) - 1/2|", std::abs(w0 - 0.5), 0.01);
    } else {
      ratio.add(tag + " W(I=0)", w0, 0.15, true);
    }
    const auto amp = row_amplitudes(grid);
    const auto last = static_cast<Eigen::Index>(amp.size() - 1);
    // rows from I = 1 upward must not lose oscillation amplitude
    double drop = 0.0;
    for (std::size_t j = 1; j < amp.size(); ++j) {
      if (grid.intensities[j - 1] >= 1.0) drop = std::max(drop, amp[j - 1] - amp[j]);
    }
    ratio.add(tag + " amplitude decrease beyond I=1", drop, 1e-6);
    std::size_t quarter = 0;
    while (grid.intensities[quarter] < 0.25 * grid.intensities.back()) ++quarter;
    const double gap_quarter = 1.0 - amp[quarter];
    const double gap_last = 1.0 - amp.back();
    ratio.add(tag + " envelope gap at I_max / gap at I_max/4", gap_last / gap_quarter, 1.0, true);
    ratio.add(tag + " non-cos^2 share of the I_max row", 1.0 - second_harmonic_share(grid, last),
              0.05);
    ratio.note(tag + " amplitude " + fmt(amp[quarter]) + " -> " + fmt(amp.back()));
  }
  r.seconds = clock.seconds();
  ratio.finish(r);
  return r;
}

// --------------------------------------------------------------- invariants

CheckResult simple(std::string id, std::string name, double deviation, double tolerance,
                   const Stopwatch& clock, std::string detail = {}) {
  CheckResult r = make(std::move(id), std::move(name), tolerance);
  r.deviation = deviation;
  r.passed = deviation <= tolerance;
  r.seconds = clock.seconds();
  r.detail = std::move(detail);
  return r;
}

CheckResult inv_expm(const VerifyOptions& opt) {
  Stopwatch clock;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial * 2;
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    m *= (1.0 + trial) / m.norm();  // Frobenius norm up to 10
    const ComplexMatrix prod = matrix_exponential(m) * matrix_exponential(-m);
    worst = std::max(worst, max_abs_distance(prod, ComplexMatrix::Identity(dim, dim)));
  }
  return simple("inv.expm_inverse", "exp(M) exp(-M) = 1 for |M| <= 10", worst, 1e-9, clock);
}

CheckResult inv_expm_unitary(const VerifyOptions& opt) {
  Stopwatch clock;
  std::mt19937_64 rng(opt.seed + 1);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int dim : {2, 5, 11, 21, 64}) {
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
    }
    const ComplexMatrix u = matrix_exponential(a - a.adjoint());
    worst = std::max(worst, max_abs_distance(u.adjoint() * u, ComplexMatrix::Identity(dim, dim)));
  }
  return simple("inv.expm_unitary", "skew-Hermitian exponentials are unitary", worst, 1e-10, clock);
}

CheckResult inv_malus(const VerifyOptions& opt) {
  Stopwatch clock;
  std::mt19937_64 rng(opt.seed + 2);
  std::uniform_real_distribution<double> th(0.0, kPi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (const auto s : spins_up_to(opt.max_spin)) {
    for (int k = 0; k < 5; ++k) {
      const SolidAngle a(th(rng), ph(rng));
      const SolidAngle b(th(rng), ph(rng));
      const double t = spin::malus_transmission(s, a, b);
      worst = std::max(worst, std::abs(t - spin::malus_law(s, spin::angular_distance(a, b))));
    }
  }
  return simple("inv.malus_law", "Malus transmission: overlap and cos^(4s) agree", worst, 1e-10,
                clock);
}

CheckResult inv_spin_propensity(const VerifyOptions& opt) {
  Stopwatch clock;
  std::mt19937_64 rng(opt.seed + 3);
  double worst = 0.0;
  for (const auto s : spins_up_to(opt.max_spin)) {
    const auto state = random_mixed(s.dim(), rng);
    const double total = spin::propensity_moment(
        state, s, [](const SolidAngle&) { return 1.0; }, s.twice(), s.twice());
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return simple("inv.spin_propensity_normalization", "spin propensity integrates to 1", worst,
                1e-10, clock);
}

CheckResult inv_sigma3(const VerifyOptions& opt) {
  Stopwatch clock;
  double worst = 0.0;
  for (const auto s : spins_up_to(opt.max_spin)) {
    worst = std::max(worst, frobenius_distance(spin::direction_closed_form(s, 3, 1).matrix,
                                               -spin::azimuthal_cosine_op(s, 1).matrix));
  }
  return simple("inv.sigma3_theta1", "Sigma_3^(1) = -Theta^(1)", worst, 1e-12, clock);
}

CheckResult inv_spin_hermitian(const VerifyOptions& opt) {
  Stopwatch clock;
  double worst = 0.0;
  for (const auto s : spins_up_to(opt.max_spin)) {
    for (int n = 0; n <= 4; ++n) {
      worst = std::max(worst, hermiticity_check(spin::azimuthal_cosine_op(s, n).matrix).max_deviation);
    }
    for (int axis = 1; axis <= 3; ++axis) {
      for (int n = 1; n <= 3; ++n) {
        worst = std::max(worst, hermiticity_check(spin::direction_op(s, axis, n).matrix).max_deviation);
      }
    }
  }
  return simple("inv.spin_hermitian", "Theta^(n) and Sigma_i^(n) are Hermitian", worst, 1e-10,
                clock);
}

CheckResult inv_bogoliubov(const VerifyOptions&) {
  Stopwatch clock;
  const SqueezeParams p(0.5, 0.7);
  const FockSpace space(96, 32);
  const ComplexMatrix sq = optics::squeeze(p, space);
  const ComplexMatrix b = optics::annihilation(space);
  const ComplexMatrix lhs = sq.adjoint() * b * sq;
  const ComplexMatrix rhs =
      b * std::cosh(p.s()) - b.adjoint() * std::polar(std::sinh(p.s()), p.phi());
  const int interior = 16;
  const double d = max_abs_distance(lhs.topLeftCorner(interior, interior),
                                    rhs.topLeftCorner(interior, interior));
  return simple("inv.bogoliubov", "S^dagger b S = b cosh s - b^dagger e^{i phi} sinh s (levels < 16)",
                d, 1e-8, clock);
}

CheckResult inv_squeezed_vacuum(const VerifyOptions&) {
  Stopwatch clock;
  const SqueezeParams p(0.5, 0.3);
  const FockSpace space(48);
  const ComplexVector vac = optics::squeeze(p, space).col(0);
  double n_mean = 0.0;
  double odd = 0.0;
  for (int k = 0; k < space.n_max(); ++k) {
    n_mean += k * std::norm(vac(k));
    if (k % 2 == 1) odd = std::max(odd, std::abs(vac(k)));
  }
  const double target = std::sinh(p.s()) * std::sinh(p.s());
  const double d = std::abs(n_mean - target);
  return simple("inv.squeezed_vacuum", "<n> = sinh^2 s and only even levels on S|0>",
                std::max(d, odd), 1e-6, clock, "odd-level max " + fmt(odd));
}

CheckResult inv_state_routes(const VerifyOptions&) {
  Stopwatch clock;
  const FockSpace space(48);
  double worst = 0.0;
  for (const auto& [w, s, phi] : std::vector<std::tuple<Complex, double, double>>{
           {Complex(0.8, -0.4), 0.4, 1.0}, {Complex(-1.2, 0.5), 0.7, 2.5}, {Complex(0.0, 1.0), 0.0, 0.0}}) {
    const SqueezeParams p(s, phi);
    const ComplexVector byexp = optics::displacement(w, space) * optics::squeeze(p, space).col(0);
    const ComplexVector exact = optics::squeezed_coherent_amplitudes(w, p, space.n_max());
    worst = std::max(worst, (byexp - exact).head(24).cwiseAbs().maxCoeff());
  }
  return simple("inv.squeezed_state_routes",
                "D(w) S|0> by exponentiation matches the amplitude recurrence (levels < 24)", worst,
                1e-9, clock);
}

CheckResult inv_selection_rule(const VerifyOptions&) {
  Stopwatch clock;
  const FockSpace space(24);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const ComplexMatrix e = optics::phasor_op(n, SqueezeParams(), space).matrix;
    for (int j = 0; j < space.n_max(); ++j) {
      for (int k = 0; k < space.n_max(); ++k) {
        if (k != j + n) worst = std::max(worst, std::abs(e(j, k)));
      }
    }
  }
  // <j|w> ~ w^j and <w|k> ~ conj(w)^k, so e^{i n arg w} survives the angular
  // integral only for k = j + n: E^(n) lowers the photon number by n.
  return simple("inv.phasor_selection_rule", "s = 0 phasors live on the n-th superdiagonal", worst,
                1e-10, clock);
}

CheckResult inv_continuity(const VerifyOptions&) {
  Stopwatch clock;
  const FockSpace space(16);
  const ComplexMatrix e0 = optics::phasor_op(1, SqueezeParams(), space).matrix;
  std::vector<double> d;
  std::string detail;
  for (double s : {0.1, 0.01, 0.001}) {
    d.push_back(frobenius_distance(optics::phasor_op(1, SqueezeParams(s, 0.4), space).matrix, e0));
    detail += (detail.empty() ? "" : ", ") + ("s=" + fmt(s) + ": " + fmt(d.back()));
  }
  const bool monotone = d[0] > d[1] && d[1] > d[2];
  CheckResult r = simple("inv.small_squeeze_continuity", "|E1(s) - E1(0)| -> 0 as s -> 0", d[2],
                         1e-2, clock, detail);
  r.passed = r.passed && monotone;
  return r;
}

CheckResult inv_trig(const VerifyOptions& opt) {
  Stopwatch clock;
  const FockSpace space(24);
  const SqueezeParams p(0.5, 0.3);
  double herm = 0.0;
  for (auto kind : {TrigKind::Cosine, TrigKind::Sine}) {
    for (int k : {1, 2}) {
      herm = std::max(herm, hermiticity_check(optics::trig_op(kind, k, p, space)).max_deviation);
    }
  }
  const ComplexMatrix c2 = optics::trig_op(TrigKind::Cosine, 2, p, space);
  const ComplexMatrix s2 = optics::trig_op(TrigKind::Sine, 2, p, space);
  const double sum = max_abs_distance(c2 + s2, ComplexMatrix::Identity(24, 24));
  std::mt19937_64 rng(opt.seed + 4);
  double outside = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto state = (k % 2 == 0) ? QuantumState::pure(random_vector(24, rng))
                                    : random_mixed(24, rng);
    const double v = expectation(state, c2).real();
    outside = std::max({outside, -v, v - 1.0});
  }
  Ratio ratio;
  ratio.add("hermiticity", herm, 1e-9);
  ratio.add("C2 + S2 - 1", sum, 1e-12);
  ratio.add("<C2> outside [0, 1]", std::max(outside, 0.0), 1e-6);
  CheckResult r = make("inv.trig_operators", "trig operators: Hermitian, C2 + S2 = 1, <C2> in [0, 1]", 1.0);
  ratio.finish(r);
  r.seconds = clock.seconds();
  return r;
}

CheckResult inv_closure(const VerifyOptions& opt) {
  Stopwatch clock;
  const FockSpace space(24);
  std::mt19937_64 rng(opt.seed + 5);
  double worst = 0.0;
  double norm_dev = 0.0;
  for (double s : {0.0, 0.6}) {
    const SqueezeParams p(s, 1.1);
    std::vector<ComplexMatrix> phasors;
    for (int n = 1; n <= 3; ++n) phasors.push_back(optics::phasor_op(n, p, space).matrix);
    for (int k = 0; k < 3; ++k) {
      const auto state = random_low_photon(space.n_max(), 6, rng);
      const auto table = optics::phase_propensity(state, p, space, 128);
      norm_dev = std::max(norm_dev, std::abs(table.normalization - 1.0));
      for (int n = 1; n <= 3; ++n) {
        Complex moment = 0.0;
        for (std::size_t a = 0; a < table.angles.size(); ++a) {
          moment += std::polar(1.0, n * table.angles[a]) * table.densities[a];
        }
        moment /= static_cast<double>(table.angles.size());
        worst = std::max(worst, std::abs(moment - expectation(state, phasors[n - 1])));
      }
    }
  }
  Ratio ratio;
  ratio.add("moment mismatch", worst, 1e-5);
  ratio.add("normalization", norm_dev, 1e-6);
  CheckResult r = make("inv.moment_closure",
                       "<E(n)> equals the Fourier moments of the phase propensity", 1.0);
  ratio.finish(r);
  r.seconds = clock.seconds();
  return r;
}

CheckResult inv_vacuum_period(const VerifyOptions&) {
  Stopwatch clock;
  const FockSpace space(24);
  const auto table =
      optics::phase_propensity(QuantumState::basis(24, 0), SqueezeParams(0.7, 0.4), space, 64);
  double period = 0.0;
  double lo = 1e300;
  double hi = 0.0;
  for (int k = 0; k < 64; ++k) {
    period = std::max(period, std::abs(table.densities[k] - table.densities[(k + 32) % 64]));
    lo = std::min(lo, table.densities[k]);
    hi = std::max(hi, table.densities[k]);
  }
  CheckResult r = simple("inv.squeezed_vacuum_propensity",
                         "squeezed vacuum propensity has period pi and is not uniform", period,
                         1e-9, clock, "min " + fmt(lo) + ", max " + fmt(hi));
  r.passed = r.passed && (hi - lo) > 0.1;
  return r;
}

CheckResult inv_amplitude_reduction(const VerifyOptions&) {
  Stopwatch clock;
  const auto c2 = optics::trig_coefficients(TrigKind::Cosine, 2);
  optics::PhaseGridSpec grid;
  grid.i_max = 8.0;
  grid.n_intensity = 17;
  grid.n_theta = 72;
  double worst = -1e300;  // largest (amp at s=1.5) - (amp at s=0.5) over rows I > 0
  for (double phi : {0.0, 0.5 * kPi}) {
    const auto weak = row_amplitudes(optics::operational_wigner(c2, SqueezeParams(0.5, phi), grid));
    const auto strong = row_amplitudes(optics::operational_wigner(c2, SqueezeParams(1.5, phi), grid));
    for (std::size_t j = 1; j < weak.size(); ++j) worst = std::max(worst, strong[j] - weak[j]);
  }
  CheckResult r = make("inv.squeeze_reduces_amplitude",
                       "C2 Wigner oscillation is smaller at s=1.5 than at s=0.5 on every row", 0.0);
  r.deviation = worst;
  r.passed = worst < 0.0;
  r.seconds = clock.seconds();
  return r;
}

CheckResult inv_limit_consistency(const VerifyOptions&) {
  Stopwatch clock;
  double worst = 0.0;
  for (double s : {0.5, 1.5}) {
    for (double phi : {0.0, 0.5 * kPi, kPi}) {
      const double w = c2_wigner_origin(SqueezeParams(s, phi));
      worst = std::max(worst, std::abs(w - 0.5 * (1.0 - std::tanh(s) * std::cos(phi))));
    }
  }
  return simple("inv.c2_origin_formula", "W_C2(0) = (1 - tanh(s) cos(phi))/2", worst, 1e-8, clock);
}

CheckResult inv_wigner_vacuum(const VerifyOptions&) {
  Stopwatch clock;
  const FockSpace space(32);
  ComplexMatrix proj = ComplexMatrix::Zero(32, 32);
  proj(0, 0) = 1.0;
  optics::PhaseGridSpec g;
  g.i_max = 8.0;
  g.n_intensity = 17;
  g.n_theta = 12;
  const auto grid = optics::wigner_of_operator(proj, space, g);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.intensities.size(); ++j) {
    for (std::size_t k = 0; k < grid.thetas.size(); ++k) {
      worst = std::max(worst, std::abs(grid.values(j, k) - 2.0 * std::exp(-2.0 * grid.intensities[j])));
    }
  }
  return simple("inv.wigner_vacuum", "W of |0><0| is 2 exp(-2I)", worst, 1e-8, clock);
}

CheckResult inv_sampler(const VerifyOptions& opt) {
  Stopwatch clock;
  Ratio ratio;
  const auto s = SpinQuantumNumber(3);
  const auto state = spin::coherent_state(s, SolidAngle(0.9, 2.0));
  const auto a = sampler::sample_spin(state, s, 20000, opt.seed);
  const auto b = sampler::sample_spin(state, s, 20000, opt.seed);
  bool identical = a.proposals == b.proposals;
  for (std::size_t k = 0; identical && k < a.directions.size(); ++k) {
    identical = a.directions[k].theta() == b.directions[k].theta() &&
                a.directions[k].phi() == b.directions[k].phi();
  }
  ratio.add("relative acceptance offset",
            std::abs(a.acceptance_rate - a.analytic_acceptance) / a.analytic_acceptance, 0.1);
  ratio.add("non-identical reruns", identical ? 0.0 : 1.0, 0.0);
  const auto small = sampler::sample_spin(state, s, 1000, opt.seed + 7);
  const auto large = sampler::sample_spin(state, s, 100000, opt.seed + 8);
  const double ratio_se = sampler::empirical_moments(small, {1}).front().standard_error /
                          sampler::empirical_moments(large, {1}).front().standard_error;
  ratio.add("stderr scaling over two decades vs 10", std::abs(ratio_se / 10.0 - 1.0), 0.2);
  CheckResult r = make("inv.sampler_contract",
                       "sampler: acceptance rate, determinism, 1/sqrt(count) errors", 1.0);
  ratio.finish(r);
  r.seconds = clock.seconds();
  return r;
}

}  // namespace

CheckResult run_criterion(int id, const VerifyOptions& options) {
  switch (id) {
    case 1: return criterion_spin_oracles(options);
    case 2: return criterion_completeness(options);
    case 3: return criterion_vanishing_band(options);
    case 4: return criterion_elements(options);
    case 5: return criterion_vacuum(options);
    case 6: return criterion_c2_limits(options);
    case 7: return criterion_classical_limit(options);
    case 8: return criterion_c1_scaling(options);
    case 9: return criterion_sampler(options);
    case 10: return criterion_presets(options);
    default: throw InvalidInput("acceptance criterion id must be 1..10");
  }
}

std::vector<CheckResult> run_acceptance(const VerifyOptions& options) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= 10; ++id) out.push_back(run_criterion(id, options));
  return out;
}

std::vector<CheckResult> run_invariants(const VerifyOptions& options) {
  const std::vector<std::function<CheckResult(const VerifyOptions&)>> checks = {
      inv_expm,          inv_expm_unitary,      inv_malus,          inv_spin_propensity,
      inv_sigma3,        inv_spin_hermitian,    inv_bogoliubov,     inv_squeezed_vacuum,
      inv_state_routes,  inv_selection_rule,    inv_continuity,     inv_trig,
      inv_closure,       inv_vacuum_period,     inv_amplitude_reduction,
      inv_limit_consistency, inv_wigner_vacuum, inv_sampler};
  std::vector<CheckResult> out;
  for (const auto& check : checks) out.push_back(check(options));
  return out;
}

std::string format_line(const CheckResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "deviation=%.3e tolerance=%.3e time=%.2fs", r.deviation,
                r.tolerance, r.seconds);
  std::string line = std::string(r.passed ? "PASS" : "FAIL") + " [" + r.id + "] " + r.name + " " +
                     buf;
  if (!r.detail.empty()) line += " | " + r.detail;
  return line;
}

}  // namespace opobs::verify
