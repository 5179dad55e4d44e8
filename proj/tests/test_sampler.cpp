#include <doctest.h>

#include "opobs/sampler.hpp"

#include <algorithm>
#include <cmath>

using namespace opobs;
using namespace opobs::sampler;

namespace {

ComplexVector glauber(Complex beta, int n) {
  ComplexVector v(n);
  for (int k = 0; k < n; ++k)
    v(k) = std::exp(-0.5 * std::norm(beta) - 0.5 * std::lgamma(k + 1.0)) * std::pow(beta, k);
  return v / v.norm();
}

}  // namespace

TEST_CASE("spin samples reproduce the azimuthal cosine") {
  const spin::SpinQuantumNumber half(1);
  const auto down = QuantumState::basis(2, 0);
  const SampleBatch b = sample_spin(down, half, 100000, 42);
  CHECK(b.count == 100000);
  CHECK(b.analytic_acceptance == doctest::Approx(0.5));
  CHECK(std::abs(b.acceptance_rate - 0.5) < 0.01);
  const auto m = empirical_moments(b, {0, 1}, MomentKind::AzimuthalCosine);
  CHECK(m[0].estimate == Complex(1.0));
  CHECK(m[0].standard_error == 0.0);
  const double expected = expectation(down, spin::azimuthal_cosine_op(half, 1).matrix).real();
  CHECK(expected == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(m[1].estimate.real() - expected) < 5 * m[1].standard_error);
}

TEST_CASE("uniform mixed spin state has no preferred azimuth") {
  const spin::SpinQuantumNumber one(2);
  const SampleBatch b = sample_spin(QuantumState::maximally_mixed(3), one, 100000, 7);
  const auto m = empirical_moments(b, {1}, MomentKind::Phasor);
  CHECK(std::abs(m[0].estimate) < 5 * m[0].standard_error);
}

TEST_CASE("direction moments match the direction operators") {
  const spin::SpinQuantumNumber one(2);
  const auto state = spin::coherent_state(one, spin::SolidAngle(1.1, 0.7));
  const SampleBatch b = sample_spin(state, one, 100000, 99);
  for (int axis = 1; axis <= 3; ++axis) {
    const auto m = empirical_moments(b, {1, 2}, MomentKind::Direction, axis);
    for (const auto& e : m) {
      const double expected = expectation(state, spin::direction_op(one, axis, e.order).matrix).real();
      CHECK(std::abs(e.estimate.real() - expected) < 5 * e.standard_error);
    }
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const spin::SpinQuantumNumber s(3);
  const auto state = QuantumState::maximally_mixed(4);
  const SampleBatch a = sample_spin(state, s, 500, 1234), b = sample_spin(state, s, 500, 1234);
  const SampleBatch c = sample_spin(state, s, 500, 1235);
  bool same = true, differs = false;
  for (int k = 0; k < 500; ++k) {
    same = same && a.directions[k].theta() == b.directions[k].theta() &&
           a.directions[k].phi() == b.directions[k].phi();
    differs = differs || a.directions[k].theta() != c.directions[k].theta();
  }
  CHECK(same);
  CHECK(differs);

  const optics::FockSpace space(16);
  const auto vac = QuantumState::basis(16, 0);
  const SampleBatch p = sample_phase(vac, optics::SqueezeParams(0.4, 1.0), space, 1000, 5);
  const SampleBatch q = sample_phase(vac, optics::SqueezeParams(0.4, 1.0), space, 1000, 5);
  CHECK(p.phases == q.phases);
}

TEST_CASE("vacuum phases are uniform") {
  const optics::FockSpace space(16);
  const SampleBatch b = sample_phase(QuantumState::basis(16, 0), optics::SqueezeParams(), space, 10000, 2024);
  std::vector<double> x = b.phases;
  std::sort(x.begin(), x.end());
  double d = 0.0;
  const double n = double(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = x[k] / (2 * M_PI);
    d = std::max({d, std::abs((k + 1) / n - f), std::abs(f - k / n)});
  }
  // Kolmogorov-Smirnov critical value at alpha = 0.01.
  CHECK(d < 1.628 / std::sqrt(n));
  for (double phi : x) CHECK((phi >= 0.0 && phi < 2 * M_PI));

  const auto m = empirical_moments(b, {2});
  CHECK(std::abs(m[0].estimate) < 5 * m[0].standard_error);
}

TEST_CASE("coherent phases concentrate on the amplitude phase") {
  const optics::FockSpace space(48);
  const auto rho = QuantumState::pure(glauber(std::polar(4.0, M_PI / 3), 48));
  const SampleBatch b = sample_phase(rho, optics::SqueezeParams(), space, 100000, 77);
  const auto m = empirical_moments(b, {1});
  const double mean_angle = std::arg(m[0].estimate);
  const double se_angle = m[0].standard_error / std::abs(m[0].estimate);
  CHECK(std::abs(mean_angle - M_PI / 3) < 5 * se_angle);
}

TEST_CASE("phase moments match phasor expectations") {
  const optics::FockSpace space(32);
  const optics::SqueezeParams filter(0.5, 0.6);
  const auto rho = optics::squeezed_coherent_state(std::polar(1.5, 0.9), optics::SqueezeParams(), space).state;
  const PhaseCdf table = phase_cdf(rho, filter, space, 100000);
  CHECK(table.cdf.front() == 0.0);
  CHECK(table.cdf.back() == doctest::Approx(1.0).epsilon(1e-12));
  const SampleBatch b = sample_phase(table, 100000, 31);
  for (const auto& e : empirical_moments(b, {1, 2, 3})) {
    const Complex expected = expectation(rho, optics::phasor_op(e.order, filter, space).matrix);
    CHECK(std::abs(e.estimate - expected) < 5 * e.standard_error);
  }
}

TEST_CASE("standard errors scale as one over root count") {
  const spin::SpinQuantumNumber one(2);
  const auto state = QuantumState::maximally_mixed(3);
  const auto small = empirical_moments(sample_spin(state, one, 1000, 3), {1}, MomentKind::AzimuthalCosine);
  const auto large = empirical_moments(sample_spin(state, one, 100000, 3), {1}, MomentKind::AzimuthalCosine);
  const double ratio = small[0].standard_error / large[0].standard_error;
  CHECK(ratio > 8.0);
  CHECK(ratio < 12.0);
}

TEST_CASE("sampler input validation") {
  CHECK_THROWS_AS(sample_spin(QuantumState::basis(3, 0), spin::SpinQuantumNumber(1), 10, 1), InvalidInput);
  CHECK_THROWS_AS(sample_spin(QuantumState::basis(2, 0), spin::SpinQuantumNumber(1), 0, 1), InvalidInput);
  const SampleBatch phase = sample_phase(QuantumState::basis(8, 0), optics::SqueezeParams(), optics::FockSpace(8), 10, 1);
  CHECK_THROWS_AS(empirical_moments(phase, {1}, MomentKind::AzimuthalCosine), InvalidInput);
}
