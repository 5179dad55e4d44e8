#include <doctest.h>

#include "opobs/optics.hpp"

#include <cmath>

using namespace opobs;
using namespace opobs::optics;

namespace {

ComplexVector glauber(Complex beta, int n) {
  ComplexVector v(n);
  for (int k = 0; k < n; ++k)
    v(k) = std::exp(-0.5 * std::norm(beta) - 0.5 * std::lgamma(k + 1.0)) * std::pow(beta, k);
  return v;
}

// <2m|S(s, phi)|0> = (-e^{i phi} tanh s)^m sqrt((2m)!)/(2^m m!) / sqrt(cosh s).
ComplexVector squeezed_vacuum(double s, double phi, int n) {
  ComplexVector v = ComplexVector::Zero(n);
  for (int m = 0; 2 * m < n; ++m) {
    const double mag = std::exp(0.5 * std::lgamma(2 * m + 1.0) - m * std::log(2.0) -
                                std::lgamma(m + 1.0)) / std::sqrt(std::cosh(s));
    v(2 * m) = mag * std::pow(-std::polar(std::tanh(s), phi), m);
  }
  return v;
}

}  // namespace

TEST_CASE("annihilation operator") {
  const FockSpace space(10);
  const ComplexMatrix b = annihilation(space);
  CHECK((b * ComplexVector::Unit(10, 0)).norm() == 0.0);
  CHECK((b * ComplexVector::Unit(10, 1) - ComplexVector::Unit(10, 0)).norm() < 1e-15);
  const ComplexMatrix comm = b * b.adjoint() - b.adjoint() * b;
  CHECK(max_abs_distance(comm.topLeftCorner(9, 9), ComplexMatrix::Identity(9, 9)) < 1e-14);
  CHECK_THROWS_AS(FockSpace(1), InvalidInput);
  CHECK_THROWS_AS(SqueezeParams(-0.1, 0.0), InvalidInput);
  CHECK(SqueezeParams(0.2, -M_PI / 2).phi() == doctest::Approx(3 * M_PI / 2));
}

TEST_CASE("displacement") {
  const FockSpace space(30);
  CHECK(max_abs_distance(displacement(0.0, space), ComplexMatrix::Identity(30, 30)) < 1e-14);
  const Complex beta(0.8, -0.6);
  const ComplexVector col = displacement(beta, space).col(0);
  CHECK((col - glauber(beta, 30)).norm() < 1e-12);

  std::vector<std::string> warnings;
  displacement(Complex(1.0, 0.0), space, &warnings);
  CHECK(warnings.empty());
  displacement(Complex(3.0, 0.0), space, &warnings);
  CHECK(warnings.size() == 1);

  // Exact elements against the buffered exponential on interior levels.
  const ComplexMatrix exact = displacement_elements(beta, 12);
  const ComplexMatrix buffered = displacement(beta, FockSpace(40, 24)).topLeftCorner(12, 12);
  CHECK(max_abs_distance(exact, buffered) < 1e-12);
  CHECK((displacement_elements(Complex(2.5, 1.0), 40).col(0) - glauber(Complex(2.5, 1.0), 40)).norm() < 1e-12);
}

TEST_CASE("squeeze operator") {
  const FockSpace space(48);
  CHECK(max_abs_distance(squeeze(SqueezeParams(0.0, 0.0), space), ComplexMatrix::Identity(48, 48)) < 1e-14);
  for (double phi : {0.0, 1.0, M_PI}) {
    const ComplexVector v = squeeze(SqueezeParams(0.5, phi), space).col(0);
    CHECK((v - squeezed_vacuum(0.5, phi, 48)).norm() < 1e-10);
    double n_mean = 0.0;
    for (int k = 0; k < 48; ++k) n_mean += k * std::norm(v(k));
    CHECK(std::abs(n_mean - std::sinh(0.5) * std::sinh(0.5)) < 1e-6);
  }
  CHECK_THROWS_AS(squeeze(SqueezeParams(3.5, 0.0), space), InvalidInput);
}

TEST_CASE("squeezed coherent states") {
  const FockSpace space(40);
  const auto vac = squeezed_coherent_state(0.0, SqueezeParams(), space);
  CHECK((vac.state.vector() - ComplexVector::Unit(40, 0)).norm() < 1e-15);
  const auto coh = squeezed_coherent_state(1.0, SqueezeParams(), space);
  CHECK((coh.state.vector() - glauber(1.0, 40)).norm() < 1e-14);
  CHECK(std::abs(coh.state.vector()(3) - std::exp(-0.5) / std::sqrt(6.0)) < 1e-15);

  const auto sv = squeezed_coherent_state(0.0, SqueezeParams(0.7, 2.0), space);
  CHECK((sv.state.vector() - squeezed_vacuum(0.7, 2.0, 40)).norm() < 1e-8);

  // D(w) S|0> by exponentiation against the recurrence.
  const Complex w(0.9, 0.4);
  const SqueezeParams p(0.6, 1.1);
  const FockSpace big(80, 32);
  const ComplexVector via_exp = (displacement(w, big) * squeeze(p, big)).col(0).head(20);
  CHECK((via_exp - squeezed_coherent_amplitudes(w, p, 20)).norm() < 1e-9);

  CHECK_THROWS_AS(squeezed_coherent_state(Complex(5.0, 0.0), SqueezeParams(), FockSpace(10)),
                  TruncationError);
}

TEST_CASE("plane completeness") {
  const FockSpace space(24, 16);
  for (double s : {0.0, 0.5, 1.5}) {
    const PlaneIntegral id = plane_integral(0, SqueezeParams(s, 0.8), space);
    CHECK(max_abs_distance(id.matrix.topLeftCorner(8, 8), ComplexMatrix::Identity(8, 8)) < 1e-6);
    CHECK(id.convergence_delta < 1e-7);
  }
  PlaneQuadratureSpec tight;
  tight.tolerance = 1e-300;
  tight.max_doublings = 1;
  CHECK_THROWS_AS(plane_integral(0, SqueezeParams(), FockSpace(8), tight), NonConvergence);
}

TEST_CASE("phasor operators at zero squeezing") {
  const FockSpace space(20);
  for (int n = 1; n <= 3; ++n) {
    const ComplexMatrix e = phasor_op(n, SqueezeParams(), space).matrix;
    CHECK(std::abs(e(0, 0)) < 1e-12);
    // <j|E(n)|j+n> = Gamma(j + n/2 + 1)/sqrt(j! (j+n)!), every other element zero.
    double off = 0.0;
    for (int j = 0; j < 20; ++j)
      for (int k = 0; k < 20; ++k) {
        if (k == j + n) {
          const double ref = std::exp(std::lgamma(j + 0.5 * n + 1) -
                                      0.5 * (std::lgamma(j + 1.0) + std::lgamma(j + n + 1.0)));
          CHECK(std::abs(e(j, k) - ref) < 1e-10);
        } else {
          off = std::max(off, std::abs(e(j, k)));
        }
      }
    CHECK(off < 1e-10);
    CHECK(max_abs_distance(phasor_op(-n, SqueezeParams(), space).matrix, e.adjoint()) < 1e-14);
  }
  CHECK_THROWS_AS(phasor_op(0, SqueezeParams(), space), InvalidInput);
  CHECK_THROWS_AS(phasor_op(9, SqueezeParams(), space), InvalidInput);
}

TEST_CASE("vacuum elements vanish for squeezed phasors of odd order") {
  const FockSpace space(24);
  for (double phi : {0.0, 1.3})
    for (int n : {1, 3}) {
      const ComplexMatrix e = phasor_op(n, SqueezeParams(0.8, phi), space).matrix;
      CHECK(std::abs(e(0, 0)) < 1e-10);
    }
}

TEST_CASE("trigonometric operators") {
  const FockSpace space(32);
  const SqueezeParams none;
  const ComplexMatrix c2 = trig_op(TrigKind::Cosine, 2, none, space);
  const ComplexMatrix s2 = trig_op(TrigKind::Sine, 2, none, space);
  CHECK(std::abs(c2(0, 0) - 0.5) < 1e-6);
  CHECK(std::abs(trig_op(TrigKind::Cosine, 1, none, space)(0, 0)) < 1e-10);
  CHECK(max_abs_distance(c2 + s2, ComplexMatrix::Identity(32, 32)) < 1e-12);
  CHECK(hermiticity_check(c2, 1e-9).hermitian);

  const FourierCoefficients c1{{1, 0.5}, {-1, 0.5}};
  CHECK(max_abs_distance(periodic_function_op(c1, none, space, {}, true),
                         trig_op(TrigKind::Cosine, 1, none, space)) < 1e-14);
  const FourierCoefficients c2f{{2, 0.25}, {-2, 0.25}, {0, 0.5}};
  CHECK(max_abs_distance(periodic_function_op(c2f, none, space, {}, true), c2) < 1e-14);
  CHECK(max_abs_distance(periodic_function_op({{0, 1.0}}, none, space),
                         ComplexMatrix::Identity(32, 32)) == 0.0);
  CHECK_THROWS_AS(periodic_function_op({{1, 0.5}, {-1, 0.4}}, none, space, {}, true), InvalidInput);
  CHECK_NOTHROW(periodic_function_op({{1, 0.5}, {-1, 0.4}}, none, space, {}, false));
}

TEST_CASE("classical limit of the cosine operator") {
  const FockSpace space(64);
  const ComplexMatrix c1 = trig_op(TrigKind::Cosine, 1, SqueezeParams(), space);
  const auto probe = QuantumState::pure(glauber(5.0, 64) / glauber(5.0, 64).norm());
  CHECK(std::abs(expectation(probe, c1) - 1.0) < 0.02);
}

TEST_CASE("phase propensity") {
  const FockSpace space(16);
  const auto vac = QuantumState::basis(16, 0);
  const auto flat = phase_propensity(vac, SqueezeParams(), space, 32);
  for (double p : flat.densities) CHECK(std::abs(p - 1.0) < 1e-6);
  CHECK(std::abs(flat.normalization - 1.0) < 1e-6);

  const auto sq = phase_propensity(vac, SqueezeParams(0.8, 0.5), space, 64);
  double lo = 1e9, hi = 0.0;
  for (int k = 0; k < 64; ++k) {
    CHECK(std::abs(sq.densities[k] - sq.densities[(k + 32) % 64]) < 1e-9);
    lo = std::min(lo, sq.densities[k]);
    hi = std::max(hi, sq.densities[k]);
  }
  CHECK(hi - lo > 0.1);
  CHECK(std::abs(sq.normalization - 1.0) < 1e-6);

  // Fourier moments of Pr equal the phasor expectations.
  const FockSpace big(32);
  const auto rho = squeezed_coherent_state(Complex(1.2, 0.7), SqueezeParams(0.3, 0.0), big).state;
  const SqueezeParams filter(0.5, 1.0);
  const int nodes = 128;
  const auto tab = phase_propensity(rho, filter, big, nodes);
  for (int n = 1; n <= 3; ++n) {
    Complex moment = 0.0;
    for (int k = 0; k < nodes; ++k) moment += std::polar(tab.densities[k], n * tab.angles[k]) / double(nodes);
    CHECK(std::abs(moment - expectation(rho, phasor_op(n, filter, big).matrix)) < 1e-6);
  }

  PropensitySpec short_range;
  short_range.r_max = 2.0;
  CHECK_THROWS_AS(phase_propensity(vac, SqueezeParams(), space, 8, short_range), TruncationError);
  CHECK_THROWS_AS(phase_propensity(QuantumState::basis(8, 0), SqueezeParams(), space, 8), InvalidInput);
}

TEST_CASE("squeezing continuity") {
  const FockSpace space(16);
  const ComplexMatrix e0 = phasor_op(1, SqueezeParams(), space).matrix;
  double prev = 1e9;
  for (double s : {0.1, 0.01, 0.001}) {
    const double d = frobenius_distance(phasor_op(1, SqueezeParams(s, 0.4), space).matrix, e0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
}
