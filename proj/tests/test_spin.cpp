#include <doctest.h>

#include "opobs/spin.hpp"

#include <cmath>
#include <random>

using namespace opobs;
using namespace opobs::spin;

namespace {

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_L.
void gauss_legendre(int l, std::vector<double>& x, std::vector<double>& w) {
  x.assign(l, 0.0);
  w.assign(l, 0.0);
  for (int i = 0; i < l; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (l + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= l; ++k) {
        const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = l * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        x[i] = z;
        w[i] = 2.0 / ((1 - z * z) * dp * dp);
        break;
      }
    }
  }
}

// Closed-form coherent amplitudes written out independently of the library.
ComplexVector coherent(int twice_s, double theta, double phi) {
  ComplexVector v(twice_s + 1);
  for (int k = 0; k <= twice_s; ++k) {
    v(k) = std::sqrt(binomial(twice_s, k)) * std::pow(std::cos(theta / 2), twice_s - k) *
           std::pow(std::sin(theta / 2), k) * std::polar(1.0, -phi * k);
  }
  return v;
}

// int dOmega f(Omega) (2s+1)/(4 pi) |Omega><Omega| with GL in theta on [0, pi]
// and a uniform phi grid.
template <class F>
ComplexMatrix sphere_oracle(int twice_s, F f, int l = 60, int m = 60) {
  std::vector<double> x, w;
  gauss_legendre(l, x, w);
  const int d = twice_s + 1;
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < l; ++i) {
    const double theta = M_PI / 2 * (x[i] + 1);
    const double wt = w[i] * M_PI / 2 * std::sin(theta);
    for (int j = 0; j < m; ++j) {
      const double phi = 2 * M_PI * j / m;
      const ComplexVector v = coherent(twice_s, theta, phi);
      out += (wt * 2 * M_PI / m) * f(theta, phi) * (d / (4 * M_PI)) * (v * v.adjoint());
    }
  }
  return out;
}

ComplexMatrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("spin quantum numbers and algebra") {
  CHECK(SpinQuantumNumber::from_double(1.5).twice() == 3);
  CHECK_THROWS_AS(SpinQuantumNumber::from_double(0.7), InvalidInput);
  CHECK_THROWS_AS(SpinQuantumNumber(0), InvalidInput);
  for (int t = 1; t <= 10; ++t) {
    const SpinAlgebra a{SpinQuantumNumber(t)};
    CHECK(max_abs_distance(a.s_3 * a.s_plus - a.s_plus * a.s_3, a.s_plus) < 1e-12);
    CHECK(max_abs_distance(a.s_plus * a.s_minus - a.s_minus * a.s_plus, 2.0 * a.s_3) < 1e-12);
    const double s = 0.5 * t;
    const ComplexMatrix casimir = a.s_1() * a.s_1() + a.s_2() * a.s_2() + a.s_3 * a.s_3;
    CHECK(max_abs_distance(casimir, s * (s + 1) * a.identity()) < 1e-12);
  }
}

TEST_CASE("coherent states") {
  for (int t = 1; t <= 6; ++t) {
    const SpinQuantumNumber s(t);
    const auto north = coherent_state(s, SolidAngle(0.0, 1.3));
    CHECK(max_abs_distance(north.vector(), ComplexVector::Unit(t + 1, 0)) == 0.0);
    for (auto [th, ph] : {std::pair{0.4, 0.2}, {1.9, 4.0}, {3.0, 5.5}}) {
      const ComplexVector a = coherent_state(s, SolidAngle(th, ph)).vector();
      const ComplexVector b = coherent(t, th, ph);
      CHECK(std::abs(a.norm() - 1.0) < 1e-14);
      CHECK((a - b).norm() < 1e-12);
      CHECK((coherent_amplitudes(s, SolidAngle(th, ph)) - b).norm() < 1e-13);
    }
  }
  const ComplexVector flip = coherent_state(SpinQuantumNumber(1), SolidAngle(M_PI, 0.0)).vector();
  CHECK(std::abs(std::abs(flip(1)) - 1.0) < 1e-14);
  const ComplexVector eq = coherent_state(SpinQuantumNumber(1), SolidAngle(M_PI / 2, 0.0)).vector();
  CHECK(std::abs(std::abs(eq(1)) - std::sin(M_PI / 4)) < 1e-14);
  CHECK(std::abs(eq(0) - std::cos(M_PI / 4)) < 1e-14);
}

TEST_CASE("Malus law") {
  const SpinQuantumNumber half(1), one(2);
  const SolidAngle a(0.7, 1.1);
  CHECK(malus_transmission(half, a, a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(malus_transmission(half, SolidAngle(0.0, 0.0), SolidAngle(M_PI, 0.0)) < 1e-30);
  CHECK(malus_transmission(one, SolidAngle(0.0, 0.0), SolidAngle(M_PI / 2, 0.3)) ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(malus_law(one, M_PI / 2) == doctest::Approx(0.25).epsilon(1e-14));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(0.0, M_PI), ph(0.0, 2 * M_PI);
  for (int t = 1; t <= 10; ++t)
    for (int trial = 0; trial < 20; ++trial) {
      const SolidAngle x(th(rng), ph(rng)), y(th(rng), ph(rng));
      const SpinQuantumNumber s(t);
      CHECK(std::abs(malus_transmission(s, x, y) - malus_law(s, angular_distance(x, y))) < 1e-10);
    }
}

TEST_CASE("POVM density and propensity") {
  const SpinQuantumNumber half(1);
  CHECK(povm_density(half, SolidAngle(1.0, 2.0)).trace().real() ==
        doctest::Approx(2.0 / (4 * M_PI)).epsilon(1e-14));
  const ComplexMatrix at_pole = povm_density(SpinQuantumNumber(3), SolidAngle(0.0, 0.0));
  CHECK(std::abs(at_pole(0, 0) - 4.0 / (4 * M_PI)) < 1e-15);
  CHECK(at_pole.cwiseAbs().sum() == doctest::Approx(4.0 / (4 * M_PI)));

  for (int t = 1; t <= 10; ++t) {
    const auto q = sphere_quadrature(t, t);
    ComplexMatrix total = ComplexMatrix::Zero(t + 1, t + 1);
    double wsum = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
      total += q.weights[k] * povm_density(SpinQuantumNumber(t), q.nodes[k]);
      wsum += q.weights[k];
    }
    CHECK(wsum == doctest::Approx(4 * M_PI).epsilon(1e-14));
    CHECK(max_abs_distance(total, ComplexMatrix::Identity(t + 1, t + 1)) < 1e-10);
  }

  const SpinQuantumNumber s2(4);
  CHECK(propensity(QuantumState::basis(2, 0), half, SolidAngle(0.0, 0.0)) ==
        doctest::Approx(2 / (4 * M_PI)));
  CHECK(propensity(QuantumState::basis(2, 0), half, SolidAngle(M_PI, 0.0)) < 1e-30);
  CHECK_THROWS_AS(propensity(QuantumState::basis(3, 0), half, SolidAngle(0.0, 0.0)), InvalidInput);

  std::mt19937_64 rng(17);
  const auto rho = QuantumState::mixed(random_density(5, rng));
  const double total = propensity_moment(rho, s2, [](const SolidAngle&) { return 1.0; }, 4, 4);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sphere quadrature exactness") {
  const auto q = sphere_quadrature(2, 0);
  double c0 = 0, c1 = 0, c2 = 0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const double c = std::cos(q.nodes[k].theta());
    c0 += q.weights[k];
    c1 += q.weights[k] * c;
    c2 += q.weights[k] * c * c;
  }
  CHECK(std::abs(c0 - 4 * M_PI) < 1e-12);
  CHECK(std::abs(c1) < 1e-12);
  CHECK(std::abs(c2 - 4 * M_PI / 3) < 1e-12);
}

TEST_CASE("azimuthal cosine operators") {
  for (int t = 1; t <= 10; ++t) {
    const SpinQuantumNumber s(t);
    const SpinAlgebra alg(s);
    const double sv = s.value();
    CHECK(max_abs_distance(azimuthal_cosine_op(s, 0).matrix, alg.identity()) < 1e-15);
    CHECK(max_abs_distance(azimuthal_cosine_op(s, 1).matrix, -alg.s_3 / (1 + sv)) < 1e-13);
    const ComplexMatrix two = 2.0 * alg.s_3 * alg.s_3 / ((1 + sv) * (3 + 2 * sv)) +
                              alg.identity() / (3 + 2 * sv);
    CHECK(max_abs_distance(azimuthal_cosine_op(s, 2).matrix, two) < 1e-13);
    for (int n = 0; n <= std::min(t, 4); ++n) {
      const ComplexMatrix oracle = sphere_oracle(t, [n](double th, double) {
        return Complex(std::pow(std::cos(th), n));
      });
      CHECK(frobenius_distance(azimuthal_cosine_op(s, n).matrix, oracle) < 1e-9);
    }
  }
  const SpinQuantumNumber half(1);
  CHECK(max_abs_distance(azimuthal_cosine_op(half, 2).matrix,
                         ComplexMatrix::Identity(2, 2) / 3.0) < 1e-12);
  // A factorization is impossible: Theta2 - Theta1^2 = (1/3 - 1/9) 1 for s = 1/2.
  const ComplexMatrix t1 = azimuthal_cosine_op(half, 1).matrix;
  const ComplexMatrix gap = azimuthal_cosine_op(half, 2).matrix - t1 * t1;
  CHECK(max_abs_distance(gap, ComplexMatrix::Identity(2, 2) * (1.0 / 3 - 1.0 / 9)) < 1e-14);
  CHECK_THROWS_AS(azimuthal_cosine_op(half, -1), InvalidInput);
}

TEST_CASE("polar phasor operators") {
  const SpinQuantumNumber half(1);
  const ComplexMatrix e1 = polar_phasor_op(half, 1).matrix;
  CHECK(std::abs(e1(1, 0) - M_PI / 4) < 1e-14);
  CHECK(std::abs(e1(0, 0)) + std::abs(e1(0, 1)) + std::abs(e1(1, 1)) == 0.0);
  const ComplexMatrix oracle = sphere_oracle(1, [](double, double ph) { return std::polar(1.0, ph); });
  CHECK(std::abs(oracle(1, 0) - M_PI / 4) < 1e-10);

  for (int t = 1; t <= 10; ++t) {
    const SpinQuantumNumber s(t);
    const int d = t + 1;
    CHECK(max_abs_distance(polar_phasor_op(s, 0).matrix, ComplexMatrix::Identity(d, d)) == 0.0);
    for (int n = t + 1; n <= t + 3; ++n) {
      CHECK(polar_phasor_op(s, n).matrix.cwiseAbs().maxCoeff() == 0.0);
      CHECK(polar_phasor_op(s, -n).matrix.cwiseAbs().maxCoeff() == 0.0);
    }
    for (int n = 1; n <= std::min(t, 4); ++n) {
      const ComplexMatrix e = polar_phasor_op(s, n).matrix;
      const ComplexMatrix orc =
          sphere_oracle(t, [n](double, double ph) { return std::polar(1.0, n * ph); });
      CHECK(frobenius_distance(e, orc) < 1e-9);
      CHECK(max_abs_distance(polar_phasor_op(s, -n).matrix, e.adjoint()) == 0.0);
    }
  }

  // Second order: S+^2 / ((s + S3 + 2)(s - S3)) on the non-singular elements, s = 3/2.
  const SpinQuantumNumber s32(3);
  const SpinAlgebra alg(s32);
  const ComplexMatrix e2 = polar_phasor_op(s32, 2).matrix;
  const ComplexMatrix sp2 = alg.s_plus * alg.s_plus;
  for (int k = 0; k < 4; ++k) {
    const double m = s32.m(k);
    if (1.5 - m == 0.0) continue;
    const double factor = 1.0 / ((1.5 + m + 2) * (1.5 - m));
    for (int r = 0; r < 4; ++r) CHECK(std::abs(e2(r, k) - sp2(r, k) * factor) < 1e-13);
  }
}

TEST_CASE("direction operators") {
  for (int t = 1; t <= 8; ++t) {
    const SpinQuantumNumber s(t);
    const SpinAlgebra alg(s);
    for (int axis = 1; axis <= 3; ++axis) {
      CHECK(max_abs_distance(direction_op(s, axis, 0).matrix, alg.identity()) < 1e-12);
      for (int n = 1; n <= 2; ++n) {
        const ComplexMatrix quad = direction_op(s, axis, n).matrix;
        const ComplexMatrix closed = direction_closed_form(s, axis, n).matrix;
        CHECK(frobenius_distance(quad, closed) < 1e-10);
        const ComplexMatrix orc = sphere_oracle(t, [axis, n](double th, double ph) {
          const double v[3] = {std::cos(ph) * std::sin(th), std::sin(ph) * std::sin(th),
                               -std::cos(th)};
          return Complex(std::pow(v[axis - 1], n));
        });
        CHECK(frobenius_distance(closed, orc) < 1e-9);
      }
    }
  }
  const SpinQuantumNumber one(2);
  const SpinAlgebra a1(one);
  CHECK(max_abs_distance(direction_op(one, 3, 1).matrix, a1.s_3 / 2.0) < 1e-12);
  // Sigma_3^(1) = -Theta^(1).
  CHECK(max_abs_distance(direction_op(one, 3, 1).matrix, -azimuthal_cosine_op(one, 1).matrix) < 1e-12);
  CHECK(max_abs_distance(direction_op(SpinQuantumNumber(1), 1, 2).matrix,
                         ComplexMatrix::Identity(2, 2) / 3.0) < 1e-12);
  CHECK_THROWS_AS(direction_op(one, 4, 1), InvalidInput);
}

TEST_CASE("operator by quadrature") {
  const SpinQuantumNumber s2(4);
  const SpinAlgebra alg(s2);
  CHECK(max_abs_distance(operator_by_quadrature(s2, [](const SolidAngle&) { return Complex(1.0); }, 4, 4),
                         alg.identity()) < 1e-10);
  const ComplexMatrix c = operator_by_quadrature(
      s2, [](const SolidAngle& o) { return Complex(std::cos(o.theta())); }, 5, 4);
  CHECK(max_abs_distance(c, -alg.s_3 / 3.0) < 1e-10);
  const ComplexMatrix e = operator_by_quadrature(
      SpinQuantumNumber(1), [](const SolidAngle& o) { return std::polar(1.0, o.phi()); }, 2, 2);
  CHECK(std::abs(e(1, 0) - M_PI / 4) < 1e-10);
  CHECK(std::abs(e(0, 1)) < 1e-10);
}

TEST_CASE("operational spin operators are Hermitian") {
  for (int t = 1; t <= 10; ++t) {
    const SpinQuantumNumber s(t);
    for (int n = 0; n <= 4; ++n) CHECK(hermiticity_check(azimuthal_cosine_op(s, n).matrix).hermitian);
    for (int axis = 1; axis <= 3; ++axis)
      for (int n = 1; n <= 3; ++n) CHECK(hermiticity_check(direction_op(s, axis, n).matrix, 1e-10).hermitian);
  }
}
