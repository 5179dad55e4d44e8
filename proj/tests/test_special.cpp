#include <doctest.h>

#include "opobs/core.hpp"
#include "opobs/special.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <random>

using namespace opobs;
using boost::multiprecision::cpp_rational;

namespace {

// Exact terminating 2F1(-n, b; c; z) for rational b, c, z.
cpp_rational hyp2f1_exact(int n, cpp_rational b, cpp_rational c, cpp_rational z) {
  cpp_rational term = 1, sum = 1;
  for (int k = 0; k < n; ++k) {
    term *= cpp_rational(k - n) * (b + k) / ((c + k) * (k + 1)) * z;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("log_gamma") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-14));
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
  for (double x : {0.1, 1.7, 3.25, 12.5, 40.0, 170.3})
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma(0.0), InvalidInput);
  CHECK_THROWS_AS(log_gamma(-1.5), InvalidInput);
}

TEST_CASE("gamma_ratio") {
  CHECK(gamma_ratio({{1.5, 1.5}, {2.0, 2.0}}) == doctest::Approx(M_PI / 4).epsilon(1e-14));
  CHECK(gamma_ratio({{5.0}, {5.0}}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_ratio({{3.7}, {0.0}}) == 0.0);
  CHECK(gamma_ratio({{2.2}, {-3.0}}) == 0.0);
  CHECK(gamma_ratio({{}, {}}) == 1.0);
  CHECK_THROWS_AS(gamma_ratio({{-2.0}, {1.0}}), InvalidInput);
  // Gamma(-a + e)/Gamma(-b + e) -> (-1)^(a-b) b!/a!: a = 3, b = 1 gives 1/6 * (+1).
  CHECK(gamma_ratio({{-3.0}, {-1.0}}) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(gamma_ratio({{-2.0}, {-1.0}}) == doctest::Approx(-0.5).epsilon(1e-14));
  // Against std::tgamma on regular arguments.
  CHECK(gamma_ratio({{0.3, 4.1}, {2.6}}) ==
        doctest::Approx(std::tgamma(0.3) * std::tgamma(4.1) / std::tgamma(2.6)).epsilon(1e-13));
}

TEST_CASE("hyp2f1 low orders") {
  for (double b : {0.5, 1.0, 3.5})
    for (double c : {1.0, 3.0, 7.0}) {
      CHECK(hyp2f1_terminating(0, b, c, 2.0) == 1.0);
      CHECK(hyp2f1_terminating(1, b, c, 2.0) == doctest::Approx(1 - 2 * b / c).epsilon(1e-15));
      CHECK(hyp2f1_terminating(2, b, c, 2.0) ==
            doctest::Approx(1 - 4 * b / c + 4 * b * (b + 1) / (c * (c + 1))).epsilon(1e-14));
      CHECK(hyp2f1_terminating(5, b, c, 0.0) == 1.0);
    }
  CHECK_THROWS_AS(hyp2f1_terminating(3, 1.0, -1.0, 2.0), InvalidInput);
  CHECK_THROWS_AS(hyp2f1_terminating(-1, 1.0, 1.0, 2.0), InvalidInput);
}

TEST_CASE("hyp2f1 second order matches the quadratic eigenvalue form") {
  // b = s + m + 1, c = 2s + 2: value 2 m^2 * 2/((1+s)(3+2s)) + 1/(3+2s).
  for (int twice_s : {2, 3, 4})
    for (int k = 0; k <= twice_s; ++k) {
      const cpp_rational s(twice_s, 2), m = cpp_rational(k) - s;
      const cpp_rational exact = hyp2f1_exact(2, s + m + 1, 2 * s + 2, 2);
      const cpp_rational closed = 2 * m * m / ((1 + s) * (3 + 2 * s)) + 1 / (3 + 2 * s);
      CHECK(exact == closed);
      const double got = hyp2f1_terminating(2, double(s + m + 1), double(2 * s + 2), 2.0);
      CHECK(got == doctest::Approx(double(closed)).epsilon(1e-14));
    }
}

TEST_CASE("hyp2f1 against exact rational arithmetic") {
  // Half-integer b and integer c cover every spin use; random quarter-integer
  // arguments probe the stated range n <= 12, |b| <= 50, c <= 50.
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> nd(0, 12), bd(-200, 200), cd(1, 200);
  double worst = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = nd(rng);
    const cpp_rational b(bd(rng), 4), c(cd(rng), 4);
    const cpp_rational exact = hyp2f1_exact(n, b, c, 2);
    const double got = hyp2f1_terminating(n, double(b), double(c), 2.0);
    const double ref = double(exact);
    // Relative error, with an absolute floor scaled by the largest term for
    // sums that cancel to (near) zero.
    cpp_rational term = 1, biggest = 1;
    for (int k = 0; k < n; ++k) {
      term *= cpp_rational(k - n) * (b + k) / ((c + k) * (k + 1)) * 2;
      if (abs(term) > biggest) biggest = abs(term);
    }
    const double scale = std::max(std::abs(ref), 1e-5 * double(biggest));
    worst = std::max(worst, std::abs(got - ref) / scale);
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("hyp2f1 on spin arguments is exact to 1e-12") {
  for (int twice_s = 1; twice_s <= 20; ++twice_s)
    for (int n = 0; n <= std::min(twice_s, 12); ++n)
      for (int k = 0; k <= twice_s; ++k) {
        const cpp_rational s(twice_s, 2);
        const cpp_rational b = cpp_rational(k) + 1, c = 2 * s + 2;
        const double ref = double(hyp2f1_exact(n, b, c, 2));
        const double got = hyp2f1_terminating(n, double(b), double(c), 2.0);
        CHECK(std::abs(got - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
      }
}

TEST_CASE("erfcx and its complement") {
  for (double x : {-2.0, -0.5, 0.0, 0.3, 1.0, 1.9, 2.1, 3.0, 5.0, 10.0, 25.0}) {
    const double direct = std::exp(x * x) * std::erfc(x);
    CHECK(erfcx(x) == doctest::Approx(direct).epsilon(1e-12));
  }
  // Asymptotic series for large x: erfcx(x) ~ 1/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4)).
  const double x = 1e4;
  CHECK(erfcx(x) == doctest::Approx(1.0 / (x * std::sqrt(M_PI)) * (1 - 0.5 / (x * x))).epsilon(1e-14));
  // 1 - sqrt(pi) x erfcx(x) ~ 1/(2x^2) - 3/(4x^4) at large x.
  for (double y : {8.0, 30.0, 1e3}) {
    const double asym = 1.0 / (2 * y * y) - 3.0 / (4 * std::pow(y, 4)) + 15.0 / (8 * std::pow(y, 6));
    CHECK(erfcx_complement(y) == doctest::Approx(asym).epsilon(1e-6));
  }
  for (double y : {0.0, 0.5, 1.5}) {
    CHECK(erfcx_complement(y) ==
          doctest::Approx(1 - std::sqrt(M_PI) * y * std::exp(y * y) * std::erfc(y)).epsilon(1e-13));
  }
}
