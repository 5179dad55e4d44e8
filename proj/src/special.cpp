#include "opobs/special.hpp"

#include "opobs/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace opobs {

namespace {

// Godfrey's coefficients for g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

double log_gamma_lanczos(double x) {
  // Valid for x >= 0.5.
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

// log|Gamma(x)| and sign for x not a pole.
void log_abs_gamma(double x, double& log_abs, int& sign) {
  if (x > 0.0) {
    log_abs = log_gamma(x);
    sign = 1;
    return;
  }
  // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x)).
  const double s = std::sin(std::numbers::pi * x);
  log_abs = std::log(std::numbers::pi) - std::log(std::abs(s)) - log_gamma(1.0 - x);
  sign = s > 0.0 ? 1 : -1;
}

// Double-double arithmetic (Dekker / Knuth error-free transforms).
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

DoubleDouble add(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  DoubleDouble t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

DoubleDouble mul(DoubleDouble a, DoubleDouble b) {
  const double p = a.hi * b.hi;
  const double err = std::fma(a.hi, b.hi, -p);
  return quick_two_sum(p, err + (a.hi * b.lo + a.lo * b.hi));
}

DoubleDouble div(DoubleDouble a, DoubleDouble b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = add(a, mul(b, {-q1, 0.0}));
  const double q2 = r.hi / b.hi;
  r = add(r, mul(b, {-q2, 0.0}));
  const double q3 = r.hi / b.hi;
  return add(quick_two_sum(q1, q2), {q3, 0.0});
}

DoubleDouble plus_int(double x, int k) { return two_sum(x, static_cast<double>(k)); }

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidInput("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma_lanczos(1.0 - x);
  }
  return log_gamma_lanczos(x);
}

double gamma_ratio(const GammaRatioSpec& spec) {
  std::vector<int> num_poles, den_poles;
  double log_abs = 0.0;
  int sign = 1;
  auto accumulate = [&](double x, int direction, std::vector<int>& poles) {
    if (!std::isfinite(x)) throw InvalidInput("gamma_ratio: non-finite argument");
    if (is_pole(x)) {
      poles.push_back(static_cast<int>(-x));
      return;
    }
    double la = 0.0;
    int sg = 1;
    log_abs_gamma(x, la, sg);
    log_abs += direction * la;
    sign *= sg;
  };
  for (double x : spec.numerator_args) accumulate(x, +1, num_poles);
  for (double x : spec.denominator_args) accumulate(x, -1, den_poles);

  if (num_poles.size() > den_poles.size()) {
    throw InvalidInput("gamma_ratio: uncancelled numerator pole");
  }
  if (num_poles.size() < den_poles.size()) return 0.0;

  // The product of pairwise limits does not depend on the pairing.
  for (std::size_t i = 0; i < num_poles.size(); ++i) {
    const int a = num_poles[i];
    const int b = den_poles[i];
    log_abs += log_gamma(b + 1.0) - log_gamma(a + 1.0);
    if ((a - b) % 2 != 0) sign = -sign;
  }
  return sign * std::exp(log_abs);
}

double hyp2f1_terminating(int n, double b, double c, double z) {
  if (n < 0) throw InvalidInput("hyp2f1_terminating: n must be non-negative");
  if (!std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z)) {
    throw InvalidInput("hyp2f1_terminating: non-finite parameter");
  }
  for (int k = 0; k < n; ++k) {
    if (c + k == 0.0) {
      throw InvalidInput("hyp2f1_terminating: c = " + std::to_string(c) +
                         " hits a pole of the series");
    }
  }
  DoubleDouble sum{0.0, 0.0};
  DoubleDouble term{1.0, 0.0};
  for (int k = 0; k <= n; ++k) {
    sum = add(sum, term);
    if (k == n) break;
    DoubleDouble numer = mul(plus_int(-static_cast<double>(n), k), plus_int(b, k));
    numer = mul(numer, {z, 0.0});
    const DoubleDouble denom = mul(plus_int(c, k), {static_cast<double>(k + 1), 0.0});
    term = div(mul(term, numer), denom);
  }
  return sum.hi + sum.lo;
}

namespace {
// Tail of the erfc continued fraction, (1/2)/(x + 1/(x + (3/2)/(x + ...))).
double erfc_fraction_tail(double x) {
  double t = 0.0;
  for (int k = 80; k >= 1; --k) t = 0.5 * k / (x + t);
  return t;
}
}  // namespace

double erfcx(double x) {
  if (x < 2.0) return std::exp(x * x) * std::erfc(x);
  const double t = erfc_fraction_tail(x);
  return 1.0 / (std::sqrt(std::numbers::pi) * (x + t));
}

double erfcx_complement(double x) {
  if (x < 0.0) throw InvalidInput("erfcx_complement: x must be >= 0");
  if (x < 2.0) return 1.0 - std::sqrt(std::numbers::pi) * x * erfcx(x);
  const double t = erfc_fraction_tail(x);
  return t / (x + t);
}

}  // namespace opobs
