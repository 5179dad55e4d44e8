#pragma once

#include <vector>

namespace opobs {

/// ln Gamma(x) for x > 0 (Lanczos, g = 607/128). Thread-safe, unlike
/// std::lgamma which writes the global signgam.
double log_gamma(double x);

/// prod Gamma(numerator) / prod Gamma(denominator).
///
/// Arguments at non-positive integers are poles. Numerator and denominator
/// poles cancel pairwise in the limit where all arguments move together,
/// Gamma(-a + e) / Gamma(-b + e) -> (-1)^(a-b) b! / a!. Leftover denominator
/// poles make the ratio exactly zero; a leftover numerator pole throws
/// InvalidInput.
struct GammaRatioSpec {
  std::vector<double> numerator_args;
  std::vector<double> denominator_args;
};
double gamma_ratio(const GammaRatioSpec& spec);

/// Terminating 2F1(-n, b; c; z) = sum_{k=0}^{n} (-n)_k (b)_k / ((c)_k k!) z^k.
/// Terms and partial sums are carried in double-double arithmetic so the
/// alternating z = 2 series survives cancellation.
double hyp2f1_terminating(int n, double b, double c, double z);

/// Scaled complementary error function exp(x^2) erfc(x), finite for all x
/// where the result is representable.
double erfcx(double x);

/// 1 - sqrt(pi) x erfcx(x) for x >= 0, without the cancellation of the
/// direct formula at large x.
double erfcx_complement(double x);

}  // namespace opobs
