#pragma once

#include <vector>

namespace opobs {

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi]. Exact for polynomials of degree
/// 2n - 1; spectrally convergent for analytic integrands.
GaussLegendreRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

}  // namespace opobs
