#include "opobs/optics.hpp"

#include "opobs/quadrature.hpp"
#include "opobs/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace opobs::optics {

namespace {
constexpr double kPi = std::numbers::pi;

using ArrayXcd = Eigen::ArrayXcd;

double default_r_max(const SqueezeParams& p, const FockSpace& space) {
  return std::exp(p.s()) * (std::sqrt(static_cast<double>(space.n_max())) + 6.0);
}

// Amplitudes <k|w_j, s> for all nodes w_j at once; column j of the result.
ComplexMatrix amplitude_columns(const ArrayXcd& w, const SqueezeParams& params, int n) {
  const double ch = std::cosh(params.s());
  const double sh = std::sinh(params.s());
  const double th = std::tanh(params.s());
  const Complex e = std::polar(1.0, params.phi());
  const Eigen::Index count = w.size();
  ComplexMatrix out(n, count);
  const ArrayXcd wc = w.conjugate();
  const ArrayXcd first =
      (-0.5 * w.abs2().cast<Complex>() - 0.5 * e * th * wc * wc).exp() / std::sqrt(ch);
  out.row(0) = first.matrix().transpose();
  if (n == 1) return out;
  const ArrayXcd a = ch * w + e * sh * wc;
  out.row(1) = (a * first / ch).matrix().transpose();
  for (int k = 1; k + 1 < n; ++k) {
    const ArrayXcd next = (a * out.row(k).transpose().array() -
                           e * sh * std::sqrt(static_cast<double>(k)) *
                               out.row(k - 1).transpose().array()) /
                          (ch * std::sqrt(k + 1.0));
    out.row(k + 1) = next.matrix().transpose();
  }
  return out;
}

ComplexMatrix plane_sum(int n, const SqueezeParams& params, int dim, double r_max, int radial,
                        int angular) {
  const auto gl = gauss_legendre(radial, 0.0, r_max);
  ArrayXcd unit(angular);
  ComplexVector harmonic(angular);
  for (int k = 0; k < angular; ++k) {
    const double alpha = 2.0 * kPi * k / angular;
    unit(k) = std::polar(1.0, alpha);
    harmonic(k) = std::polar(1.0, n * alpha);
  }
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  // d^2w/pi = r dr dalpha / pi; the uniform angle weight is 2 pi / M.
  const double angle_weight = 2.0 / angular;
  for (int j = 0; j < radial; ++j) {
    const double r = gl.nodes[j];
    const ComplexMatrix psi = amplitude_columns(r * unit, params, dim);
    const ComplexVector coeff = (gl.weights[j] * r * angle_weight) * harmonic;
    acc.noalias() += psi * coeff.asDiagonal() * psi.adjoint();
  }
  return acc;
}

}  // namespace

FockSpace::FockSpace(int n_max, int buffer) : n_max_(n_max), buffer_(buffer) {
  if (n_max < 2) throw InvalidInput("FockSpace: n_max must be >= 2");
  if (buffer < 0) throw InvalidInput("FockSpace: buffer must be >= 0");
}

SqueezeParams::SqueezeParams(double s, double phi) : s_(s) {
  if (!std::isfinite(s) || s < 0.0) throw InvalidInput("squeeze amplitude must be >= 0");
  if (!std::isfinite(phi)) throw InvalidInput("squeeze phase must be finite");
  double p = std::fmod(phi, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  phi_ = p;
}

ComplexMatrix annihilation(int dim) {
  if (dim < 1) throw InvalidInput("annihilation: dim must be >= 1");
  ComplexMatrix b = ComplexMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
  return b;
}

ComplexMatrix annihilation(const FockSpace& space) { return annihilation(space.n_max()); }

ComplexMatrix displacement(Complex w, const FockSpace& space, std::vector<std::string>* warnings) {
  if (warnings != nullptr && std::norm(w) > 0.25 * space.n_max()) {
    std::ostringstream msg;
    msg << "displacement: |w|^2 = " << std::norm(w) << " exceeds the trust region n_max/4 = "
        << 0.25 * space.n_max();
    warnings->push_back(msg.str());
  }
  const ComplexMatrix b = annihilation(space.full_dim());
  const ComplexMatrix gen = w * b.adjoint() - std::conj(w) * b;
  return matrix_exponential(gen).topLeftCorner(space.n_max(), space.n_max());
}

ComplexMatrix squeeze(const SqueezeParams& params, const FockSpace& space) {
  if (params.s() > 3.0) throw InvalidInput("squeeze: s must be <= 3");
  const ComplexMatrix b = annihilation(space.full_dim());
  const ComplexMatrix b2 = b * b;
  const ComplexMatrix gen = 0.5 * params.s() *
                            (std::polar(1.0, -params.phi()) * b2 -
                             std::polar(1.0, params.phi()) * b2.adjoint());
  return matrix_exponential(gen).topLeftCorner(space.n_max(), space.n_max());
}

ComplexMatrix displacement_elements(Complex beta, int n) {
  if (n < 1) throw InvalidInput("displacement_elements: n must be >= 1");
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  const double x = std::norm(beta);
  if (x == 0.0) return ComplexMatrix::Identity(n, n);
  const double log_abs = 0.5 * std::log(x);
  // Lower triangle (row >= col) from beta, upper from conj of the lower
  // triangle of D(-beta) = D(beta)^dagger.
  auto fill_lower = [&](Complex b, bool upper) {
    const double arg = std::arg(b);
    for (int a = 0; a < n; ++a) {  // a = row - col
      double l_prev = 0.0;
      double l_cur = 1.0;
      for (int k = 0; k + a < n; ++k) {
        if (k == 1) {
          l_prev = 1.0;
          l_cur = 1.0 + a - x;
        } else if (k > 1) {
          const double next = ((2.0 * (k - 1) + 1.0 + a - x) * l_cur - (k - 1.0 + a) * l_prev) / k;
          l_prev = l_cur;
          l_cur = next;
        }
        const int row = k + a;
        const double log_mag =
            0.5 * (log_gamma(k + 1.0) - log_gamma(row + 1.0)) + a * log_abs - 0.5 * x;
        const Complex v = std::exp(log_mag) * l_cur * std::polar(1.0, a * arg);
        if (upper) {
          if (a > 0) d(k, row) = std::conj(v);
        } else {
          d(row, k) = v;
        }
      }
    }
  };
  fill_lower(beta, false);
  fill_lower(-beta, true);
  return d;
}

ComplexVector squeezed_coherent_amplitudes(Complex w, const SqueezeParams& params, int n) {
  if (n < 1) throw InvalidInput("squeezed_coherent_amplitudes: n must be >= 1");
  ArrayXcd one(1);
  one(0) = w;
  return amplitude_columns(one, params, n).col(0);
}

SqueezedCoherentState squeezed_coherent_state(Complex w, const SqueezeParams& params,
                                              const FockSpace& space) {
  if (params.s() > 3.0) throw InvalidInput("squeezed_coherent_state: s must be <= 3");
  ComplexVector v = squeezed_coherent_amplitudes(w, params, space.n_max());
  const double leakage = std::max(0.0, 1.0 - v.squaredNorm());
  if (leakage > 1e-4) {
    std::ostringstream msg;
    msg << "squeezed_coherent_state: truncation leakage " << leakage
        << " exceeds 1e-4; increase n_max";
    throw TruncationError(msg.str());
  }
  if (leakage > 1e-10) v.normalize();
  return {w, params, QuantumState::pure(std::move(v), 1e-10), leakage};
}

PlaneIntegral plane_integral(int n, const SqueezeParams& params, const FockSpace& space,
                             const PlaneQuadratureSpec& quad) {
  if (params.s() > 3.0) throw InvalidInput("plane_integral: s must be <= 3");
  const double r_max = quad.r_max > 0.0 ? quad.r_max : default_r_max(params, space);
  int radial = quad.radial_nodes > 0 ? quad.radial_nodes
                                     : 4 * static_cast<int>(std::ceil(r_max));
  int angular = quad.angular_nodes > 0
                    ? quad.angular_nodes
                    : (2 * space.n_max() + 2 * std::abs(n) + 4) *
                          static_cast<int>(std::ceil(std::exp(params.s())));
  const int dim = space.n_max();
  ComplexMatrix coarse = plane_sum(n, params, dim, r_max, radial, angular);
  double delta = 0.0;
  for (int doubling = 0; doubling < std::max(1, quad.max_doublings); ++doubling) {
    radial *= 2;
    angular *= 2;
    ComplexMatrix fine = plane_sum(n, params, dim, r_max, radial, angular);
    delta = frobenius_distance(fine, coarse);
    if (delta < quad.tolerance) return {std::move(fine), radial, angular, r_max, delta};
    coarse = std::move(fine);
  }
  std::ostringstream msg;
  msg << "plane quadrature did not converge: n=" << n << " s=" << params.s()
      << " phi=" << params.phi() << " n_max=" << dim << " radial=" << radial
      << " angular=" << angular << " last Frobenius change=" << delta
      << " tolerance=" << quad.tolerance;
  throw NonConvergence(msg.str());
}

PlaneIntegral phasor_op(int n, const SqueezeParams& params, const FockSpace& space,
                        const PlaneQuadratureSpec& quad) {
  if (n == 0) throw InvalidInput("phasor_op: order must be nonzero");
  if (std::abs(n) > 8) throw InvalidInput("phasor_op: |n| must be <= 8");
  if (n < 0) {
    PlaneIntegral out = plane_integral(-n, params, space, quad);
    out.matrix = adjoint(out.matrix);
    return out;
  }
  return plane_integral(n, params, space, quad);
}

FourierCoefficients trig_coefficients(TrigKind kind, int k) {
  const Complex i(0.0, 1.0);
  if (k == 1) {
    if (kind == TrigKind::Cosine) return {{1, 0.5}, {-1, 0.5}};
    return {{1, 1.0 / (2.0 * i)}, {-1, -1.0 / (2.0 * i)}};
  }
  if (k == 2) {
    const double sign = kind == TrigKind::Cosine ? 1.0 : -1.0;
    return {{0, 0.5}, {2, 0.25 * sign}, {-2, 0.25 * sign}};
  }
  throw InvalidInput("trig_op: k must be 1 or 2");
}

ComplexMatrix periodic_function_op(const FourierCoefficients& coeffs, const SqueezeParams& params,
                                   const FockSpace& space, const PlaneQuadratureSpec& quad,
                                   bool hermitian) {
  for (const auto& [n, c] : coeffs) {
    if (std::abs(n) > 8) throw InvalidInput("periodic_function_op: |n| must be <= 8");
    if (!hermitian) continue;
    const auto it = coeffs.find(-n);
    const Complex partner = it == coeffs.end() ? Complex(0.0) : it->second;
    if (std::abs(partner - std::conj(c)) > 1e-12) {
      throw InvalidInput("periodic_function_op: coefficients are not conjugate-symmetric");
    }
  }
  const int dim = space.n_max();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  std::map<int, ComplexMatrix> phasors;  // keyed by |n|
  for (const auto& [n, c] : coeffs) {
    if (c == Complex(0.0)) continue;
    if (n == 0) {
      out += c * ComplexMatrix::Identity(dim, dim);
      continue;
    }
    auto it = phasors.find(std::abs(n));
    if (it == phasors.end()) {
      it = phasors.emplace(std::abs(n), phasor_op(std::abs(n), params, space, quad).matrix).first;
    }
    if (n > 0) out += c * it->second;
    else out += c * it->second.adjoint();
  }
  return out;
}

ComplexMatrix trig_op(TrigKind kind, int k, const SqueezeParams& params, const FockSpace& space,
                      const PlaneQuadratureSpec& quad) {
  return periodic_function_op(trig_coefficients(kind, k), params, space, quad, true);
}

namespace {

// Radial integrals int_0^R 2 r dr <w|rho|w> for each angle, plus the largest
// integrand value seen at r = R relative to the peak.
std::vector<double> radial_marginals(const ComplexMatrix& rho, const ComplexVector* pure,
                                     const SqueezeParams& params, int dim,
                                     const std::vector<double>& angles, double r_max, int radial,
                                     double& tail_ratio) {
  auto gl = gauss_legendre(radial, 0.0, r_max);
  // Append the endpoint so the tail can be inspected.
  gl.nodes.push_back(r_max);
  gl.weights.push_back(0.0);
  const Eigen::Index count = static_cast<Eigen::Index>(gl.nodes.size());
  ArrayXcd radii(count);
  for (Eigen::Index j = 0; j < count; ++j) radii(j) = gl.nodes[j];
  std::vector<double> out(angles.size());
  double peak = 0.0;
  double tail = 0.0;
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const ArrayXcd w = radii * std::polar(1.0, angles[a]);
    const ComplexMatrix psi = amplitude_columns(w, params, dim);
    Eigen::ArrayXd overlap(count);
    if (pure != nullptr) {
      overlap = (pure->adjoint() * psi).cwiseAbs2().transpose().array();
    } else {
      const ComplexMatrix rho_psi = rho * psi;
      overlap = (psi.conjugate().cwiseProduct(rho_psi)).colwise().sum().real().transpose().array();
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < count; ++j) {
      const double integrand = 2.0 * gl.nodes[j] * overlap(j);
      total += gl.weights[j] * integrand;
      peak = std::max(peak, std::abs(integrand));
    }
    tail = std::max(tail, std::abs(2.0 * r_max * overlap(count - 1)));
    out[a] = total;
  }
  tail_ratio = peak > 0.0 ? tail / peak : 0.0;
  return out;
}

}  // namespace

PropensityTable phase_propensity(const QuantumState& rho, const SqueezeParams& params,
                                 const FockSpace& space, int angle_nodes,
                                 const PropensitySpec& spec) {
  if (angle_nodes < 1) throw InvalidInput("phase_propensity: need at least one angle node");
  if (rho.dim() != space.n_max()) {
    throw InvalidInput("phase_propensity: state dimension does not match n_max");
  }
  if (params.s() > 3.0) throw InvalidInput("phase_propensity: s must be <= 3");
  const ComplexMatrix density = rho.density();
  if (std::abs(density.trace() - Complex(1.0)) > 1e-10) {
    throw InvalidInput("phase_propensity: state trace must be 1");
  }
  const double r_max = spec.r_max > 0.0 ? spec.r_max : default_r_max(params, space);
  int radial = spec.radial_nodes > 0 ? spec.radial_nodes : 4 * static_cast<int>(std::ceil(r_max));

  PropensityTable table;
  table.angles.resize(angle_nodes);
  for (int k = 0; k < angle_nodes; ++k) table.angles[k] = 2.0 * kPi * k / angle_nodes;

  const ComplexVector* pure = rho.is_pure() ? &rho.vector() : nullptr;
  double tail = 0.0;
  std::vector<double> coarse = radial_marginals(density, pure, params, space.n_max(),
                                                table.angles, r_max, radial, tail);
  if (tail > spec.tail_tolerance) {
    std::ostringstream msg;
    msg << "phase_propensity: radial integrand not decayed at I_max = " << r_max * r_max
        << " (tail ratio " << tail << ")";
    throw TruncationError(msg.str());
  }
  double delta = 0.0;
  for (int doubling = 0; doubling < 4; ++doubling) {
    radial *= 2;
    std::vector<double> fine = radial_marginals(density, pure, params, space.n_max(),
                                                table.angles, r_max, radial, tail);
    delta = 0.0;
    for (std::size_t k = 0; k < fine.size(); ++k) delta = std::max(delta, std::abs(fine[k] - coarse[k]));
    coarse = std::move(fine);
    if (delta < spec.tolerance) break;
  }
  if (delta >= spec.tolerance) {
    std::ostringstream msg;
    msg << "phase_propensity: radial quadrature did not converge (change " << delta << ")";
    throw NonConvergence(msg.str());
  }
  table.densities = std::move(coarse);
  for (double& p : table.densities) p = std::max(p, 0.0);
  double sum = 0.0;
  for (double p : table.densities) sum += p;
  table.normalization = sum / angle_nodes;
  table.radial_nodes = radial;
  table.r_max = r_max;
  table.convergence_delta = delta;
  table.tail_ratio = tail;
  return table;
}

}  // namespace opobs::optics
