#include "opobs/spin.hpp"

#include "opobs/quadrature.hpp"
#include "opobs/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace opobs::spin {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap_phi(double phi) {
  double p = std::fmod(phi, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  return p;
}

double log_binomial(int n, int k) {
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}
}  // namespace

SpinQuantumNumber::SpinQuantumNumber(int twice_s) : twice_s_(twice_s) {
  if (twice_s < 1) throw InvalidInput("spin: 2s must be a positive integer");
}

SpinQuantumNumber SpinQuantumNumber::from_double(double s) {
  const double twice = 2.0 * s;
  if (!(twice >= 1.0) || std::abs(twice - std::round(twice)) > 1e-12) {
    throw InvalidInput("spin: s must be a positive half-integer, got " + std::to_string(s));
  }
  return SpinQuantumNumber(static_cast<int>(std::round(twice)));
}

SolidAngle::SolidAngle(double theta, double phi) : theta_(theta), phi_(wrap_phi(phi)) {
  if (!std::isfinite(theta) || !std::isfinite(phi) || theta < 0.0 || theta > kPi) {
    throw InvalidInput("solid angle: theta must lie in [0, pi]");
  }
}

double angular_distance(const SolidAngle& a, const SolidAngle& b) {
  const double c = std::cos(a.theta()) * std::cos(b.theta()) +
                   std::sin(a.theta()) * std::sin(b.theta()) * std::cos(a.phi() - b.phi());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

SpinAlgebra::SpinAlgebra(SpinQuantumNumber spin) : s(spin) {
  const int d = s.dim();
  const double sv = s.value();
  s_plus = ComplexMatrix::Zero(d, d);
  s_3 = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = s.m(k);
    s_3(k, k) = m;
    if (k + 1 < d) s_plus(k + 1, k) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
  }
  s_minus = s_plus.adjoint();
}

ComplexMatrix SpinAlgebra::component(int i) const {
  switch (i) {
    case 1: return s_1();
    case 2: return s_2();
    case 3: return s_3;
    default: throw InvalidInput("spin component index must be 1, 2 or 3");
  }
}

SphereQuadrature sphere_quadrature(int max_degree_theta, int max_degree_phi) {
  if (max_degree_theta < 0 || max_degree_phi < 0) {
    throw InvalidInput("sphere_quadrature: degrees must be non-negative");
  }
  const int n_theta = max_degree_theta + 12;
  const int n_phi = max_degree_phi + 1;
  const auto gl = gauss_legendre(n_theta, 0.0, kPi);
  SphereQuadrature q;
  q.max_degree_theta = max_degree_theta;
  q.max_degree_phi = max_degree_phi;
  q.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  q.weights.reserve(q.nodes.capacity());
  const double dphi = 2.0 * kPi / n_phi;
  for (int j = 0; j < n_theta; ++j) {
    const double wt = gl.weights[j] * std::sin(gl.nodes[j]) * dphi;
    for (int k = 0; k < n_phi; ++k) {
      q.nodes.emplace_back(gl.nodes[j], k * dphi);
      q.weights.push_back(wt);
    }
  }
  return q;
}

QuantumState coherent_state(SpinQuantumNumber s, const SolidAngle& omega) {
  const SpinAlgebra alg(s);
  const Complex tau = 0.5 * omega.theta() * std::polar(1.0, -omega.phi());
  const ComplexMatrix generator = tau * alg.s_plus - std::conj(tau) * alg.s_minus;
  const ComplexMatrix rot = matrix_exponential(generator);
  return QuantumState::pure(rot.col(0), 1e-12);
}

ComplexVector coherent_amplitudes(SpinQuantumNumber s, const SolidAngle& omega) {
  const int two_s = s.twice();
  const double c = std::cos(0.5 * omega.theta());
  const double sn = std::sin(0.5 * omega.theta());
  const Complex phase = std::polar(1.0, -omega.phi());
  ComplexVector v(two_s + 1);
  Complex phase_pow = 1.0;
  for (int k = 0; k <= two_s; ++k) {
    const double mag =
        std::exp(0.5 * log_binomial(two_s, k)) * std::pow(c, two_s - k) * std::pow(sn, k);
    v(k) = mag * phase_pow;
    phase_pow *= phase;
  }
  return v;
}

double malus_transmission(SpinQuantumNumber s, const SolidAngle& omega,
                          const SolidAngle& omega_prime) {
  const auto a = coherent_state(s, omega);
  const auto b = coherent_state(s, omega_prime);
  return std::norm(a.vector().dot(b.vector()));
}

double malus_law(SpinQuantumNumber s, double alpha) {
  return std::pow(std::cos(0.5 * alpha), 2 * s.twice());
}

ComplexMatrix povm_density(SpinQuantumNumber s, const SolidAngle& omega) {
  const ComplexVector v = coherent_state(s, omega).vector();
  return (s.dim() / (4.0 * kPi)) * (v * v.adjoint());
}

double propensity(const QuantumState& state, SpinQuantumNumber s, const SolidAngle& omega) {
  if (state.dim() != s.dim()) {
    throw InvalidInput("propensity: state dimension does not match 2s+1");
  }
  const ComplexVector v = coherent_amplitudes(s, omega);
  double overlap = 0.0;
  if (state.is_pure()) {
    overlap = std::norm(v.dot(state.vector()));
  } else {
    overlap = v.dot(state.density() * v).real();
  }
  return s.dim() / (4.0 * kPi) * std::max(overlap, 0.0);
}

std::string to_string(SpinKind kind) {
  switch (kind) {
    case SpinKind::AzimuthalCosine: return "azimuthal_cosine";
    case SpinKind::PolarPhasor: return "polar_phasor";
    case SpinKind::Direction: return "direction";
  }
  return "unknown";
}

std::string to_string(Provenance p) {
  return p == Provenance::ClosedForm ? "closed_form" : "quadrature";
}

OperationalSpinOperator azimuthal_cosine_op(SpinQuantumNumber s, int n) {
  if (n < 0) throw InvalidInput("azimuthal_cosine_op: n must be non-negative");
  const int d = s.dim();
  const double sv = s.value();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    m(k, k) = hyp2f1_terminating(n, sv + s.m(k) + 1.0, 2.0 * sv + 2.0, 2.0);
  }
  return {SpinKind::AzimuthalCosine, n, 0, s, std::move(m), Provenance::ClosedForm};
}

OperationalSpinOperator polar_phasor_op(SpinQuantumNumber s, int n) {
  const int d = s.dim();
  if (n == 0) {
    return {SpinKind::PolarPhasor, 0, 0, s, ComplexMatrix::Identity(d, d), Provenance::ClosedForm};
  }
  if (n < 0) {
    auto op = polar_phasor_op(s, -n);
    op.order = n;
    op.matrix = adjoint(op.matrix);
    return op;
  }
  if (n > s.twice()) {
    return {SpinKind::PolarPhasor, n, 0, s, ComplexMatrix::Zero(d, d), Provenance::ClosedForm};
  }
  const SpinAlgebra alg(s);
  ComplexMatrix ladder = ComplexMatrix::Identity(d, d);
  for (int p = 0; p < n; ++p) ladder = alg.s_plus * ladder;

  const double sv = s.value();
  const double half_n = 0.5 * n;
  ComplexVector diag = ComplexVector::Zero(d);
  for (int k = 0; k + n < d; ++k) {  // columns with k + n >= d are annihilated by S+^n
    const double m = s.m(k);
    diag(k) = gamma_ratio({{sv - m + 1.0 - half_n, sv + m + 1.0 + half_n},
                           {sv + m + n + 1.0, sv - m + 1.0}});
  }
  ComplexMatrix e = ladder * diag.asDiagonal();
  return {SpinKind::PolarPhasor, n, 0, s, std::move(e), Provenance::ClosedForm};
}

ComplexMatrix operator_by_quadrature(SpinQuantumNumber s, const SphereWeight& weight,
                                     int degree_theta, int degree_phi) {
  const auto q = sphere_quadrature(degree_theta, degree_phi);
  const int d = s.dim();
  const auto count = static_cast<Eigen::Index>(q.nodes.size());
  ComplexMatrix states(d, count);
  ComplexVector coeff(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    states.col(k) = coherent_amplitudes(s, q.nodes[k]);
    coeff(k) = q.weights[k] * weight(q.nodes[k]);
  }
  const double norm = d / (4.0 * kPi);
  return norm * (states * coeff.asDiagonal() * states.adjoint());
}

namespace {

double direction_component(int axis, const SolidAngle& o) {
  switch (axis) {
    case 1: return std::cos(o.phi()) * std::sin(o.theta());
    case 2: return std::sin(o.phi()) * std::sin(o.theta());
    case 3: return -std::cos(o.theta());
    default: throw InvalidInput("direction axis must be 1, 2 or 3");
  }
}

}  // namespace

OperationalSpinOperator quadrature_oracle(SpinKind kind, SpinQuantumNumber s, int n, int axis) {
  const int degree = s.twice() + std::abs(n);
  SphereWeight weight;
  switch (kind) {
    case SpinKind::AzimuthalCosine:
      if (n < 0) throw InvalidInput("azimuthal cosine order must be non-negative");
      weight = [n](const SolidAngle& o) { return Complex(std::pow(std::cos(o.theta()), n)); };
      break;
    case SpinKind::PolarPhasor:
      weight = [n](const SolidAngle& o) { return std::polar(1.0, n * o.phi()); };
      break;
    case SpinKind::Direction:
      if (n < 0) throw InvalidInput("direction order must be non-negative");
      if (axis < 1 || axis > 3) throw InvalidInput("direction axis must be 1, 2 or 3");
      weight = [n, axis](const SolidAngle& o) {
        return Complex(std::pow(direction_component(axis, o), n));
      };
      break;
  }
  ComplexMatrix m = operator_by_quadrature(s, weight, degree, 2 * degree + 3);
  return {kind, n, kind == SpinKind::Direction ? axis : 0, s, std::move(m), Provenance::Quadrature};
}

OperationalSpinOperator direction_op(SpinQuantumNumber s, int axis, int n) {
  return quadrature_oracle(SpinKind::Direction, s, n, axis);
}

OperationalSpinOperator direction_closed_form(SpinQuantumNumber s, int axis, int n) {
  const SpinAlgebra alg(s);
  const ComplexMatrix si = alg.component(axis);
  const double sv = s.value();
  ComplexMatrix m;
  switch (n) {
    case 0: m = alg.identity(); break;
    case 1: m = si / (1.0 + sv); break;
    case 2:
      m = 2.0 / ((1.0 + sv) * (3.0 + 2.0 * sv)) * (si * si) + alg.identity() / (3.0 + 2.0 * sv);
      break;
    default: throw InvalidInput("direction_closed_form: only n = 0, 1, 2 have closed forms");
  }
  return {SpinKind::Direction, n, axis, s, std::move(m), Provenance::ClosedForm};
}

double propensity_moment(const QuantumState& state, SpinQuantumNumber s,
                         const std::function<double(const SolidAngle&)>& f, int degree_theta,
                         int degree_phi) {
  const auto q = sphere_quadrature(degree_theta, degree_phi);
  double total = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    total += q.weights[k] * f(q.nodes[k]) * propensity(state, s, q.nodes[k]);
  }
  return total;
}

}  // namespace opobs::spin
