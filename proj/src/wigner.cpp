#include "opobs/wigner.hpp"

#include "opobs/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace opobs::optics {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> grid_thetas(const PhaseGridSpec& spec) {
  if (spec.n_theta < 1) throw InvalidInput("phase grid: n_theta must be >= 1");
  std::vector<double> t(spec.n_theta);
  for (int k = 0; k < spec.n_theta; ++k) t[k] = 2.0 * kPi * k / spec.n_theta;
  return t;
}

// Radial integral int_0^inf r dr exp(-2 Q(w - r u)) with
// Q(z) = |z cosh s + z* e^{i phi} sinh s|^2, |u| = 1.
class KernelRadial {
 public:
  KernelRadial(const SqueezeParams& p, Complex w)
      : ch_(std::cosh(p.s())), e_sh_(std::polar(std::sinh(p.s()), p.phi())) {
    tw_ = transform(w);
    c_ = std::norm(tw_);
  }

  double operator()(double alpha) const {
    const Complex tu = transform(std::polar(1.0, alpha));
    const double a = 2.0 * std::norm(tu);
    const double b = 4.0 * (tw_ * std::conj(tu)).real();
    const double z = -b / (2.0 * std::sqrt(a));
    if (z <= 0.0) {
      return std::exp(-2.0 * c_) / (2.0 * a) +
             b * std::sqrt(kPi) / (4.0 * a * std::sqrt(a)) * std::exp(-2.0 * c_ + z * z) *
                 std::erfc(z);
    }
    return std::exp(-2.0 * c_) / (2.0 * a) * erfcx_complement(z);
  }

 private:
  Complex transform(Complex z) const { return z * ch_ + std::conj(z) * e_sh_; }
  double ch_;
  Complex e_sh_;
  Complex tw_;
  double c_ = 0.0;
};

void validate_coefficients(const FourierCoefficients& coeffs, bool hermitian) {
  for (const auto& [n, c] : coeffs) {
    if (std::abs(n) > 8) throw InvalidInput("operational_wigner: |n| must be <= 8");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidInput("operational_wigner: coefficients must be finite");
    }
    if (!hermitian) continue;
    const auto it = coeffs.find(-n);
    const Complex partner = it == coeffs.end() ? Complex(0.0) : it->second;
    if (std::abs(partner - std::conj(c)) > 1e-12) {
      throw InvalidInput("operational_wigner: coefficients are not conjugate-symmetric");
    }
  }
}

struct KernelValue {
  Complex value;
  int nodes;
  double delta;
};

KernelValue kernel_point(const FourierCoefficients& coeffs, const SqueezeParams& params, Complex w,
                         double tolerance) {
  int max_order = 0;
  Complex constant = 0.0;
  for (const auto& [n, c] : coeffs) {
    max_order = std::max(max_order, std::abs(n));
    if (n == 0) constant += c;
  }
  if (max_order == 0) return {constant, 0, 0.0};

  const KernelRadial radial(params, w);
  // sums[n] = sum over nodes of e^{i n alpha} f(alpha), n = 1..max_order
  std::vector<Complex> sums(max_order + 1, 0.0);
  auto accumulate = [&](int count, int offset_num, int stride) {
    for (int k = offset_num; k < count; k += stride) {
      const double alpha = 2.0 * kPi * k / count;
      const double f = radial(alpha);
      const Complex step = std::polar(1.0, alpha);
      Complex ph = step;
      for (int n = 1; n <= max_order; ++n) {
        sums[n] += ph * f;
        ph *= step;
      }
    }
  };
  auto combine = [&](int count) {
    Complex total = constant;
    for (const auto& [n, c] : coeffs) {
      if (n == 0) continue;
      // (2/pi) int dalpha e^{i n alpha} f = (2/pi)(2 pi/count) sums[n] = 4 sums[n]/count
      const Complex g = 4.0 * sums[std::abs(n)] / static_cast<double>(count);
      total += c * (n > 0 ? g : std::conj(g));
    }
    return total;
  };

  int count = 64;
  accumulate(count, 0, 1);
  Complex previous = combine(count);
  double delta = 0.0;
  while (count < (1 << 17)) {
    count *= 2;
    accumulate(count, 1, 2);  // new odd nodes only
    const Complex current = combine(count);
    delta = std::abs(current - previous);
    previous = current;
    if (delta < tolerance) return {current, count, delta};
  }
  std::ostringstream msg;
  msg << "operational Wigner angular integral did not converge at w = (" << w.real() << ", "
      << w.imag() << "), s = " << params.s() << ", last change " << delta;
  throw NonConvergence(msg.str());
}

}  // namespace

std::vector<double> grid_intensities(const PhaseGridSpec& spec) {
  std::vector<double> out;
  if (!spec.intensities.empty()) {
    out = spec.intensities;
  } else {
    if (spec.n_intensity < 2) throw InvalidInput("phase grid: n_intensity must be >= 2");
    if (!std::isfinite(spec.i_max) || spec.i_max <= 0.0) {
      throw InvalidInput("phase grid: i_max must be positive");
    }
    out.resize(spec.n_intensity);
    for (int j = 0; j < spec.n_intensity; ++j) {
      out[j] = spec.i_max * j / (spec.n_intensity - 1);
    }
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (!std::isfinite(out[j]) || out[j] < 0.0) {
      throw InvalidInput("phase grid: intensities must be finite and >= 0");
    }
    if (j > 0 && !(out[j] > out[j - 1])) {
      throw InvalidInput("phase grid: intensities must be strictly increasing");
    }
  }
  return out;
}

PhaseGrid wigner_of_operator(const ComplexMatrix& a, const FockSpace& space,
                             const PhaseGridSpec& spec) {
  require_square(a, "wigner_of_operator");
  const int n = space.n_max();
  if (a.rows() != n) throw InvalidInput("wigner_of_operator: operator dimension must equal n_max");
  PhaseGrid grid;
  grid.intensities = grid_intensities(spec);
  grid.thetas = grid_thetas(spec);
  grid.route = "displaced_parity";
  grid.n_max = n;
  const double limit = 0.25 * n;
  if (grid.intensities.back() > limit) {
    std::ostringstream msg;
    msg << "wigner_of_operator: I = " << grid.intensities.back()
        << " lies outside the trust region I <= n_max/4 = " << limit;
    throw TruncationError(msg.str());
  }
  const ComplexMatrix at = a.transpose();
  Eigen::VectorXd parity(n);
  for (int j = 0; j < n; ++j) parity(j) = (j % 2 == 0) ? 2.0 : -2.0;

  grid.values.resize(static_cast<Eigen::Index>(grid.intensities.size()),
                     static_cast<Eigen::Index>(grid.thetas.size()));
  for (std::size_t j = 0; j < grid.intensities.size(); ++j) {
    const double r = std::sqrt(grid.intensities[j]);
    for (std::size_t k = 0; k < grid.thetas.size(); ++k) {
      // 2 Tr[A D(w) P D(-w)] = 2 Tr[A P D(-2w)] = sum_{jk} 2 (-1)^j D(-2w)_{jk} A_{kj}
      const ComplexMatrix d = displacement_elements(-2.0 * std::polar(r, grid.thetas[k]), n);
      const ComplexVector rows = d.cwiseProduct(at).rowwise().sum();
      grid.values(j, k) = parity.cast<Complex>().dot(rows);  // conjugates the real parity only
    }
  }
  if (hermiticity_check(a, 1e-10).hermitian) {
    grid.max_imag = grid.values.imag().cwiseAbs().maxCoeff();
    if (grid.max_imag > 1e-8) {
      std::ostringstream msg;
      msg << "wigner_of_operator: Hermitian operator produced |Im W| = " << grid.max_imag;
      throw NonConvergence(msg.str());
    }
    grid.values = grid.values.real().cast<Complex>();
    grid.real_valued = true;
  }
  return grid;
}

Complex operational_wigner_at(const FourierCoefficients& coeffs, const SqueezeParams& params,
                              Complex w, double tolerance) {
  validate_coefficients(coeffs, false);
  return kernel_point(coeffs, params, w, tolerance).value;
}

PhaseGrid operational_wigner(const FourierCoefficients& coeffs, const SqueezeParams& params,
                             const PhaseGridSpec& spec, bool hermitian, double tolerance) {
  validate_coefficients(coeffs, hermitian);
  if (params.s() > 3.0) throw InvalidInput("operational_wigner: s must be <= 3");
  PhaseGrid grid;
  grid.intensities = grid_intensities(spec);
  grid.thetas = grid_thetas(spec);
  grid.route = "povm_kernel";
  grid.values.resize(static_cast<Eigen::Index>(grid.intensities.size()),
                     static_cast<Eigen::Index>(grid.thetas.size()));
  for (std::size_t j = 0; j < grid.intensities.size(); ++j) {
    const double r = std::sqrt(grid.intensities[j]);
    for (std::size_t k = 0; k < grid.thetas.size(); ++k) {
      const auto kv = kernel_point(coeffs, params, std::polar(r, grid.thetas[k]), tolerance);
      grid.values(j, k) = kv.value;
      grid.angular_nodes = std::max(grid.angular_nodes, kv.nodes);
      grid.convergence_delta = std::max(grid.convergence_delta, kv.delta);
    }
  }
  if (hermitian) {
    grid.max_imag = grid.values.imag().cwiseAbs().maxCoeff();
    grid.values = grid.values.real().cast<Complex>();
    grid.real_valued = true;
  }
  return grid;
}

WignerPreset wigner_preset(int id) {
  WignerPreset p{id, {}, trig_coefficients(TrigKind::Cosine, 2), {}};
  switch (id) {
    case 1: p.params = SqueezeParams(0.5, 0.5 * kPi); break;
    case 2: p.params = SqueezeParams(1.5, 0.0); break;
    default: throw InvalidInput("wigner preset must be 1 or 2");
  }
  return p;
}

std::string to_string(FitModel model) {
  return model == FitModel::SqrtICos ? "sqrtI_cos" : "constant";
}

SmallIFit small_I_fit(const PhaseGrid& grid, FitModel model, double i_limit) {
  SmallIFit fit{model};
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  double sum_wb = 0.0;  // sum W * basis
  double sum_b2 = 0.0;
  for (std::size_t j = 0; j < grid.intensities.size(); ++j) {
    const double intensity = grid.intensities[j];
    if (intensity > i_limit) continue;
    if (model == FitModel::SqrtICos && intensity <= 0.0) continue;
    for (std::size_t k = 0; k < grid.thetas.size(); ++k) {
      const double w = grid.values(j, k).real();
      const double basis = std::sqrt(intensity) * std::cos(grid.thetas[k]);
      sum_w += w;
      sum_w2 += w * w;
      sum_wb += w * basis;
      sum_b2 += basis * basis;
      ++fit.points;
    }
  }
  if (fit.points == 0) {
    std::ostringstream msg;
    msg << "small_I_fit: grid has no rows with " << (model == FitModel::SqrtICos ? "0 < " : "")
        << "I <= " << i_limit;
    throw InvalidInput(msg.str());
  }
  fit.mean = sum_w / fit.points;
  if (model == FitModel::SqrtICos) {
    fit.parameter = sum_b2 > 0.0 ? sum_wb / sum_b2 : 0.0;
    // |W - A b|^2 = sum W^2 - 2 A sum W b + A^2 sum b^2
    const double res2 = std::max(0.0, sum_w2 - 2.0 * fit.parameter * sum_wb +
                                          fit.parameter * fit.parameter * sum_b2);
    fit.relative_residual = sum_w2 > 0.0 ? std::sqrt(res2 / sum_w2) : 0.0;
  } else {
    fit.parameter = 1.0 - 2.0 * fit.mean;
    const double var = std::max(0.0, sum_w2 / fit.points - fit.mean * fit.mean);
    const double scale = std::abs(fit.mean);
    fit.relative_residual = scale > 0.0 ? std::sqrt(var) / scale : std::sqrt(var);
  }
  fit.poor_fit = fit.relative_residual > 0.05;
  return fit;
}

}  // namespace opobs::optics
