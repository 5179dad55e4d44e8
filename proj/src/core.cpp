#include "opobs/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace opobs {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidInput(std::string(what) + ": matrix must be square with dim >= 1");
  }
}

QuantumState QuantumState::pure(ComplexVector psi, double tol) {
  if (psi.size() < 1) throw InvalidInput("pure state: empty vector");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol) {
    throw InvalidInput("pure state: norm " + std::to_string(norm) + " differs from 1");
  }
  return QuantumState(std::move(psi));
}

QuantumState QuantumState::mixed(ComplexMatrix rho, double hermitian_tol, double trace_tol,
                                 double eig_tol) {
  require_square(rho, "mixed state");
  const auto herm = hermiticity_check(rho, hermitian_tol);
  if (!herm.hermitian) {
    throw InvalidInput("mixed state: not Hermitian (deviation " +
                       std::to_string(herm.max_deviation) + ")");
  }
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > trace_tol) {
    throw InvalidInput("mixed state: trace differs from 1");
  }
  const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -eig_tol) {
    throw InvalidInput("mixed state: negative eigenvalue");
  }
  return QuantumState(std::move(rho));
}

QuantumState QuantumState::maximally_mixed(Eigen::Index dim) {
  if (dim < 1) throw InvalidInput("maximally mixed state: dim must be >= 1");
  ComplexMatrix rho = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return QuantumState(std::move(rho));
}

QuantumState QuantumState::basis(Eigen::Index dim, Eigen::Index k) {
  if (dim < 1 || k < 0 || k >= dim) throw InvalidInput("basis state: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return QuantumState(std::move(v));
}

Eigen::Index QuantumState::dim() const {
  return std::visit(
      [](const auto& d) -> Eigen::Index {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ComplexVector>) return d.size();
        else return d.rows();
      },
      data_);
}

const ComplexVector& QuantumState::vector() const {
  if (!is_pure()) throw InvalidInput("state is mixed; no state vector");
  return std::get<ComplexVector>(data_);
}

ComplexMatrix QuantumState::density() const {
  if (is_pure()) {
    const auto& v = std::get<ComplexVector>(data_);
    return v * v.adjoint();
  }
  return std::get<ComplexMatrix>(data_);
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

Complex expectation(const QuantumState& state, const ComplexMatrix& m) {
  require_square(m, "expectation");
  if (m.rows() != state.dim()) {
    throw InvalidInput("expectation: state dim " + std::to_string(state.dim()) +
                       " does not match operator dim " + std::to_string(m.rows()));
  }
  if (state.is_pure()) {
    const auto& v = state.vector();
    return v.dot(m * v);  // Eigen's dot conjugates the left argument
  }
  return (state.density() * m).trace();
}

HermiticityReport hermiticity_check(const ComplexMatrix& m, double tol) {
  require_square(m, "hermiticity_check");
  if (!(tol > 0.0)) throw InvalidInput("hermiticity_check: tol must be positive");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  return {dev <= tol, dev};
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm();
}

double max_abs_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

namespace {

ComplexMatrix exp_hermitian(const ComplexMatrix& h, Complex factor) {
  // exp(factor * H) with H Hermitian.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  const auto& vecs = eig.eigenvectors();
  ComplexVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::exp(factor * eig.eigenvalues()(i));
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

ComplexMatrix exp_pade13(const ComplexMatrix& a_in) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const Eigen::Index n = a_in.rows();
  const double norm1 = a_in.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const ComplexMatrix a = a_in / std::ldexp(1.0, squarings);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                b[5] * a4 + b[3] * a2 + b[1] * id;
  const ComplexMatrix u = a * u_inner;
  const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                          b[2] * a2 + b[0] * id;
  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

}  // namespace

ComplexMatrix matrix_exponential(const ComplexMatrix& m) {
  require_square(m, "matrix_exponential");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double structure_tol = 1e-14 * scale;
  if ((m + m.adjoint()).cwiseAbs().maxCoeff() <= structure_tol) {
    // M = -i H with H = iM Hermitian.
    const ComplexMatrix h = Complex(0.0, 1.0) * m;
    return exp_hermitian(0.5 * (h + h.adjoint()), Complex(0.0, -1.0));
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= structure_tol) {
    return exp_hermitian(0.5 * (m + m.adjoint()), Complex(1.0, 0.0));
  }
  return exp_pade13(m);
}

}  // namespace opobs
