#include "pointcouple/device_algebra.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace pointcouple {

namespace {
constexpr double kPi = std::numbers::pi;
}

UnitaryScatteringMatrix::UnitaryScatteringMatrix(Matrix entries,
                                                 double tolerance)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw DimensionMismatch("scattering matrix must be square, N >= 1");
  }
  const double residual = unitarity_residual(entries_);
  if (!(residual <= tolerance)) {
    throw ConfigError("scattering_matrix",
                      "not unitary: ||S^dag S - I||_F = " +
                          std::to_string(residual));
  }
}

CouplingMatrix::CouplingMatrix(Matrix entries, double tolerance)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw DimensionMismatch("coupling matrix must be square, N >= 1");
  }
  const double residual = hermiticity_residual(entries_);
  if (!(residual <= tolerance)) {
    throw ConfigError("coupling_matrix",
                      "not Hermitian: ||V - V^dag||_F = " +
                          std::to_string(residual));
  }
}

EigenphaseDecomposition eigenphase_decomposition(
    const UnitaryScatteringMatrix& s) {
  const Index n = s.n_modes();
  Eigen::ComplexSchur<Matrix> schur(s.entries(), /*computeU=*/true);
  if (schur.info() != Eigen::Success) {
    throw InternalError("Schur decomposition failed");
  }
  // A unitary matrix is normal, so its Schur form is diagonal up to roundoff
  // and the Schur vectors form an orthonormal eigenbasis.
  EigenphaseDecomposition dec;
  dec.unitary_basis = schur.matrixU();
  dec.phases.resize(n);
  for (Index j = 0; j < n; ++j) {
    dec.phases(j) = std::arg(schur.matrixT()(j, j));
  }

  Matrix reconstructed = dec.unitary_basis *
                         (dec.phases.array().cast<Complex>() * kI)
                             .exp()
                             .matrix()
                             .asDiagonal() *
                         dec.unitary_basis.adjoint();
  if ((reconstructed - s.entries()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InternalError("eigenphase reconstruction residual exceeds 1e-10");
  }
  return dec;
}

UnitaryScatteringMatrix scattering_from_coupling(const CouplingMatrix& v) {
  const Index n = v.n_modes();
  const Matrix half = kI * 0.5 * v.entries();
  const Matrix a = identity(n) + half;  // I + iV/2, invertible for Hermitian V
  const Matrix b = identity(n) - half;  // I - iV/2
  // The two factors commute, so (I - iV/2)(I + iV/2)^{-1} = A^{-1} B.
  Matrix s = a.partialPivLu().solve(b);
  const double residual = (a * s - b).norm();
  if (residual > 1e-10 * std::max(1.0, a.norm())) {
    throw InternalError("Cayley transform solve residual " +
                        std::to_string(residual));
  }
  return UnitaryScatteringMatrix(std::move(s));
}

CouplingMatrix coupling_from_scattering(const UnitaryScatteringMatrix& s,
                                        double eigenphase_guard) {
  const EigenphaseDecomposition dec = eigenphase_decomposition(s);
  const Index n = s.n_modes();
  RealVector strengths(n);
  for (Index j = 0; j < n; ++j) {
    // Distance on the unit circle from e^{i phi} to -1, where tan(phi/2)
    // is singular.
    const double distance_to_pi = kPi - std::abs(dec.phases(j));
    if (distance_to_pi < eigenphase_guard) {
      throw NonRepresentableDevice(
          "eigenphase " + std::to_string(dec.phases(j)) +
          " lies within the guard band of pi; no point-coupling matrix "
          "represents this device");
    }
    strengths(j) = -2.0 * std::tan(dec.phases(j) / 2.0);
  }
  Matrix v = dec.unitary_basis * strengths.cast<Complex>().asDiagonal() *
             dec.unitary_basis.adjoint();
  v = 0.5 * (v + v.adjoint().eval());  // kill roundoff asymmetry
  return CouplingMatrix(std::move(v));
}

UnitaryScatteringMatrix phase_shifter(double phase) {
  if (!std::isfinite(phase)) {
    throw ConfigError("phase", "must be finite");
  }
  Matrix s(1, 1);
  s(0, 0) = std::exp(kI * phase);
  return UnitaryScatteringMatrix(std::move(s));
}

UnitaryScatteringMatrix beam_splitter(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw ConfigError("theta/phi", "must be finite");
  }
  Matrix s(2, 2);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  s << c, sn * std::exp(kI * phi), -sn * std::exp(-kI * phi), c;
  return UnitaryScatteringMatrix(std::move(s));
}

UnitaryScatteringMatrix circulator() {
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = 1.0;
  s(1, 2) = 1.0;
  s(2, 0) = 1.0;
  return UnitaryScatteringMatrix(std::move(s));
}

}  // namespace pointcouple
