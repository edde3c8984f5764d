#pragma once

#include <complex>

#include <Eigen/Dense>

namespace pointcouple {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

constexpr Complex kI{0.0, 1.0};

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

/// Frobenius distance from unitarity, ||S^dag S - I||_F.
inline double unitarity_residual(const Matrix& s) {
  return (s.adjoint() * s - identity(s.cols())).norm();
}

/// Frobenius distance from Hermiticity, ||V - V^dag||_F.
inline double hermiticity_residual(const Matrix& v) {
  return (v - v.adjoint()).norm();
}

}  // namespace pointcouple
