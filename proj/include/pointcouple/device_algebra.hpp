#pragma once

#include "pointcouple/errors.hpp"
#include "pointcouple/types.hpp"

namespace pointcouple {

// Conversions between the classical scattering matrix S of a
// frequency-independent linear-optical device and the Hermitian matrix V of
// point-coupling strengths, related by the Cayley transform
//   S = (I - iV/2)(I + iV/2)^{-1},   V = -U diag[2 tan(phi/2)] U^dag,
// where S = U diag[e^{i phi}] U^dag. Group velocity is unity throughout, so
// positions carry units of time and couplings units of rate.

/// N x N unitary matrix mapping incoming to outgoing mode amplitudes.
class UnitaryScatteringMatrix {
 public:
  /// Validates unitarity on construction (Frobenius tolerance).
  explicit UnitaryScatteringMatrix(Matrix entries, double tolerance = 1e-10);

  Index n_modes() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(Index row, Index col) const { return entries_(row, col); }

 private:
  Matrix entries_;
};

/// N x N Hermitian matrix of point-coupling strengths.
class CouplingMatrix {
 public:
  /// Validates Hermiticity on construction (Frobenius tolerance).
  explicit CouplingMatrix(Matrix entries, double tolerance = 1e-10);

  Index n_modes() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(Index row, Index col) const { return entries_(row, col); }

 private:
  Matrix entries_;
};

/// Unitary eigenbasis U and eigenphases phi in (-pi, pi] with
/// S = U diag[e^{i phi}] U^dag.
struct EigenphaseDecomposition {
  Matrix unitary_basis;
  RealVector phases;
};

/// Schur-based eigendecomposition of a unitary matrix. The Schur vectors of a
/// normal matrix are an orthonormal eigenbasis, which a general eigensolver
/// does not guarantee in degenerate eigenspaces.
EigenphaseDecomposition eigenphase_decomposition(
    const UnitaryScatteringMatrix& s);

/// S = (I - iV/2)(I + iV/2)^{-1}. Always well defined for Hermitian V.
UnitaryScatteringMatrix scattering_from_coupling(const CouplingMatrix& v);

/// V = -U diag[2 tan(phi/2)] U^dag from the eigenphases of S.
/// Throws NonRepresentableDevice if any eigenphase lies within
/// `eigenphase_guard` radians of +-pi, where tan(phi/2) diverges.
CouplingMatrix coupling_from_scattering(const UnitaryScatteringMatrix& s,
                                        double eigenphase_guard = 1e-6);

/// 1x1 device [e^{i phase}].
UnitaryScatteringMatrix phase_shifter(double phase);

/// 2x2 device [[cos theta, sin theta e^{i phi}],
///             [-sin theta e^{-i phi}, cos theta]].
UnitaryScatteringMatrix beam_splitter(double theta, double phi);

/// 3x3 cyclic permutation [[0,1,0],[0,0,1],[1,0,0]].
UnitaryScatteringMatrix circulator();

}  // namespace pointcouple
