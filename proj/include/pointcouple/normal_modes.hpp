#pragma once

#include "pointcouple/device_algebra.hpp"
#include "pointcouple/types.hpp"
#include "pointcouple/wave_propagation.hpp"

namespace pointcouple {

// Normal-mode decomposition of a device: continuum oscillator families
// b_n(omega) that diagonalize the point-coupling Hamiltonian. The field
// profile of normal mode n on waveguide mode m equals the classical
// scattering solution: delta_{m,n} upstream of the device, S_{m,n}
// downstream, carrier e^{i omega (x - x0_m)}.

struct NormalModeBasis {
  UnitaryScatteringMatrix scattering;
  RealVector offsets;  // device coordinate per mode

  NormalModeBasis(UnitaryScatteringMatrix s, RealVector x0);
  Index n_modes() const { return scattering.n_modes(); }
};

struct OmegaGrid {
  double omega_min = 0.0;
  double d_omega = 1.0;
  Index n = 0;

  double omega_at(Index j) const {
    return omega_min + static_cast<double>(j) * d_omega;
  }
};

/// Field amplitude of normal mode `normal_index` on waveguide mode `mode`
/// at position x and frequency omega. At x exactly on the device the
/// two-sided average is returned.
Complex profile(const NormalModeBasis& basis, Index normal_index, Index mode,
                double x, double omega);

/// Weighted sum over modes of profile() at per-mode positions; the coupling
/// coefficient of an emitter attached to the waveguides at those points.
Complex emitter_coupling_coefficient(const NormalModeBasis& basis,
                                     Index normal_index,
                                     const RealVector& positions,
                                     const RealVector& weights, double omega);

/// Projects envelopes onto the normal modes: trapezoidal evaluation of the
/// half-line transforms, upstream identity and downstream conjugate-S
/// weights. Returns an n_modes x n_omega spectrum matrix.
Matrix decompose_wavepacket(const NormalModeBasis& basis, const Wavepacket& w,
                            const OmegaGrid& omega_grid);

/// Inverse map: synthesizes envelopes on the given spatial grid from
/// normal-mode spectra (identity upstream, S weights downstream, averaged
/// on the device point).
Wavepacket reconstruct_wavepacket(const NormalModeBasis& basis,
                                  const Matrix& spectra,
                                  const OmegaGrid& omega_grid, double x_min,
                                  double dx, Index n_samples);

/// Max-abs error of decompose -> reconstruct on w's own grid.
double roundtrip_error(const NormalModeBasis& basis, const Wavepacket& w,
                       const OmegaGrid& omega_grid);

}  // namespace pointcouple
