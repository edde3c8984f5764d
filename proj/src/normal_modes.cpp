#include "pointcouple/normal_modes.hpp"

#include <cmath>
#include <numbers>

namespace pointcouple {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2 pi)
}

NormalModeBasis::NormalModeBasis(UnitaryScatteringMatrix s, RealVector x0)
    : scattering(std::move(s)), offsets(std::move(x0)) {
  if (offsets.size() != scattering.n_modes()) {
    throw DimensionMismatch("offsets length must equal the mode count");
  }
}

Complex profile(const NormalModeBasis& basis, Index normal_index, Index mode,
                double x, double omega) {
  const Index n = basis.n_modes();
  if (normal_index < 0 || normal_index >= n || mode < 0 || mode >= n) {
    throw IndexOutOfRange("normal/mode index out of range");
  }
  const double x0 = basis.offsets(mode);
  const Complex carrier = std::exp(kI * omega * (x - x0));
  const Complex upstream =
      mode == normal_index ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  const Complex downstream = basis.scattering(mode, normal_index);
  if (x < x0) return carrier * upstream;
  if (x > x0) return carrier * downstream;
  return carrier * 0.5 * (upstream + downstream);
}

Complex emitter_coupling_coefficient(const NormalModeBasis& basis,
                                     Index normal_index,
                                     const RealVector& positions,
                                     const RealVector& weights, double omega) {
  if (positions.size() != basis.n_modes() ||
      weights.size() != basis.n_modes()) {
    throw DimensionMismatch("positions/weights must have one entry per mode");
  }
  Complex acc{0.0, 0.0};
  for (Index m = 0; m < basis.n_modes(); ++m) {
    acc += weights(m) * profile(basis, normal_index, m, positions(m), omega);
  }
  return acc;
}

namespace {

void check_grids(const NormalModeBasis& basis, const Wavepacket& w,
                 const OmegaGrid& omega_grid) {
  if (basis.n_modes() != w.mode_count()) {
    throw DimensionMismatch("basis and wavepacket mode counts differ");
  }
  if (omega_grid.n < 2 || !(omega_grid.d_omega > 0.0)) {
    throw ConfigError("omega_grid", "need at least two increasing samples");
  }
  const double nyquist = std::numbers::pi / w.dx;
  const double w_lo = std::abs(omega_grid.omega_min);
  const double w_hi = std::abs(omega_grid.omega_at(omega_grid.n - 1));
  if (std::max(w_lo, w_hi) > nyquist) {
    throw GridOverflow("omega grid exceeds the spatial grid's Nyquist rate");
  }
}

// Trapezoidal weight, halved at the grid ends.
double trap_weight(Index g, Index len) {
  return (g == 0 || g == len - 1) ? 0.5 : 1.0;
}

}  // namespace

Matrix decompose_wavepacket(const NormalModeBasis& basis, const Wavepacket& w,
                            const OmegaGrid& omega_grid) {
  w.validate();
  check_grids(basis, w, omega_grid);
  const Index n = basis.n_modes();
  const Index len = w.n_samples();
  const Index nw = omega_grid.n;

  // Half-line transforms per mode, each referenced to its own device
  // coordinate: U_m upstream, D_m downstream. A sample on the device point
  // counts half in each. The frequency sweep uses an incremental phase
  // rotation instead of one exp per (sample, frequency) pair.
  Matrix upstream = Matrix::Zero(n, nw);
  Matrix downstream = Matrix::Zero(n, nw);
  for (Index m = 0; m < n; ++m) {
    const double x0 = basis.offsets(m);
    for (Index g = 0; g < len; ++g) {
      const Complex f = w.envelopes(m, g);
      if (f == Complex{0.0, 0.0}) continue;
      const double u = w.x_at(g) - x0;
      double up_frac = 0.0;
      if (std::abs(u) <= 1e-9 * w.dx) {
        up_frac = 0.5;
      } else if (u < 0.0) {
        up_frac = 1.0;
      }
      const double base = trap_weight(g, len) * w.dx * kInvSqrt2Pi;
      Complex z = std::exp(-kI * omega_grid.omega_min * u) * f * base;
      const Complex rot = std::exp(-kI * omega_grid.d_omega * u);
      for (Index j = 0; j < nw; ++j) {
        upstream(m, j) += up_frac * z;
        downstream(m, j) += (1.0 - up_frac) * z;
        z *= rot;
      }
    }
  }

  Matrix spectra = upstream;
  spectra.noalias() +=
      basis.scattering.entries().adjoint() * downstream;  // S*_{m,n} weights
  return spectra;
}

Wavepacket reconstruct_wavepacket(const NormalModeBasis& basis,
                                  const Matrix& spectra,
                                  const OmegaGrid& omega_grid, double x_min,
                                  double dx, Index n_samples) {
  const Index n = basis.n_modes();
  if (spectra.rows() != n || spectra.cols() != omega_grid.n) {
    throw DimensionMismatch("spectra must be n_modes x n_omega");
  }
  Wavepacket out;
  out.x_min = x_min;
  out.dx = dx;
  out.device_offsets = basis.offsets;
  out.envelopes = Matrix::Zero(n, n_samples);

  // Downstream of mode m the synthesis mixes spectra with S rows.
  const Matrix mixed = basis.scattering.entries() * spectra;

  for (Index m = 0; m < n; ++m) {
    const double x0 = basis.offsets(m);
    for (Index g = 0; g < n_samples; ++g) {
      const double u = x_min + static_cast<double>(g) * dx - x0;
      Complex z = std::exp(kI * omega_grid.omega_min * u);
      const Complex rot = std::exp(kI * omega_grid.d_omega * u);
      Complex acc{0.0, 0.0};
      const bool on_device = std::abs(u) <= 1e-9 * dx;
      for (Index j = 0; j < omega_grid.n; ++j) {
        const double wj = trap_weight(j, omega_grid.n) * omega_grid.d_omega;
        Complex source;
        if (on_device) {
          source = 0.5 * (spectra(m, j) + mixed(m, j));
        } else if (u < 0.0) {
          source = spectra(m, j);
        } else {
          source = mixed(m, j);
        }
        acc += z * wj * source;
        z *= rot;
      }
      out.envelopes(m, g) = acc * kInvSqrt2Pi;
    }
  }
  return out;
}

double roundtrip_error(const NormalModeBasis& basis, const Wavepacket& w,
                       const OmegaGrid& omega_grid) {
  const Matrix spectra = decompose_wavepacket(basis, w, omega_grid);
  const Wavepacket back = reconstruct_wavepacket(
      basis, spectra, omega_grid, w.x_min, w.dx, w.n_samples());
  return (back.envelopes - w.envelopes).cwiseAbs().maxCoeff();
}

}  // namespace pointcouple
