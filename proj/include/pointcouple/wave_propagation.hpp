#pragma once

#include <string>
#include <vector>

#include "pointcouple/device_algebra.hpp"
#include "pointcouple/types.hpp"

namespace pointcouple {

// Shift-and-scatter action of a device on classical position-domain
// envelopes: after a propagation interval tau, the envelope vector at
// displacement y from the device equals the input shifted by tau outside
// the window [0, tau], S times the shifted vector inside it, and
// (I + S)/2 times the shifted vector at the window edges.

/// Per-mode complex envelopes sampled on a shared uniform position grid.
/// Positions are in units of time (unit group velocity).
struct Wavepacket {
  double x_min = 0.0;
  double dx = 1.0;
  Matrix envelopes;        // n_modes rows, n_samples columns
  RealVector device_offsets;  // device coordinate x0 per mode

  Index mode_count() const { return envelopes.rows(); }
  Index n_samples() const { return envelopes.cols(); }
  double x_at(Index g) const { return x_min + static_cast<double>(g) * dx; }
  double x_max() const { return x_at(n_samples() - 1); }

  /// sum over modes and samples of |amplitude|^2 dx.
  double squared_norm() const { return envelopes.squaredNorm() * dx; }

  void validate() const;
};

struct PropagationWindow {
  double t0 = 0.0;
  double tau = 0.0;  // must be >= 0
};

/// Diagnostics from a propagate() call.
struct PropagateReport {
  double shift_rounding_residual = 0.0;  // worst |k dx - exact shift|
  double lost_norm_fraction = 0.0;
  std::vector<std::string> warnings;
};

struct PropagateOptions {
  /// Relative squared-norm allowed to shift past the grid edge before
  /// GridOverflow is raised.
  double grid_overflow_tolerance = 1e-10;
};

/// Applies the device window map to the envelopes. Shifts are realized as
/// integer grid moves; tau (plus offset differences) is rounded to the
/// nearest multiple of dx, with a warning when the rounding exceeds dx/100.
Wavepacket propagate(const Wavepacket& w, const UnitaryScatteringMatrix& s,
                     const PropagationWindow& window,
                     PropagateReport* report = nullptr,
                     const PropagateOptions& options = {});

}  // namespace pointcouple
