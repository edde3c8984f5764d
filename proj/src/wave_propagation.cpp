#include "pointcouple/wave_propagation.hpp"

#include <cmath>

namespace pointcouple {

void Wavepacket::validate() const {
  if (envelopes.rows() < 1 || envelopes.cols() < 2) {
    throw ConfigError("envelopes", "need at least one mode and two samples");
  }
  if (device_offsets.size() != envelopes.rows()) {
    throw DimensionMismatch("device_offsets length must equal mode count");
  }
  if (!(dx > 0.0) || !std::isfinite(x_min)) {
    throw ConfigError("dx", "grid spacing must be positive and finite");
  }
  if (!std::isfinite(squared_norm())) {
    throw ConfigError("envelopes", "squared norm must be finite");
  }
}

namespace {

// Grid index nearest to position x, or -1 when it falls outside the grid
// or farther than dx/2 from the nearest sample.
Index nearest_index(const Wavepacket& w, double x) {
  const double fractional = (x - w.x_min) / w.dx;
  const double rounded = std::round(fractional);
  if (rounded < 0 || rounded >= static_cast<double>(w.n_samples())) {
    return -1;
  }
  if (std::abs(fractional - rounded) > 0.5 + 1e-9) {
    return -1;
  }
  return static_cast<Index>(rounded);
}

}  // namespace

Wavepacket propagate(const Wavepacket& w, const UnitaryScatteringMatrix& s,
                     const PropagationWindow& window, PropagateReport* report,
                     const PropagateOptions& options) {
  w.validate();
  const Index n = w.mode_count();
  if (s.n_modes() != n) {
    throw DimensionMismatch("device has " + std::to_string(s.n_modes()) +
                            " modes, wavepacket has " + std::to_string(n));
  }
  if (!(window.tau >= 0.0)) {
    throw ConfigError("tau", "propagation interval must be >= 0");
  }
  const Index len = w.n_samples();
  const double tau = window.tau;

  PropagateReport local_report;
  PropagateReport& rep = report ? *report : local_report;

  // Integer source shift per (out mode, in mode) pair: the input sample
  // feeding output mode nm's sample g lives k(nm) slots to the left.
  Eigen::MatrixXi shift(n, n);
  double worst_residual = 0.0;
  for (Index nm = 0; nm < n; ++nm) {
    for (Index m = 0; m < n; ++m) {
      const double exact =
          (tau + w.device_offsets(nm) - w.device_offsets(m)) / w.dx;
      const double rounded = std::round(exact);
      worst_residual = std::max(worst_residual,
                                std::abs(exact - rounded) * w.dx);
      shift(nm, m) = static_cast<int>(rounded);
    }
  }
  rep.shift_rounding_residual = worst_residual;
  if (worst_residual > w.dx / 100.0) {
    rep.warnings.push_back(
        "shift rounded by " + std::to_string(worst_residual) +
        " (more than dx/100); envelope timing is grid-quantized");
  }

  // Amplitude shifted past either grid edge is gone; refuse if it matters.
  const double total = w.squared_norm();
  double lost = 0.0;
  for (Index m = 0; m < n; ++m) {
    const int k = shift(m, m);
    for (Index j = 0; j < len; ++j) {
      const Index dest = j + k;
      if (dest < 0 || dest >= len) {
        lost += std::norm(w.envelopes(m, j)) * w.dx;
      }
    }
  }
  rep.lost_norm_fraction = total > 0.0 ? lost / total : 0.0;
  if (rep.lost_norm_fraction > options.grid_overflow_tolerance) {
    throw GridOverflow("shifted support exceeds the grid: lost fraction " +
                       std::to_string(rep.lost_norm_fraction));
  }

  const Matrix& sm = s.entries();
  Wavepacket out = w;
  out.envelopes.setZero();

  auto source = [&](Index m, Index g, int k) -> Complex {
    const Index src = g - k;
    return (src >= 0 && src < len) ? w.envelopes(m, src) : Complex{0.0, 0.0};
  };

  for (Index nm = 0; nm < n; ++nm) {
    const double x0 = w.device_offsets(nm);
    const Index edge_lo = nearest_index(w, x0);
    const Index edge_hi = nearest_index(w, x0 + tau);
    for (Index g = 0; g < len; ++g) {
      const double x = w.x_at(g);
      const bool at_edge = (g == edge_lo) || (g == edge_hi);
      const bool inside = x > x0 && x < x0 + tau;
      if (at_edge) {
        // Theta = 1/2 on the window boundary: (I + S)/2.
        Complex acc = 0.5 * source(nm, g, shift(nm, nm));
        for (Index m = 0; m < n; ++m) {
          acc += 0.5 * sm(nm, m) * source(m, g, shift(nm, m));
        }
        out.envelopes(nm, g) = acc;
      } else if (inside) {
        Complex acc{0.0, 0.0};
        for (Index m = 0; m < n; ++m) {
          acc += sm(nm, m) * source(m, g, shift(nm, m));
        }
        out.envelopes(nm, g) = acc;
      } else {
        out.envelopes(nm, g) = source(nm, g, shift(nm, nm));
      }
    }
  }
  return out;
}

}  // namespace pointcouple
