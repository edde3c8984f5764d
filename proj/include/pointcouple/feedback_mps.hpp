#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pointcouple/mps.hpp"
#include "pointcouple/types.hpp"

namespace pointcouple {

// Time-bin MPS simulation of a two-level emitter coupled to forward and
// backward waveguide modes with a partially transmitting mirror a delay
// t_d away. Rates are normalized so gamma_plus + gamma_minus = 1 and all
// times are in units of 1/gamma. The chain holds the emitter plus one site
// per time bin (forward x backward oscillators, bin_dim levels each);
// 2*n_d vacuum bins are pre-padded so the delayed bin index k - 2*n_d is
// always addressable.

/// Omega(t) = amplitude * exp(-decay_rate * t) for t >= 0.
struct ExponentialDrive {
  double amplitude = 0.0;
  double decay_rate = 0.0;
};

/// Piecewise-linear Omega(t) through the given samples, zero outside.
struct TableDrive {
  std::vector<double> times;
  std::vector<double> values;
};

using Drive = std::variant<std::monostate, ExponentialDrive, TableDrive>;

struct FeedbackConfig {
  double gamma_plus = 0.5;
  double gamma_minus = 0.5;
  double delta_e = 0.0;     // omega_e - omega_0
  double omega0_td = 0.0;   // dimensionless phase omega_0 * t_d
  double gamma_td = 2.0;    // dimensionless delay gamma * t_d
  double theta = 1.5707963267948966;  // mirror mixing angle
  double phi = 0.0;                   // mirror phase
  Drive drive;
  double dt = 0.05;          // discretization step, units 1/gamma
  double schmidt_tol = 0.01; // absolute singular-value threshold
  Index bin_dim = 2;         // levels per direction per bin
  double t_end = 10.0;
  Index bond_cap = 256;
  /// Defaults to excited when undriven and ground when driven.
  std::optional<bool> initial_excited;

  void validate() const;
  double t_delay() const { return gamma_td; }
  Index n_delay() const { return static_cast<Index>(gamma_td / dt); }
  Index n_steps() const { return static_cast<Index>(t_end / dt + 1e-9); }
  bool starts_excited() const {
    return initial_excited.value_or(
        std::holds_alternative<std::monostate>(drive));
  }
  double drive_at(double t) const;
};

/// Integrated gate-Hamiltonian coefficients for step k.
struct GateCoefficients {
  double detuning_term = 0.0;  // delta_e * dt
  double drive_term = 0.0;     // Omega(k dt) * dt
  Complex forward;             // on A_+[k]
  Complex backward;            // on A_-[k]
  Complex delayed;             // on A_-[k - 2 n_d]
  bool has_delay = false;
};

GateCoefficients rotating_frame_coupling(const FeedbackConfig& config,
                                         Index k);

/// Dense step unitary: (emitter x bin_k) for k <= n_d, else
/// (bin_{k-2n_d} x emitter x bin_k). Built by exponentiating the Hermitian
/// local Hamiltonian through its eigendecomposition.
struct BinGate {
  Index k = 0;
  bool three_site = false;
  Matrix unitary;
};

BinGate build_gate(const FeedbackConfig& config, Index k);

/// Initial chain: 2*n_d vacuum bins, the emitter, then n_steps future bins.
Mps make_initial_state(const FeedbackConfig& config);

/// Chain position of the emitter at the start of step k.
Index emitter_position(const FeedbackConfig& config, Index k);

/// Advances the state across bin k: swap the delayed bin next to the
/// emitter when needed, apply the gate, restore ordering, then move the
/// emitter past bin k.
void step(Mps& mps, const FeedbackConfig& config, Index k);

struct FeedbackSample {
  double t = 0.0;
  double abs_eps = 0.0;           // |eps| = sqrt(<sigma^dag sigma>)
  double population = 0.0;        // <sigma^dag sigma>
  double discarded_weight = 0.0;  // cumulative
  Index max_bond = 1;
};

struct FeedbackResult {
  std::vector<FeedbackSample> samples;
  Index n_delay = 0;
  double effective_delay = 0.0;
  double delay_residual = 0.0;  // t_d - n_d dt
  Index max_bond = 1;
  double discarded_weight = 0.0;
};

/// Full deterministic run; one sample at t = 0 plus one per step.
FeedbackResult run(const FeedbackConfig& config);

/// Sum over bins of the expected photon number (both directions).
double total_photon_number(Mps& mps, const FeedbackConfig& config, Index k);

}  // namespace pointcouple
