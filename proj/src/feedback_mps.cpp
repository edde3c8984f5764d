#include "pointcouple/feedback_mps.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace pointcouple {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

Matrix kron3(const Matrix& a, const Matrix& b, const Matrix& c) {
  return kron(kron(a, b), c);
}

Matrix ladder(Index dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Matrix lower_op() {  // |g><e|
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

Matrix hermitian_exp_minus_i(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw InternalError("gate Hamiltonian eigendecomposition failed");
  }
  const Vector phases =
      (-kI * es.eigenvalues().array().cast<Complex>()).exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
}

}  // namespace

void FeedbackConfig::validate() const {
  if (!(gamma_plus >= 0.0)) throw ConfigError("gamma_plus", "must be >= 0");
  if (!(gamma_minus >= 0.0)) throw ConfigError("gamma_minus", "must be >= 0");
  if (std::abs(gamma_plus + gamma_minus - 1.0) > 1e-9) {
    throw ConfigError("gamma_plus",
                      "gamma_plus + gamma_minus must equal 1 (rates are in "
                      "units of the total decay rate)");
  }
  require_finite(delta_e, "delta_e");
  require_finite(omega0_td, "omega0_td");
  require_finite(theta, "theta");
  require_finite(phi, "phi");
  if (!(gamma_td > 0.0)) throw ConfigError("gamma_td", "must be > 0");
  if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (!(schmidt_tol > 0.0 && schmidt_tol < 1.0)) {
    throw ConfigError("schmidt_tol", "must lie in (0, 1)");
  }
  if (bin_dim < 2) throw ConfigError("bin_dim", "must be >= 2");
  if (!(t_end > 0.0)) throw ConfigError("t_end", "must be > 0");
  if (bond_cap < 1) throw ConfigError("bond_cap", "must be >= 1");
  if (n_delay() < 1) {
    throw ConfigError("dt", "must resolve the delay: floor(t_d/dt) >= 1");
  }
  if (const auto* exp_drive = std::get_if<ExponentialDrive>(&drive)) {
    require_finite(exp_drive->amplitude, "drive.amplitude");
    require_finite(exp_drive->decay_rate, "drive.decay_rate");
  } else if (const auto* table = std::get_if<TableDrive>(&drive)) {
    if (table->times.empty() || table->times.size() != table->values.size()) {
      throw ConfigError("drive.times",
                        "times and values must be nonempty and equal length");
    }
    if (!std::is_sorted(table->times.begin(), table->times.end())) {
      throw ConfigError("drive.times", "must be sorted ascending");
    }
  }
}

double FeedbackConfig::drive_at(double t) const {
  if (const auto* exp_drive = std::get_if<ExponentialDrive>(&drive)) {
    return t < 0.0 ? 0.0
                   : exp_drive->amplitude *
                         std::exp(-exp_drive->decay_rate * t);
  }
  if (const auto* table = std::get_if<TableDrive>(&drive)) {
    const auto& ts = table->times;
    const auto& vs = table->values;
    if (t < ts.front() || t > ts.back()) return 0.0;
    const auto hi =
        std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
    if (hi == 0) return vs.front();
    if (hi == static_cast<std::ptrdiff_t>(ts.size())) return vs.back();
    const double t0 = ts[static_cast<size_t>(hi - 1)];
    const double t1 = ts[static_cast<size_t>(hi)];
    const double w = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
    return (1.0 - w) * vs[static_cast<size_t>(hi - 1)] +
           w * vs[static_cast<size_t>(hi)];
  }
  return 0.0;
}

GateCoefficients rotating_frame_coupling(const FeedbackConfig& config,
                                         Index k) {
  if (k < 0) throw IndexOutOfRange("step index must be >= 0");
  const double dt = config.dt;
  GateCoefficients c;
  c.detuning_term = config.delta_e * dt;
  c.drive_term = config.drive_at(static_cast<double>(k) * dt) * dt;
  const Complex delay_phase = std::exp(kI * config.omega0_td);
  const Complex fwd_base = std::sqrt(config.gamma_plus * dt) * delay_phase;
  c.backward =
      std::sqrt(config.gamma_minus * dt) * std::exp(-kI * config.omega0_td);
  if (k <= config.n_delay()) {
    c.forward = fwd_base;
    c.delayed = Complex{0.0, 0.0};
    c.has_delay = false;
  } else {
    // Emission toward the mirror returns after 2 t_d, transmitted part
    // cos(theta), reflected amplitude -sin(theta) e^{-i phi} (phi = 0 is the
    // hard-mirror phase that supports the bound state).
    c.forward = fwd_base * std::cos(config.theta);
    c.delayed = fwd_base * (-std::sin(config.theta)) * std::exp(-kI * config.phi);
    c.has_delay = true;
  }
  return c;
}

BinGate build_gate(const FeedbackConfig& config, Index k) {
  const GateCoefficients c = rotating_frame_coupling(config, k);
  const Index b = config.bin_dim;
  const Index bin_dim2 = b * b;
  const Matrix a = ladder(b);
  const Matrix ib = Matrix::Identity(b, b);
  const Matrix ibin = Matrix::Identity(bin_dim2, bin_dim2);
  const Matrix a_plus = kron(a, ib);
  const Matrix a_minus = kron(ib, a);
  const Matrix sigma = lower_op();
  const Matrix sigma_dag = sigma.adjoint();
  const Matrix n_e = sigma_dag * sigma;
  const Matrix sigma_x = sigma + sigma_dag;

  const Matrix bin_coupling = c.forward * a_plus + c.backward * a_minus;

  BinGate gate;
  gate.k = k;
  gate.three_site = c.has_delay;
  if (!c.has_delay) {
    Matrix h = c.detuning_term * kron(n_e, ibin) +
               c.drive_term * kron(sigma_x, ibin) +
               kron(sigma_dag, bin_coupling);
    h += h.adjoint().eval();
    h -= c.detuning_term * kron(n_e, ibin);  // diagonal term added twice
    gate.unitary = hermitian_exp_minus_i(h);
  } else {
    const Matrix i2 = Matrix::Identity(2, 2);
    Matrix h = c.detuning_term * kron3(ibin, n_e, ibin) +
               c.drive_term * kron3(ibin, sigma_x, ibin) +
               kron3(ibin, sigma_dag, bin_coupling) +
               c.delayed * kron3(a_minus, sigma_dag, ibin);
    h += h.adjoint().eval();
    h -= c.detuning_term * kron3(ibin, n_e, ibin);
    gate.unitary = hermitian_exp_minus_i(h);
  }
  return gate;
}

Mps make_initial_state(const FeedbackConfig& config) {
  config.validate();
  const Index n_d = config.n_delay();
  const Index steps = config.n_steps();
  const Index bin_dim2 = config.bin_dim * config.bin_dim;
  const Index n_sites = 2 * n_d + 1 + steps;
  std::vector<Index> dims(static_cast<size_t>(n_sites), bin_dim2);
  std::vector<Index> levels(static_cast<size_t>(n_sites), 0);
  const Index emitter = 2 * n_d;
  dims[static_cast<size_t>(emitter)] = 2;
  levels[static_cast<size_t>(emitter)] = config.starts_excited() ? 1 : 0;
  return Mps(dims, levels);
}

Index emitter_position(const FeedbackConfig& config, Index k) {
  return k + 2 * config.n_delay();
}

void step(Mps& mps, const FeedbackConfig& config, Index k) {
  if (k < 0 || k >= config.n_steps()) {
    throw IndexOutOfRange("step index out of range");
  }
  const TruncationPolicy policy{config.schmidt_tol, config.bond_cap};
  const BinGate gate = build_gate(config, k);
  const Index e = emitter_position(config, k);

  if (!gate.three_site) {
    mps.apply_two_site(e, gate.unitary, policy);
  } else {
    // Bring the delayed bin (chain position k, counting pre-padded bins)
    // next to the emitter, apply, and restore the ordering.
    const Index home = k;  // bin k - 2 n_d lives at (k - 2 n_d) + 2 n_d
    for (Index j = home; j <= e - 2; ++j) mps.swap_sites(j, policy);
    mps.apply_three_site(e - 1, gate.unitary, policy);
    for (Index j = e - 2; j >= home; --j) mps.swap_sites(j, policy);
  }
  // Advance the emitter past bin k for the next step.
  mps.swap_sites(e, policy);
}

double total_photon_number(Mps& mps, const FeedbackConfig& config, Index k) {
  const Index b = config.bin_dim;
  const Matrix a = ladder(b);
  const Matrix num = a.adjoint() * a;
  const Matrix ib = Matrix::Identity(b, b);
  const Matrix bin_number = kron(num, ib) + kron(ib, num);
  const Index e = emitter_position(config, k);
  double total = 0.0;
  for (Index i = 0; i < mps.n_sites(); ++i) {
    if (i == e) continue;
    total += mps.expectation_one_site(i, bin_number).real();
  }
  return total;
}

FeedbackResult run(const FeedbackConfig& config) {
  config.validate();
  Mps mps = make_initial_state(config);
  const Matrix n_e = (Matrix(2, 2) << 0, 0, 0, 1).finished();

  FeedbackResult result;
  result.n_delay = config.n_delay();
  result.effective_delay = static_cast<double>(result.n_delay) * config.dt;
  result.delay_residual = config.t_delay() - result.effective_delay;

  auto sample = [&](double t, Index emitter_site) {
    FeedbackSample s;
    s.t = t;
    s.population = std::clamp(
        mps.expectation_one_site(emitter_site, n_e).real(), 0.0, 1.0);
    s.abs_eps = std::sqrt(s.population);
    s.discarded_weight = mps.cumulative_discarded_weight();
    s.max_bond = mps.max_bond_dim();
    result.samples.push_back(s);
  };

  sample(0.0, emitter_position(config, 0));
  const Index steps = config.n_steps();
  for (Index k = 0; k < steps; ++k) {
    step(mps, config, k);
    sample(static_cast<double>(k + 1) * config.dt,
           emitter_position(config, k + 1));
  }
  result.max_bond = 1;
  for (const FeedbackSample& s : result.samples) {
    result.max_bond = std::max(result.max_bond, s.max_bond);
  }
  result.discarded_weight = mps.cumulative_discarded_weight();
  return result;
}

}  // namespace pointcouple
