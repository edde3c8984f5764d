#pragma once

#include <map>
#include <utility>
#include <vector>

#include "pointcouple/device_algebra.hpp"
#include "pointcouple/types.hpp"

namespace pointcouple {

// Multi-photon Fock scattering through a device. Frequencies enter as
// discrete labels: the device conserves each photon's frequency, so the
// state factors into independent per-frequency blocks and a finite label
// set loses nothing.

/// One photon slot: mode index and frequency-label index, both 0-based.
struct PhotonLabel {
  Index mode;
  Index freq;

  friend auto operator<=>(const PhotonLabel&, const PhotonLabel&) = default;
};

/// Canonically sorted multiset of photon labels.
using PhotonMultiset = std::vector<PhotonLabel>;

PhotonMultiset canonical(PhotonMultiset labels);

/// Product over distinct labels of (occupation)!; the weight turning a
/// stored amplitude into a squared-norm contribution.
double multiset_weight(const PhotonMultiset& key);

/// K-photon state stored as one amplitude per label multiset:
///   |psi> = sum_m A_m prod_{alpha in m} adag_alpha |vac>,
/// so ||psi||^2 = sum_m |A_m|^2 prod_alpha n_alpha!. Simultaneous-permutation
/// symmetry of the underlying amplitude holds by construction.
class FockWavepacketState {
 public:
  FockWavepacketState(Index photon_count, Index mode_count,
                      std::vector<double> frequency_labels);

  Index photon_count() const { return photon_count_; }
  Index mode_count() const { return mode_count_; }
  const std::vector<double>& frequency_labels() const { return freqs_; }

  /// Index of a frequency value in the label set; throws
  /// UnknownFrequencyLabel when absent.
  Index frequency_index(double freq) const;

  /// Adds amp to the term keyed by {(mode, frequency value)...}.
  void add_term(const std::vector<std::pair<Index, double>>& photons,
                Complex amp);
  void add_term_indexed(PhotonMultiset key, Complex amp);

  Complex amplitude(const PhotonMultiset& key) const;
  const std::map<PhotonMultiset, Complex>& terms() const { return terms_; }

  double squared_norm() const;
  void normalize();

 private:
  Index photon_count_;
  Index mode_count_;
  std::vector<double> freqs_;
  std::map<PhotonMultiset, Complex> terms_;
};

/// Output multiset to look up; size must equal the photon count.
struct CoincidenceQuery {
  std::vector<std::pair<Index, double>> photons;  // (mode, frequency value)
};

/// Replaces every creation operator adag_mu(w) by sum_j S_{j,mu} adag_j(w),
/// re-expands and re-collects the multiset amplitudes. Frequency labels are
/// untouched. Norm is conserved (S unitary).
FockWavepacketState scatter_state(const FockWavepacketState& input,
                                  const UnitaryScatteringMatrix& s);

/// |amplitude|^2 times the multiset occupation weight; over all outcome
/// multisets these sum to 1 for a normalized state.
double coincidence_probability(const FockWavepacketState& output,
                               const CoincidenceQuery& q);

/// One permutation term of a K-photon position-basis matrix element: the
/// product of S entries and the argument of each position delta. A term
/// contributes only where every delta offset vanishes.
struct PermutationTerm {
  std::vector<Index> permutation;   // l-th output pairs with input perm[l]
  Complex coefficient;              // prod_l S(out_mode_l, in_mode_perm[l])
  RealVector delta_offsets;         // (x_l - x0_out) - (x'_perm[l] - x0_in)
};

std::vector<PermutationTerm> position_matrix_element(
    const UnitaryScatteringMatrix& s, const RealVector& offsets,
    const std::vector<Index>& out_modes, const RealVector& out_positions,
    const std::vector<Index>& in_modes, const RealVector& in_positions);

}  // namespace pointcouple
