#include "pointcouple/fock_scattering.hpp"

#include <algorithm>
#include <cmath>

#include "pointcouple/errors.hpp"

namespace pointcouple {

PhotonMultiset canonical(PhotonMultiset labels) {
  std::sort(labels.begin(), labels.end());
  return labels;
}

double multiset_weight(const PhotonMultiset& key) {
  double weight = 1.0;
  double run = 1.0;
  for (size_t i = 1; i < key.size(); ++i) {
    run = (key[i] == key[i - 1]) ? run + 1.0 : 1.0;
    weight *= run;
  }
  return weight;
}

FockWavepacketState::FockWavepacketState(Index photon_count, Index mode_count,
                                         std::vector<double> frequency_labels)
    : photon_count_(photon_count),
      mode_count_(mode_count),
      freqs_(std::move(frequency_labels)) {
  if (photon_count_ < 0 || mode_count_ < 1) {
    throw ConfigError("photon_count/mode_count",
                      "need K >= 0 photons and N >= 1 modes");
  }
  std::vector<double> sorted = freqs_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("frequencies", "frequency labels must be distinct");
  }
}

Index FockWavepacketState::frequency_index(double freq) const {
  for (size_t i = 0; i < freqs_.size(); ++i) {
    if (freqs_[i] == freq) return static_cast<Index>(i);
  }
  throw UnknownFrequencyLabel("frequency " + std::to_string(freq) +
                              " is not in the label set");
}

void FockWavepacketState::add_term(
    const std::vector<std::pair<Index, double>>& photons, Complex amp) {
  PhotonMultiset key;
  key.reserve(photons.size());
  for (const auto& [mode, freq] : photons) {
    key.push_back({mode, frequency_index(freq)});
  }
  add_term_indexed(std::move(key), amp);
}

void FockWavepacketState::add_term_indexed(PhotonMultiset key, Complex amp) {
  if (static_cast<Index>(key.size()) != photon_count_) {
    throw DimensionMismatch("term has " + std::to_string(key.size()) +
                            " photons, state has " +
                            std::to_string(photon_count_));
  }
  for (const PhotonLabel& label : key) {
    if (label.mode < 0 || label.mode >= mode_count_) {
      throw IndexOutOfRange("photon mode index out of range");
    }
    if (label.freq < 0 || label.freq >= static_cast<Index>(freqs_.size())) {
      throw UnknownFrequencyLabel("frequency label index out of range");
    }
  }
  terms_[canonical(std::move(key))] += amp;
}

Complex FockWavepacketState::amplitude(const PhotonMultiset& key) const {
  const auto it = terms_.find(canonical(key));
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

double FockWavepacketState::squared_norm() const {
  double total = 0.0;
  for (const auto& [key, amp] : terms_) {
    total += std::norm(amp) * multiset_weight(key);
  }
  return total;
}

void FockWavepacketState::normalize() {
  const double n2 = squared_norm();
  if (n2 <= 0.0) {
    throw ConfigError("terms", "cannot normalize a zero state");
  }
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& [key, amp] : terms_) amp *= scale;
}

FockWavepacketState scatter_state(const FockWavepacketState& input,
                                  const UnitaryScatteringMatrix& s) {
  if (input.mode_count() != s.n_modes()) {
    throw DimensionMismatch("state has " + std::to_string(input.mode_count()) +
                            " modes, device has " +
                            std::to_string(s.n_modes()));
  }
  const Index n = s.n_modes();
  const Index k = input.photon_count();
  FockWavepacketState out(k, n, input.frequency_labels());

  // Expand prod_l (sum_j S_{j, mu_l} adag_{j, w_l}) term by term with an
  // odometer over the j assignment.
  for (const auto& [key, amp] : input.terms()) {
    std::vector<Index> assign(static_cast<size_t>(k), 0);
    while (true) {
      Complex coeff = amp;
      PhotonMultiset new_key(key.size());
      for (Index l = 0; l < k; ++l) {
        coeff *= s(assign[static_cast<size_t>(l)],
                   key[static_cast<size_t>(l)].mode);
        new_key[static_cast<size_t>(l)] = {assign[static_cast<size_t>(l)],
                                           key[static_cast<size_t>(l)].freq};
      }
      if (coeff != Complex{0.0, 0.0}) {
        out.add_term_indexed(std::move(new_key), coeff);
      }
      // advance odometer
      Index l = 0;
      for (; l < k; ++l) {
        if (++assign[static_cast<size_t>(l)] < n) break;
        assign[static_cast<size_t>(l)] = 0;
      }
      if (l == k) break;
    }
  }
  return out;
}

double coincidence_probability(const FockWavepacketState& output,
                               const CoincidenceQuery& q) {
  if (static_cast<Index>(q.photons.size()) != output.photon_count()) {
    throw DimensionMismatch("query size must equal the photon count");
  }
  PhotonMultiset key;
  key.reserve(q.photons.size());
  for (const auto& [mode, freq] : q.photons) {
    key.push_back({mode, output.frequency_index(freq)});
  }
  key = canonical(std::move(key));
  return std::norm(output.amplitude(key)) * multiset_weight(key);
}

std::vector<PermutationTerm> position_matrix_element(
    const UnitaryScatteringMatrix& s, const RealVector& offsets,
    const std::vector<Index>& out_modes, const RealVector& out_positions,
    const std::vector<Index>& in_modes, const RealVector& in_positions) {
  const size_t k = out_modes.size();
  if (in_modes.size() != k ||
      out_positions.size() != static_cast<Index>(k) ||
      in_positions.size() != static_cast<Index>(k)) {
    throw DimensionMismatch(
        "photon counts must match on both sides of the matrix element");
  }
  if (offsets.size() != s.n_modes()) {
    throw DimensionMismatch("offsets length must equal the mode count");
  }
  for (Index mode : out_modes) {
    if (mode < 0 || mode >= s.n_modes()) {
      throw IndexOutOfRange("output mode index out of range");
    }
  }
  for (Index mode : in_modes) {
    if (mode < 0 || mode >= s.n_modes()) {
      throw IndexOutOfRange("input mode index out of range");
    }
  }

  std::vector<Index> perm(k);
  for (size_t l = 0; l < k; ++l) perm[l] = static_cast<Index>(l);

  std::vector<PermutationTerm> result;
  do {
    PermutationTerm term;
    term.permutation = perm;
    term.coefficient = Complex{1.0, 0.0};
    term.delta_offsets.resize(static_cast<Index>(k));
    for (size_t l = 0; l < k; ++l) {
      const Index mu = out_modes[l];
      const Index mu_in = in_modes[static_cast<size_t>(perm[l])];
      term.coefficient *= s(mu, mu_in);
      term.delta_offsets(static_cast<Index>(l)) =
          (out_positions(static_cast<Index>(l)) - offsets(mu)) -
          (in_positions(perm[l]) - offsets(mu_in));
    }
    result.push_back(std::move(term));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

}  // namespace pointcouple
