#pragma once

#include <vector>

#include "pointcouple/errors.hpp"
#include "pointcouple/types.hpp"

namespace pointcouple {

// Minimal finite-chain matrix-product-state engine: product-state
// construction, orthogonality-center moves, and two-/three-site unitary
// application with Schmidt truncation. Site tensors are stored one matrix
// per physical level, T[l](left bond, right bond).

struct SiteTensor {
  std::vector<Matrix> levels;

  Index phys_dim() const { return static_cast<Index>(levels.size()); }
  Index left_dim() const { return levels.empty() ? 0 : levels[0].rows(); }
  Index right_dim() const { return levels.empty() ? 0 : levels[0].cols(); }
};

struct TruncationPolicy {
  /// Singular values below this absolute threshold (on a norm-1 state)
  /// are dropped; the state is renormalized afterwards.
  double schmidt_tol = 0.0;
  /// Hard cap on the kept bond dimension; exceeding it raises BondExplosion.
  Index bond_cap = 256;
};

class Mps {
 public:
  /// Product state with the given physical dimensions, each site pinned to
  /// `level[i]`.
  Mps(const std::vector<Index>& phys_dims, const std::vector<Index>& levels);

  Index n_sites() const { return static_cast<Index>(sites_.size()); }
  const SiteTensor& site(Index i) const { return sites_[static_cast<size_t>(i)]; }
  Index center() const { return center_; }

  Index bond_dim(Index cut) const;  // right bond of site `cut`
  Index max_bond_dim() const;
  double cumulative_discarded_weight() const { return discarded_; }

  /// Norm of the state (center-gauge Frobenius norm).
  double norm() const;

  /// Moves the orthogonality center with exact QR gauge transformations.
  void move_center(Index target);

  /// Applies a (d_i d_{i+1}) x (d_i d_{i+1}) operator on sites (i, i+1);
  /// index convention row = l_i * d_{i+1} + l_{i+1}.
  void apply_two_site(Index i, const Matrix& gate,
                      const TruncationPolicy& policy);

  /// Applies a (d_i d_{i+1} d_{i+2})^2 operator on three adjacent sites,
  /// split back with two truncated Schmidt decompositions.
  void apply_three_site(Index i, const Matrix& gate,
                        const TruncationPolicy& policy);

  /// Exchanges the physical sites at chain positions (i, i+1).
  void swap_sites(Index i, const TruncationPolicy& policy);

  /// <op> on one site; moves the center there.
  Complex expectation_one_site(Index i, const Matrix& op);

 private:
  void orthonormalize_step_right(Index i);
  void orthonormalize_step_left(Index i);
  // Splits a fused two-block tensor (theta) at the bond, truncating.
  void split_and_store(Index i, const std::vector<Matrix>& theta,
                       Index d_left, Index d_right,
                       const TruncationPolicy& policy);

  std::vector<SiteTensor> sites_;
  Index center_ = 0;
  double discarded_ = 0.0;
};

}  // namespace pointcouple
