#include "pointcouple/mps.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace pointcouple {

namespace {

// Thin SVD with absolute Schmidt threshold. Returns kept rank; the kept
// singular values are rescaled to unit norm and the dropped weight is
// accumulated into `discarded`.
struct SplitResult {
  Matrix left;        // rows x rank, orthonormal columns
  Matrix right;       // rank x cols, scaled by singular values
  Index rank = 0;
};

SplitResult truncated_split(const Matrix& m, const TruncationPolicy& policy,
                            double& discarded) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const Index full = s.size();
  Index keep = 0;
  for (Index i = 0; i < full; ++i) {
    if (s(i) >= policy.schmidt_tol) ++keep;
  }
  if (keep == 0) keep = 1;
  if (keep > policy.bond_cap) {
    throw BondExplosion("bond dimension " + std::to_string(keep) +
                        " exceeds the cap " + std::to_string(policy.bond_cap));
  }
  const double kept_norm = s.head(keep).norm();
  discarded += s.tail(full - keep).squaredNorm();

  SplitResult result;
  result.rank = keep;
  result.left = svd.matrixU().leftCols(keep);
  result.right = (s.head(keep) / kept_norm).asDiagonal() *
                 svd.matrixV().leftCols(keep).adjoint();
  return result;
}

}  // namespace

Mps::Mps(const std::vector<Index>& phys_dims,
         const std::vector<Index>& levels) {
  if (phys_dims.empty() || phys_dims.size() != levels.size()) {
    throw DimensionMismatch("phys_dims and levels must be equal, nonempty");
  }
  sites_.reserve(phys_dims.size());
  for (size_t i = 0; i < phys_dims.size(); ++i) {
    if (phys_dims[i] < 1 || levels[i] < 0 || levels[i] >= phys_dims[i]) {
      throw ConfigError("levels", "site level out of range");
    }
    SiteTensor t;
    t.levels.resize(static_cast<size_t>(phys_dims[i]));
    for (Index l = 0; l < phys_dims[i]; ++l) {
      t.levels[static_cast<size_t>(l)] =
          Matrix::Constant(1, 1, l == levels[i] ? 1.0 : 0.0);
    }
    sites_.push_back(std::move(t));
  }
  center_ = 0;
}

Index Mps::bond_dim(Index cut) const {
  return sites_[static_cast<size_t>(cut)].right_dim();
}

Index Mps::max_bond_dim() const {
  Index best = 1;
  for (Index i = 0; i + 1 < n_sites(); ++i) best = std::max(best, bond_dim(i));
  return best;
}

double Mps::norm() const {
  double n2 = 0.0;
  for (const Matrix& level : sites_[static_cast<size_t>(center_)].levels) {
    n2 += level.squaredNorm();
  }
  return std::sqrt(n2);
}

void Mps::orthonormalize_step_right(Index i) {
  SiteTensor& t = sites_[static_cast<size_t>(i)];
  const Index d = t.phys_dim();
  const Index chi_l = t.left_dim();
  const Index chi_r = t.right_dim();
  Matrix m(chi_l * d, chi_r);
  for (Index l = 0; l < d; ++l) {
    m.middleRows(l * chi_l, chi_l) = t.levels[static_cast<size_t>(l)];
  }
  const Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), k);
  Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Index l = 0; l < d; ++l) {
    t.levels[static_cast<size_t>(l)] = q.middleRows(l * chi_l, chi_l);
  }
  SiteTensor& next = sites_[static_cast<size_t>(i + 1)];
  for (Matrix& level : next.levels) level = r * level;
}

void Mps::orthonormalize_step_left(Index i) {
  SiteTensor& t = sites_[static_cast<size_t>(i)];
  const Index d = t.phys_dim();
  const Index chi_l = t.left_dim();
  const Index chi_r = t.right_dim();
  Matrix m(chi_l, d * chi_r);
  for (Index l = 0; l < d; ++l) {
    m.middleCols(l * chi_r, chi_r) = t.levels[static_cast<size_t>(l)];
  }
  const Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Matrix> qr(m.adjoint());
  Matrix q = qr.householderQ() * Matrix::Identity(m.cols(), k);
  Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Matrix q_rows = q.adjoint();           // k x (d chi_r)
  const Matrix l_factor = r.adjoint();         // chi_l x k
  for (Index l = 0; l < d; ++l) {
    t.levels[static_cast<size_t>(l)] = q_rows.middleCols(l * chi_r, chi_r);
  }
  SiteTensor& prev = sites_[static_cast<size_t>(i - 1)];
  for (Matrix& level : prev.levels) level = level * l_factor;
}

void Mps::move_center(Index target) {
  if (target < 0 || target >= n_sites()) {
    throw IndexOutOfRange("center target out of range");
  }
  while (center_ < target) {
    orthonormalize_step_right(center_);
    ++center_;
  }
  while (center_ > target) {
    orthonormalize_step_left(center_);
    --center_;
  }
}

void Mps::split_and_store(Index i, const std::vector<Matrix>& theta,
                          Index d_left, Index d_right,
                          const TruncationPolicy& policy) {
  const Index chi_l = theta[0].rows();
  const Index chi_r = theta[0].cols();
  Matrix m(chi_l * d_left, d_right * chi_r);
  for (Index l1 = 0; l1 < d_left; ++l1) {
    for (Index l2 = 0; l2 < d_right; ++l2) {
      m.block(l1 * chi_l, l2 * chi_r, chi_l, chi_r) =
          theta[static_cast<size_t>(l1 * d_right + l2)];
    }
  }
  const SplitResult split = truncated_split(m, policy, discarded_);

  SiteTensor& left = sites_[static_cast<size_t>(i)];
  left.levels.assign(static_cast<size_t>(d_left), Matrix());
  for (Index l1 = 0; l1 < d_left; ++l1) {
    left.levels[static_cast<size_t>(l1)] =
        split.left.middleRows(l1 * chi_l, chi_l);
  }
  SiteTensor& right = sites_[static_cast<size_t>(i + 1)];
  right.levels.assign(static_cast<size_t>(d_right), Matrix());
  for (Index l2 = 0; l2 < d_right; ++l2) {
    right.levels[static_cast<size_t>(l2)] =
        split.right.middleCols(l2 * chi_r, chi_r);
  }
  center_ = i + 1;
}

void Mps::apply_two_site(Index i, const Matrix& gate,
                         const TruncationPolicy& policy) {
  if (i < 0 || i + 1 >= n_sites()) {
    throw IndexOutOfRange("two-site gate position out of range");
  }
  if (center_ < i) move_center(i);
  if (center_ > i + 1) move_center(i + 1);
  const SiteTensor& a = sites_[static_cast<size_t>(i)];
  const SiteTensor& b = sites_[static_cast<size_t>(i + 1)];
  const Index d1 = a.phys_dim();
  const Index d2 = b.phys_dim();
  if (gate.rows() != d1 * d2 || gate.cols() != d1 * d2) {
    throw DimensionMismatch("gate dimension does not match the site pair");
  }
  std::vector<Matrix> theta(static_cast<size_t>(d1 * d2));
  for (Index l1 = 0; l1 < d1; ++l1) {
    for (Index l2 = 0; l2 < d2; ++l2) {
      theta[static_cast<size_t>(l1 * d2 + l2)] =
          a.levels[static_cast<size_t>(l1)] * b.levels[static_cast<size_t>(l2)];
    }
  }
  std::vector<Matrix> mixed(theta.size());
  for (Index r = 0; r < d1 * d2; ++r) {
    Matrix acc = Matrix::Zero(theta[0].rows(), theta[0].cols());
    for (Index c = 0; c < d1 * d2; ++c) {
      const Complex g = gate(r, c);
      if (g != Complex{0.0, 0.0}) acc += g * theta[static_cast<size_t>(c)];
    }
    mixed[static_cast<size_t>(r)] = std::move(acc);
  }
  split_and_store(i, mixed, d1, d2, policy);
}

void Mps::apply_three_site(Index i, const Matrix& gate,
                           const TruncationPolicy& policy) {
  if (i < 0 || i + 2 >= n_sites()) {
    throw IndexOutOfRange("three-site gate position out of range");
  }
  if (center_ < i) move_center(i);
  if (center_ > i + 2) move_center(i + 2);
  const SiteTensor& a = sites_[static_cast<size_t>(i)];
  const SiteTensor& b = sites_[static_cast<size_t>(i + 1)];
  const SiteTensor& c = sites_[static_cast<size_t>(i + 2)];
  const Index d1 = a.phys_dim();
  const Index d2 = b.phys_dim();
  const Index d3 = c.phys_dim();
  const Index dim = d1 * d2 * d3;
  if (gate.rows() != dim || gate.cols() != dim) {
    throw DimensionMismatch("gate dimension does not match the site triple");
  }
  std::vector<Matrix> theta(static_cast<size_t>(dim));
  for (Index l1 = 0; l1 < d1; ++l1) {
    for (Index l2 = 0; l2 < d2; ++l2) {
      const Matrix ab = a.levels[static_cast<size_t>(l1)] *
                        b.levels[static_cast<size_t>(l2)];
      for (Index l3 = 0; l3 < d3; ++l3) {
        theta[static_cast<size_t>((l1 * d2 + l2) * d3 + l3)] =
            ab * c.levels[static_cast<size_t>(l3)];
      }
    }
  }
  std::vector<Matrix> mixed(theta.size());
  for (Index r = 0; r < dim; ++r) {
    Matrix acc = Matrix::Zero(theta[0].rows(), theta[0].cols());
    for (Index col = 0; col < dim; ++col) {
      const Complex g = gate(r, col);
      if (g != Complex{0.0, 0.0}) acc += g * theta[static_cast<size_t>(col)];
    }
    mixed[static_cast<size_t>(r)] = std::move(acc);
  }

  // First cut: site i | (i+1, i+2).
  const Index chi_l = mixed[0].rows();
  const Index chi_r = mixed[0].cols();
  Matrix m(chi_l * d1, d2 * d3 * chi_r);
  for (Index l1 = 0; l1 < d1; ++l1) {
    for (Index l23 = 0; l23 < d2 * d3; ++l23) {
      m.block(l1 * chi_l, l23 * chi_r, chi_l, chi_r) =
          mixed[static_cast<size_t>(l1 * d2 * d3 + l23)];
    }
  }
  const SplitResult split = truncated_split(m, policy, discarded_);
  SiteTensor& left = sites_[static_cast<size_t>(i)];
  left.levels.assign(static_cast<size_t>(d1), Matrix());
  for (Index l1 = 0; l1 < d1; ++l1) {
    left.levels[static_cast<size_t>(l1)] =
        split.left.middleRows(l1 * chi_l, chi_l);
  }

  // Remainder is the fused (i+1, i+2) pair with left bond = split rank.
  std::vector<Matrix> rest(static_cast<size_t>(d2 * d3));
  for (Index l23 = 0; l23 < d2 * d3; ++l23) {
    rest[static_cast<size_t>(l23)] =
        split.right.middleCols(l23 * chi_r, chi_r);
  }
  split_and_store(i + 1, rest, d2, d3, policy);
}

void Mps::swap_sites(Index i, const TruncationPolicy& policy) {
  if (i < 0 || i + 1 >= n_sites()) {
    throw IndexOutOfRange("swap position out of range");
  }
  if (center_ < i) move_center(i);
  if (center_ > i + 1) move_center(i + 1);
  const SiteTensor& a = sites_[static_cast<size_t>(i)];
  const SiteTensor& b = sites_[static_cast<size_t>(i + 1)];
  const Index d1 = a.phys_dim();
  const Index d2 = b.phys_dim();
  std::vector<Matrix> theta(static_cast<size_t>(d1 * d2));
  for (Index l1 = 0; l1 < d1; ++l1) {
    for (Index l2 = 0; l2 < d2; ++l2) {
      // store already exchanged: new left level l2, new right level l1
      theta[static_cast<size_t>(l2 * d1 + l1)] =
          a.levels[static_cast<size_t>(l1)] * b.levels[static_cast<size_t>(l2)];
    }
  }
  split_and_store(i, theta, d2, d1, policy);
}

Complex Mps::expectation_one_site(Index i, const Matrix& op) {
  move_center(i);
  const SiteTensor& t = sites_[static_cast<size_t>(i)];
  const Index d = t.phys_dim();
  if (op.rows() != d || op.cols() != d) {
    throw DimensionMismatch("operator dimension does not match the site");
  }
  Complex acc{0.0, 0.0};
  for (Index lp = 0; lp < d; ++lp) {
    for (Index l = 0; l < d; ++l) {
      const Complex o = op(lp, l);
      if (o == Complex{0.0, 0.0}) continue;
      acc += o * (t.levels[static_cast<size_t>(lp)].conjugate().cwiseProduct(
                      t.levels[static_cast<size_t>(l)]))
                     .sum();
    }
  }
  return acc;
}

}  // namespace pointcouple
