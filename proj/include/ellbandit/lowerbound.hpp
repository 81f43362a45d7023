#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ellbandit/ellipsoid.hpp"
#include "ellbandit/random.hpp"

namespace ellbandit {

using SignVector = std::vector<int>;

// The 2^d hard instances around θ_base on the sphere ‖θ‖_A = B in ambient
// dimension D = d + 2:
//
//   φ(ξ) = B·(e_{d+1}·√(1 − ε²) + (ε/√d)·Σ ξ_i e_i),   θ(ξ) = S⁻ᵀ·φ(ξ)
//
// with A = S·Sᵀ, e_{d+1} = Sᵀθ_base/B, span(e_{d+1}, e_{d+2}) ⊇ S⁻¹c, and
// C = min(1/(2√2), B√(2T)/(σd)), ε = min(1, dσC/(B√(2T))).
class AssouadFamily {
 public:
  std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
  std::size_t sign_dim() const { return ambient_dim() - 2; }
  double b() const { return b_; }
  double eps() const { return eps_; }
  double c_const() const { return c_const_; }
  // Columns e_1..e_D (0-based: sign directions 0..d−1, then e_{d+1}, e_{d+2}).
  const MatrixXd& basis() const { return basis_; }
  const VectorXd& theta_base() const { return theta_base_; }
  const EllipsoidSet& set() const { return *set_; }

  VectorXd phi(const SignVector& xi) const;
  VectorXd theta(const SignVector& xi) const;

  // Every ξ ∈ {−1, +1}^d in lexicographic order (−1 before +1).
  std::vector<SignVector> sign_patterns() const;

 private:
  friend AssouadFamily build_assouad(const VectorXd&, double, std::size_t, double,
                                     std::shared_ptr<const EllipsoidSet>, std::uint64_t);

  std::shared_ptr<const EllipsoidSet> set_;
  VectorXd theta_base_;
  MatrixXd basis_;
  double b_ = 0.0;
  double eps_ = 0.0;
  double c_const_ = 0.0;
};

// Requires ‖theta_base‖_A = B (relative 1e-9) and D ≥ 3. Degenerate
// directions in the Gram–Schmidt completion are filled with vectors drawn
// from `seed`.
AssouadFamily build_assouad(const VectorXd& theta_base, double b, std::size_t horizon, double sigma,
                            std::shared_ptr<const EllipsoidSet> set, std::uint64_t seed = 0);

// ξ with entry i negated.
SignVector flip_coordinate(const SignVector& xi, std::size_t i);

// N(0, (B²/d)·A⁻¹), sampled as S⁻ᵀg·B/√d so that Sᵀθ ~ N(0, (B²/d)·I).
class GaussianPrior {
 public:
  GaussianPrior(double b, std::shared_ptr<const EllipsoidSet> set);

  VectorXd sample(Rng& rng) const;
  double b() const { return b_; }

 private:
  double b_;
  std::shared_ptr<const EllipsoidSet> set_;
};

}  // namespace ellbandit
