#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ellbandit/ellipsoid.hpp"
#include "ellbandit/random.hpp"

namespace ellbandit {

// Least-squares sufficient statistics for the round-robin design x_t = S·e_j
// with j = t mod d. Since XᵀX = (n/d)·A and XᵀY = S·s after complete blocks,
// the per-direction reward sums s are all that needs to be kept.
//
// Rewards must arrive in round-robin order (direction 0, 1, ..., d−1, 0, ...).
// Sums of the trailing partial block are kept apart so that estimates only
// ever see complete blocks.
class RoundRobinAccumulator {
 public:
  explicit RoundRobinAccumulator(std::size_t d);

  void absorb(std::size_t direction, double reward);
  void reset();

  std::size_t dim() const { return d_; }
  // Rounds absorbed, including a trailing partial block.
  std::size_t rounds() const { return n_; }
  std::size_t complete_rounds() const { return n_ - partial_len_; }
  bool has_partial_block() const { return partial_len_ != 0; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  // Sums over complete blocks only.
  const VectorXd& sums() const { return sums_; }

  // Copy restricted to complete blocks.
  RoundRobinAccumulator complete_blocks() const;

 private:
  std::size_t d_;
  std::size_t n_ = 0;
  std::size_t partial_len_ = 0;
  VectorXd sums_;
  VectorXd partial_;
  std::vector<std::size_t> counts_;
};

struct LsEstimate {
  VectorXd theta_hat;
  std::size_t n_used = 0;
  double anorm = 0.0;  // ‖θ̂‖_A
};

// θ̂ = (d/n)·S⁻ᵀ·s and ‖θ̂‖_A = (d/n)·‖s‖₂. Throws IncompleteDesign unless the
// accumulator holds at least one block and no partial block.
LsEstimate ls_from_accumulator(const RoundRobinAccumulator& acc, const EllipsoidSet& set);

// (XᵀX)⁻¹XᵀY through a column-pivoted QR of X. Throws SingularDesign when the
// condition estimate of X exceeds 1e12.
VectorXd ls_generic(const MatrixXd& x, const VectorXd& y);

// U(δ, n) = sqrt((σ²d²/n)(1 + 2√(log(1/δ)/d) + 2·log(1/δ)/d)).
double confidence_width(double delta, std::size_t n, double sigma, std::size_t d);

// log(1/δ_i) for δ_i = min(d·n_i/T, 1), i.e. max(log(T/(d·n_i)), 0).
double log_inv_delta(std::size_t d, std::size_t n, std::size_t horizon);

// Monte-Carlo estimate of P[‖θ̂ − θ‖²_{XᵀX} ≥ σ²(d + 2√(dx) + 2x)] for the
// round-robin design over n rounds with Gaussian noise.
double concentration_tail_estimate(std::size_t d, std::size_t n, double sigma, double x,
                                   std::size_t trials, std::uint64_t seed);

// The statistic ‖θ̂ − θ‖²_{XᵀX} for one simulated design (exposed for tests).
double concentration_statistic(const EllipsoidSet& set, const VectorXd& theta, std::size_t n,
                               double sigma, Rng& rng);

}  // namespace ellbandit
