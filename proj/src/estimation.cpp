#include "ellbandit/estimation.hpp"

#include <cmath>

#include "ellbandit/environment.hpp"
#include "ellbandit/errors.hpp"

namespace ellbandit {

RoundRobinAccumulator::RoundRobinAccumulator(std::size_t d)
    : d_(d), sums_(VectorXd::Zero(static_cast<Eigen::Index>(d))),
      partial_(VectorXd::Zero(static_cast<Eigen::Index>(d))), counts_(d, 0) {
  require(d >= 1, "RoundRobinAccumulator: d must be >= 1");
}

void RoundRobinAccumulator::absorb(std::size_t direction, double reward) {
  require(direction == partial_len_, "RoundRobinAccumulator: rewards must follow round-robin order");
  partial_[static_cast<Eigen::Index>(direction)] += reward;
  ++counts_[direction];
  ++n_;
  ++partial_len_;
  if (partial_len_ == d_) {
    sums_ += partial_;
    partial_.setZero();
    partial_len_ = 0;
  }
}

void RoundRobinAccumulator::reset() {
  n_ = 0;
  partial_len_ = 0;
  sums_.setZero();
  partial_.setZero();
  std::fill(counts_.begin(), counts_.end(), 0);
}

RoundRobinAccumulator RoundRobinAccumulator::complete_blocks() const {
  RoundRobinAccumulator out = *this;
  for (std::size_t j = 0; j < partial_len_; ++j) --out.counts_[j];
  out.n_ -= partial_len_;
  out.partial_len_ = 0;
  out.partial_.setZero();
  return out;
}

LsEstimate ls_from_accumulator(const RoundRobinAccumulator& acc, const EllipsoidSet& set) {
  require(acc.dim() == static_cast<std::size_t>(set.dim()), "ls_from_accumulator: dimension mismatch");
  if (acc.rounds() < acc.dim() || acc.has_partial_block()) {
    throw IncompleteDesign("least squares needs complete round-robin blocks (n = " +
                           std::to_string(acc.rounds()) + ", d = " + std::to_string(acc.dim()) + ")");
  }
  const double scale = static_cast<double>(acc.dim()) / static_cast<double>(acc.rounds());
  LsEstimate est;
  // S⁻ᵀ is upper triangular; a back-substitution is cheaper than the cached product.
  est.theta_hat = scale * set.s().transpose().triangularView<Eigen::Upper>().solve(acc.sums());
  est.n_used = acc.rounds();
  est.anorm = scale * acc.sums().norm();
  return est;
}

VectorXd ls_generic(const MatrixXd& x, const VectorXd& y) {
  require(x.rows() == y.size(), "ls_generic: X and Y row counts differ");
  require(x.cols() >= 1 && x.rows() >= x.cols(), "ls_generic: need at least d rows");
  Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
  const auto r = qr.matrixR().topLeftCorner(x.cols(), x.cols()).diagonal().cwiseAbs();
  const double rmax = r.maxCoeff();
  const double rmin = r.minCoeff();
  if (!(rmin > 0.0) || rmax / rmin > 1e12) {
    throw SingularDesign("design matrix is rank deficient (condition estimate > 1e12)");
  }
  return qr.solve(y);
}

double log_inv_delta(std::size_t d, std::size_t n, std::size_t horizon) {
  const double ratio = static_cast<double>(horizon) / (static_cast<double>(d) * static_cast<double>(n));
  return std::max(std::log(ratio), 0.0);
}

double confidence_width(double delta, std::size_t n, double sigma, std::size_t d) {
  require(delta > 0.0 && delta <= 1.0, "confidence_width: delta must lie in (0, 1]");
  require(n >= 1 && d >= 1, "confidence_width: n and d must be >= 1");
  require(sigma >= 0.0, "confidence_width: sigma must be >= 0");
  const double dd = static_cast<double>(d);
  const double l = -std::log(delta);
  const double u2 = sigma * sigma * dd * dd / static_cast<double>(n) *
                    (1.0 + 2.0 * std::sqrt(l / dd) + 2.0 * l / dd);
  return std::sqrt(u2);
}

double concentration_statistic(const EllipsoidSet& set, const VectorXd& theta, std::size_t n,
                               double sigma, Rng& rng) {
  const std::size_t d = static_cast<std::size_t>(set.dim());
  const BanditInstance inst{theta, NoiseModel{NoiseKind::Gaussian, sigma}};
  RoundRobinAccumulator acc(d);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t j = t % d;
    acc.absorb(j, pull(inst, set.direction(j), rng));
  }
  const LsEstimate est = ls_from_accumulator(acc, set);
  // ‖v‖²_{XᵀX} = (n/d)·‖v‖²_A
  const double err = set.anorm(est.theta_hat - theta);
  return static_cast<double>(n) / static_cast<double>(d) * err * err;
}

double concentration_tail_estimate(std::size_t d, std::size_t n, double sigma, double x,
                                   std::size_t trials, std::uint64_t seed) {
  require(d >= 1 && n >= d && n % d == 0, "concentration_tail_estimate: n must be a positive multiple of d");
  require(x >= 0.0 && trials >= 1, "concentration_tail_estimate: need x >= 0 and trials >= 1");
  if (sigma == 0.0) return 0.0;

  const EllipsoidSet set = EllipsoidSet::ball(static_cast<Eigen::Index>(d));
  const VectorXd theta = VectorXd::Ones(static_cast<Eigen::Index>(d));
  const double dd = static_cast<double>(d);
  const double threshold = sigma * sigma * (dd + 2.0 * std::sqrt(dd * x) + 2.0 * x);

  long long exceed = 0;
  const long long count = static_cast<long long>(trials);
#pragma omp parallel for reduction(+ : exceed) schedule(static)
  for (long long k = 0; k < count; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    if (concentration_statistic(set, theta, n, sigma, rng) >= threshold) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(trials);
}

}  // namespace ellbandit
