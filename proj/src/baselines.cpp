#include "ellbandit/baselines.hpp"

#include <cmath>

#include "ellbandit/errors.hpp"

namespace ellbandit {

E2tcPolicy oracle_etc_policy(double norm_a_theta, double sigma, std::size_t horizon,
                             std::shared_ptr<const EllipsoidSet> set) {
  require(norm_a_theta > 0.0, "oracle_etc_policy: norm must be positive");
  // alpha is unused once warm-up is skipped.
  return E2tcPolicy::with_known_norm(E2tcConfig{std::move(set), 3.0, sigma, horizon}, norm_a_theta);
}

OraclePolicy::OraclePolicy(const EllipsoidSet& set, const VectorXd& theta) : x_(optimal_action(set, theta)) {}

UniformPolicy::UniformPolicy(std::shared_ptr<const EllipsoidSet> set, std::uint64_t seed)
    : set_(std::move(set)), rng_(seed) {
  require(set_ != nullptr, "UniformPolicy: action set is required");
}

const Eigen::VectorXd& UniformPolicy::next_action() {
  VectorXd u = standard_normal_vector(set_->dim(), rng_);
  double norm = u.norm();
  while (norm == 0.0) {
    u = standard_normal_vector(set_->dim(), rng_);
    norm = u.norm();
  }
  x_ = set_->center() + set_->s() * (u / norm);
  return x_;
}

namespace {

constexpr int kBisectionIterations = 200;
constexpr double kBisectionTol = 1e-12;

// Unit vector in the span of the given orthonormal columns, chosen as the
// normalized projection of the coordinate axis it is most aligned with
// (lowest index on ties) and oriented positively along that axis.
VectorXd soft_direction(const MatrixXd& basis) {
  const Eigen::Index d = basis.rows();
  Eigen::Index best = 0;
  double best_norm = -1.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double n = basis.row(i).norm();
    if (n > best_norm + 1e-12) {
      best_norm = n;
      best = i;
    }
  }
  VectorXd q = basis * basis.row(best).transpose();
  q /= q.norm();
  if (q[best] < 0.0) q = -q;
  return q;
}

}  // namespace

ConfidenceMax max_norm_over_confidence(const VectorXd& theta_hat, const PdMatrix& v, double beta) {
  require(beta >= 0.0, "max_norm_over_confidence: beta must be >= 0");
  require(theta_hat.size() == v.dim(), "max_norm_over_confidence: dimension mismatch");
  if (beta == 0.0) return {theta_hat, theta_hat.norm()};

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(v.matrix());
  const VectorXd& lam = eig.eigenvalues();  // ascending
  const MatrixXd& q = eig.eigenvectors();
  const Eigen::Index d = lam.size();
  const double vmin = lam[0];
  const VectorXd a = q.transpose() * theta_hat;

  // Softest eigenspace: eigenvalues equal to vmin up to rounding.
  Eigen::Index soft = 1;
  while (soft < d && lam[soft] <= vmin * (1.0 + 1e-12)) ++soft;
  const double a_soft = a.head(soft).norm();
  const double a_norm = a.norm();

  // Coefficient of u_k in (μv_k − 1)u_k = a_k with μ = 1/vmin + s.
  auto denom = [&](Eigen::Index k, double s) {
    return k < soft ? s * lam[k] : (lam[k] / vmin - 1.0) + s * lam[k];
  };
  auto constraint = [&](double s) {
    double g = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double den = denom(k, s);
      g += lam[k] * a[k] * a[k] / (den * den);
    }
    return g;
  };

  VectorXd u(d);
  if (a_soft <= 1e-13 * a_norm || a_norm == 0.0) {
    // Possible hard case: check whether the non-soft part alone stays inside.
    double g0 = 0.0;
    VectorXd u0 = VectorXd::Zero(d);
    for (Eigen::Index k = soft; k < d; ++k) {
      u0[k] = a[k] / (lam[k] / vmin - 1.0);
      g0 += lam[k] * u0[k] * u0[k];
    }
    if (g0 <= beta * beta) {
      VectorXd qs = soft_direction(q.leftCols(soft));
      // Orient toward any residual soft component of θ̂ so the norm only grows.
      if (qs.dot(theta_hat) < 0.0) qs = -qs;
      const double t = std::sqrt(std::max(beta * beta - g0, 0.0) / vmin);
      VectorXd theta = theta_hat + q * u0 + t * qs;
      return {theta, theta.norm()};
    }
  }

  // g is strictly decreasing on s > 0 with g(0+) > β²; g(hi) ≤ β² because
  // μv_k − 1 ≥ s·v_k for every k.
  double lo = 0.0;
  double hi = a_norm / (beta * std::sqrt(vmin));
  for (int it = 0; it < kBisectionIterations && hi - lo > kBisectionTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (constraint(mid) > beta * beta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  for (Eigen::Index k = 0; k < d; ++k) u[k] = a[k] / denom(k, hi);
  // Snap onto the boundary; the bisection leaves a relative slack ≤ 1e-12.
  const double unorm_v = std::sqrt((lam.array() * u.array().square()).sum());
  if (unorm_v > 0.0) u *= beta / unorm_v;
  VectorXd theta = theta_hat + q * u;
  return {theta, theta.norm()};
}

OfulBallPolicy::OfulBallPolicy(const EllipsoidSet& set, OfulBallConfig config)
    : config_(config), d_(set.dim()) {
  if (!set.is_unit_ball()) throw UnsupportedActionSet("OFUL-ball only supports the centered unit ball");
  require(config_.lambda > 0.0, "OFUL-ball: lambda must be positive");
  require(config_.horizon >= 1, "OFUL-ball: horizon must be >= 1");
  require(config_.sigma >= 0.0 && config_.s_bound >= 0.0, "OFUL-ball: sigma and S must be >= 0");
  if (config_.delta <= 0.0) config_.delta = 1.0 / static_cast<double>(config_.horizon);
  require(config_.delta < 1.0 || config_.horizon == 1, "OFUL-ball: delta must be < 1");
  v_ = config_.lambda * MatrixXd::Identity(d_, d_);
  b_ = VectorXd::Zero(d_);
}

double OfulBallPolicy::radius() const {
  const double t = static_cast<double>(t_);
  const double log_term = std::log((1.0 + t / config_.lambda) / config_.delta);
  return config_.sigma * std::sqrt(static_cast<double>(d_) * std::max(log_term, 0.0)) +
         std::sqrt(config_.lambda) * config_.s_bound;
}

VectorXd OfulBallPolicy::ridge_estimate() const { return v_.llt().solve(b_); }

const Eigen::VectorXd& OfulBallPolicy::next_action() {
  require(t_ < config_.horizon, "OFUL-ball: next_action called past the horizon");
  const ConfidenceMax best = max_norm_over_confidence(ridge_estimate(), PdMatrix(v_), radius());
  if (best.value > 0.0) {
    x_ = best.theta / best.value;
  } else {
    x_ = VectorXd::Unit(d_, static_cast<Eigen::Index>(t_ % static_cast<std::size_t>(d_)));
  }
  return x_;
}

void OfulBallPolicy::observe(double reward) {
  v_.noalias() += x_ * x_.transpose();
  b_ += reward * x_;
  ++t_;
}

}  // namespace ellbandit
