#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "ellbandit/bounds.hpp"
#include "ellbandit/e2tc.hpp"
#include "ellbandit/environment.hpp"
#include "ellbandit/errors.hpp"
#include "ellbandit/lowerbound.hpp"
#include "test_util.hpp"

using namespace ellbandit;
using ellbandit::testing::random_pd;

namespace {

std::shared_ptr<const EllipsoidSet> random_set(Eigen::Index dim, Rng& rng, bool centered) {
  const VectorXd c = centered ? VectorXd::Zero(dim) : standard_normal_vector(dim, rng);
  return std::make_shared<const EllipsoidSet>(PdMatrix(random_pd(dim, rng)), c);
}

VectorXd on_sphere(const EllipsoidSet& set, double b, Rng& rng) {
  const VectorXd v = standard_normal_vector(set.dim(), rng);
  return v * (b / set.anorm(v));
}

}  // namespace

TEST(Assouad, AlignedBasisOnTheBall) {
  auto ball = std::make_shared<const EllipsoidSet>(EllipsoidSet::ball(3));
  const AssouadFamily fam = build_assouad(Eigen::Vector3d(0, 0, 1), 1.0, 100, 1.0, ball);
  EXPECT_EQ(fam.sign_dim(), 1u);
  EXPECT_TRUE(fam.basis().col(1).isApprox(Eigen::Vector3d(0, 0, 1)));
}

TEST(Assouad, ConstantsInTheSmallEpsilonRegime) {
  auto ball = std::make_shared<const EllipsoidSet>(EllipsoidSet::ball(3));
  const AssouadFamily fam = build_assouad(Eigen::Vector3d(0, 0, 1), 1.0, 100, 1.0, ball);
  const double c_expected = 1.0 / (2.0 * std::sqrt(2.0));
  EXPECT_NEAR(fam.c_const(), c_expected, 1e-15);
  EXPECT_NEAR(fam.c_const(), 0.35355, 1e-5);
  EXPECT_NEAR(fam.eps(), c_expected / std::sqrt(200.0), 1e-15);
  EXPECT_NEAR(fam.eps(), 0.025, 1e-4);
}

TEST(Assouad, LargeNoiseSaturatesEpsilon) {
  auto ball = std::make_shared<const EllipsoidSet>(EllipsoidSet::ball(3));
  const AssouadFamily fam = build_assouad(Eigen::Vector3d(0, 0, 1), 1.0, 100, 40.0, ball);
  EXPECT_NEAR(fam.c_const(), std::sqrt(200.0) / 40.0, 1e-15);
  EXPECT_DOUBLE_EQ(fam.eps(), 1.0);
}

TEST(Assouad, SphereMembershipAndDistanceForAllSigns) {
  Rng rng(61);
  for (Eigen::Index dim = 3; dim <= 12; ++dim) {
    auto set = random_set(dim, rng, dim % 2 == 0);
    const double b = 0.5 + dim * 0.3;
    const double sigma = 1.0;
    const std::size_t horizon = 1000;
    const VectorXd base = on_sphere(*set, b, rng);
    const AssouadFamily fam = build_assouad(base, b, horizon, sigma, set, 5);
    const double d = static_cast<double>(fam.sign_dim());
    const double radius2 = std::min(sigma * d * b / std::sqrt(static_cast<double>(horizon)), 4 * b * b);
    for (const SignVector& xi : fam.sign_patterns()) {
      const VectorXd theta = fam.theta(xi);
      EXPECT_NEAR(set->anorm(theta), b, 1e-9);
      const double dist = set->anorm(base - theta);
      EXPECT_LE(dist * dist, radius2 + 1e-9);
    }
  }
}

TEST(Assouad, BasisIsOrthonormalAndSpansCenter) {
  Rng rng(62);
  for (Eigen::Index dim = 3; dim <= 9; ++dim) {
    auto set = random_set(dim, rng, false);
    const VectorXd base = on_sphere(*set, 2.0, rng);
    const AssouadFamily fam = build_assouad(base, 2.0, 500, 1.0, set);
    const MatrixXd& e = fam.basis();
    EXPECT_LE((e.transpose() * e - MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10);
    const std::size_t d = fam.sign_dim();
    const VectorXd sc = set->s().triangularView<Eigen::Lower>().solve(set->center());
    const VectorXd in_plane = e.col(d) * e.col(d).dot(sc) + e.col(d + 1) * e.col(d + 1).dot(sc);
    EXPECT_LE((sc - in_plane).norm(), 1e-10 * std::max(1.0, sc.norm()));
  }
}

TEST(Assouad, DegenerateCenterStillCompletesBasis) {
  Rng rng(63);
  auto set = random_set(5, rng, true);
  const VectorXd base = on_sphere(*set, 1.0, rng);
  const AssouadFamily a = build_assouad(base, 1.0, 100, 1.0, set, 9);
  const AssouadFamily b = build_assouad(base, 1.0, 100, 1.0, set, 9);
  EXPECT_LE((a.basis().transpose() * a.basis() - MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(a.basis(), b.basis());
}

TEST(Assouad, SmallEpsilonApproachesBase) {
  Rng rng(64);
  auto set = random_set(4, rng, false);
  const VectorXd base = on_sphere(*set, 1.0, rng);
  const AssouadFamily fam = build_assouad(base, 1.0, 100000000, 1e-3, set);
  EXPECT_LT(fam.eps(), 1e-6);
  EXPECT_LE((fam.theta({1, -1}) - base).norm(), 1e-5 * base.norm());
}

TEST(Assouad, ContractChecks) {
  auto ball = std::make_shared<const EllipsoidSet>(EllipsoidSet::ball(3));
  EXPECT_THROW(build_assouad(Eigen::Vector3d(0, 0, 2), 1.0, 100, 1.0, ball), ContractViolation);
  EXPECT_THROW(build_assouad(VectorXd::Zero(3), 1.0, 100, 1.0, ball), ContractViolation);
  const AssouadFamily fam = build_assouad(Eigen::Vector3d(0, 0, 1), 1.0, 100, 1.0, ball);
  EXPECT_THROW(fam.theta({0}), ContractViolation);
  EXPECT_THROW(fam.theta({1, 1}), ContractViolation);
}

TEST(Assouad, FlipCoordinate) {
  EXPECT_EQ(flip_coordinate({1, -1, 1}, 1), (SignVector{1, 1, 1}));
  EXPECT_THROW(flip_coordinate({1}, 1), ContractViolation);
}

TEST(GaussianPrior, CovarianceIsIsotropicInWhitenedCoordinates) {
  Rng rng(65);
  auto set = random_set(3, rng, true);
  const double b = 2.0;
  GaussianPrior prior(b, set);
  const int n = 100000;
  MatrixXd cov = MatrixXd::Zero(3, 3);
  double sq_sum = 0, sq_sq = 0;
  for (int i = 0; i < n; ++i) {
    const VectorXd w = set->s().transpose() * prior.sample(rng);
    cov += w * w.transpose();
    const double q = w.squaredNorm();
    sq_sum += q;
    sq_sq += q * q;
  }
  cov /= n;
  const double target = b * b / 3.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(cov(i, j), i == j ? target : 0.0, 0.05 * target) << i << "," << j;
    }
  }
  const double mean = sq_sum / n;
  const double sd = std::sqrt(sq_sq / n - mean * mean);
  EXPECT_NEAR(mean, b * b, 3 * sd / std::sqrt(n));
}

TEST(GaussianPrior, StandardGaussianOnBall) {
  auto ball = std::make_shared<const EllipsoidSet>(EllipsoidSet::ball(4));
  GaussianPrior prior(2.0, ball);
  Rng a(7), b(7);
  EXPECT_TRUE(prior.sample(a).isApprox(standard_normal_vector(4, b)));
}

TEST(Assouad, E2tcRegretAboveHardnessFloor) {
  Rng rng(66);
  auto ball = std::make_shared<const EllipsoidSet>(EllipsoidSet::ball(4));
  const VectorXd base = Eigen::Vector4d(0, 0, 0, 1);
  const std::size_t horizon = 10000;
  const AssouadFamily fam = build_assouad(base, 1.0, horizon, 1.0, ball);
  double worst = 0;
  for (const SignVector& xi : fam.sign_patterns()) {
    const BanditInstance inst{fam.theta(xi), {NoiseKind::Gaussian, 1.0}};
    double total = 0;
    for (int run = 0; run < 10; ++run) {
      E2tcPolicy p({ball, 3.0, 1.0, horizon});
      Rng noise(derive_seed(1, run));
      total += run_episode(p, inst, *ball, horizon, noise, TraceDetail::Checkpoints).total_regret;
    }
    worst = std::max(worst, total / 10);
  }
  EXPECT_GT(worst, minimax_lower_bound(fam.sign_dim(), 1.0, horizon, 1.0) / 20);
}
