#include "ellbandit/lowerbound.hpp"

#include <cmath>

#include "ellbandit/errors.hpp"

namespace ellbandit {

namespace {

// Removes the components of v along the first `count` columns of basis
// (twice, for numerical orthogonality) and returns the remainder.
VectorXd orthogonalize(VectorXd v, const MatrixXd& basis, Eigen::Index count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index k = 0; k < count; ++k) v -= basis.col(k).dot(v) * basis.col(k);
  }
  return v;
}

// Appends a unit vector orthogonal to the first `count` columns, derived from
// `candidate` when it is not (nearly) in their span, otherwise from random draws.
void append_direction(MatrixXd& basis, Eigen::Index count, const VectorXd& candidate, Rng& rng) {
  constexpr double kDegenerate = 1e-10;
  VectorXd v = orthogonalize(candidate, basis, count);
  const double scale = std::max(candidate.norm(), 1.0);
  while (!(v.norm() > kDegenerate * scale)) {
    v = orthogonalize(standard_normal_vector(basis.rows(), rng), basis, count);
  }
  basis.col(count) = v / v.norm();
}

}  // namespace

AssouadFamily build_assouad(const VectorXd& theta_base, double b, std::size_t horizon, double sigma,
                            std::shared_ptr<const EllipsoidSet> set, std::uint64_t seed) {
  require(set != nullptr, "build_assouad: action set is required");
  const Eigen::Index dim = set->dim();
  require(dim >= 3, "build_assouad: ambient dimension must be >= 3");
  require(theta_base.size() == dim, "build_assouad: theta dimension does not match action set");
  require(b > 0.0 && horizon >= 1 && sigma >= 0.0, "build_assouad: need B > 0, T >= 1, sigma >= 0");
  const double norm = set->anorm(theta_base);
  require(norm > 0.0, "build_assouad: theta_base must be nonzero");
  require(std::abs(norm - b) <= kGeomTol * std::max(b, 1.0), "build_assouad: ||theta_base||_A must equal B");

  const Eigen::Index d = dim - 2;
  const double dd = static_cast<double>(d);
  const double root_2t = std::sqrt(2.0 * static_cast<double>(horizon));

  AssouadFamily fam;
  fam.set_ = set;
  fam.theta_base_ = theta_base;
  fam.b_ = b;
  fam.c_const_ = sigma > 0.0 ? std::min(1.0 / (2.0 * std::sqrt(2.0)), b * root_2t / (sigma * dd))
                             : 1.0 / (2.0 * std::sqrt(2.0));
  fam.eps_ = std::min(1.0, dd * sigma * fam.c_const_ / (b * root_2t));

  // Build in the order e_{d+1}, e_{d+2}, e_1, ..., e_d, then permute.
  Rng rng(derive_seed(seed, 0x4153u));
  MatrixXd work = MatrixXd::Zero(dim, dim);
  work.col(0) = set->s().transpose() * theta_base / norm;
  const VectorXd center_dir = set->s().triangularView<Eigen::Lower>().solve(set->center());
  append_direction(work, 1, center_dir, rng);
  for (Eigen::Index k = 2; k < dim; ++k) {
    append_direction(work, k, VectorXd::Unit(dim, k - 2), rng);
  }

  fam.basis_.resize(dim, dim);
  fam.basis_.leftCols(d) = work.rightCols(d);
  fam.basis_.col(d) = work.col(0);
  fam.basis_.col(d + 1) = work.col(1);
  return fam;
}

VectorXd AssouadFamily::phi(const SignVector& xi) const {
  const std::size_t d = sign_dim();
  require(xi.size() == d, "assouad: sign vector has the wrong length");
  VectorXd v = std::sqrt(1.0 - eps_ * eps_) * basis_.col(static_cast<Eigen::Index>(d));
  const double w = eps_ / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    require(xi[i] == 1 || xi[i] == -1, "assouad: sign entries must be -1 or +1");
    v += (w * xi[i]) * basis_.col(static_cast<Eigen::Index>(i));
  }
  return b_ * v;
}

VectorXd AssouadFamily::theta(const SignVector& xi) const {
  return set_->s().transpose().triangularView<Eigen::Upper>().solve(phi(xi));
}

std::vector<SignVector> AssouadFamily::sign_patterns() const {
  const std::size_t d = sign_dim();
  require(d < 31, "assouad: too many sign coordinates to enumerate");
  std::vector<SignVector> out;
  out.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    SignVector xi(d);
    for (std::size_t i = 0; i < d; ++i) xi[i] = (mask >> (d - 1 - i)) & 1u ? 1 : -1;
    out.push_back(std::move(xi));
  }
  return out;
}

SignVector flip_coordinate(const SignVector& xi, std::size_t i) {
  require(i < xi.size(), "flip_coordinate: index out of range");
  SignVector out = xi;
  out[i] = -out[i];
  return out;
}

GaussianPrior::GaussianPrior(double b, std::shared_ptr<const EllipsoidSet> set) : b_(b), set_(std::move(set)) {
  require(set_ != nullptr, "GaussianPrior: action set is required");
  require(b_ > 0.0, "GaussianPrior: B must be positive");
}

VectorXd GaussianPrior::sample(Rng& rng) const {
  const VectorXd g = standard_normal_vector(set_->dim(), rng);
  const double scale = b_ / std::sqrt(static_cast<double>(set_->dim()));
  return set_->s().transpose().triangularView<Eigen::Upper>().solve(g) * scale;
}

}  // namespace ellbandit
