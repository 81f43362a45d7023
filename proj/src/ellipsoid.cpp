#include "ellbandit/ellipsoid.hpp"

#include <string>

#include "ellbandit/errors.hpp"

namespace ellbandit {

namespace {

MatrixXd lower_cholesky(const MatrixXd& a) {
  Eigen::LLT<MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("matrix is not positive definite (Cholesky pivot <= 0)");
  }
  MatrixXd l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) {
      throw NotPositiveDefinite("Cholesky pivot " + std::to_string(i) + " is not positive");
    }
  }
  return l;
}

}  // namespace

PdMatrix::PdMatrix(const MatrixXd& m) {
  require(m.rows() >= 1 && m.rows() == m.cols(), "PdMatrix must be square with d >= 1");
  if (!m.allFinite()) throw NotPositiveDefinite("matrix has non-finite entries");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw NotPositiveDefinite("matrix is not symmetric");
  m_ = 0.5 * (m + m.transpose());
  l_ = lower_cholesky(m_);
}

PdMatrix PdMatrix::identity(Eigen::Index d) { return PdMatrix(MatrixXd::Identity(d, d)); }

PdMatrix PdMatrix::diagonal(const VectorXd& diag) { return PdMatrix(MatrixXd(diag.asDiagonal())); }

double mnorm(const PdMatrix& m, const VectorXd& u) {
  require(m.dim() == u.size(), "mnorm: dimension mismatch");
  // uᵀMu = ‖Lᵀu‖², which is nonnegative by construction.
  return (m.cholesky().transpose() * u).norm();
}

Factor factorize(const MatrixXd& a) {
  Factor f;
  f.s = lower_cholesky(a);
  const Eigen::Index d = a.rows();
  // (S⁻¹)ᵀ = (Sᵀ)⁻¹, upper triangular.
  f.s_inv_t = f.s.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(d, d));
  return f;
}

Factor factorize(const PdMatrix& a) {
  Factor f;
  f.s = a.cholesky();
  const Eigen::Index d = a.dim();
  f.s_inv_t = f.s.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(d, d));
  return f;
}

EllipsoidSet::EllipsoidSet(PdMatrix a, VectorXd center) : a_(std::move(a)), c_(std::move(center)) {
  require(c_.size() == a_.dim(), "EllipsoidSet: center dimension does not match A");
  factor_ = factorize(a_);
  directions_.reserve(static_cast<std::size_t>(dim()));
  for (Eigen::Index j = 0; j < dim(); ++j) directions_.emplace_back(factor_.s.col(j));
}

EllipsoidSet EllipsoidSet::ball(Eigen::Index d) {
  return EllipsoidSet(PdMatrix::identity(d), VectorXd::Zero(d));
}

const VectorXd& EllipsoidSet::direction(std::size_t j) const {
  require(j < directions_.size(), "exploration direction index out of range");
  return directions_[j];
}

bool EllipsoidSet::is_unit_ball() const {
  return is_centered() && a_.matrix().isIdentity(0.0);
}

double EllipsoidSet::inv_quadratic(const VectorXd& x) const {
  require(x.size() == dim(), "dimension mismatch against action set");
  const VectorXd w = factor_.s.triangularView<Eigen::Lower>().solve(x - c_);
  return w.squaredNorm();
}

double EllipsoidSet::anorm(const VectorXd& theta) const {
  require(theta.size() == dim(), "dimension mismatch against action set");
  return (factor_.s.transpose() * theta).norm();
}

EllipsoidSet EllipsoidSet::centered() const { return EllipsoidSet(a_, VectorXd::Zero(dim())); }

VectorXd optimal_action(const EllipsoidSet& set, const VectorXd& theta) {
  require(theta.size() == set.dim(), "optimal_action: dimension mismatch");
  const VectorXd st_theta = set.s().transpose() * theta;
  const double norm = st_theta.norm();
  if (norm == 0.0) throw ZeroParameter("optimal action is undefined for theta = 0");
  return set.center() + set.s() * (st_theta / norm);
}

bool membership(const EllipsoidSet& set, const VectorXd& x) {
  return set.inv_quadratic(x) <= 1.0 + kGeomTol;
}

const VectorXd& exploration_direction(const EllipsoidSet& set, std::size_t j) {
  return set.direction(j);
}

}  // namespace ellbandit
