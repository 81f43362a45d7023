#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ellbandit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Relative tolerance for every geometric identity (feasibility, boundary,
// reconstruction of A from its factor).
inline constexpr double kGeomTol = 1e-9;

// Symmetric positive-definite matrix. Construction validates symmetry
// (relative 1e-12) and positive definiteness (Cholesky succeeds); the stored
// matrix is the exact symmetrization of the input.
class PdMatrix {
 public:
  explicit PdMatrix(const MatrixXd& m);

  static PdMatrix identity(Eigen::Index d);
  static PdMatrix diagonal(const VectorXd& diag);

  Eigen::Index dim() const { return m_.rows(); }
  const MatrixXd& matrix() const { return m_; }
  // Lower Cholesky factor L with L·Lᵀ = M.
  const MatrixXd& cholesky() const { return l_; }

 private:
  MatrixXd m_;
  MatrixXd l_;
};

// sqrt(uᵀ M u).
double mnorm(const PdMatrix& m, const VectorXd& u);

struct Factor {
  MatrixXd s;        // S·Sᵀ = A (lower-triangular Cholesky factor)
  MatrixXd s_inv_t;  // (S⁻¹)ᵀ
};

// Throws NotPositiveDefinite when a Cholesky pivot is not strictly positive.
Factor factorize(const MatrixXd& a);
Factor factorize(const PdMatrix& a);

// The action set {x : ‖x − c‖_{A⁻¹} ≤ 1}. Immutable once built; share it
// across episodes by const reference or shared_ptr<const EllipsoidSet>.
class EllipsoidSet {
 public:
  EllipsoidSet(PdMatrix a, VectorXd center);

  static EllipsoidSet ball(Eigen::Index d);

  Eigen::Index dim() const { return a_.dim(); }
  const PdMatrix& a() const { return a_; }
  const VectorXd& center() const { return c_; }
  const MatrixXd& s() const { return factor_.s; }
  const MatrixXd& s_inv_t() const { return factor_.s_inv_t; }

  // Column j of S, 0-based. Cached so policies can hand out references.
  const VectorXd& direction(std::size_t j) const;

  bool is_centered() const { return c_.isZero(0.0); }
  bool is_unit_ball() const;

  // (x − c)ᵀ A⁻¹ (x − c)
  double inv_quadratic(const VectorXd& x) const;
  // ‖θ‖_A
  double anorm(const VectorXd& theta) const;

  // Same A, center moved to the origin.
  EllipsoidSet centered() const;

 private:
  PdMatrix a_;
  VectorXd c_;
  Factor factor_;
  std::vector<VectorXd> directions_;
};

// c + Aθ/‖θ‖_A. Throws ZeroParameter for θ = 0.
VectorXd optimal_action(const EllipsoidSet& set, const VectorXd& theta);

// True iff (x − c)ᵀA⁻¹(x − c) ≤ 1 + 1e-9.
bool membership(const EllipsoidSet& set, const VectorXd& x);

// S·e_j for 0-based j < d; a boundary point of the centered ellipsoid.
const VectorXd& exploration_direction(const EllipsoidSet& set, std::size_t j);

}  // namespace ellbandit
