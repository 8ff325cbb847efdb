#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chaplie {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Real semisimple Lie algebra realized by square matrices.
///
/// The Cartan involution is theta(X) = -X^T for every algebra this library
/// builds, so K is a subgroup of O(n) and s^{-1} = s^T for s in K.
/// Killing form is always taken from the adjoint trace in the stored basis.
class LieAlgebra {
 public:
  /// Validates linear independence, bracket closure, nondegeneracy of the
  /// Killing form and positivity of B_theta. Throws ConstructionError.
  LieAlgebra(std::string name, std::vector<Matrix> basis);

  const std::string& name() const { return name_; }
  int matrix_dim() const { return matrix_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }

  /// XY - YX. Throws InputError on a size mismatch.
  Matrix bracket(const Matrix& x, const Matrix& y) const;

  /// Least-squares coordinates in the stored basis.
  Vector coordinates(const Matrix& x) const;
  Matrix element(const Eigen::Ref<const Vector>& coords) const;
  /// Frobenius distance of x from span(basis), relative to max(1, |x|).
  double span_residual(const Matrix& x) const;

  /// Matrix of ad(x) acting on coordinates.
  Matrix ad_matrix(const Matrix& x) const;
  double killing(const Matrix& x, const Matrix& y) const;
  const Matrix& killing_gram() const { return killing_gram_; }

  static Matrix theta(const Matrix& x) { return -x.transpose(); }
  /// B_theta(X, Y) = -B(X, theta Y).
  double inner(const Matrix& x, const Matrix& y) const;
  double norm(const Matrix& x) const;

 private:
  void check_size(const Matrix& x) const;

  std::string name_;
  int matrix_dim_ = 0;
  std::vector<Matrix> basis_;
  Matrix flat_;       // n^2 x dim
  Matrix coord_map_;  // dim x n^2, left inverse of flat_
  Matrix killing_gram_;
  Matrix inner_gram_;
};

/// Orthonormal bases of the +1 (k) and -1 (p) eigenspaces of theta.
struct CartanSplit {
  std::vector<Matrix> k_basis;
  std::vector<Matrix> p_basis;

  static Matrix project_k(const Matrix& x) { return 0.5 * (x + LieAlgebra::theta(x)); }
  static Matrix project_p(const Matrix& x) { return 0.5 * (x - LieAlgebra::theta(x)); }
};

CartanSplit cartan_split(const LieAlgebra& algebra);

/// Modified Gram-Schmidt with respect to B_theta. Vectors whose residual
/// norm falls below `drop_tol` are discarded, so the output may be shorter.
std::vector<Matrix> orthonormalize(const LieAlgebra& algebra, std::span<const Matrix> vectors,
                                   double drop_tol = 1e-9);

/// Coordinates of x with respect to a B_theta-orthonormal family.
Vector orthonormal_coordinates(const LieAlgebra& algebra, std::span<const Matrix> basis,
                               const Matrix& x);

/// exp(t X) by scaling and squaring (Pade).
Matrix exp_matrix(const Matrix& x, double t = 1.0);

/// Ad(g) X = g X g^{-1}. Throws InputError if g is singular.
Matrix adjoint_action(const Matrix& g, const Matrix& x);

/// Dense left-inverse that maps vec(X) to coordinates in an orthonormal
/// family; used on hot paths where X is known to lie in the span.
class SpanProjector {
 public:
  SpanProjector() = default;
  explicit SpanProjector(std::span<const Matrix> basis);

  Vector coordinates(const Matrix& x) const;
  Matrix element(const Eigen::Ref<const Vector>& coords) const;
  int size() const { return static_cast<int>(flat_.cols()); }

 private:
  int n_ = 0;
  Matrix flat_;
  Matrix dual_;
};

}  // namespace chaplie
