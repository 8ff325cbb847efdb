#include "chaplie/lie_core.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "chaplie/errors.hpp"

namespace chaplie {
namespace {

constexpr double kSpanTol = 1e-10;

Eigen::Map<const Vector> flatten(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

}  // namespace

LieAlgebra::LieAlgebra(std::string name, std::vector<Matrix> basis)
    : name_(std::move(name)), basis_(std::move(basis)) {
  if (basis_.empty()) throw ConstructionError(name_ + ": empty basis");
  matrix_dim_ = static_cast<int>(basis_.front().rows());
  const int n2 = matrix_dim_ * matrix_dim_;
  flat_.resize(n2, dim());
  for (int i = 0; i < dim(); ++i) {
    if (basis_[i].rows() != matrix_dim_ || basis_[i].cols() != matrix_dim_)
      throw ConstructionError(name_ + ": basis matrices have inconsistent sizes");
    flat_.col(i) = flatten(basis_[i]);
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(flat_);
  qr.setThreshold(1e-12);
  if (qr.rank() != dim()) {
    std::ostringstream os;
    os << name_ << ": basis is linearly dependent (rank " << qr.rank() << " < " << dim() << ")";
    throw ConstructionError(os.str());
  }
  coord_map_ = flat_.completeOrthogonalDecomposition().pseudoInverse();

  for (int i = 0; i < dim(); ++i) {
    for (int j = i + 1; j < dim(); ++j) {
      const double r = span_residual(bracket(basis_[i], basis_[j]));
      if (r > kSpanTol) {
        std::ostringstream os;
        os << name_ << ": bracket of basis elements " << i << ", " << j
           << " leaves the span (residual " << r << ")";
        throw ConstructionError(os.str());
      }
    }
    if (span_residual(theta(basis_[i])) > kSpanTol)
      throw ConstructionError(name_ + ": theta does not preserve the algebra");
  }

  std::vector<Matrix> ads;
  ads.reserve(dim());
  for (const auto& b : basis_) ads.push_back(ad_matrix(b));
  killing_gram_.resize(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = i; j < dim(); ++j)
      killing_gram_(i, j) = killing_gram_(j, i) = (ads[i] * ads[j]).trace();

  Eigen::SelfAdjointEigenSolver<Matrix> killing_eig(killing_gram_);
  const double kmax = killing_eig.eigenvalues().cwiseAbs().maxCoeff();
  const double kmin = killing_eig.eigenvalues().cwiseAbs().minCoeff();
  if (kmax == 0.0 || kmin < 1e-10 * kmax)
    throw ConstructionError(name_ + ": Killing form is degenerate (algebra not semisimple)");

  Matrix theta_coords(dim(), dim());
  for (int j = 0; j < dim(); ++j) theta_coords.col(j) = coordinates(theta(basis_[j]));
  inner_gram_ = -killing_gram_ * theta_coords;
  inner_gram_ = 0.5 * (inner_gram_ + inner_gram_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> inner_eig(inner_gram_);
  if (inner_eig.eigenvalues().minCoeff() <= 1e-10 * inner_eig.eigenvalues().maxCoeff())
    throw ConstructionError(name_ + ": B_theta is not positive definite; theta is not a Cartan involution");
}

void LieAlgebra::check_size(const Matrix& x) const {
  if (x.rows() != matrix_dim_ || x.cols() != matrix_dim_) {
    std::ostringstream os;
    os << name_ << ": expected " << matrix_dim_ << "x" << matrix_dim_ << " matrix, got " << x.rows()
       << "x" << x.cols();
    throw InputError(os.str());
  }
}

Matrix LieAlgebra::bracket(const Matrix& x, const Matrix& y) const {
  check_size(x);
  check_size(y);
  return x * y - y * x;
}

Vector LieAlgebra::coordinates(const Matrix& x) const {
  check_size(x);
  return coord_map_ * flatten(x);
}

Matrix LieAlgebra::element(const Eigen::Ref<const Vector>& coords) const {
  if (coords.size() != dim()) throw InputError(name_ + ": coordinate vector has wrong length");
  Vector flat = flat_ * coords;
  return Eigen::Map<const Matrix>(flat.data(), matrix_dim_, matrix_dim_);
}

double LieAlgebra::span_residual(const Matrix& x) const {
  check_size(x);
  const auto fx = flatten(x);
  const Vector proj = flat_ * (coord_map_ * fx);
  return (fx - proj).norm() / std::max(1.0, fx.norm());
}

Matrix LieAlgebra::ad_matrix(const Matrix& x) const {
  Matrix ad(dim(), dim());
  for (int j = 0; j < dim(); ++j) ad.col(j) = coordinates(bracket(x, basis_[j]));
  return ad;
}

double LieAlgebra::killing(const Matrix& x, const Matrix& y) const {
  return coordinates(x).dot(killing_gram_ * coordinates(y));
}

double LieAlgebra::inner(const Matrix& x, const Matrix& y) const {
  return coordinates(x).dot(inner_gram_ * coordinates(y));
}

double LieAlgebra::norm(const Matrix& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

std::vector<Matrix> orthonormalize(const LieAlgebra& algebra, std::span<const Matrix> vectors,
                                   double drop_tol) {
  std::vector<Matrix> out;
  for (const auto& v : vectors) {
    const double scale = algebra.norm(v);
    if (scale == 0.0) continue;
    Matrix w = v;
    // two passes of MGS keep the family orthonormal to ~1e-15
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& o : out) w -= algebra.inner(o, w) * o;
    const double nrm = algebra.norm(w);
    if (nrm > drop_tol * std::max(1.0, scale)) out.push_back(w / nrm);
  }
  return out;
}

Vector orthonormal_coordinates(const LieAlgebra& algebra, std::span<const Matrix> basis,
                               const Matrix& x) {
  Vector c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) c(static_cast<Eigen::Index>(i)) = algebra.inner(basis[i], x);
  return c;
}

CartanSplit cartan_split(const LieAlgebra& algebra) {
  std::vector<Matrix> kraw, praw;
  for (const auto& b : algebra.basis()) {
    kraw.push_back(CartanSplit::project_k(b));
    praw.push_back(CartanSplit::project_p(b));
  }
  CartanSplit split;
  split.k_basis = orthonormalize(algebra, kraw);
  split.p_basis = orthonormalize(algebra, praw);
  const auto total = split.k_basis.size() + split.p_basis.size();
  if (static_cast<int>(total) != algebra.dim()) {
    std::ostringstream os;
    os << algebra.name() << ": theta eigenspaces have dimensions " << split.k_basis.size() << " + "
       << split.p_basis.size() << " != " << algebra.dim();
    throw ConstructionError(os.str());
  }
  return split;
}

Matrix exp_matrix(const Matrix& x, double t) {
  if (x.rows() != x.cols()) throw InputError("exp_matrix: matrix must be square");
  const Matrix scaled = t * x;
  return scaled.exp();
}

Matrix adjoint_action(const Matrix& g, const Matrix& x) {
  if (g.rows() != g.cols() || g.rows() != x.rows() || x.rows() != x.cols())
    throw InputError("adjoint_action: size mismatch");
  Eigen::FullPivLU<Matrix> lu(g);
  if (!lu.isInvertible()) throw InputError("adjoint_action: group element is not invertible");
  return g * x * lu.inverse();
}

SpanProjector::SpanProjector(std::span<const Matrix> basis) {
  if (basis.empty()) return;
  n_ = static_cast<int>(basis.front().rows());
  flat_.resize(static_cast<Eigen::Index>(n_) * n_, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    flat_.col(static_cast<Eigen::Index>(i)) = flatten(basis[i]);
  dual_ = flat_.completeOrthogonalDecomposition().pseudoInverse();
}

Vector SpanProjector::coordinates(const Matrix& x) const {
  if (flat_.cols() == 0) return Vector();
  return dual_ * flatten(x);
}

Matrix SpanProjector::element(const Eigen::Ref<const Vector>& coords) const {
  if (flat_.cols() == 0) return Matrix::Zero(n_, n_);
  Vector f = flat_ * coords;
  return Eigen::Map<const Matrix>(f.data(), n_, n_);
}

}  // namespace chaplie
