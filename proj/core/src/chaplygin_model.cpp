#include "chaplie/chaplygin_model.hpp"

#include <cmath>
#include <sstream>

#include "chaplie/errors.hpp"

namespace chaplie {
namespace {

constexpr double kZeroRoot = 1e-12;

}  // namespace

std::string to_string(InertiaSpec::Kind kind) {
  switch (kind) {
    case InertiaSpec::Kind::identity: return "identity";
    case InertiaSpec::Kind::diagonal_adapted: return "diagonal";
    case InertiaSpec::Kind::jovanovic: return "jovanovic";
    case InertiaSpec::Kind::full: return "full";
  }
  return "unknown";
}

Matrix resolve_inertia(const InertiaSpec& spec, int d) {
  Matrix m;
  switch (spec.kind) {
    case InertiaSpec::Kind::identity: m = Matrix::Identity(d, d); break;
    case InertiaSpec::Kind::diagonal_adapted:
      if (static_cast<int>(spec.data.size()) != d) {
        std::ostringstream os;
        os << "diagonal inertia needs " << d << " entries, got " << spec.data.size();
        throw InputError(os.str());
      }
      m = Eigen::Map<const Vector>(spec.data.data(), d).asDiagonal();
      break;
    case InertiaSpec::Kind::jovanovic:
    case InertiaSpec::Kind::full: m = spec.matrix; break;
  }
  if (m.rows() != d || m.cols() != d) {
    std::ostringstream os;
    os << "inertia must be " << d << "x" << d << ", got " << m.rows() << "x" << m.cols();
    throw InputError(os.str());
  }
  if (!m.allFinite()) throw InputError("inertia has non-finite entries");
  if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm())) throw InputError("inertia is not symmetric");
  const double lo = Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff();
  if (lo <= 0.0) {
    std::ostringstream os;
    os << "inertia is not positive definite (min eigenvalue " << lo << ")";
    throw InputError(os.str());
  }
  return 0.5 * (m + m.transpose());
}

ChaplyginModel::ChaplyginModel(std::shared_ptr<const AlgebraStructure> structure, Vector w0,
                               InertiaSpec inertia)
    : st_(std::move(structure)), inertia_spec_(std::move(inertia)), w0_(std::move(w0)) {
  const auto& rd = st_->roots;
  d_ = rd.dim_k();
  if (w0_.size() != rd.rank()) {
    std::ostringstream os;
    os << "w0 needs " << rd.rank() << " coordinates in a, got " << w0_.size();
    throw InputError(os.str());
  }
  if (!w0_.allFinite()) throw InputError("w0 has non-finite entries");
  inertia_ = resolve_inertia(inertia_spec_, d_);

  w0_mat_ = Matrix::Zero(st_->algebra.matrix_dim(), st_->algebra.matrix_dim());
  for (int i = 0; i < rd.rank(); ++i) w0_mat_ += w0_(i) * rd.a_basis[i];

  const double scale = std::max(1.0, w0_.norm());
  for (std::size_t r = 0; r < rd.roots.size(); ++r)
    if (std::abs(rd.root_value(static_cast<int>(r), w0_)) > kZeroRoot * scale)
      phi_roots_.push_back(static_cast<int>(r));

  lambda_ = Vector::Zero(d_);
  in_h_.assign(d_, true);
  for (int i = 0; i < d_; ++i) {
    const int r = rd.k_root[i];
    const double l = r < 0 ? 0.0 : rd.root_value(r, w0_);
    if (std::abs(l) > kZeroRoot * scale) {
      lambda_(i) = l;
      in_h_[i] = false;
      phi_.push_back(i);
    } else {
      h_.push_back(i);
    }
  }
  lambda2_ = lambda_.cwiseAbs2();
  k_proj_ = SpanProjector(rd.k_adapted);

  // [w0, h] = 0 and ad(w0) injective on h-perp
  for (int i : h_)
    if (st_->algebra.bracket(w0_mat_, rd.k_adapted[i]).norm() > 1e-10 * scale)
      throw ConstructionError("model: ad(w0) does not vanish on h");
  if (!phi_.empty()) {
    Matrix img(st_->algebra.matrix_dim() * st_->algebra.matrix_dim(), static_cast<Eigen::Index>(phi_.size()));
    for (std::size_t j = 0; j < phi_.size(); ++j) {
      const Matrix b = st_->algebra.bracket(w0_mat_, rd.k_adapted[phi_[j]]);
      img.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vector>(b.data(), b.size());
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(img);
    qr.setThreshold(1e-10);
    if (qr.rank() != static_cast<Eigen::Index>(phi_.size()))
      throw ConstructionError("model: ad(w0) is not injective on h-perp");
  }
}

Matrix ChaplyginModel::element(const Eigen::Ref<const Vector>& u) const { return k_proj_.element(u); }

Vector ChaplyginModel::coordinates(const Matrix& x) const { return k_proj_.coordinates(x); }

Vector ChaplyginModel::bracket(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
  Vector out = Vector::Zero(d_);
  for (int i = 0; i < d_; ++i)
    if (x(i) != 0.0) out += x(i) * (ad(i) * y);
  return out;
}

Matrix ChaplyginModel::adjoint(const Matrix& s) const {
  const auto& kb = st_->roots.k_adapted;
  Matrix R(d_, d_);
  const Matrix st = s.transpose();
  for (int j = 0; j < d_; ++j) R.col(j) = k_proj_.coordinates(s * kb[j] * st);
  return R;
}

Matrix ChaplyginModel::mu0_from_adjoint(const Matrix& R) const {
  return inertia_ + R.transpose() * lambda2_.asDiagonal() * R;
}

Matrix ChaplyginModel::mu0(const Matrix& s) const { return mu0_from_adjoint(adjoint(s)); }

void ChaplyginModel::check_state(const PhaseState& x) const {
  const int n = st_->algebra.matrix_dim();
  if (x.s.rows() != n || x.s.cols() != n) throw InputError("state: group element has the wrong size");
  if (x.u.size() != d_) throw InputError("state: velocity has the wrong dimension");
}

ChaplyginModel::Pieces ChaplyginModel::pieces(const PhaseState& x) const {
  check_state(x);
  Pieces p;
  p.R = adjoint(x.s);
  p.mu0 = mu0_from_adjoint(p.R);
  p.ut = p.R * x.u;
  const Vector a = p.R * (inertia_ * x.u);
  p.P = a + lambda2_.cwiseProduct(p.ut);
  p.DP.resize(d_, d_);
  for (int i = 0; i < d_; ++i) p.DP.col(i) = ad(i) * a + lambda2_.cwiseProduct(ad(i) * p.ut);
  return p;
}

double ChaplyginModel::hamiltonian(const PhaseState& x) const {
  check_state(x);
  return 0.5 * x.u.dot(mu0(x.s) * x.u);
}

Vector ChaplyginModel::liouville_coefficients(const PhaseState& x) const { return pieces(x).P; }

Vector ChaplyginModel::momentum(const PhaseState& x) const {
  const Vector P = pieces(x).P;
  Vector j(static_cast<Eigen::Index>(h_.size()));
  for (std::size_t k = 0; k < h_.size(); ++k) j(static_cast<Eigen::Index>(k)) = P(h_[k]);
  return j;
}

Vector ChaplyginModel::connection_bracket(const PhaseState& x) const {
  check_state(x);
  const auto& alg = st_->algebra;
  const auto& rd = st_->roots;
  const Matrix adsu = x.s * element(x.u) * x.s.transpose();
  const Matrix a = -alg.bracket(adsu, w0_mat_);
  Vector out(static_cast<Eigen::Index>(phi_.size()));
  for (std::size_t k = 0; k < phi_.size(); ++k)
    out(static_cast<Eigen::Index>(k)) = alg.inner(rd.e_basis[phi_[k] - rd.dim_m()], a);
  return out;
}

Vector ChaplyginModel::connection_eta(const PhaseState& x) const {
  check_state(x);
  const Vector ut = adjoint(x.s) * x.u;
  Vector out(static_cast<Eigen::Index>(phi_.size()));
  for (std::size_t k = 0; k < phi_.size(); ++k) out(static_cast<Eigen::Index>(k)) = lambda_(phi_[k]) * ut(phi_[k]);
  return out;
}

double ChaplyginModel::density_f(const Matrix& s) const {
  const double det = mu0(s).determinant();
  if (!(det > 0.0)) throw NumericalError("density: mu0 is not positive definite");
  return 1.0 / std::sqrt(det);
}

double ChaplyginModel::conformal_F(const Matrix& s) const {
  if (m() < 2) throw InputError("conformal factor needs dim K/H >= 2");
  return std::pow(density_f(s), 1.0 / (m() - 1));
}

double ChaplyginModel::dlogf(const Matrix& s, int i) const {
  if (i < 0 || i >= d_) throw InputError("dlogf: index out of range");
  const Matrix R = adjoint(s);
  const Matrix N = R * mu0_from_adjoint(R).ldlt().solve(R.transpose());
  double acc = 0.0;
  for (int mu : phi_) acc += lambda2_(mu) * N.col(mu).dot(ad(i).col(mu));
  return acc;
}

Matrix ChaplyginModel::omega_K(const PhaseState& x) const {
  const Pieces p = pieces(x);
  const Matrix Rmu = p.R * p.mu0;
  Matrix w = Matrix::Zero(2 * d_, 2 * d_);
  for (int i = 0; i < d_; ++i) {
    const Vector cp = ad(i).transpose() * p.P;  // sum_k P_k c^k_ij over j
    for (int j = 0; j < d_; ++j) w(i, j) = -(p.DP(j, i) - p.DP(i, j) + cp(j));
  }
  w.topRightCorner(d_, d_) = Rmu;
  w.bottomLeftCorner(d_, d_) = -Rmu.transpose();
  return w;
}

Matrix ChaplyginModel::omega_AdA(const PhaseState& x) const {
  check_state(x);
  const Vector ut = adjoint(x.s) * x.u;
  const Vector weights = lambda2_.cwiseProduct(ut);
  Matrix w = Matrix::Zero(2 * d_, 2 * d_);
  for (int i = 0; i < d_; ++i) w.block(i, 0, 1, d_) = (ad(i).transpose() * weights).transpose();
  return w;
}

Matrix ChaplyginModel::omega_nh(const PhaseState& x) const { return omega_K(x) + omega_AdA(x); }

Matrix ChaplyginModel::lambda_form(const PhaseState& x) const {
  check_state(x);
  const Vector ut = adjoint(x.s) * x.u;
  Vector hpart = Vector::Zero(d_);
  for (int k : h_) hpart(k) = ut(k);
  const Vector phipart = lambda2_.cwiseProduct(ut);
  Matrix w = Matrix::Zero(2 * d_, 2 * d_);
  for (int i : phi_) {
    const Vector a = ad(i).transpose() * phipart;
    const Vector b = ad(i).transpose() * hpart;
    for (int j : phi_) w(i, j) = a(j) - 0.5 * (lambda2_(i) + lambda2_(j)) * b(j);
  }
  return w;
}

Matrix ChaplyginModel::omega_tilde(const PhaseState& x) const { return omega_K(x) + lambda_form(x); }

Vector ChaplyginModel::dH(const PhaseState& x) const {
  const Pieces p = pieces(x);
  Vector g(2 * d_);
  const Vector w2u = lambda2_.cwiseProduct(p.ut);
  for (int i = 0; i < d_; ++i) g(i) = w2u.dot(ad(i) * p.ut);
  g.tail(d_) = p.mu0 * x.u;
  return g;
}

Matrix ChaplyginModel::dJ(const PhaseState& x) const {
  const Pieces p = pieces(x);
  const Matrix Rmu = p.R * p.mu0;
  Matrix j(static_cast<Eigen::Index>(h_.size()), 2 * d_);
  for (std::size_t k = 0; k < h_.size(); ++k) {
    j.block(static_cast<Eigen::Index>(k), 0, 1, d_) = p.DP.row(h_[k]);
    j.block(static_cast<Eigen::Index>(k), d_, 1, d_) = Rmu.row(h_[k]);
  }
  return j;
}

TruncationResiduals ChaplyginModel::verify_truncation(const PhaseState& x, const Vector& xnh) const {
  if (xnh.size() != 2 * d_) throw InputError("verify_truncation: Xnh must have 2d components");
  TruncationResiduals r;
  const Matrix wt = omega_tilde(x);
  const Eigen::JacobiSVD<Matrix> svd(wt);
  const auto& sv = svd.singularValues();
  r.nondegeneracy = sv(sv.size() - 1) / sv(0);
  r.energy = (wt.transpose() * xnh - dH(x)).cwiseAbs().maxCoeff();
  const Matrix dj = dJ(x);
  for (std::size_t k = 0; k < h_.size(); ++k)
    r.momentum = std::max(r.momentum, (wt.row(h_[k]) - dj.row(static_cast<Eigen::Index>(k))).cwiseAbs().maxCoeff());
  return r;
}

Matrix ChaplyginModel::random_group(std::mt19937_64& rng, double scale) const {
  std::normal_distribution<double> normal(0.0, scale);
  const int n = st_->algebra.matrix_dim();
  Matrix s = Matrix::Identity(n, n);
  for (int t = 0; t < 3; ++t) {
    Vector c(d_);
    for (auto& v : c) v = normal(rng);
    s = s * exp_matrix(element(c));
  }
  return s;
}

PhaseState ChaplyginModel::random_state(std::mt19937_64& rng, double scale) const {
  PhaseState x;
  x.s = random_group(rng, scale);
  std::normal_distribution<double> normal;
  x.u.resize(d_);
  for (auto& v : x.u) v = normal(rng);
  return x;
}

}  // namespace chaplie
