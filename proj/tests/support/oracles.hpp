#pragma once

// Test-side reference computations. These work on raw matrices with the
// trace form and finite differences, never on the library's ad tables or
// closed-form differentials, so agreement is meaningful.

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <chaplie/chaplie.hpp>

namespace oracle {

using chaplie::Matrix;
using chaplie::Vector;

inline Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

/// <x, y> = tr(x y^T) / tr(z z^T) for a reference unit vector z: on a simple
/// algebra B_theta is a multiple of the Frobenius form, so this is B_theta
/// whenever z is B_theta-normalized.
inline double frob(const Matrix& x, const Matrix& y) { return (x.array() * y.array()).sum(); }

/// c^k_ij from raw commutators, assuming the family is B_theta-orthonormal.
inline double structure_constant(const std::vector<Matrix>& basis, int k, int i, int j) {
  return frob(basis[k], commutator(basis[i], basis[j])) / frob(basis[k], basis[k]);
}

struct Model {
  chaplie::AlgebraSpec spec;
  std::shared_ptr<const chaplie::AlgebraStructure> st;
  std::shared_ptr<chaplie::ChaplyginModel> model;
};

inline Model make(const std::string& id, chaplie::InertiaSpec inertia = chaplie::InertiaSpec::identity(),
                  std::uint64_t seed = 7) {
  Model m;
  m.spec = chaplie::parse_algebra_id(id);
  m.st = std::make_shared<const chaplie::AlgebraStructure>(chaplie::build_structure(m.spec, seed));
  m.model = std::make_shared<chaplie::ChaplyginModel>(m.st, chaplie::default_w0(m.spec, *m.st), std::move(inertia));
  return m;
}

/// A non-identity diagonal inertia in the adapted basis, so that the density
/// f is not constant.
inline chaplie::InertiaSpec spread_inertia(int d) {
  std::vector<double> diag;
  for (int i = 0; i < d; ++i) diag.push_back(1.0 + 0.3 * i);
  return chaplie::InertiaSpec::diagonal(diag);
}

/// Flow of the right-invariant field zeta_i: s -> exp(t K_i) s.
inline chaplie::PhaseState push(const chaplie::ChaplyginModel& m, const chaplie::PhaseState& x, int frame_index,
                                double t) {
  const int d = m.d();
  chaplie::PhaseState y = x;
  if (frame_index < d) y.s = chaplie::exp_matrix(m.element(Vector::Unit(d, frame_index)), t) * x.s;
  else y.u(frame_index - d) += t;
  return y;
}

/// Central difference of a scalar function along frame direction a.
template <class F>
double derivative(const chaplie::ChaplyginModel& m, const chaplie::PhaseState& x, int a, F&& f, double h = 1e-5) {
  return (f(push(m, x, a, h)) - f(push(m, x, a, -h))) / (2.0 * h);
}

/// dHc in the frame by central differences.
inline Vector fd_dH(const chaplie::ChaplyginModel& m, const chaplie::PhaseState& x) {
  Vector out(2 * m.d());
  for (int a = 0; a < 2 * m.d(); ++a)
    out(a) = derivative(m, x, a, [&](const chaplie::PhaseState& y) { return m.hamiltonian(y); });
  return out;
}

/// Omega^K = -d theta^K by the invariant formula, with theta(E_i) = P_i,
/// theta(F_j) = 0 and [E_i, E_j] = -sum_k c^k_ij E_k; every derivative of P is
/// a finite difference.
inline Matrix fd_omega_K(const chaplie::ChaplyginModel& m, const chaplie::PhaseState& x) {
  const int d = m.d();
  const auto& basis = m.roots().k_adapted;
  const Vector P = m.liouville_coefficients(x);
  Matrix dP(2 * d, d);  // dP(a, i) = V_a P_i
  for (int a = 0; a < 2 * d; ++a) {
    const Vector plus = m.liouville_coefficients(push(m, x, a, 1e-5));
    const Vector minus = m.liouville_coefficients(push(m, x, a, -1e-5));
    dP.row(a) = ((plus - minus) / 2e-5).transpose();
  }
  Matrix dtheta = Matrix::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double bracket_term = 0.0;
      for (int k = 0; k < d; ++k) bracket_term += structure_constant(basis, k, i, j) * P(k);
      dtheta(i, j) = dP(i, j) - dP(j, i) + bracket_term;
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      dtheta(i, d + j) = -dP(d + j, i);
      dtheta(d + j, i) = dP(d + j, i);
    }
  return -dtheta;
}

/// d(log f) along zeta_i by central differences.
inline double fd_dlogf(const chaplie::ChaplyginModel& m, const Matrix& s, int i, double h = 1e-5) {
  const Matrix k = m.element(Vector::Unit(m.d(), i));
  return (std::log(m.density_f(chaplie::exp_matrix(k, h) * s)) -
          std::log(m.density_f(chaplie::exp_matrix(k, -h) * s))) /
         (2.0 * h);
}

/// -sum_mu mu(w0)^2 < mu0^-1 [zeta_i, zeta_mu], zeta_mu > at s, in
/// left-trivialized form: zeta_X at s is s^-1 X s in the body frame, the
/// bracket of right-invariant fields is minus the algebra bracket, and
/// mu0 acts in the body frame.
inline double density_identity_rhs(const chaplie::ChaplyginModel& m, const Matrix& s, int i) {
  const auto& basis = m.roots().k_adapted;
  const int d = m.d();
  const Eigen::LLT<Matrix> mu0(m.mu0(s));
  auto body = [&](const Matrix& x) {
    const Matrix y = s.transpose() * x * s;
    Vector c(d);
    for (int k = 0; k < d; ++k) c(k) = frob(basis[k], y) / frob(basis[k], basis[k]);
    return c;
  };
  double sum = 0.0;
  for (int mu : m.phi_indices()) {
    const double l = m.lambda()(mu);
    const Vector br = body(-commutator(basis[i], basis[mu]));
    sum += l * l * mu0.solve(br).dot(body(basis[mu]));
  }
  return -sum;
}

}  // namespace oracle
