#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "chaplie/root_engine.hpp"

namespace chaplie {

/// Inertia tensor on k. Every kind is resolved to a symmetric matrix in the
/// adapted k basis before a model is built.
struct InertiaSpec {
  enum class Kind { identity, diagonal_adapted, jovanovic, full };
  Kind kind = Kind::identity;
  std::vector<double> data;  // diagonal entries or the jovanovic a-vector
  Matrix matrix;             // filled for full and jovanovic

  static InertiaSpec identity() { return {}; }
  static InertiaSpec diagonal(std::vector<double> d) { return {Kind::diagonal_adapted, std::move(d), {}}; }
  static InertiaSpec full_matrix(Matrix m) { return {Kind::full, {}, std::move(m)}; }
};

std::string to_string(InertiaSpec::Kind kind);

/// Resolves `spec` to a d x d matrix; throws InputError unless it is SPD.
Matrix resolve_inertia(const InertiaSpec& spec, int d);

/// Point of TK in left trivialization: s in K, u in k as adapted coordinates.
struct PhaseState {
  Matrix s;
  Vector u;
};

/// Frame on T(TK) used by every form below: indices 0..d-1 are the
/// right-invariant fields zeta_i (lifted with u fixed), d..2d-1 the fiber
/// directions d/du_j. In this frame [E_i, E_j] = -sum_k c^k_ij E_k.
struct TruncationResiduals {
  double nondegeneracy = 0.0;  // smallest / largest singular value of Omega-tilde
  double energy = 0.0;         // max |i(Xnh)Omega-tilde - dHc|
  double momentum = 0.0;       // max |i(zeta_Y)Omega-tilde - d<J_H, Y>|
};

class ChaplyginModel {
 public:
  ChaplyginModel(std::shared_ptr<const AlgebraStructure> structure, Vector w0, InertiaSpec inertia);

  const AlgebraStructure& structure() const { return *st_; }
  std::shared_ptr<const AlgebraStructure> structure_ptr() const { return st_; }
  const RootDatum& roots() const { return st_->roots; }
  const InertiaSpec& inertia_spec() const { return inertia_spec_; }

  int d() const { return d_; }
  /// dim K/H = number of Phi-indexed adapted vectors.
  int m() const { return static_cast<int>(phi_.size()); }
  const std::vector<int>& phi_indices() const { return phi_; }
  const std::vector<int>& h_indices() const { return h_; }
  /// Positive roots not vanishing on w0.
  const std::vector<int>& phi_roots() const { return phi_roots_; }
  const Vector& w0() const { return w0_; }
  const Matrix& w0_matrix() const { return w0_mat_; }
  /// lambda(w0) for each adapted index (0 on h).
  const Vector& lambda() const { return lambda_; }
  const Matrix& inertia() const { return inertia_; }
  const Matrix& ad(int i) const { return st_->roots.ad[i]; }

  Matrix element(const Eigen::Ref<const Vector>& u) const;
  Vector coordinates(const Matrix& x) const;
  /// [x, y] in adapted coordinates.
  Vector bracket(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;

  /// Ad(s) on k in the adapted basis; orthogonal since K preserves B_theta.
  Matrix adjoint(const Matrix& s) const;
  Matrix mu0(const Matrix& s) const;
  Matrix mu0_from_adjoint(const Matrix& R) const;

  double hamiltonian(const PhaseState& x) const;
  /// Components <mu0 u, Ad(s^-1) Y> for Y over h_indices().
  Vector momentum(const PhaseState& x) const;

  /// -[Ad(s)u, w0] projected on V, as coordinates on {e_k : k in Phi}.
  Vector connection_bracket(const PhaseState& x) const;
  /// sum lambda(w0) eta^k e_k, same coordinates.
  Vector connection_eta(const PhaseState& x) const;

  double density_f(const Matrix& s) const;
  double conformal_F(const Matrix& s) const;
  /// Closed-form d(log f) along zeta_i: sum_mu lambda_mu^2 <N e_mu, ad_i e_mu>,
  /// N = Ad(s) mu0^-1 Ad(s^-1).
  double dlogf(const Matrix& s, int i) const;

  // 2d x 2d frame matrices M(a, b) = form(V_a, V_b)
  Matrix omega_K(const PhaseState& x) const;
  Matrix omega_AdA(const PhaseState& x) const;
  Matrix omega_nh(const PhaseState& x) const;
  Matrix lambda_form(const PhaseState& x) const;
  Matrix omega_tilde(const PhaseState& x) const;
  /// dHc in the frame.
  Vector dH(const PhaseState& x) const;
  /// Rows d<J_H, Y_h> in the frame, h over h_indices().
  Matrix dJ(const PhaseState& x) const;
  /// Liouville form theta^K = sum_k P_k eta^k: returns P = Ad(s) mu0 u.
  Vector liouville_coefficients(const PhaseState& x) const;

  /// Residuals of the truncation identities for a given Xnh (frame coordinates).
  TruncationResiduals verify_truncation(const PhaseState& x, const Vector& xnh) const;

  Matrix random_group(std::mt19937_64& rng, double scale = 1.0) const;
  PhaseState random_state(std::mt19937_64& rng, double scale = 1.0) const;

 private:
  struct Pieces {
    Matrix R;
    Matrix mu0;
    Vector ut;   // R u
    Vector P;    // R mu0 u
    Matrix DP;   // column i = E_i P
  };
  Pieces pieces(const PhaseState& x) const;
  void check_state(const PhaseState& x) const;

  std::shared_ptr<const AlgebraStructure> st_;
  InertiaSpec inertia_spec_;
  int d_ = 0;
  Vector w0_;
  Matrix w0_mat_;
  Vector lambda_;
  Vector lambda2_;
  std::vector<int> phi_, h_, phi_roots_;
  std::vector<bool> in_h_;
  Matrix inertia_;
  SpanProjector k_proj_;
};

}  // namespace chaplie
