#pragma once

#include <vector>

#include "chaplie/chaplygin_model.hpp"

namespace chaplie {

struct XnhField {
  Vector frame;   // 2d coordinates in the (E, F) frame
  Vector base;    // first d: coefficients on the right-invariant fields
  Vector fiber;   // du/dt in adapted coordinates
  double second_order_residual = 0.0;  // |base - Ad(s) u|
};

/// Solves i(X)Omega_nh = dHc. Throws NumericalError when Omega_nh is singular.
XnhField vector_field_Xnh(const ChaplyginModel& model, const PhaseState& x);

struct IntegratorConfig {
  double h = 1e-3;
  double T = 1.0;
  bool reorthonormalize = true;
  double fd_step = 1e-5;
  int sample_every = 1;
  /// Per-step rejection threshold on |dHc| / Hc.
  double max_step_drift = 1e-6;

  void validate() const;
};

struct Sample {
  double t = 0.0;
  PhaseState state;
  double Hc = 0.0;
  Vector JH;
  double f = 0.0;
  Vector x;  // V-position (full-system oracle only)
};

struct Trajectory {
  std::vector<Sample> samples;
  double max_reortho_drift = 0.0;      // |s^T s - I| before re-orthonormalization
  double max_constraint_residual = 0.0;  // oracle only: |x' + A_s(u)|
};

struct DriftReport {
  double energy_rel = 0.0;  // max |Hc(t) - Hc(0)| / Hc(0)
  double momentum = 0.0;    // max |J_H(t) - J_H(0)|
};
DriftReport drift(const Trajectory& traj);

/// RKMK4 in the moving exponential chart s = s_n exp(xi).
Trajectory integrate(const ChaplyginModel& model, const PhaseState& x0, const IntegratorConfig& cfg);

/// Constrained Euler-Lagrange equations on K x V with multipliers, integrated
/// with classical RK4 on (S, u, x, x') in the ambient matrix space. Shares no
/// code with the Omega_nh assembly.
Trajectory full_system_oracle(const ChaplyginModel& model, const PhaseState& x0, const Vector& pos0,
                              const IntegratorConfig& cfg);

struct TrajectoryDistance {
  double s = 0.0;  // sup |s_a - s_b|_F
  double u = 0.0;  // sup |u_a - u_b|
  double total() const { return std::max(s, u); }
};
/// Compares samples at equal indices; throws InputError if time grids differ.
TrajectoryDistance compare(const Trajectory& a, const Trajectory& b);

/// dexp map of the left chart: s^-1 d/dt(s0 exp(xi)) = M(xi) xi'.
Matrix chart_dexp(const ChaplyginModel& model, const Vector& xi);

/// |div| of Xnh with respect to f (Omega^K)^d in the left exponential chart at
/// x, by central differences of step fd_step. With use_density = false the
/// factor f is dropped, which must leave a visibly nonzero residual whenever
/// the connection is nontrivial.
double verify_measure(const ChaplyginModel& model, const PhaseState& x, double fd_step,
                      bool use_density = true);

}  // namespace chaplie
