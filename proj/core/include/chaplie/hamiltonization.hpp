#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "chaplie/chaplygin_model.hpp"

namespace chaplie {

/// One (kappa, mu, nu) entry of the zero-momentum Hamiltonization condition;
/// indices are adapted k indices in Phi.
struct TripleResidual {
  int kappa = -1, mu = -1, nu = -1;
  double lhs = 0.0, rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};

struct HamSample {
  double max_residual = 0.0;
  TripleResidual worst;
  std::vector<TripleResidual> triples;  // all m^3 entries, kappa-major
};

/// Evaluates the condition at one group element. m = 2 gives an empty table
/// (the condition is vacuous); m < 2 throws InputError.
HamSample ham_residual_at_0(const ChaplyginModel& model, const Matrix& s);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct HamThresholds {
  double pass = 1e-8;  // residual < pass * scale at every sample
  double fail = 1e-3;  // residual > fail * scale at some sample
};

struct HamResidualReport {
  bool vacuous = false;
  double max_residual = 0.0;
  double scale = 1.0;  // max lambda(w0)^2
  HamThresholds thresholds;
  TripleResidual worst;
  std::vector<TripleResidual> top;  // largest residuals at the worst sample
  std::vector<Matrix> samples;      // identity followed by random elements
  Verdict verdict = Verdict::pass;
};

HamResidualReport check_hamiltonizable(const ChaplyginModel& model, int n_random, std::uint64_t seed,
                                       HamThresholds thresholds = {}, int top_n = 10);

/// Diagonal inertia a_i a_j / (1 - a_i a_j) on e_i ^ e_j in so(n) = k of so(n,1),
/// mapped to the adapted basis. Requires 0 < a_i a_j < 1 for all i, j.
InertiaSpec jovanovic_inertia(const AlgebraStructure& st, const std::vector<double>& a);

/// Minimal-norm change of u that puts the state on J_H = 0.
PhaseState project_to_zero_momentum(const ChaplyginModel& model, const PhaseState& x);

struct ExactnessResidual {
  double residual = 0.0;  // max |F Omega-tilde + d beta| on ker dJ_H
  double scale = 0.0;     // max |F Omega-tilde| on ker dJ_H
};

/// Compares F Omega-tilde with -d(F sum_{Phi} G eta) on pairs of vectors
/// tangent to J_H = 0. The exterior derivative is taken by central
/// differences in the left exponential chart. Throws InputError off the
/// level set (|J_H| > 1e-8) or when dim K/H < 2.
ExactnessResidual verify_exactness_at_0(const ChaplyginModel& model, const PhaseState& x, double fd_step);

/// Iterated-bracket flag D_1 = span(gens), D_{k+1} = D_k + [D_1, D_k] inside k
/// (adapted coordinates); stops when the dimension stabilizes.
struct DistributionFlag {
  std::vector<Vector> generators;
  std::vector<int> flag_dims;
};
DistributionFlag distribution_flag(const ChaplyginModel& model, const std::vector<Vector>& generators,
                                   const std::vector<int>& modulo = {});

struct RubberReport {
  int long_root = -1, short_root = -1, sum_root = -1;  // root indices
  std::vector<int> flag_dims;
  std::vector<int> quotient_flag_dims;
  double lambda_insertion = 0.0;  // max |i(Xnh) Lambda|
  double tangency = 0.0;          // max component of d/dt(Ad(s)u) outside D_new
  double invariance = 0.0;        // |[Z_l1, D_new] mod D_new|
  double hc_invariance = 0.0;     // max |zeta_l1 (g_l2^2 + g_(l1+l2)^2)|
  int states = 0;
};

/// Requires a split g2 model with lambda1(w0) = 0 != lambda2(w0) (lambda1 the
/// long simple root); otherwise throws InputError.
RubberReport rubber_subsystem_report(const ChaplyginModel& model, int n_states, std::uint64_t seed);

}  // namespace chaplie
