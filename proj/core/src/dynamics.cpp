#include "chaplie/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "chaplie/errors.hpp"

namespace chaplie {
namespace {

Matrix polar(const Matrix& s) {
  Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

double orthogonality_defect(const Matrix& s) {
  return (s.transpose() * s - Matrix::Identity(s.rows(), s.cols())).norm();
}

Sample make_sample(const ChaplyginModel& model, double t, const PhaseState& x) {
  Sample smp;
  smp.t = t;
  smp.state = x;
  smp.Hc = model.hamiltonian(x);
  smp.JH = model.momentum(x);
  smp.f = model.density_f(x.s);
  return smp;
}

int step_count(const IntegratorConfig& cfg) {
  return static_cast<int>(std::llround(cfg.T / cfg.h));
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("integrator: step h must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw InputError("integrator: horizon T must be positive");
  if (!(h < T)) throw InputError("integrator: step h must be smaller than horizon T");
  if (!(fd_step >= 1e-7 && fd_step <= 1e-3)) throw InputError("integrator: fd_step must lie in [1e-7, 1e-3]");
  if (sample_every < 1) throw InputError("integrator: sample_every must be >= 1");
  if (!(max_step_drift > 0.0)) throw InputError("integrator: max_step_drift must be positive");
}

XnhField vector_field_Xnh(const ChaplyginModel& model, const PhaseState& x) {
  const int d = model.d();
  const Matrix w = model.omega_nh(x);
  Eigen::FullPivLU<Matrix> lu(w.transpose());
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw NumericalError("Omega_nh is degenerate at this state");
  XnhField out;
  out.frame = lu.solve(model.dH(x));
  if (!out.frame.allFinite()) throw NumericalError("Xnh solve produced non-finite values");
  out.base = out.frame.head(d);
  out.fiber = out.frame.tail(d);
  out.second_order_residual = (out.base - model.adjoint(x.s) * x.u).norm();
  return out;
}

DriftReport drift(const Trajectory& traj) {
  DriftReport r;
  if (traj.samples.empty()) return r;
  const auto& first = traj.samples.front();
  for (const auto& smp : traj.samples) {
    if (first.Hc > 0.0) r.energy_rel = std::max(r.energy_rel, std::abs(smp.Hc - first.Hc) / first.Hc);
    if (smp.JH.size()) r.momentum = std::max(r.momentum, (smp.JH - first.JH).cwiseAbs().maxCoeff());
  }
  return r;
}

Matrix chart_dexp(const ChaplyginModel& model, const Vector& xi) {
  const int d = model.d();
  Matrix adx = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) adx += xi(i) * model.ad(i);
  Matrix term = Matrix::Identity(d, d);
  Matrix sum = term;
  for (int k = 1; k < 60; ++k) {
    term = (-adx * term) / static_cast<double>(k + 1);
    sum += term;
    if (term.norm() < 1e-18 * sum.norm()) break;
  }
  return sum;
}

Trajectory integrate(const ChaplyginModel& model, const PhaseState& x0, const IntegratorConfig& cfg) {
  cfg.validate();
  const int n = step_count(cfg);
  const double h = cfg.T / n;
  const int d = model.d();

  Trajectory traj;
  PhaseState x = x0;
  traj.samples.push_back(make_sample(model, 0.0, x));
  double energy = traj.samples.back().Hc;

  auto stage = [&](const Matrix& s0, const Vector& xi, const Vector& u, Vector& dxi, Vector& du) {
    PhaseState y{s0 * exp_matrix(model.element(xi)), u};
    const XnhField f = vector_field_Xnh(model, y);
    const Vector omega = model.adjoint(y.s).transpose() * f.base;
    const Vector b1 = model.bracket(xi, omega);
    dxi = omega + 0.5 * b1 + model.bracket(xi, b1) / 12.0;
    du = f.fiber;
  };

  Vector k1x(d), k2x(d), k3x(d), k4x(d), k1u(d), k2u(d), k3u(d), k4u(d);
  const Vector zero = Vector::Zero(d);
  for (int step = 1; step <= n; ++step) {
    stage(x.s, zero, x.u, k1x, k1u);
    stage(x.s, 0.5 * h * k1x, x.u + 0.5 * h * k1u, k2x, k2u);
    stage(x.s, 0.5 * h * k2x, x.u + 0.5 * h * k2u, k3x, k3u);
    stage(x.s, h * k3x, x.u + h * k3u, k4x, k4u);
    const Vector xi = h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    x.u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    x.s = x.s * exp_matrix(model.element(xi));
    if (cfg.reorthonormalize) {
      traj.max_reortho_drift = std::max(traj.max_reortho_drift, orthogonality_defect(x.s));
      x.s = polar(x.s);
    }
    if (!x.s.allFinite() || !x.u.allFinite()) throw NumericalError("integrator produced non-finite state");
    const double e = model.hamiltonian(x);
    if (std::abs(e - energy) > cfg.max_step_drift * std::max(energy, 1e-300)) {
      std::ostringstream os;
      os << "energy drift " << std::abs(e - energy) << " in one step at t = " << step * h
         << " exceeds " << cfg.max_step_drift << " * Hc; reduce the step h";
      throw NumericalError(os.str());
    }
    energy = e;
    if (step % cfg.sample_every == 0 || step == n) traj.samples.push_back(make_sample(model, step * h, x));
  }
  return traj;
}

Trajectory full_system_oracle(const ChaplyginModel& model, const PhaseState& x0, const Vector& pos0,
                              const IntegratorConfig& cfg) {
  cfg.validate();
  const int d = model.d();
  const auto& phi = model.phi_indices();
  const int m = static_cast<int>(phi.size());
  if (pos0.size() != m) throw InputError("oracle: V-position needs one entry per Phi index");
  const int n = step_count(cfg);
  const double h = cfg.T / n;

  Vector wphi(m);
  for (int k = 0; k < m; ++k) wphi(k) = model.lambda()(phi[k]);
  const Eigen::LLT<Matrix> inertia(model.inertia());

  auto rows_phi = [&](const Matrix& R) {
    Matrix out(m, d);
    for (int k = 0; k < m; ++k) out.row(k) = R.row(phi[k]);
    return out;
  };

  struct Rates {
    Matrix ds;
    Vector du, dx, dv;
  };
  // (S, u, x, v) with S' = S u, I u' = [I u, u] + Ad(S)^T W nu, x' = v, v' = nu
  auto rates = [&](const Matrix& S, const Vector& u, const Vector& v) {
    Rates r;
    r.ds = S * model.element(u);
    const Vector g = model.bracket(model.inertia() * u, u);
    const Matrix B = wphi.asDiagonal() * rows_phi(model.adjoint(S));  // m x d
    Vector nu = Vector::Zero(m);
    if (m > 0) {
      const Matrix lhs = Matrix::Identity(m, m) + B * inertia.solve(B.transpose());
      const Eigen::FullPivLU<Matrix> lu(lhs);
      if (!lu.isInvertible()) throw NumericalError("oracle: multiplier system is singular");
      nu = lu.solve(-B * inertia.solve(g));
    }
    r.du = inertia.solve(g + B.transpose() * nu);
    r.dx = v;
    r.dv = nu;
    return r;
  };
  auto constraint = [&](const Matrix& S, const Vector& u, const Vector& v) {
    if (m == 0) return 0.0;
    return (v + wphi.asDiagonal() * (rows_phi(model.adjoint(S)) * u)).norm();
  };

  Matrix S = x0.s;
  Vector u = x0.u, pos = pos0;
  Vector vel = m > 0 ? Vector(-(wphi.asDiagonal() * (rows_phi(model.adjoint(S)) * u))) : Vector(Vector::Zero(0));

  Trajectory traj;
  auto record = [&](double t) {
    Sample smp = make_sample(model, t, PhaseState{S, u});
    smp.x = pos;
    traj.samples.push_back(std::move(smp));
  };
  record(0.0);
  for (int step = 1; step <= n; ++step) {
    const Rates a = rates(S, u, vel);
    const Rates b = rates(S + 0.5 * h * a.ds, u + 0.5 * h * a.du, vel + 0.5 * h * a.dv);
    const Rates c = rates(S + 0.5 * h * b.ds, u + 0.5 * h * b.du, vel + 0.5 * h * b.dv);
    const Rates e = rates(S + h * c.ds, u + h * c.du, vel + h * c.dv);
    S += h / 6.0 * (a.ds + 2.0 * b.ds + 2.0 * c.ds + e.ds);
    u += h / 6.0 * (a.du + 2.0 * b.du + 2.0 * c.du + e.du);
    pos += h / 6.0 * (a.dx + 2.0 * b.dx + 2.0 * c.dx + e.dx);
    vel += h / 6.0 * (a.dv + 2.0 * b.dv + 2.0 * c.dv + e.dv);
    if (cfg.reorthonormalize) {
      traj.max_reortho_drift = std::max(traj.max_reortho_drift, orthogonality_defect(S));
      S = polar(S);
    }
    if (!S.allFinite() || !u.allFinite()) throw NumericalError("oracle produced non-finite state");
    traj.max_constraint_residual = std::max(traj.max_constraint_residual, constraint(S, u, vel));
    if (step % cfg.sample_every == 0 || step == n) record(step * h);
  }
  return traj;
}

TrajectoryDistance compare(const Trajectory& a, const Trajectory& b) {
  if (a.samples.size() != b.samples.size()) throw InputError("compare: trajectories have different lengths");
  TrajectoryDistance dist;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (std::abs(a.samples[i].t - b.samples[i].t) > 1e-12) throw InputError("compare: time grids differ");
    dist.s = std::max(dist.s, (a.samples[i].state.s - b.samples[i].state.s).norm());
    dist.u = std::max(dist.u, (a.samples[i].state.u - b.samples[i].state.u).norm());
  }
  return dist;
}

double verify_measure(const ChaplyginModel& model, const PhaseState& x, double fd_step, bool use_density) {
  const int d = model.d();
  const int D = 2 * d;
  // density-weighted field in chart coordinates (xi, u) around x.s
  auto weighted = [&](const Vector& z, double* rho_out) {
    const Vector xi = z.head(d);
    PhaseState y{x.s * exp_matrix(model.element(xi)), z.tail(d)};
    const XnhField f = vector_field_Xnh(model, y);
    const Matrix R = model.adjoint(y.s);
    const Matrix M = chart_dexp(model, xi);
    Matrix T = Matrix::Zero(D, D);
    T.topLeftCorner(d, d) = R * M;
    T.bottomRightCorner(d, d).setIdentity();
    const Matrix wc = T.transpose() * model.omega_K(y) * T;
    const double dens = std::sqrt(std::abs(wc.determinant()));
    const double rho = (use_density ? model.density_f(y.s) : 1.0) * dens;
    Vector field(D);
    field.head(d) = M.partialPivLu().solve(R.transpose() * f.base);
    field.tail(d) = f.fiber;
    if (rho_out) *rho_out = rho;
    return Vector(rho * field);
  };
  Vector z0(D);
  z0.head(d).setZero();
  z0.tail(d) = x.u;
  double rho0 = 0.0;
  weighted(z0, &rho0);
  double div = 0.0;
  for (int a = 0; a < D; ++a) {
    Vector zp = z0, zm = z0;
    zp(a) += fd_step;
    zm(a) -= fd_step;
    div += (weighted(zp, nullptr)(a) - weighted(zm, nullptr)(a)) / (2.0 * fd_step);
  }
  return std::abs(div / rho0);
}

}  // namespace chaplie
