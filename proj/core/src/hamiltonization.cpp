#include "chaplie/hamiltonization.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "chaplie/dynamics.hpp"
#include "chaplie/errors.hpp"

namespace chaplie {
namespace {

int span_rank(const std::vector<Vector>& vs, double tol = 1e-9) {
  if (vs.empty()) return 0;
  Matrix m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > tol * std::max(1.0, sv(0));
  return r;
}

Vector unit_vector(int d, int i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

int single_index_of_root(const RootDatum& rd, int root) {
  if (rd.multiplicities.at(root) != 1) throw InputError("rubber subsystem: expected multiplicity one roots");
  for (std::size_t j = 0; j < rd.z_root.size(); ++j)
    if (rd.z_root[j] == root) return rd.dim_m() + static_cast<int>(j);
  throw InputError("rubber subsystem: root has no Z vector");
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

HamSample ham_residual_at_0(const ChaplyginModel& model, const Matrix& s) {
  const int m = model.m();
  if (m < 2) throw InputError("Hamiltonization criterion needs dim K/H >= 2");
  HamSample out;
  if (m == 2) return out;

  const int d = model.d();
  const auto& phi = model.phi_indices();
  const Vector l2 = model.lambda().cwiseAbs2();
  const Matrix R = model.adjoint(s);
  const Matrix N = R * model.mu0_from_adjoint(R).ldlt().solve(R.transpose());
  Vector in_h = Vector::Zero(d);
  for (int k : model.h_indices()) in_h(k) = 1.0;

  // trace terms t_mu = sum_l lambda_l^2 <N e_l, ad_mu e_l>
  Vector t = Vector::Zero(d);
  for (int mu : phi)
    for (int l : phi) t(mu) += l2(l) * N.col(l).dot(model.ad(mu).col(l));

  const double inv = 1.0 / (m - 1);
  out.triples.reserve(static_cast<std::size_t>(m) * m * m);
  for (int kappa : phi)
    for (int mu : phi)
      for (int nu : phi) {
        const Vector b = model.ad(mu).col(nu);
        const Vector v = l2(mu) * in_h.cwiseProduct(b) - l2.cwiseProduct(b);
        TripleResidual tr;
        tr.kappa = kappa;
        tr.mu = mu;
        tr.nu = nu;
        tr.lhs = N.col(kappa).dot(v);
        tr.rhs = inv * ((nu == kappa ? t(mu) : 0.0) - (mu == kappa ? t(nu) : 0.0));
        if (tr.residual() > out.max_residual) {
          out.max_residual = tr.residual();
          out.worst = tr;
        }
        out.triples.push_back(tr);
      }
  return out;
}

HamResidualReport check_hamiltonizable(const ChaplyginModel& model, int n_random, std::uint64_t seed,
                                       HamThresholds thresholds, int top_n) {
  if (n_random < 0) throw InputError("check_hamiltonizable: negative sample count");
  HamResidualReport rep;
  rep.thresholds = thresholds;
  rep.scale = std::max(1e-300, model.lambda().cwiseAbs2().maxCoeff());
  if (model.m() < 2) throw InputError("Hamiltonization criterion needs dim K/H >= 2");
  if (model.m() == 2) {
    rep.vacuous = true;
    rep.verdict = Verdict::pass;
    return rep;
  }
  std::mt19937_64 rng(seed);
  const int n = model.structure().algebra.matrix_dim();
  rep.samples.push_back(Matrix::Identity(n, n));
  for (int i = 0; i < n_random; ++i) rep.samples.push_back(model.random_group(rng));

  HamSample worst_sample;
  for (const auto& s : rep.samples) {
    HamSample hs = ham_residual_at_0(model, s);
    if (worst_sample.triples.empty() || hs.max_residual > worst_sample.max_residual) worst_sample = std::move(hs);
  }
  rep.max_residual = worst_sample.max_residual;
  rep.worst = worst_sample.worst;
  auto sorted = worst_sample.triples;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TripleResidual& a, const TripleResidual& b) { return a.residual() > b.residual(); });
  sorted.resize(std::min<std::size_t>(sorted.size(), static_cast<std::size_t>(top_n)));
  rep.top = std::move(sorted);

  if (rep.max_residual < thresholds.pass * rep.scale)
    rep.verdict = Verdict::pass;
  else if (rep.max_residual > thresholds.fail * rep.scale)
    rep.verdict = Verdict::fail;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

InertiaSpec jovanovic_inertia(const AlgebraStructure& st, const std::vector<double>& a) {
  const int n = static_cast<int>(a.size());
  if (st.algebra.name() != "so(" + std::to_string(n) + ",1)")
    throw InputError("jovanovic inertia needs so(n,1) with n = " + std::to_string(n) + " entries in a");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = a[i] * a[j];
      if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << "jovanovic inertia requires 0 < a_i a_j < 1; a_" << i + 1 << " a_" << j + 1 << " = " << p;
        throw InputError(os.str());
      }
    }
  const auto& alg = st.algebra;
  const auto& kb = st.roots.k_adapted;
  const int d = static_cast<int>(kb.size());
  Matrix inertia = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix w = Matrix::Zero(n + 1, n + 1);
      w(i, j) = 1.0;
      w(j, i) = -1.0;
      w /= alg.norm(w);
      const Vector q = orthonormal_coordinates(alg, kb, w);
      const double p = a[i] * a[j];
      inertia += p / (1.0 - p) * q * q.transpose();
    }
  InertiaSpec spec;
  spec.kind = InertiaSpec::Kind::jovanovic;
  spec.data = a;
  spec.matrix = 0.5 * (inertia + inertia.transpose());
  return spec;
}

PhaseState project_to_zero_momentum(const ChaplyginModel& model, const PhaseState& x) {
  const auto& h = model.h_indices();
  if (h.empty()) return x;
  const Matrix R = model.adjoint(x.s);
  const Matrix Rmu = R * model.mu0_from_adjoint(R);
  Matrix Q(static_cast<Eigen::Index>(h.size()), model.d());
  for (std::size_t k = 0; k < h.size(); ++k) Q.row(static_cast<Eigen::Index>(k)) = Rmu.row(h[k]);
  PhaseState y = x;
  y.u -= Q.transpose() * (Q * Q.transpose()).ldlt().solve(Q * x.u);
  return y;
}

ExactnessResidual verify_exactness_at_0(const ChaplyginModel& model, const PhaseState& x, double fd_step) {
  if (model.m() < 2) throw InputError("exactness check needs dim K/H >= 2");
  const Vector j = model.momentum(x);
  if (j.size() && j.cwiseAbs().maxCoeff() > 1e-8) {
    std::ostringstream os;
    os << "state is not on J_H = 0 (|J_H| = " << j.cwiseAbs().maxCoeff() << ")";
    throw InputError(os.str());
  }
  const int d = model.d();
  const int D = 2 * d;
  const auto& phi = model.phi_indices();

  // beta = F sum_{Phi} P_k eta^k as chart components at (x.s exp(xi), u)
  auto beta = [&](const Vector& z) {
    PhaseState y{x.s * exp_matrix(model.element(z.head(d))), z.tail(d)};
    const Vector P = model.liouville_coefficients(y);
    Vector pphi = Vector::Zero(d);
    for (int k : phi) pphi(k) = P(k);
    const Matrix RM = model.adjoint(y.s) * chart_dexp(model, z.head(d));
    Vector b = Vector::Zero(D);
    b.head(d) = model.conformal_F(y.s) * (RM.transpose() * pphi);
    return b;
  };
  Vector z0(D);
  z0.head(d).setZero();
  z0.tail(d) = x.u;
  Matrix jac(D, D);  // jac(b, a) = d beta_b / d z_a
  for (int a = 0; a < D; ++a) {
    Vector zp = z0, zm = z0;
    zp(a) += fd_step;
    zm(a) -= fd_step;
    jac.col(a) = (beta(zp) - beta(zm)) / (2.0 * fd_step);
  }
  const Matrix dbeta_chart = jac.transpose() - jac;  // (a, b) -> d_a beta_b - d_b beta_a
  Matrix tinv = Matrix::Identity(D, D);
  tinv.topLeftCorner(d, d) = model.adjoint(x.s).transpose();
  const Matrix dbeta = tinv.transpose() * dbeta_chart * tinv;
  const Matrix fw = model.conformal_F(x.s) * model.omega_tilde(x);

  Matrix kernel = Matrix::Identity(D, D);
  const Matrix dj = model.dJ(x);
  if (dj.rows() > 0) {
    Eigen::JacobiSVD<Matrix> svd(dj, Eigen::ComputeFullV);
    const auto r = static_cast<Eigen::Index>(dj.rows());
    kernel = svd.matrixV().rightCols(D - r);
  }
  ExactnessResidual out;
  out.residual = (kernel.transpose() * (fw + dbeta) * kernel).cwiseAbs().maxCoeff();
  out.scale = (kernel.transpose() * fw * kernel).cwiseAbs().maxCoeff();
  return out;
}

DistributionFlag distribution_flag(const ChaplyginModel& model, const std::vector<Vector>& generators,
                                   const std::vector<int>& modulo) {
  DistributionFlag flag;
  flag.generators = generators;
  std::vector<Vector> extra;
  for (int k : modulo) extra.push_back(unit_vector(model.d(), k));
  const int base = span_rank(extra);
  std::vector<Vector> current = generators;
  auto dim_of = [&](const std::vector<Vector>& vs) {
    std::vector<Vector> all = vs;
    all.insert(all.end(), extra.begin(), extra.end());
    return span_rank(all) - base;
  };
  flag.flag_dims.push_back(dim_of(current));
  for (int step = 0; step < model.d(); ++step) {
    std::vector<Vector> next = current;
    for (const auto& g : generators)
      for (const auto& c : current) next.push_back(model.bracket(g, c));
    const int dim = dim_of(next);
    if (dim == flag.flag_dims.back()) break;
    flag.flag_dims.push_back(dim);
    current = std::move(next);
  }
  return flag;
}

RubberReport rubber_subsystem_report(const ChaplyginModel& model, int n_states, std::uint64_t seed) {
  const auto& rd = model.roots();
  if (model.structure().algebra.name() != "g2(split)") throw InputError("rubber subsystem needs the split g2 model");
  const auto simple = simple_roots(rd);
  if (simple.size() != 2) throw InputError("rubber subsystem: expected rank two");
  RubberReport rep;
  rep.long_root = simple[0];
  rep.short_root = simple[1];
  rep.sum_root = find_root(rd, simple, {1, 1});
  const double scale = std::max(1.0, model.w0().norm());
  if (std::abs(rd.root_value(rep.long_root, model.w0())) > 1e-12 * scale ||
      std::abs(rd.root_value(rep.short_root, model.w0())) <= 1e-12 * scale)
    throw InputError("rubber subsystem needs lambda1(w0) = 0 and lambda2(w0) != 0");

  const int d = model.d();
  const int i1 = single_index_of_root(rd, rep.long_root);
  const int i2 = single_index_of_root(rd, rep.short_root);
  const int i12 = single_index_of_root(rd, rep.sum_root);
  const std::vector<Vector> gens{unit_vector(d, i2), unit_vector(d, i12)};

  rep.flag_dims = distribution_flag(model, gens).flag_dims;
  rep.quotient_flag_dims = distribution_flag(model, gens, model.h_indices()).flag_dims;

  for (const auto& g : gens) {
    Vector b = model.bracket(unit_vector(d, i1), g);
    b(i2) = 0.0;
    b(i12) = 0.0;
    rep.invariance = std::max(rep.invariance, b.norm());
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int t = 0; t < n_states; ++t) {
    PhaseState x;
    x.s = model.random_group(rng);
    Vector ut = Vector::Zero(d);
    ut(i2) = normal(rng);
    ut(i12) = normal(rng);
    const Matrix R = model.adjoint(x.s);
    x.u = R.transpose() * ut;

    const XnhField f = vector_field_Xnh(model, x);
    const Vector ins = model.lambda_form(x).transpose() * f.frame;
    rep.lambda_insertion = std::max(rep.lambda_insertion, ins.cwiseAbs().maxCoeff());

    Vector rate = R * f.fiber;  // d/dt Ad(s)u = Ad(s) u'
    rate(i2) = 0.0;
    rate(i12) = 0.0;
    rep.tangency = std::max(rep.tangency, rate.cwiseAbs().maxCoeff());

    const Vector du = model.ad(i1) * ut;
    rep.hc_invariance = std::max(rep.hc_invariance, std::abs(2.0 * (ut(i2) * du(i2) + ut(i12) * du(i12))));
    ++rep.states;
  }
  return rep;
}

}  // namespace chaplie
