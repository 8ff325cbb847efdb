#include "chaplie/root_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "chaplie/errors.hpp"

namespace chaplie {
namespace {

Matrix combine(std::span<const Matrix> basis, const Eigen::Ref<const Vector>& coeffs) {
  Matrix out = Matrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t i = 0; i < basis.size(); ++i) out += coeffs(static_cast<Eigen::Index>(i)) * basis[i];
  return out;
}

// Matrix of ad(w) restricted to k -> p in the orthonormal split bases.
Matrix k_to_p(const LieAlgebra& alg, const CartanSplit& split, const Matrix& w) {
  Matrix m(split.p_basis.size(), split.k_basis.size());
  for (std::size_t j = 0; j < split.k_basis.size(); ++j)
    m.col(static_cast<Eigen::Index>(j)) =
        orthonormal_coordinates(alg, split.p_basis, alg.bracket(w, split.k_basis[j]));
  return m;
}

// Orthonormal basis (columns) of span{P e_j}, j in construction order, P the
// orthogonal projector onto the column span of `space`.
Matrix ordered_basis(const Matrix& space) {
  const Matrix proj = space * space.transpose();
  Matrix out(space.rows(), 0);
  auto push = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index c = 0; c < out.cols(); ++c) v -= out.col(c).dot(v) * out.col(c);
    const double n = v.norm();
    if (n <= 1e-3) return;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v / n;
  };
  for (Eigen::Index j = 0; j < proj.cols() && out.cols() < space.cols(); ++j) push(proj.col(j));
  // projections of e_j can all be short for an unlucky subspace; fall back
  for (Eigen::Index j = 0; j < space.cols() && out.cols() < space.cols(); ++j) push(space.col(j));
  return out;
}

bool lex_less(const Vector& a, const Vector& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - tol) return true;
    if (a(i) > b(i) + tol) return false;
  }
  return false;
}

int first_nonzero_sign(const Vector& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > tol) return 1;
    if (v(i) < -tol) return -1;
  }
  return 0;
}

}  // namespace

std::vector<Matrix> maximal_abelian(const LieAlgebra& algebra, const CartanSplit& split,
                                    std::span<const Matrix> seed, std::mt19937_64& rng) {
  const auto& p = split.p_basis;
  std::vector<Matrix> a;
  if (seed.empty()) {
    std::normal_distribution<double> normal;
    Vector c(static_cast<Eigen::Index>(p.size()));
    for (auto& x : c) x = normal(rng);
    const Matrix w = combine(p, c);
    a = orthonormalize(algebra, std::span<const Matrix>(&w, 1));
  } else {
    std::vector<Matrix> proj;
    for (const auto& s : seed) {
      if (algebra.span_residual(s) > 1e-10) throw InputError("maximal_abelian: seed element not in the algebra");
      proj.push_back(CartanSplit::project_p(s));
    }
    a = orthonormalize(algebra, proj);
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (algebra.bracket(a[i], a[j]).norm() > 1e-10)
        throw ConstructionError("maximal_abelian: seed elements do not commute");

  for (std::size_t step = 0; step <= p.size(); ++step) {
    // joint centralizer of a inside p
    Matrix stacked(static_cast<Eigen::Index>(a.size() * split.k_basis.size()),
                   static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      stacked.middleRows(static_cast<Eigen::Index>(i * split.k_basis.size()),
                         static_cast<Eigen::Index>(split.k_basis.size())) =
          k_to_p(algebra, split, a[i]).transpose();
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tol = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > tol;
    const int null_dim = static_cast<int>(p.size()) - rank;
    if (null_dim == static_cast<int>(a.size())) return a;
    std::vector<Matrix> candidates(a);
    for (int j = rank; j < static_cast<int>(p.size()); ++j)
      candidates.push_back(combine(p, svd.matrixV().col(j)));
    auto extended = orthonormalize(algebra, candidates);
    if (extended.size() <= a.size()) break;
    a.assign(extended.begin(), extended.begin() + static_cast<std::ptrdiff_t>(a.size() + 1));
  }
  throw ConstructionError("maximal_abelian: greedy extension did not terminate");
}

std::vector<Matrix> structure_constants(const LieAlgebra& algebra, std::span<const Matrix> basis) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  SpanProjector proj(basis);
  std::vector<Matrix> ad(basis.size(), Matrix::Zero(d, d));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const Vector c = proj.coordinates(algebra.bracket(basis[i], basis[j]));
      ad[i].col(j) = c;
      ad[j].col(i) = -c;
    }
  return ad;
}

RootDatum restricted_roots(const LieAlgebra& algebra, const CartanSplit& split,
                           std::vector<Matrix> a_basis, std::uint64_t seed) {
  RootDatum out;
  out.a_basis = std::move(a_basis);
  out.seed = seed;
  const int r = out.rank();
  if (r == 0) throw InputError("restricted_roots: empty a basis");

  struct Cluster {
    double value;
    std::vector<Eigen::Index> cols;
  };
  auto cluster = [](const Vector& ev, double radius) {
    std::vector<Cluster> clusters;
    for (Eigen::Index i = 0; i < ev.size();) {
      Eigen::Index j = i;
      while (j + 1 < ev.size() && std::abs(ev(j + 1) - ev(i)) < 1e-6 * radius) ++j;
      Cluster c{ev(i), {}};
      for (Eigen::Index t = i; t <= j; ++t) c.cols.push_back(t);
      clusters.push_back(std::move(c));
      i = j + 1;
    }
    return clusters;
  };
  auto min_gap = [](const std::vector<Cluster>& cs, double radius) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < cs.size(); ++i) g = std::min(g, (cs[i].value - cs[i - 1].value) / radius);
    return g;
  };

  // a few seeded draws of the generic element; keep the best separated one
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  double best_gap = -1.0;
  Matrix m, evec;
  Vector ev;
  double radius = 1.0;
  std::vector<Cluster> clusters;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vector w(r);
    for (int i = 0; i < r; ++i) w(i) = unif(rng) * (i % 2 ? -1.0 : 1.0) / (1.0 + i);
    const Matrix mw = k_to_p(algebra, split, combine(out.a_basis, w));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(mw.transpose() * mw);
    const double rad = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    auto cs = cluster(eig.eigenvalues(), rad);
    const double gap = min_gap(cs, rad);
    if (gap > best_gap) {
      best_gap = gap;
      out.generic_w = w;
      m = mw;
      ev = eig.eigenvalues();
      evec = eig.eigenvectors();
      radius = rad;
      clusters = std::move(cs);
    }
  }
  const Matrix wstar = combine(out.a_basis, out.generic_w);
  const double zero_tol = 1e-8 * radius;

  const auto& kb = split.k_basis;
  const auto dk = static_cast<Eigen::Index>(kb.size());
  std::vector<Matrix> squares;  // ad(a_i)^2 on k, i.e. M_i^T M_i
  for (const auto& a : out.a_basis) {
    const Matrix mi = k_to_p(algebra, split, a);
    squares.push_back(mi.transpose() * mi);
  }
  // The eigenvectors of the generic operator alone are only as good as its
  // eigenvalue gaps allow. Refine each cluster as the joint eigenspace of all
  // ad(a_i)^2, with eigenvalues taken from Rayleigh quotients.
  auto space_of = [&](const Cluster& c) {
    const auto mult = static_cast<Eigen::Index>(c.cols.size());
    Matrix v(dk, mult);
    for (Eigen::Index t = 0; t < mult; ++t) v.col(t) = evec.col(c.cols[static_cast<std::size_t>(t)]);
    const Matrix sg = m.transpose() * m;
    Matrix stacked(dk * static_cast<Eigen::Index>(squares.size() + 1), dk);
    // each pass squares the eigenvalue error, so two passes reach round-off
    for (int pass = 0; pass < 3; ++pass) {
      for (std::size_t i = 0; i < squares.size(); ++i) {
        const double l2 = (v.transpose() * squares[i] * v).trace() / static_cast<double>(mult);
        stacked.middleRows(static_cast<Eigen::Index>(i) * dk, dk) = squares[i] - l2 * Matrix::Identity(dk, dk);
      }
      const double lg = (v.transpose() * sg * v).trace() / static_cast<double>(mult);
      stacked.bottomRows(dk) = sg - lg * Matrix::Identity(dk, dk);
      Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
      v = svd.matrixV().rightCols(mult);
    }
    return ordered_basis(v);
  };

  struct RootSpace {
    Vector root;
    std::vector<Matrix> z, e;
  };
  std::vector<RootSpace> spaces;
  for (const auto& c : clusters) {
    const Matrix basis = space_of(c);
    if (c.value < zero_tol) {
      for (Eigen::Index t = 0; t < basis.cols(); ++t) out.m_basis.push_back(combine(kb, basis.col(t)));
      continue;
    }
    RootSpace rs;
    for (Eigen::Index t = 0; t < basis.cols(); ++t) rs.z.push_back(combine(kb, basis.col(t)));
    Matrix estar = algebra.bracket(wstar, rs.z.front());
    estar /= algebra.norm(estar);
    rs.root.resize(r);
    for (int i = 0; i < r; ++i) rs.root(i) = algebra.inner(estar, algebra.bracket(out.a_basis[i], rs.z.front()));
    if (first_nonzero_sign(rs.root, 1e-9) < 0) rs.root = -rs.root;
    const Matrix wl = combine(out.a_basis, rs.root);
    const double norm2 = rs.root.squaredNorm();
    for (const auto& z : rs.z) rs.e.push_back(algebra.bracket(wl, z) / norm2);
    spaces.push_back(std::move(rs));
  }

  std::stable_sort(spaces.begin(), spaces.end(),
                   [](const RootSpace& a, const RootSpace& b) { return lex_less(b.root, a.root, 1e-9); });

  for (std::size_t i = 0; i < spaces.size(); ++i)
    for (std::size_t j = i + 1; j < spaces.size(); ++j)
      if ((spaces[i].root - spaces[j].root).norm() < 1e-6 * std::sqrt(radius))
        throw ConstructionError("restricted_roots: two root clusters coincide; retry with another seed");

  int total = 0;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    out.roots.push_back(spaces[i].root);
    out.multiplicities.push_back(static_cast<int>(spaces[i].z.size()));
    total += static_cast<int>(spaces[i].z.size());
    for (std::size_t t = 0; t < spaces[i].z.size(); ++t) {
      out.z_basis.push_back(spaces[i].z[t]);
      out.e_basis.push_back(spaces[i].e[t]);
      out.z_root.push_back(static_cast<int>(i));
    }
  }

  if (out.dim_m() + r + 2 * total != algebra.dim()) {
    std::ostringstream os;
    os << "restricted_roots: dimension count " << out.dim_m() << " + " << r << " + 2*" << total
       << " != " << algebra.dim() << "; a is not maximal abelian or clustering failed";
    throw ConstructionError(os.str());
  }

  out.k_adapted = out.m_basis;
  out.k_adapted.insert(out.k_adapted.end(), out.z_basis.begin(), out.z_basis.end());
  out.k_root.assign(out.m_basis.size(), -1);
  out.k_root.insert(out.k_root.end(), out.z_root.begin(), out.z_root.end());

  const double rel = adapted_basis_residual(algebra, out);
  if (rel > 1e-9) {
    std::ostringstream os;
    os << "restricted_roots: adapted-basis residual " << rel << " exceeds 1e-9";
    throw ConstructionError(os.str());
  }
  out.ad = structure_constants(algebra, out.k_adapted);
  return out;
}

double adapted_basis_residual(const LieAlgebra& algebra, const RootDatum& datum) {
  double worst = 0.0;
  for (std::size_t j = 0; j < datum.z_basis.size(); ++j) {
    const auto& root = datum.roots[datum.z_root[j]];
    for (int i = 0; i < datum.rank(); ++i) {
      const auto& w = datum.a_basis[i];
      const double l = root(i);
      worst = std::max(worst, (algebra.bracket(w, datum.z_basis[j]) - l * datum.e_basis[j]).norm());
      worst = std::max(worst, (algebra.bracket(w, datum.e_basis[j]) - l * datum.z_basis[j]).norm());
    }
  }
  for (const auto& y : datum.m_basis)
    for (const auto& w : datum.a_basis) worst = std::max(worst, algebra.bracket(y, w).norm());
  return worst;
}

SelectionRuleScan selection_rule_scan(const RootDatum& datum, double threshold) {
  SelectionRuleScan scan;
  const int d = datum.dim_k();
  const int dm = datum.dim_m();
  auto allowed = [&](int l, int mu, int nu) {
    const auto &a = datum.roots[l], &b = datum.roots[mu], &c = datum.roots[nu];
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0})
        if ((a - s1 * b - s2 * c).norm() < 1e-8) return true;
    return false;
  };
  for (int k = 0; k < d; ++k)
    for (int i = dm; i < d; ++i)
      for (int j = dm; j < d; ++j) {
        if (i == j) continue;
        const int ri = datum.k_root[i], rj = datum.k_root[j], rk = datum.k_root[k];
        const bool ok = (k < dm) ? ri == rj : allowed(rk, ri, rj);
        ++scan.checked;
        if (ok) continue;
        const double v = std::abs(datum.c(k, i, j));
        scan.max_forbidden = std::max(scan.max_forbidden, v);
        if (v > threshold) ++scan.violations;
      }
  return scan;
}

std::vector<int> simple_roots(const RootDatum& datum, double tol) {
  const auto& roots = datum.roots;
  std::vector<int> simple;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    bool decomposable = false;
    for (std::size_t a = 0; a < roots.size() && !decomposable; ++a)
      for (std::size_t b = a; b < roots.size() && !decomposable; ++b)
        decomposable = (roots[a] + roots[b] - roots[i]).norm() < tol * std::max(1.0, roots[i].norm());
    if (!decomposable) simple.push_back(static_cast<int>(i));
  }
  std::stable_sort(simple.begin(), simple.end(), [&](int a, int b) {
    const double la = roots[a].norm(), lb = roots[b].norm();
    if (std::abs(la - lb) > tol * std::max(la, lb)) return la > lb;
    return lex_less(roots[b], roots[a], tol);
  });
  return simple;
}

std::vector<std::vector<int>> simple_root_coefficients(const RootDatum& datum,
                                                       const std::vector<int>& simple,
                                                       double* max_fit_error) {
  Matrix basis(datum.rank(), static_cast<Eigen::Index>(simple.size()));
  for (std::size_t j = 0; j < simple.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = datum.roots[simple[j]];
  const auto qr = basis.colPivHouseholderQr();
  std::vector<std::vector<int>> out;
  double worst = 0.0;
  for (const auto& root : datum.roots) {
    const Vector x = qr.solve(root);
    std::vector<int> coeffs;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double rounded = std::round(x(j));
      worst = std::max(worst, std::abs(x(j) - rounded));
      coeffs.push_back(static_cast<int>(rounded));
    }
    worst = std::max(worst, (basis * x - root).norm());
    out.push_back(std::move(coeffs));
  }
  if (max_fit_error) *max_fit_error = worst;
  return out;
}

int find_root(const RootDatum& datum, const std::vector<int>& simple,
              const std::vector<int>& coefficients) {
  const auto all = simple_root_coefficients(datum, simple);
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] == coefficients) return static_cast<int>(i);
  return -1;
}

AlgebraStructure analyze(LieAlgebra algebra, std::span<const Matrix> a_seed, std::uint64_t seed) {
  CartanSplit split = cartan_split(algebra);
  std::mt19937_64 rng(seed);
  auto a = maximal_abelian(algebra, split, a_seed, rng);
  RootDatum roots = restricted_roots(algebra, split, std::move(a), seed);
  return AlgebraStructure{std::move(algebra), std::move(split), std::move(roots)};
}

}  // namespace chaplie
