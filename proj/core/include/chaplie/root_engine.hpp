#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "chaplie/lie_core.hpp"

namespace chaplie {

/// Restricted-root data of (g, a) together with the adapted orthonormal bases
/// of k and p.
///
/// The adapted k basis is ordered [Y_1..Y_dm (m), Z of root 0, Z of root 1, ...];
/// `k_root[i]` is the positive-root index of adapted vector i, or -1 on m.
/// e_basis[j] pairs with Z index dim(m) + j.
struct RootDatum {
  std::vector<Matrix> a_basis;
  std::vector<Vector> roots;  // positive roots, coordinates lambda(a_i)
  std::vector<int> multiplicities;
  std::vector<Matrix> m_basis;
  std::vector<Matrix> z_basis;
  std::vector<Matrix> e_basis;
  std::vector<int> z_root;  // root index for each z_basis element

  std::vector<Matrix> k_adapted;  // m_basis then z_basis
  std::vector<int> k_root;        // -1 on m

  /// ad[i](k, j) = c^k_{ij} = <K_k, [K_i, K_j]> in the adapted k basis.
  std::vector<Matrix> ad;

  std::uint64_t seed = 0;
  Vector generic_w;  // coefficients of the generic element w* in a_basis

  int dim_k() const { return static_cast<int>(k_adapted.size()); }
  int dim_m() const { return static_cast<int>(m_basis.size()); }
  int rank() const { return static_cast<int>(a_basis.size()); }
  double c(int k, int i, int j) const { return ad[i](k, j); }

  /// lambda(w) for root r and w given by coordinates in a_basis.
  double root_value(int r, const Eigen::Ref<const Vector>& w) const { return roots[r].dot(w); }
};

/// Pairwise-commuting orthonormal basis of a maximal abelian subspace of p.
/// Seed vectors are orthonormalized first; the span is then extended greedily
/// (random start drawn from `rng` when the seed is empty).
std::vector<Matrix> maximal_abelian(const LieAlgebra& algebra, const CartanSplit& split,
                                    std::span<const Matrix> seed, std::mt19937_64& rng);

/// Root decomposition, adapted bases and structure constants.
/// Throws ConstructionError if clustering is ambiguous or the adapted-basis
/// identities fail.
RootDatum restricted_roots(const LieAlgebra& algebra, const CartanSplit& split,
                           std::vector<Matrix> a_basis, std::uint64_t seed);

/// c^k_{ij} tables for an orthonormal family closed under bracket.
std::vector<Matrix> structure_constants(const LieAlgebra& algebra, std::span<const Matrix> basis);

/// max over roots, multiplicity indices and a_basis directions of the two
/// residuals |ad(w)Z - lambda(w)e| and |ad(w)e - lambda(w)Z|.
double adapted_basis_residual(const LieAlgebra& algebra, const RootDatum& datum);

struct SelectionRuleScan {
  int violations = 0;
  long checked = 0;
  double max_forbidden = 0.0;  // largest |c| over index triples the rules forbid
};
/// c^alpha_{(l,a)(m,b)} != 0 => l = m, and c^{(l,a)}_{(m,b)(n,c)} != 0 => l in {+-m +-n}.
SelectionRuleScan selection_rule_scan(const RootDatum& datum, double threshold = 1e-9);

/// Simple roots (indices into datum.roots): positive roots that are not a sum
/// of two positive roots. Ordered by decreasing length, then lexicographically.
std::vector<int> simple_roots(const RootDatum& datum, double tol = 1e-8);

/// Coefficients of every positive root in the simple roots, rounded to
/// integers; `max_fit_error` receives the worst rounding residual.
std::vector<std::vector<int>> simple_root_coefficients(const RootDatum& datum,
                                                       const std::vector<int>& simple,
                                                       double* max_fit_error = nullptr);

/// Index of the positive root with the given simple-root coefficients, or -1.
int find_root(const RootDatum& datum, const std::vector<int>& simple,
              const std::vector<int>& coefficients);

/// Everything derived from a matrix algebra and a choice of a.
struct AlgebraStructure {
  LieAlgebra algebra;
  CartanSplit split;
  RootDatum roots;
};

AlgebraStructure analyze(LieAlgebra algebra, std::span<const Matrix> a_seed, std::uint64_t seed);

}  // namespace chaplie
