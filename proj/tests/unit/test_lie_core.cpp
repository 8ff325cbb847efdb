#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <chaplie/chaplie.hpp>

#include "oracles.hpp"

using namespace chaplie;

namespace {

Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

LieAlgebra sl2() {
  const Matrix h = unit(2, 0, 0) - unit(2, 1, 1);
  return LieAlgebra("sl(2)", {h, unit(2, 0, 1), unit(2, 1, 0)});
}

Matrix random_element(const LieAlgebra& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vector c(g.dim());
  for (auto& v : c) v = n(rng);
  return g.element(c);
}

}  // namespace

TEST(LieCore, KillingOfSl2) {
  const auto g = sl2();
  const Matrix h = unit(2, 0, 0) - unit(2, 1, 1);
  EXPECT_NEAR(g.killing(h, h), 8.0, 1e-12);
  EXPECT_NEAR(g.killing(unit(2, 0, 1), unit(2, 1, 0)), 4.0, 1e-12);
  EXPECT_NEAR(g.killing(unit(2, 0, 1), unit(2, 0, 1)), 0.0, 1e-12);
}

// Killing = c tr(XY) with c = 2n (sl n), n - 2 (so on R^n), 2n + 2 (sp on R^2n).
TEST(LieCore, KillingMatchesTraceFormula) {
  struct Case {
    std::string id;
    double factor;
  };
  std::mt19937_64 rng(11);
  for (const Case& c : {Case{"sl:3", 6.0}, Case{"sl:4", 8.0}, Case{"so:3,1", 2.0}, Case{"so:3,2", 3.0},
                        Case{"sp:2", 6.0}}) {
    const auto b = make_builtin(parse_algebra_id(c.id));
    for (int t = 0; t < 5; ++t) {
      const Matrix x = random_element(b.algebra, rng), y = random_element(b.algebra, rng);
      EXPECT_NEAR(b.algebra.killing(x, y), c.factor * (x * y).trace(), 1e-9 * (1 + std::abs((x * y).trace())))
          << c.id;
    }
  }
}

TEST(LieCore, InnerProductIsPositiveAndThetaInvariant) {
  const auto b = make_builtin(parse_algebra_id("so:3,2"));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const Matrix x = random_element(b.algebra, rng), y = random_element(b.algebra, rng);
    EXPECT_GT(b.algebra.inner(x, x), 0.0);
    EXPECT_NEAR(b.algebra.inner(x, y), b.algebra.inner(y, x), 1e-10);
    EXPECT_NEAR(b.algebra.inner(LieAlgebra::theta(x), LieAlgebra::theta(y)), b.algebra.inner(x, y), 1e-10);
  }
}

TEST(LieCore, RejectsDegenerateOrOpenBases) {
  // abelian: Killing form vanishes
  EXPECT_THROW(LieAlgebra("abelian", {unit(2, 0, 1)}), ConstructionError);
  // {E12, E21} is not closed under the bracket
  EXPECT_THROW(LieAlgebra("open", {unit(2, 0, 1), unit(2, 1, 0)}), ConstructionError);
  // dependent vectors
  const Matrix h = unit(2, 0, 0) - unit(2, 1, 1);
  EXPECT_THROW(LieAlgebra("dependent", {h, unit(2, 0, 1), unit(2, 1, 0), 2.0 * h}), ConstructionError);
}

TEST(LieCore, BracketSizeMismatchIsInputError) {
  const auto g = sl2();
  EXPECT_THROW(g.bracket(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), InputError);
}

TEST(LieCore, AdMatrixRepresentsBracket) {
  const auto b = make_builtin(parse_algebra_id("sl:3"));
  std::mt19937_64 rng(5);
  const Matrix x = random_element(b.algebra, rng), y = random_element(b.algebra, rng);
  const Vector lhs = b.algebra.ad_matrix(x) * b.algebra.coordinates(y);
  const Vector rhs = b.algebra.coordinates(oracle::commutator(x, y));
  EXPECT_LT((lhs - rhs).norm(), 1e-10);
}

TEST(LieCore, CartanSplitDimensionsAndOrthonormality) {
  const auto b = make_builtin(parse_algebra_id("sp:2"));
  const auto split = cartan_split(b.algebra);
  EXPECT_EQ(split.k_basis.size(), 4u);  // u(2)
  EXPECT_EQ(split.p_basis.size(), 6u);
  std::vector<Matrix> all = split.k_basis;
  all.insert(all.end(), split.p_basis.begin(), split.p_basis.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j)
      EXPECT_NEAR(b.algebra.inner(all[i], all[j]), i == j ? 1.0 : 0.0, 1e-10);
  for (const auto& k : split.k_basis) EXPECT_LT((LieAlgebra::theta(k) - k).norm(), 1e-12);
  for (const auto& p : split.p_basis) EXPECT_LT((LieAlgebra::theta(p) + p).norm(), 1e-12);
}

TEST(LieCore, OrthonormalizeDropsDependentVectors) {
  const auto g = sl2();
  const Matrix h = unit(2, 0, 0) - unit(2, 1, 1);
  const std::vector<Matrix> in{h, 3.0 * h, unit(2, 0, 1)};
  const auto out = orthonormalize(g, in);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_NEAR(g.inner(out[0], out[1]), 0.0, 1e-12);
  EXPECT_NEAR(g.norm(out[1]), 1.0, 1e-12);
}

TEST(LieCore, ExpOfRotationGenerator) {
  Matrix j(2, 2);
  j << 0, -1, 1, 0;
  const double t = 0.7;
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  EXPECT_LT((exp_matrix(j, t) - r).norm(), 1e-14);
  EXPECT_LT((exp_matrix(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(LieCore, AdjointActionIsAutomorphism) {
  const auto b = make_builtin(parse_algebra_id("sl:3"));
  std::mt19937_64 rng(9);
  const Matrix x = random_element(b.algebra, rng), y = random_element(b.algebra, rng);
  const Matrix g = exp_matrix(random_element(b.algebra, rng), 0.3);
  const Matrix lhs = adjoint_action(g, oracle::commutator(x, y));
  const Matrix rhs = oracle::commutator(adjoint_action(g, x), adjoint_action(g, y));
  EXPECT_LT((lhs - rhs).norm(), 1e-10);
  EXPECT_THROW(adjoint_action(Matrix::Zero(3, 3), x), InputError);
}

TEST(LieCore, SpanProjectorRoundTrip) {
  const auto b = make_builtin(parse_algebra_id("so:3,1"));
  const auto split = cartan_split(b.algebra);
  const SpanProjector proj(split.k_basis);
  Vector c(3);
  c << 0.3, -1.2, 2.0;
  EXPECT_LT((proj.coordinates(proj.element(c)) - c).norm(), 1e-13);
  EXPECT_LT((orthonormal_coordinates(b.algebra, split.k_basis, proj.element(c)) - c).norm(), 1e-12);
}
