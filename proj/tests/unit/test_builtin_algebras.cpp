#include <gtest/gtest.h>

#include <chaplie/chaplie.hpp>

#include "oracles.hpp"

using namespace chaplie;

TEST(BuiltinAlgebras, ParsesCanonicalIds) {
  EXPECT_EQ(parse_algebra_id("so:3,1").id(), "so:3,1");
  EXPECT_EQ(parse_algebra_id("sl:3").id(), "sl:3");
  EXPECT_EQ(parse_algebra_id("sp:2").id(), "sp:2");
  EXPECT_EQ(parse_algebra_id("g2").id(), "g2");
  EXPECT_EQ(parse_algebra_id("so:4,1").params, (std::vector<int>{4, 1}));
}

TEST(BuiltinAlgebras, RejectsMalformedIds) {
  for (const char* bad : {"", "so", "so:3", "so:3,0", "so:1,1", "sl:1", "sl:x", "sp:0", "g2:1", "e8", "sl:3,1",
                          "so:3,-1", "sl:99", "so:10,5", "sp:7"})
    EXPECT_THROW(parse_algebra_id(bad), InputError) << bad;
}

TEST(BuiltinAlgebras, Dimensions) {
  struct Case {
    std::string id;
    int n, dim;
  };
  for (const Case& c : {Case{"so:3,1", 4, 6}, Case{"so:4,1", 5, 10}, Case{"so:3,2", 5, 10}, Case{"sl:3", 3, 8},
                        Case{"sl:4", 4, 15}, Case{"sp:2", 4, 10}, Case{"sp:3", 6, 21}, Case{"g2", 7, 14}}) {
    const auto b = make_builtin(parse_algebra_id(c.id));
    EXPECT_EQ(b.algebra.matrix_dim(), c.n) << c.id;
    EXPECT_EQ(b.algebra.dim(), c.dim) << c.id;
  }
}

// On the 7-dimensional representation of g2 the Killing form is 4 tr(XY).
TEST(BuiltinAlgebras, G2KillingFormIsFourTimesTrace) {
  const auto b = make_builtin(parse_algebra_id("g2"));
  const auto& basis = b.algebra.basis();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); j += 3)
      EXPECT_NEAR(b.algebra.killing(basis[i], basis[j]), 4.0 * (basis[i] * basis[j]).trace(), 1e-9);
}

TEST(BuiltinAlgebras, G2IsInsideSo34AndClosed) {
  const auto b = make_builtin(parse_algebra_id("g2"));
  for (const auto& x : b.algebra.basis()) {
    EXPECT_NEAR(x.trace(), 0.0, 1e-12);
    for (const auto& y : b.algebra.basis()) EXPECT_LT(b.algebra.span_residual(oracle::commutator(x, y)), 1e-10);
  }
}

TEST(BuiltinAlgebras, DefaultW0Values) {
  {
    const auto m = oracle::make("sp:2");
    // w0 = diag(1/2, 1/2, -1/2, -1/2): every root not vanishing on it has value 1
    for (int r = 0; r < static_cast<int>(m.st->roots.roots.size()); ++r) {
      const double v = m.st->roots.root_value(r, m.model->w0());
      EXPECT_TRUE(std::abs(v) < 1e-12 || std::abs(std::abs(v) - 1.0) < 1e-12) << v;
    }
    EXPECT_EQ(m.model->m(), 3);
  }
  {
    const auto m = oracle::make("g2");
    const auto simple = simple_roots(m.st->roots);
    EXPECT_NEAR(m.st->roots.root_value(simple[0], m.model->w0()), 0.0, 1e-12);  // long simple root
    EXPECT_NEAR(std::abs(m.st->roots.root_value(simple[1], m.model->w0())), 1.0, 1e-12);
    EXPECT_EQ(m.model->m(), 5);
  }
  {
    const auto m = oracle::make("so:4,1");
    EXPECT_NEAR(m.model->lambda().cwiseAbs().maxCoeff(), 1.0, 1e-12);
  }
}

TEST(BuiltinAlgebras, W0FromMatrix) {
  const auto spec = parse_algebra_id("sl:3");
  const auto st = build_structure(spec, 7);
  Matrix w = Matrix::Zero(3, 3);
  w.diagonal() << 1.0, 0.3, -1.3;
  const Vector c = w0_from_matrix(st, w);
  Matrix back = Matrix::Zero(3, 3);
  for (int i = 0; i < c.size(); ++i) back += c(i) * st.roots.a_basis[i];
  EXPECT_LT((back - w).norm(), 1e-12);
  Matrix off = Matrix::Zero(3, 3);
  off(0, 1) = off(1, 0) = 1.0;
  EXPECT_THROW(w0_from_matrix(st, off), InputError);
}
