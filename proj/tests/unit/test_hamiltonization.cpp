#include <gtest/gtest.h>

#include <cmath>

#include <chaplie/chaplie.hpp>

#include "oracles.hpp"

using namespace chaplie;

namespace {

std::string label(const ChaplyginModel& m, int k) { return adapted_label(m.roots(), k); }

int index_of(const ChaplyginModel& m, const std::string& l) {
  for (int k = 0; k < m.d(); ++k)
    if (label(m, k) == l) return k;
  return -1;
}

}  // namespace

TEST(Hamiltonization, VacuousWhenQuotientIsTwoDimensional) {
  const auto m = oracle::make("so:3,1");
  ASSERT_EQ(m.model->m(), 2);
  const auto rep = check_hamiltonizable(*m.model, 5, 1);
  EXPECT_TRUE(rep.vacuous);
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_TRUE(ham_residual_at_0(*m.model, Matrix::Identity(4, 4)).triples.empty());
}

TEST(Hamiltonization, NeedsQuotientOfDimensionTwo) {
  const auto m = oracle::make("sl:2");
  ASSERT_LT(m.model->m(), 2);
  EXPECT_THROW(check_hamiltonizable(*m.model, 1, 1), InputError);
  EXPECT_THROW(ham_residual_at_0(*m.model, Matrix::Identity(2, 2)), InputError);
}

// With I = id the metric is diagonal, N e_k = e_k / (1 + lambda_k^2), and the
// (kappa, mu, nu) entry for three distinct roots reduces to
// -lambda_kappa^2 / (1 + lambda_kappa^2) c^kappa_{mu nu}.
TEST(Hamiltonization, Sl3FailsWithKnownWitness) {
  const auto m = oracle::make("sl:3");
  const auto& model = *m.model;
  const auto rep = check_hamiltonizable(model, 20, 3);
  EXPECT_EQ(rep.verdict, Verdict::fail);
  EXPECT_EQ(label(model, rep.worst.kappa), "l1+l2");
  EXPECT_EQ(label(model, rep.worst.mu) + label(model, rep.worst.nu) == "l1l2" ||
                label(model, rep.worst.mu) + label(model, rep.worst.nu) == "l2l1",
            true);
  const double l3 = model.lambda()(index_of(model, "l1+l2"));
  const double expected = l3 * l3 / (1 + l3 * l3) / std::sqrt(12.0);
  EXPECT_NEAR(rep.max_residual, expected, 1e-12);
  EXPECT_NEAR(expected, 0.2427808365670207, 1e-12);  // w0 = diag(1, 0.3, -1.3): lambda3 = 2.3
}

TEST(Hamiltonization, G2FailsOnTheLongRootTriple) {
  const auto m = oracle::make("g2");
  const auto& model = *m.model;
  const auto rep = check_hamiltonizable(model, 5, 3);
  EXPECT_EQ(rep.verdict, Verdict::fail);
  const int kappa = index_of(model, "l1+l2"), mu = index_of(model, "l1+2l2"), nu = index_of(model, "2l1+3l2");
  ASSERT_GE(kappa, 0);
  ASSERT_GE(mu, 0);
  ASSERT_GE(nu, 0);
  const int n = 7;
  const auto sample = ham_residual_at_0(model, Matrix::Identity(n, n));
  const int mm = model.m();
  auto pos = [&](int k) {
    for (int i = 0; i < mm; ++i)
      if (model.phi_indices()[i] == k) return i;
    return -1;
  };
  const auto& t = sample.triples[(pos(kappa) * mm + pos(mu)) * mm + pos(nu)];
  ASSERT_EQ(t.kappa, kappa);
  ASSERT_EQ(t.mu, mu);
  ASSERT_EQ(t.nu, nu);
  const double lk = model.lambda()(kappa);
  const double c = oracle::structure_constant(m.st->roots.k_adapted, kappa, mu, nu);
  EXPECT_NEAR(t.lhs, -lk * lk / (1 + lk * lk) * c, 1e-12);
  EXPECT_NEAR(std::abs(c), 0.25, 1e-12);
  EXPECT_NEAR(t.rhs, 0.0, 1e-15);
  EXPECT_GT(t.residual(), 1e-3 * rep.scale);
}

TEST(Hamiltonization, Sp2WithIdentityPasses) {
  const auto m = oracle::make("sp:2");
  const auto rep = check_hamiltonizable(*m.model, 20, 5);
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_LT(rep.max_residual, 1e-8 * rep.scale);
  EXPECT_EQ(rep.samples.size(), 21u);
}

TEST(Hamiltonization, Sp2PassesForOtherScalesOfW0) {
  const auto spec = parse_algebra_id("sp:2");
  auto st = std::make_shared<const AlgebraStructure>(build_structure(spec, 7));
  Matrix w = Matrix::Zero(4, 4);
  w.diagonal() << 0.8, 0.8, -0.8, -0.8;
  ChaplyginModel model(st, w0_from_matrix(*st, w), InertiaSpec::identity());
  EXPECT_EQ(check_hamiltonizable(model, 10, 5).verdict, Verdict::pass);
}

TEST(Hamiltonization, JovanovicBallPasses) {
  for (int n : {4, 5}) {
    const std::string id = "so:" + std::to_string(n) + ",1";
    const auto st = build_structure(parse_algebra_id(id), 7);
    std::vector<double> a(n, 0.5);
    a.back() = 0.9;
    const auto m = oracle::make(id, jovanovic_inertia(st, a));
    const auto rep = check_hamiltonizable(*m.model, 20, 9);
    EXPECT_EQ(rep.verdict, Verdict::pass) << id;
    EXPECT_LT(rep.max_residual, 1e-8 * rep.scale) << id;
  }
}

// A generic inertia on the 4-ball is not of Jovanovic type; the criterion must see it.
TEST(Hamiltonization, GenericBallInertiaFails) {
  const auto st = build_structure(parse_algebra_id("so:4,1"), 7);
  const auto m = oracle::make("so:4,1", oracle::spread_inertia(st.roots.dim_k()));
  EXPECT_EQ(check_hamiltonizable(*m.model, 5, 9).verdict, Verdict::fail);
}

TEST(Hamiltonization, InconclusiveBand) {
  const auto m = oracle::make("sl:3");
  const auto rep = check_hamiltonizable(*m.model, 2, 3, HamThresholds{1e-8, 10.0});
  EXPECT_EQ(rep.verdict, Verdict::inconclusive);
  EXPECT_EQ(to_string(rep.verdict), "inconclusive");
}

TEST(Hamiltonization, ProjectionOntoZeroMomentum) {
  std::mt19937_64 rng(41);
  const auto m = oracle::make("g2");
  const auto x = project_to_zero_momentum(*m.model, m.model->random_state(rng));
  EXPECT_LT(m.model->momentum(x).norm(), 1e-12);
}

TEST(Hamiltonization, ExactnessOnPassingAndFailingModels) {
  std::mt19937_64 rng(42);
  {
    const auto m = oracle::make("sp:2");
    const auto x = project_to_zero_momentum(*m.model, m.model->random_state(rng));
    EXPECT_LT(verify_exactness_at_0(*m.model, x, 1e-5).residual, 1e-5);
  }
  {
    const auto m = oracle::make("sl:3");
    const auto x = project_to_zero_momentum(*m.model, m.model->random_state(rng));
    const auto r = verify_exactness_at_0(*m.model, x, 1e-5);
    EXPECT_GT(r.residual, 1e-3 * r.scale);
  }
  {
    const auto m = oracle::make("so:4,1");
    const auto x = m.model->random_state(rng);  // off the level set
    if (m.model->momentum(x).norm() > 1e-8) EXPECT_THROW(verify_exactness_at_0(*m.model, x, 1e-5), InputError);
  }
}

TEST(Hamiltonization, G2RubberSubsystem) {
  const auto m = oracle::make("g2");
  const auto rep = rubber_subsystem_report(*m.model, 10, 4);
  EXPECT_EQ(rep.flag_dims, (std::vector<int>{2, 3, 5, 6}));
  EXPECT_LT(rep.lambda_insertion, 1e-9);
  EXPECT_LT(rep.tangency, 1e-8);
  EXPECT_LT(rep.invariance, 1e-10);
  EXPECT_LT(rep.hc_invariance, 1e-10);
  EXPECT_EQ(rep.states, 10);
}

TEST(Hamiltonization, RubberSubsystemPreconditions) {
  EXPECT_THROW(rubber_subsystem_report(*oracle::make("sp:2").model, 2, 1), InputError);
  const auto spec = parse_algebra_id("g2");
  auto st = std::make_shared<const AlgebraStructure>(build_structure(spec, 7));
  Vector w(2);
  w << 0.7, 0.2;  // regular: lambda1(w0) != 0
  ChaplyginModel regular(st, w, InertiaSpec::identity());
  EXPECT_THROW(rubber_subsystem_report(regular, 2, 1), InputError);
}

TEST(Hamiltonization, DistributionFlagOfTheFullAlgebraStops) {
  const auto m = oracle::make("sl:3");
  std::vector<Vector> gens{Vector::Unit(3, 0), Vector::Unit(3, 1)};
  const auto flag = distribution_flag(*m.model, gens);
  EXPECT_EQ(flag.flag_dims, (std::vector<int>{2, 3}));
}
