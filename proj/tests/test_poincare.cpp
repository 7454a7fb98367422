#include <gtest/gtest.h>

#include <omp.h>

#include "polygrowth/error.hpp"
#include "polygrowth/harmonic.hpp"
#include "polygrowth/poincare.hpp"

using namespace polygrowth;

TEST(Poincare, CoordinateOnZFixture) {
  auto ball = enumerate_ball(make_model("Z"), 3);
  EdgeFunction f(ball, trial_function(*ball, TrialKind::Coordinate, 0, 0));
  auto r = verify_poincare(f, 1);
  EXPECT_NEAR(r.lhs, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(r.grad, 6.0);
  EXPECT_NEAR(r.constant, 160.0 / 3.0, 1e-9);
  EXPECT_TRUE(r.satisfied);
}

TEST(Poincare, ConstantFormula) {
  // 8 |S|^2 R^2 V(2R) / V(R)
  auto z2 = enumerate_ball(make_model("Z2"), 6);
  EXPECT_NEAR(poincare_constant(*z2, 2), 8.0 * 16 * 4 * 41.0 / 13.0, 1e-9);
  auto f2 = enumerate_ball(make_model("F2"), 4);
  EXPECT_NEAR(poincare_constant(*f2, 1), 8.0 * 16 * 1 * 17.0 / 5.0, 1e-9);
}

TEST(Poincare, ConstantFunctionHasZeroSides) {
  auto ball = enumerate_ball(make_model("H3"), 6);
  auto r = verify_poincare(EdgeFunction(ball, 2.5), 2);
  EXPECT_NEAR(r.lhs, 0.0, 1e-20);
  EXPECT_EQ(r.grad, 0.0);
  EXPECT_TRUE(r.satisfied);
  EXPECT_EQ(r.ratio, 0.0);
}

TEST(Poincare, NeedsTripledBall) {
  auto ball = enumerate_ball(make_model("Z2"), 5);
  EXPECT_THROW(verify_poincare(EdgeFunction(ball, 1.0), 2), DomainMismatch);
  EXPECT_THROW(verify_poincare(EdgeFunction(ball, 1.0), 0), InvalidArgument);
}

TEST(Poincare, NoViolationsOnSmallSweep) {
  for (auto name : {"Z", "Z2", "H3", "F2", "lamplighter", "Dinf"}) {
    for (int R = 1; R <= 2; ++R) {
      auto ball = enumerate_ball(make_model(name), 3 * R);
      auto worst = worst_case_ratio(ball, R, TrialSet{50, true, true}, 7);
      EXPECT_EQ(worst.violations, 0u) << name << " R=" << R;
      EXPECT_LT(worst.max_ratio, 1.0);
      EXPECT_EQ(worst.evaluated, 55u);
    }
  }
}

TEST(Poincare, TrialsAreDeterministic) {
  auto ball = enumerate_ball(make_model("F2"), 3);
  EXPECT_EQ(trial_function(*ball, TrialKind::Random, 42, 3), trial_function(*ball, TrialKind::Random, 42, 3));
  EXPECT_NE(trial_function(*ball, TrialKind::Random, 42, 3), trial_function(*ball, TrialKind::Random, 43, 3));
  EXPECT_NE(trial_function(*ball, TrialKind::Random, 42, 3), trial_function(*ball, TrialKind::Random, 42, 4));
  EXPECT_NE(trial_function(*ball, TrialKind::Random, 42, 3), trial_function(*ball, TrialKind::Signs, 42, 3));
}

TEST(Poincare, WorstCaseIndependentOfThreads) {
  auto ball = enumerate_ball(make_model("Z2"), 6);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  auto a = worst_case_ratio(ball, 2, TrialSet{64, true, false}, 5);
  omp_set_num_threads(4);
  auto b = worst_case_ratio(ball, 2, TrialSet{64, true, false}, 5);
  omp_set_num_threads(saved);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  EXPECT_EQ(a.trial, b.trial);
  EXPECT_EQ(a.function_hash, b.function_hash);
}

TEST(Poincare, WorstCaseReportsArgMax) {
  auto ball = enumerate_ball(make_model("Z"), 6);
  auto worst = worst_case_ratio(ball, 2, TrialSet{20, true, false}, 1);
  auto f = trial_function(*ball, worst.kind, 1, worst.trial);
  EXPECT_EQ(hash_values(f), worst.function_hash);
  EXPECT_DOUBLE_EQ(verify_poincare(EdgeFunction(ball, f), 2).ratio, worst.max_ratio);
}

TEST(ReversePoincare, HarmonicPolynomialsOnZ2) {
  auto ball = enumerate_ball(make_model("Z2"), 32);
  auto basis = lattice_harmonic_basis(ball, 2);
  for (std::size_t i = 1; i < basis.size(); ++i) {
    double c = reverse_poincare_constant(basis.functions[i], 2);
    EXPECT_GT(c, 0.0);
    EXPECT_TRUE(std::isfinite(c));
  }
  EXPECT_EQ(reverse_poincare_constant(basis.functions[0], 2), 0.0);
  std::vector<double> norm(ball->size());
  for (std::size_t v = 0; v < ball->size(); ++v) norm[v] = ball->norm(v);
  EXPECT_THROW(reverse_poincare_constant(EdgeFunction(ball, norm), 2), InvalidArgument);
  EXPECT_THROW(reverse_poincare_constant(basis.functions[1], 3), DomainMismatch);
}
