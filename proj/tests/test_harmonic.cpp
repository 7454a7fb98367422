#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "polygrowth/error.hpp"
#include "polygrowth/harmonic.hpp"

using namespace polygrowth;

namespace {

std::vector<std::size_t> cumulative_dimensions(const HarmonicPolynomialSpace& space) {
  std::vector<std::size_t> dims(static_cast<std::size_t>(space.max_degree) + 1, 0);
  for (const auto& p : space.basis)
    for (int D = p.degree(); D <= space.max_degree; ++D) ++dims[static_cast<std::size_t>(D)];
  return dims;
}

// Minimum eigenvalue after scaling by the diagonal of `reference`.
double scaled_min_eigenvalue(const Eigen::MatrixXd& m, const Eigen::MatrixXd& reference) {
  Eigen::VectorXd s = reference.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd scaled = s.asDiagonal() * m * s.asDiagonal();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(scaled, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

TEST(HarmonicPolynomials, DimensionsOnZ2) {
  auto space = harmonic_polynomial_space(2, 4);
  EXPECT_EQ(cumulative_dimensions(space), (std::vector<std::size_t>{1, 3, 5, 7, 9}));
}

TEST(HarmonicPolynomials, DimensionsOnZ1AndZ3) {
  EXPECT_EQ(cumulative_dimensions(harmonic_polynomial_space(1, 4)), (std::vector<std::size_t>{1, 2, 2, 2, 2}));
  // (D+1)^2 in three variables
  EXPECT_EQ(cumulative_dimensions(harmonic_polynomial_space(3, 3)), (std::vector<std::size_t>{1, 4, 9, 16}));
}

TEST(HarmonicPolynomials, DegreeTwoBasisOnZ2) {
  auto space = harmonic_polynomial_space(2, 2);
  std::set<std::string> labels;
  for (const auto& p : space.basis) labels.insert(p.to_string());
  EXPECT_EQ(labels.size(), 5u);
  EXPECT_TRUE(labels.count("1"));
  EXPECT_TRUE(labels.count("x"));
  EXPECT_TRUE(labels.count("y"));
  EXPECT_TRUE(labels.count("xy"));
  // x^2 - y^2 up to sign and term order
  EXPECT_TRUE(labels.count("y^2 - x^2") || labels.count("x^2 - y^2") || labels.count("-x^2 + y^2"));
}

TEST(HarmonicPolynomials, GradedOrder) {
  auto space = harmonic_polynomial_space(2, 5);
  for (std::size_t i = 1; i < space.basis.size(); ++i)
    EXPECT_LE(space.basis[i - 1].degree(), space.basis[i].degree());
}

TEST(HarmonicPolynomials, ExactlyHarmonicOnLattice) {
  for (int d = 1; d <= 3; ++d) {
    auto space = harmonic_polynomial_space(d, d == 3 ? 4 : 6);
    auto ball = enumerate_ball(make_model(d == 1 ? "Z" : "Z" + std::to_string(d)), d == 3 ? 5 : 8);
    for (const auto& p : space.basis) {
      for (std::size_t v = 0; v < ball->count_within(ball->radius() - 1); ++v) {
        std::int64_t sum = 0;
        auto here = p.evaluate_exact(ball->element(v));
        for (auto w : ball->neighbors(v)) sum += p.evaluate_exact(ball->element(w)) - here;
        ASSERT_EQ(sum, 0) << p.to_string();
      }
    }
  }
}

TEST(HarmonicPolynomials, Limits) {
  EXPECT_THROW(harmonic_polynomial_space(4, 2), InvalidArgument);
  EXPECT_THROW(harmonic_polynomial_space(2, 7), InvalidArgument);
  EXPECT_THROW(lattice_harmonic_basis(enumerate_ball(make_model("H3"), 2), 2), InvalidArgument);
}

TEST(HarmonicPolynomials, Z2DimensionsFast) {
  auto start = std::chrono::steady_clock::now();
  auto space = harmonic_polynomial_space(2, 4);
  auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(space.dimension(), 9u);
  EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 10.0);
}

// ---------------------------------------------------------------------------

TEST(Dirichlet, ReproducesHarmonicBoundaryData) {
  auto ball = enumerate_ball(make_model("Z2"), 6);
  std::vector<double> boundary(ball->size());
  for (std::size_t v = 0; v < ball->size(); ++v) {
    double x = ball->element(v)[0], y = ball->element(v)[1];
    boundary[v] = x * x - y * y;
  }
  auto u = solve_dirichlet(ball, boundary);
  double worst = 0.0;
  for (std::size_t v = 0; v < ball->size(); ++v) worst = std::max(worst, std::abs(u.values[v] - boundary[v]));
  EXPECT_LT(worst, 1e-10);
  EXPECT_LT(harmonic_residual(u, 6), 1e-10);
  EXPECT_TRUE(check_maximum_principle(u).holds);
}

TEST(Dirichlet, RandomBoundaryData) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (auto name : {"Z2", "H3", "F2", "lamplighter", "Z3"}) {
    auto ball = enumerate_ball(make_model(name), 5);
    std::vector<double> boundary(ball->size());
    for (auto& x : boundary) x = unif(rng);
    auto u = solve_dirichlet(ball, boundary);
    EXPECT_LT(harmonic_residual(u, ball->radius()), 1e-10) << name;
    EXPECT_LT(mean_value_defect(u), 1e-10) << name;
    EXPECT_TRUE(check_maximum_principle(u).holds) << name;
    for (std::size_t v = ball->count_within(4); v < ball->size(); ++v) EXPECT_EQ(u.values[v], boundary[v]);
  }
}

TEST(Dirichlet, BoundaryLengthChecked) {
  auto ball = enumerate_ball(make_model("Z2"), 3);
  EXPECT_THROW(solve_dirichlet(ball, std::vector<double>(3, 0.0)), DomainMismatch);
}

TEST(Dirichlet, BasisMembersAreHarmonic) {
  for (auto name : {"H3", "lamplighter", "Z2"}) {
    auto ball = enumerate_ball(make_model(name), 6);
    auto basis = dirichlet_harmonic_basis(ball);
    EXPECT_EQ(basis.size(), 1 + ball->model().coordinate_count());
    for (const auto& f : basis.functions) {
      EXPECT_LT(harmonic_residual(f, 6), 1e-9);
      EXPECT_TRUE(check_maximum_principle(f).holds);
    }
  }
}

// ---------------------------------------------------------------------------

TEST(Gram, SerialMatchesParallel) {
  auto ball = enumerate_ball(make_model("Z2"), 40);
  auto basis = lattice_harmonic_basis(ball, 3);
  auto a = gram(basis, 40).matrix, b = gram_serial(basis, 40).matrix;
  EXPECT_LT((a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(a, a.transpose());
}

TEST(Gram, NondecreasingInRadius) {
  std::vector<HarmonicBasis> bases;
  bases.push_back(lattice_harmonic_basis(enumerate_ball(make_model("Z2"), 16), 2));
  bases.push_back(lattice_harmonic_basis(enumerate_ball(make_model("Z3"), 8), 2));
  bases.push_back(dirichlet_harmonic_basis(enumerate_ball(make_model("H3"), 8)));
  bases.push_back(dirichlet_harmonic_basis(enumerate_ball(make_model("F2"), 6)));
  for (const auto& basis : bases) {
    Eigen::MatrixXd prev = gram(basis, 0).matrix;
    for (int R = 1; R <= basis.ball->radius(); ++R) {
      Eigen::MatrixXd q = gram(basis, R).matrix;
      EXPECT_GE(scaled_min_eigenvalue(q - prev, q), -1e-10) << basis.ball->model().descriptor() << " R=" << R;
      prev = q;
    }
  }
}

TEST(Gram, RadiusBeyondBall) {
  auto basis = lattice_harmonic_basis(enumerate_ball(make_model("Z2"), 4), 1);
  EXPECT_THROW(gram(basis, 5), DomainMismatch);
}

TEST(LogDeterminant, DiagonalAndSingular) {
  Eigen::MatrixXd d = Eigen::Vector3d(2.0, 3.0, 5.0).asDiagonal();
  auto ld = log_determinant(d);
  EXPECT_TRUE(ld.positive_definite);
  EXPECT_NEAR(ld.log_det, std::log(30.0), 1e-14);

  Eigen::MatrixXd s(2, 2);
  s << 1.0, 1.0, 1.0, 1.0;
  EXPECT_FALSE(log_determinant(s).positive_definite);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_FALSE(log_determinant(z).positive_definite);
}

TEST(LogDeterminant, BadlyScaledButDefinite) {
  Eigen::MatrixXd q(2, 2);
  q << 1e-12, 1e-7, 1e-7, 1e6;  // det = 1e-6 - 1e-14
  auto ld = log_determinant(q);
  EXPECT_TRUE(ld.positive_definite);
  EXPECT_NEAR(ld.log_det, std::log(1e-6 - 1e-14), 1e-9);
}

TEST(GrowthFunctional, Z2DegreeTwo) {
  auto basis = lattice_harmonic_basis(enumerate_ball(make_model("Z2"), 64), 2);
  auto h = growth_functional(basis, 2, 0, 6);
  ASSERT_TRUE(h.i0.has_value());
  EXPECT_EQ(*h.i0, 1);  // Q_1 sees only 4 edges and cannot separate 5 functions
  EXPECT_FALSE(h.entries[0].positive_definite);
  for (int i = 2; i <= 6; ++i) EXPECT_GE(h.h(i), h.h(i - 1));
  EXPECT_THROW(h.h(7), ExhaustedRange);
  EXPECT_THROW(h.h(0), NotPositiveDefinite);
  EXPECT_EQ(h.entries.back().volume, 8321u);
}

TEST(GrowthFunctional, ConstantBasisIsVolumeTimesLength) {
  auto ball = enumerate_ball(make_model("Z2"), 16);
  HarmonicBasis basis{ball, {EdgeFunction(ball, 1.0)}, {"1"}};
  auto h = growth_functional(basis, 2, 0, 4);
  for (int i = 0; i <= 4; ++i) {
    double R = std::pow(2.0, i);
    EXPECT_NEAR(h.h(i), std::log((2 * R * R + 2 * R + 1) * 4 * R * R), 1e-12);
  }
}

TEST(GrowthFunctional, Errors) {
  auto basis = lattice_harmonic_basis(enumerate_ball(make_model("Z2"), 8), 2);
  EXPECT_THROW(growth_functional(basis, 2, 0, 4), DomainMismatch);
  EXPECT_THROW(growth_functional(basis, 1, 0, 2), InvalidArgument);
  EXPECT_THROW(growth_functional(basis, 2, 0, 0), NotPositiveDefinite);
}
