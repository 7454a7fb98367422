#include <gtest/gtest.h>

#include <cmath>

#include "polygrowth/dimension.hpp"
#include "polygrowth/error.hpp"

using namespace polygrowth;

namespace {

GrowthFunctional synthetic(std::vector<double> h, int base = 2) {
  GrowthFunctional g;
  g.base = base;
  g.dimension = 1;
  g.i0 = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    ScaleEntry e;
    e.index = static_cast<int>(i);
    e.radius = static_cast<int>(checked_pow(base, static_cast<int>(i)));
    e.positive_definite = true;
    e.h = h[i];
    g.entries.push_back(e);
  }
  return g;
}

std::vector<std::pair<int, int>> all_pairs(const GrowthFunctional& h, double a, int w) {
  std::vector<std::pair<int, int>> out;
  for (int i1 = *h.i0; i1 < h.last_index(); ++i1)
    for (int i2 = i1; i2 < h.last_index(); ++i2) {
      auto checks = certificate_checks(h, a, w, i1, i2);
      if (std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; })) out.emplace_back(i1, i2);
    }
  return out;
}

int l1(ElementView a, ElementView b) { return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]); }

}  // namespace

TEST(ScaleSelection, PicksFirstQualifyingBlock) {
  // a = 4 log 2 for d = 1, b = 2; first block rises too fast, second is flat
  const double a = 4.0 * std::log(2.0);
  auto h = synthetic({0, 10, 20, 30, 30.5, 31, 31.5, 32});
  auto c = select_scales(h, 1.0, 1);
  EXPECT_EQ(c.j0, 1);
  EXPECT_EQ(c.i1, 3);
  EXPECT_EQ(c.i2, 5);
  EXPECT_NEAR(c.a, a, 1e-15);
  EXPECT_TRUE(c.valid());
  EXPECT_EQ(c.r1(), 16);
  EXPECT_EQ(c.r2(), 32);
}

TEST(ScaleSelection, RespectsIncrementsInsideBlock) {
  // w = 2: block [0, 6) qualifies; i1 must skip the jump at 0
  auto h = synthetic({0, 5, 5.1, 5.2, 5.3, 5.4, 5.5, 9});
  const double a = 4.0 * std::log(2.0);
  auto c = select_scales(h, 1.0, 2);
  EXPECT_EQ(c.j0, 0);
  EXPECT_EQ(c.i1, 1);
  EXPECT_EQ(c.i2, 4);
  for (const auto& ch : c.checks) EXPECT_TRUE(ch.ok) << ch.name;
  auto pairs = all_pairs(h, a, 2);
  EXPECT_NE(std::find(pairs.begin(), pairs.end(), std::make_pair(c.i1, c.i2)), pairs.end());
}

TEST(ScaleSelection, ExhaustedRange) {
  auto h = synthetic({0, 10, 20, 30, 40, 50, 60});
  EXPECT_THROW(select_scales(h, 1.0, 1), ExhaustedRange);
  auto short_table = synthetic({0, 0, 0});
  EXPECT_THROW(select_scales(short_table, 1.0, 1), ExhaustedRange);
}

TEST(ScaleSelection, CertificateOnZ2) {
  auto basis = lattice_harmonic_basis(enumerate_ball(make_model("Z2"), 64), 2);
  auto h = growth_functional(basis, 2, 0, 6);
  EXPECT_THROW(select_scales(h, 2.0, 1), ExhaustedRange);
  auto c = select_scales(h, 5.0, 1);
  EXPECT_TRUE(c.valid());
  auto pairs = all_pairs(h, c.a, c.w);
  EXPECT_NE(std::find(pairs.begin(), pairs.end(), std::make_pair(c.i1, c.i2)), pairs.end());
}

// ---------------------------------------------------------------------------

TEST(Cover, Z2AgainstL1Metric) {
  auto ball = enumerate_ball(make_model("Z2"), 20);
  ControlledCover cover(ball, 4, 8);
  const auto centers = cover.centers();
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      EXPECT_GE(l1(ball->element(centers[i]), ball->element(centers[j])), 4);
  std::size_t mult = 0, mult3 = 0;
  for (std::size_t v = 0; v < ball->size(); ++v) {
    std::size_t m = 0, m3 = 0, near = 0;
    for (auto c : centers) {
      int d = l1(ball->element(v), ball->element(c));
      m += d <= 4;
      m3 += d <= 12;
      near += d < 4;
    }
    mult = std::max(mult, m);
    mult3 = std::max(mult3, m3);
    if (ball->norm(v) <= 8) EXPECT_GE(near, 1u) << "not maximal at " << ball->key(v);
  }
  EXPECT_EQ(cover.multiplicity(), mult);
  EXPECT_EQ(cover.multiplicity3(), mult3);

  auto checks = cover.verify();
  EXPECT_TRUE(checks.separated);
  EXPECT_TRUE(checks.covering);
  EXPECT_TRUE(checks.half_balls_disjoint);
  EXPECT_TRUE(checks.half_domains_disjoint);

  auto dist = cover.distances(3);
  for (std::size_t v = 0; v < ball->size(); ++v) {
    int d = l1(ball->element(v), ball->element(centers[3]));
    EXPECT_EQ(dist[v], d <= 12 ? d : -1);
  }
}

TEST(Cover, OtherGroups) {
  for (auto name : {"H3", "F2", "lamplighter"}) {
    auto ball = enumerate_ball(make_model(name), 7);
    ControlledCover cover(ball, 2, 1);
    auto checks = cover.verify();
    EXPECT_TRUE(checks.separated && checks.covering && checks.half_balls_disjoint && checks.half_domains_disjoint)
        << name;
    EXPECT_GE(cover.cardinality(), 1u);
    EXPECT_LE(cover.multiplicity(), cover.multiplicity3());
  }
}

TEST(Cover, NeedsRoom) {
  auto ball = enumerate_ball(make_model("Z2"), 10);
  EXPECT_THROW(ControlledCover(ball, 4, 0), DomainMismatch);
  EXPECT_THROW(ControlledCover(ball, 0, 2), InvalidArgument);
}

TEST(Cover, Bounds) {
  auto ball = enumerate_ball(make_model("Z2"), 20);
  ControlledCover cover(ball, 4, 8);
  auto b = cover_bounds(cover, std::log(100.0), 1);
  EXPECT_TRUE(b.multiplicity_ok);
  EXPECT_TRUE(b.cardinality_ok);
  auto tight = cover_bounds(cover, std::log(2.0), 1);
  EXPECT_FALSE(tight.multiplicity_ok);
  EXPECT_FALSE(tight.cardinality_ok);
}

// ---------------------------------------------------------------------------

TEST(Phi, AveragesOfConstantsAndCoordinates) {
  auto ball = enumerate_ball(make_model("Z2"), 128);
  auto basis = lattice_harmonic_basis(ball, 1);  // 1, x, y
  ControlledCover cover(ball, 4, 8);
  auto phi = phi_matrix(basis, cover);
  for (std::size_t j = 0; j < cover.cardinality(); ++j) {
    auto c = ball->element(cover.centers()[j]);
    EXPECT_NEAR(phi.matrix(static_cast<Eigen::Index>(j), 0), 1.0, 1e-14);
    // linear functions average to their value at the center (symmetric domains)
    for (Eigen::Index i = 1; i < 3; ++i)
      EXPECT_NEAR(std::abs(phi.matrix(static_cast<Eigen::Index>(j), i)), std::abs(c[static_cast<std::size_t>(i - 1)]),
                  1e-12);
  }
  auto vphi = phi_matrix(basis, cover, PhiMeasure::VertexCount);
  EXPECT_NEAR(vphi.matrix(0, 0), 1.0, 1e-14);
}

TEST(Phi, LocalPoincareHolds) {
  auto ball = enumerate_ball(make_model("Z2"), 40);
  auto basis = lattice_harmonic_basis(ball, 2);
  ControlledCover cover(ball, 4, 8);
  for (const auto& f : basis.functions)
    for (const auto& r : local_poincare_check(cover, f, std::log(4.0))) EXPECT_TRUE(r.satisfied);
}

TEST(Subspace, GeneralizedEigenvaluesOnZ) {
  // constants scale like R, x like R^3; Q_{16R}/Q_R ratios approach 16 and 16^3
  auto ball = enumerate_ball(make_model("Z"), 16 * 64);
  auto basis = lattice_harmonic_basis(ball, 1);
  auto s = select_doubling_subspace(basis, 64, 10.0);
  ASSERT_EQ(s.eigenvalues.size(), 2);
  EXPECT_NEAR(s.eigenvalues[0], 16.0, 1e-9);
  EXPECT_NEAR(s.eigenvalues[1] / 4096.0, 1.0, 1e-3);
  EXPECT_EQ(s.selected.size(), 2u);
  EXPECT_EQ(s.dimension(), 1u);
  auto few = select_doubling_subspace(basis, 64, std::log(16.0) / 2 + 0.01);
  EXPECT_EQ(few.selected.size(), 1u);
  auto none = select_doubling_subspace(basis, 64, 0.1);
  EXPECT_EQ(none.dimension(), 0u);
  EXPECT_FALSE(none.at_least_half(2));
}

TEST(Injectivity, CertificateScalesOnZ2) {
  auto basis = lattice_harmonic_basis(enumerate_ball(make_model("Z2"), 128), 2);
  auto h = growth_functional(basis, 2, 0, 4);
  auto c = select_scales(h, 5.0, 1);
  auto report = run_pipeline(basis, c);
  EXPECT_TRUE(report.injectivity.injective);
  EXPECT_TRUE(report.injectivity.chain_holds);
  EXPECT_EQ(report.local_poincare_violations, 0u);
  EXPECT_EQ(report.injectivity.dim_u, 3u);
}

TEST(Injectivity, WideMatrixIsNotInjective) {
  PhiMatrix phi{Eigen::MatrixXd::Ones(1, 2)};
  DoublingSubspace s;
  s.coefficients = Eigen::MatrixXd::Identity(2, 2);
  s.selected = {0, 1};
  auto r = phi_injectivity(phi, s, 2);
  EXPECT_FALSE(r.injective);
  EXPECT_FALSE(r.chain_holds);
}

// ---------------------------------------------------------------------------

TEST(DimensionBound, UnitConstantDegreeOne) {
  auto b = dimension_bound(4, 1.0, 1.0);
  EXPECT_NEAR(b.log_bound, std::log(128.0) + 64.0 * std::log(16.0), 1e-12);
  EXPECT_LT(b.log_wbig_lhs, b.log_wbig_rhs);
  EXPECT_GE(b.log_wbig_prev, b.log_wbig_rhs);
  EXPECT_EQ(b.w, 17);
}

TEST(DimensionBound, MinimalityAcrossParameters) {
  for (double d : {0.5, 1.0, 2.0, 3.0})
    for (double c : {0.5, 1.0, 10.0, 1e6}) {
      auto b = dimension_bound(4, d, c);
      EXPECT_LT(b.log_wbig_lhs, b.log_wbig_rhs);
      if (b.w > 1) EXPECT_GE(b.log_wbig_prev, b.log_wbig_rhs);
      EXPECT_NEAR(b.log_bound, std::log(128.0 * c) + 64.0 * d * d * std::log(16.0), 1e-9);
    }
  EXPECT_THROW(dimension_bound(4, 1.0, 0.0), InvalidArgument);
}
