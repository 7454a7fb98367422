#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "polygrowth/cayley.hpp"
#include "polygrowth/error.hpp"

using namespace polygrowth;

namespace {

// Independent faithful representations, used to decide equality of words.

using Mat2 = std::array<std::int64_t, 4>;  // row-major 2x2
Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

// Sanov: [[1,2],[0,1]] and [[1,0],[2,1]] generate a free group of rank 2.
std::vector<std::int64_t> free_oracle(const std::vector<Generator>& w) {
  static const Mat2 gens[4] = {{1, 2, 0, 1}, {1, -2, 0, 1}, {1, 0, 2, 1}, {1, 0, -2, 1}};
  Mat2 m{1, 0, 0, 1};
  for (auto s : w) m = mul(m, gens[s]);
  return {m.begin(), m.end()};
}

// Upper unitriangular 3x3 integer matrices.
std::vector<std::int64_t> heisenberg_oracle(const std::vector<Generator>& w) {
  using Mat3 = std::array<std::int64_t, 9>;
  auto mul3 = [](const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) c[3 * i + j] += a[3 * i + k] * b[3 * k + j];
    return c;
  };
  static const Mat3 gens[4] = {{1, 1, 0, 0, 1, 0, 0, 0, 1},
                               {1, -1, 0, 0, 1, 0, 0, 0, 1},
                               {1, 0, 0, 0, 1, 1, 0, 0, 1},
                               {1, 0, 0, 0, 1, -1, 0, 0, 1}};
  Mat3 m{1, 0, 0, 0, 1, 0, 0, 0, 1};
  for (auto s : w) m = mul3(m, gens[s]);
  return {m.begin(), m.end()};
}

// Affine maps x -> e x + n of the line, as 2x2 matrices [[e, n], [0, 1]].
std::vector<std::int64_t> dihedral_oracle(const std::vector<Generator>& w) {
  static const Mat2 gens[2] = {{-1, 0, 0, 1}, {-1, 1, 0, 1}};
  Mat2 m{1, 0, 0, 1};
  for (auto s : w) m = mul(m, gens[s]);
  return {m.begin(), m.end()};
}

// Lamp configuration and cursor simulated directly.
std::vector<std::int64_t> lamplighter_oracle(const std::vector<Generator>& w) {
  std::int64_t cursor = 0;
  std::set<std::int64_t> lit;
  for (auto s : w) {
    if (s == 0) ++cursor;
    else if (s == 1) --cursor;
    else if (!lit.erase(cursor)) lit.insert(cursor);
  }
  std::vector<std::int64_t> out{cursor};
  out.insert(out.end(), lit.begin(), lit.end());
  return out;
}

std::vector<std::int64_t> lattice_oracle(const std::vector<Generator>& w, int d) {
  std::vector<std::int64_t> x(static_cast<std::size_t>(d), 0);
  for (auto s : w) x[s / 2] += (s % 2 == 0) ? 1 : -1;
  return x;
}

std::vector<Generator> random_word(std::mt19937_64& rng, std::size_t gens, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), pick(0, gens - 1);
  std::vector<Generator> w(len(rng));
  for (auto& s : w) s = pick(rng);
  return w;
}

// Random word pairs, half of them built to be equal by inserting s s^-1 or
// multiplying by an oracle-certified relator.
template <class Oracle>
void check_canonicalization(const std::string& name, Oracle oracle, std::size_t max_len) {
  auto model = make_model(name);
  const auto k = model->generator_count();
  std::mt19937_64 rng(1234);
  std::size_t equal_pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto w1 = random_word(rng, k, max_len);
    std::vector<Generator> w2;
    if (trial % 2 == 0) {
      w2 = w1;
      for (int ins = 0; ins < 3; ++ins) {
        std::uniform_int_distribution<std::size_t> pos(0, w2.size()), pick(0, k - 1);
        auto s = pick(rng);
        auto at = w2.begin() + static_cast<std::ptrdiff_t>(pos(rng));
        at = w2.insert(at, model->inverse(s));
        w2.insert(at, s);
      }
    } else {
      w2 = random_word(rng, k, max_len);
    }
    const bool same_oracle = oracle(w1) == oracle(w2);
    const bool same_model = model->canonicalize(w1) == model->canonicalize(w2);
    ASSERT_EQ(same_oracle, same_model) << name << " trial " << trial;
    equal_pairs += same_oracle;
  }
  EXPECT_GE(equal_pairs, 500u) << name;
}

}  // namespace

TEST(Canonicalization, FreeGroupAgreesWithSanovMatrices) { check_canonicalization("F2", free_oracle, 14); }
TEST(Canonicalization, HeisenbergAgreesWithUnitriangularMatrices) {
  check_canonicalization("H3", heisenberg_oracle, 16);
}
TEST(Canonicalization, DihedralAgreesWithAffineMaps) { check_canonicalization("Dinf", dihedral_oracle, 16); }
TEST(Canonicalization, LamplighterAgreesWithSimulation) {
  check_canonicalization("lamplighter", lamplighter_oracle, 16);
}
TEST(Canonicalization, LatticeAgreesWithVectorSums) {
  check_canonicalization("Z3", [](const auto& w) { return lattice_oracle(w, 3); }, 16);
}

TEST(Canonicalization, HeisenbergCommutatorIsCentral) {
  auto h = make_model("H3");
  // [x, y] = x y x^-1 y^-1 commutes with x and y
  std::vector<Generator> c{0, 2, 1, 3};
  std::vector<Generator> cx{0, 2, 1, 3, 0}, xc{0, 0, 2, 1, 3};
  EXPECT_EQ(h->canonicalize(cx), h->canonicalize(xc));
  EXPECT_NE(h->canonicalize(c), h->canonicalize(std::vector<Generator>{}));
}

TEST(Models, UnknownNameListsSupportedModels) {
  try {
    make_model("Q8");
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    std::string msg = e.what();
    for (const auto& m : supported_models()) EXPECT_NE(msg.find(m), std::string::npos) << m;
  }
}

TEST(Models, InversesAreInvolutive) {
  for (auto name : {"Z", "Z2", "Z4", "H3", "F2", "F3", "lamplighter", "Dinf", "C2", "C5"}) {
    auto m = make_model(name);
    EXPECT_EQ(m->descriptor(), name);
    for (Generator s = 0; s < m->generator_count(); ++s) {
      EXPECT_EQ(m->inverse(m->inverse(s)), s);
      std::vector<Generator> w{s, m->inverse(s)};
      EXPECT_EQ(m->canonicalize(w), m->canonicalize(std::vector<Generator>{})) << name << " " << s;
    }
  }
}

TEST(Models, KeysRoundTrip) {
  for (auto name : {"Z2", "H3", "F2", "lamplighter", "Dinf", "C6"}) {
    auto ball = enumerate_ball(make_model(name), 4);
    std::set<std::string> keys;
    for (std::size_t v = 0; v < ball->size(); ++v) {
      auto key = ball->key(v);
      EXPECT_EQ(key.find_first_of(" \t\n"), std::string::npos);
      EXPECT_TRUE(keys.insert(key).second) << "duplicate key " << key;
      auto parsed = ball->model().parse_key(key);
      EXPECT_TRUE(std::equal(parsed.begin(), parsed.end(), ball->element(v).begin(), ball->element(v).end()));
      EXPECT_EQ(ball->find(parsed), v);
    }
  }
}

// ---------------------------------------------------------------------------

TEST(Growth, ClosedForms) {
  auto z = growth_table(make_model("Z"), 10);
  auto z2 = growth_table(make_model("Z2"), 10);
  auto f2 = growth_table(make_model("F2"), 8);
  auto dinf = growth_table(make_model("Dinf"), 10);
  for (int r = 0; r <= 10; ++r) {
    EXPECT_EQ(z(r), 2u * r + 1);
    EXPECT_EQ(z2(r), 2u * r * r + 2u * r + 1);
    EXPECT_EQ(dinf(r), 2u * r + 1);
  }
  for (int r = 0; r <= 8; ++r) EXPECT_EQ(f2(r), 2 * static_cast<std::uint64_t>(std::pow(3, r)) - 1);
  auto z3 = growth_table(make_model("Z3"), 6);
  for (std::uint64_t r = 0; r <= 6; ++r) EXPECT_EQ(z3(static_cast<int>(r)), (2 * r + 1) * (2 * r * r + 2 * r + 3) / 3);
  auto c5 = growth_table(make_model("C5"), 4);
  EXPECT_EQ(c5.values, (std::vector<std::uint64_t>{1, 3, 5, 5, 5}));
  auto c2 = growth_table(make_model("C2"), 2);
  EXPECT_EQ(c2.values, (std::vector<std::uint64_t>{1, 2, 2}));
}

TEST(Growth, HeisenbergMatchesMatrixBfs) {
  const int R = 6;
  std::map<std::vector<std::int64_t>, int> seen{{heisenberg_oracle({}), 0}};
  std::vector<std::vector<Generator>> frontier{{}};
  std::vector<std::uint64_t> counts{1};
  for (int r = 1; r <= R; ++r) {
    std::vector<std::vector<Generator>> next;
    for (const auto& w : frontier) {
      for (Generator s = 0; s < 4; ++s) {
        auto w2 = w;
        w2.push_back(s);
        if (seen.emplace(heisenberg_oracle(w2), r).second) next.push_back(w2);
      }
    }
    counts.push_back(counts.back() + next.size());
    frontier = std::move(next);
  }
  EXPECT_EQ(growth_table(make_model("H3"), R).values, counts);
}

TEST(Growth, LamplighterMatchesSimulationBfs) {
  const int R = 7;
  std::set<std::vector<std::int64_t>> seen{lamplighter_oracle({})};
  std::vector<std::vector<Generator>> frontier{{}};
  std::vector<std::uint64_t> counts{1};
  for (int r = 1; r <= R; ++r) {
    std::vector<std::vector<Generator>> next;
    for (const auto& w : frontier) {
      for (Generator s = 0; s < 3; ++s) {
        auto w2 = w;
        w2.push_back(s);
        if (seen.insert(lamplighter_oracle(w2)).second) next.push_back(w2);
      }
    }
    counts.push_back(counts.back() + next.size());
    frontier = std::move(next);
  }
  EXPECT_EQ(growth_table(make_model("lamplighter"), R).values, counts);
}

TEST(Growth, PrefixStability) {
  for (auto name : {"Z2", "H3", "F2", "lamplighter"}) {
    auto big = enumerate_ball(make_model(name), 6);
    for (int r = 0; r < 6; ++r) {
      auto small = enumerate_ball(make_model(name), r);
      ASSERT_EQ(big->count_within(r), small->size());
      for (std::size_t v = 0; v < small->size(); ++v) {
        EXPECT_EQ(big->key(v), small->key(v));
        EXPECT_EQ(big->norm(v), small->norm(v));
      }
    }
  }
}

TEST(Growth, EdgesAreCayleyEdges) {
  for (auto name : {"Z2", "H3", "F2", "lamplighter", "Dinf", "C2", "C7"}) {
    auto ball = enumerate_ball(make_model(name), 5);
    const auto& model = ball->model();
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    Element tmp;
    for (const auto& e : ball->edges()) {
      model.multiply(ball->element(e.u), static_cast<Generator>(e.generator), tmp);
      EXPECT_EQ(ball->find(tmp), static_cast<std::size_t>(e.v));
      EXPECT_LE(std::abs(ball->norm(e.u) - ball->norm(e.v)), 1);
      EXPECT_TRUE(seen.insert(std::minmax(e.u, e.v)).second) << name << ": duplicate edge";
    }
    // every in-ball neighbor pair is an edge
    std::size_t incident = 0;
    for (std::size_t v = 0; v < ball->size(); ++v)
      for (auto w : ball->neighbors(v))
        if (w >= 0 && static_cast<std::size_t>(w) != v) ++incident;
    EXPECT_EQ(incident, 2 * seen.size()) << name;
  }
}

TEST(Growth, BudgetIsEnforced) {
  EXPECT_THROW(enumerate_ball(make_model("F2"), 12, 1000), BudgetExceeded);
  EXPECT_NO_THROW(enumerate_ball(make_model("F2"), 5, 1000));
}

TEST(DegreeEstimate, KnownGroups) {
  EXPECT_EQ(degree_estimate(growth_table(make_model("Z"), 10)).degree, 1);
  EXPECT_EQ(degree_estimate(growth_table(make_model("Z2"), 10)).degree, 2);
  EXPECT_EQ(degree_estimate(growth_table(make_model("Z3"), 10)).degree, 3);
  EXPECT_EQ(degree_estimate(growth_table(make_model("H3"), 10)).degree, 4);
  EXPECT_FALSE(degree_estimate(growth_table(make_model("F2"), 8), 1.25, 6).degree.has_value());
}

TEST(DegreeEstimate, NeedsData) {
  EXPECT_THROW(degree_estimate(growth_table(make_model("Z"), 2)), InsufficientData);
}
