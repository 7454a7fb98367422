#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>

#include "polygrowth/cayley.hpp"
#include "polygrowth/error.hpp"

namespace polygrowth {

namespace {

std::uint64_t hash_element(ElementView g) {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ g.size();
  for (auto c : g) {
    h ^= static_cast<std::uint32_t>(c);
    h *= 0xFF51AFD7ED558CCDULL;
    h ^= h >> 32;
  }
  return h;
}

bool equal(ElementView a, ElementView b) { return std::ranges::equal(a, b); }

// Open-addressing set of element indices over a growing arena.
class ElementIndex {
 public:
  ElementIndex() { table_.assign(1024, 0); }

  std::optional<std::size_t> find(ElementView g, const std::vector<Coord>& arena,
                                  const std::vector<std::uint32_t>& offsets) const {
    std::size_t mask = table_.size() - 1;
    for (std::size_t slot = hash_element(g) & mask;; slot = (slot + 1) & mask) {
      auto entry = table_[slot];
      if (entry == 0) return std::nullopt;
      std::size_t idx = entry - 1;
      ElementView stored{arena.data() + offsets[idx], offsets[idx + 1] - offsets[idx]};
      if (equal(stored, g)) return idx;
    }
  }

  void insert(ElementView g, std::size_t idx, const std::vector<Coord>& arena,
              const std::vector<std::uint32_t>& offsets) {
    if (2 * (count_ + 1) > table_.size()) rehash(arena, offsets);
    place(hash_element(g), idx);
    ++count_;
  }

  std::vector<std::uint32_t> release() { return std::move(table_); }

 private:
  void place(std::uint64_t h, std::size_t idx) {
    std::size_t mask = table_.size() - 1;
    std::size_t slot = h & mask;
    while (table_[slot] != 0) slot = (slot + 1) & mask;
    table_[slot] = static_cast<std::uint32_t>(idx + 1);
  }

  void rehash(const std::vector<Coord>& arena, const std::vector<std::uint32_t>& offsets) {
    std::vector<std::uint32_t> old = std::move(table_);
    table_.assign(old.size() * 2, 0);
    for (auto entry : old) {
      if (entry == 0) continue;
      std::size_t idx = entry - 1;
      ElementView g{arena.data() + offsets[idx], offsets[idx + 1] - offsets[idx]};
      place(hash_element(g), idx);
    }
  }

  std::vector<std::uint32_t> table_;
  std::size_t count_ = 0;
};

}  // namespace

BallComplex::BallComplex(ModelPtr model, int radius, std::vector<Coord> arena,
                         std::vector<std::uint32_t> offsets, std::vector<std::int32_t> norms,
                         std::vector<Edge> edges)
    : model_(std::move(model)),
      radius_(radius),
      generators_(model_->generator_count()),
      arena_(std::move(arena)),
      offsets_(std::move(offsets)),
      norms_(std::move(norms)),
      edges_(std::move(edges)) {
  if (offsets_.size() != norms_.size() + 1) throw InvalidArgument("ball offsets do not match vertex count");
  neighbors_.assign(norms_.size() * generators_, -1);
  for (const auto& e : edges_) {
    auto s = static_cast<Generator>(e.generator);
    if (s >= generators_ || e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= size() ||
        static_cast<std::size_t>(e.v) >= size())
      throw InvalidArgument("edge references unknown vertex or generator");
    neighbors_[static_cast<std::size_t>(e.u) * generators_ + s] = e.v;
    neighbors_[static_cast<std::size_t>(e.v) * generators_ + model_->inverse(s)] = e.u;
  }
  build_index();
}

void BallComplex::build_index() {
  std::size_t cap = std::bit_ceil(std::max<std::size_t>(16, 2 * size() + 2));
  table_.assign(cap, 0);
  for (std::size_t v = 0; v < size(); ++v) {
    std::size_t slot = hash_element(element(v)) & (cap - 1);
    while (table_[slot] != 0) slot = (slot + 1) & (cap - 1);
    table_[slot] = static_cast<std::uint32_t>(v + 1);
  }
}

std::optional<std::size_t> BallComplex::find(ElementView g) const {
  std::size_t mask = table_.size() - 1;
  for (std::size_t slot = hash_element(g) & mask;; slot = (slot + 1) & mask) {
    auto entry = table_[slot];
    if (entry == 0) return std::nullopt;
    if (equal(element(entry - 1), g)) return entry - 1;
  }
}

std::size_t BallComplex::count_within(int r) const {
  if (r < 0) return 0;
  // norms are nondecreasing in BFS order
  auto it = std::upper_bound(norms_.begin(), norms_.end(), r);
  return static_cast<std::size_t>(it - norms_.begin());
}

bool BallComplex::same_as(const BallComplex& other) const {
  return model_->descriptor() == other.model_->descriptor() && radius_ == other.radius_ &&
         arena_ == other.arena_ && offsets_ == other.offsets_ && norms_ == other.norms_ &&
         edges_ == other.edges_;
}

BallPtr enumerate_ball(ModelPtr model, int radius, std::size_t budget) {
  if (!model) throw InvalidArgument("null group model");
  if (radius < 0) throw InvalidArgument("ball radius must be nonnegative");
  const std::size_t gens = model->generator_count();

  std::vector<Coord> arena;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::int32_t> norms;
  std::vector<std::int32_t> nbr;  // provisional neighbor table, filled during BFS
  ElementIndex index;

  auto push = [&](ElementView g, std::int32_t norm) {
    if (norms.size() >= budget)
      throw BudgetExceeded("ball of radius " + std::to_string(radius) + " in " + model->descriptor() +
                           " exceeds the vertex budget of " + std::to_string(budget));
    std::size_t idx = norms.size();
    arena.insert(arena.end(), g.begin(), g.end());
    offsets.push_back(static_cast<std::uint32_t>(arena.size()));
    norms.push_back(norm);
    nbr.resize(nbr.size() + gens, -1);
    index.insert(g, idx, arena, offsets);
    return idx;
  };

  push(model->identity(), 0);
  Element current;
  Element next;
  for (std::size_t v = 0; v < norms.size(); ++v) {
    current.assign(arena.begin() + offsets[v], arena.begin() + offsets[v + 1]);
    for (Generator s = 0; s < gens; ++s) {
      model->multiply(current, s, next);
      auto found = index.find(next, arena, offsets);
      if (found) {
        nbr[v * gens + s] = static_cast<std::int32_t>(*found);
      } else if (norms[v] < radius) {
        nbr[v * gens + s] = static_cast<std::int32_t>(push(next, norms[v] + 1));
      }
    }
  }

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < norms.size(); ++u) {
    for (Generator s = 0; s < gens; ++s) {
      auto inv = model->inverse(s);
      if (inv < s) continue;  // one edge per {s, s^-1}
      auto v = nbr[u * gens + s];
      if (v < 0) continue;
      if (inv == s && static_cast<std::size_t>(v) < u) continue;
      edges.push_back({static_cast<std::int32_t>(u), v, static_cast<std::int32_t>(s)});
    }
  }

  return std::make_shared<const BallComplex>(std::move(model), radius, std::move(arena),
                                             std::move(offsets), std::move(norms), std::move(edges));
}

GrowthTable growth_table(const BallComplex& ball) {
  GrowthTable table;
  table.values.assign(static_cast<std::size_t>(ball.radius()) + 1, 0);
  for (auto n : ball.norms()) ++table.values[static_cast<std::size_t>(n)];
  std::partial_sum(table.values.begin(), table.values.end(), table.values.begin());
  return table;
}

GrowthTable growth_table(ModelPtr model, int max_radius, std::size_t budget) {
  return growth_table(*enumerate_ball(std::move(model), max_radius, budget));
}

DegreeEstimate degree_estimate(const GrowthTable& table, double threshold, int max_degree) {
  if (table.values.size() < 4) throw InsufficientData("degree estimate needs at least 4 table entries");
  const int r_max = table.max_radius();
  const int r_lo = std::max(1, (r_max + 1) / 2);

  DegreeEstimate out;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int r = r_lo; r <= r_max; ++r) {
      double x = std::log(static_cast<double>(r));
      double y = std::log(static_cast<double>(table(r)));
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++n;
    }
    double denom = n * sxx - sx * sx;
    out.slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
  }

  for (int d = 0; d <= max_degree; ++d) {
    // log(V(r)/r^d) avoids overflow for large d
    auto log_ratio = [&](int r) {
      return std::log(static_cast<double>(table(r))) - d * std::log(static_cast<double>(r));
    };
    double min_log = log_ratio(r_lo);
    for (int r = r_lo; r <= r_max; ++r) min_log = std::min(min_log, log_ratio(r));
    double statistic = std::exp(log_ratio(r_max) - min_log);
    out.growth_statistic.push_back(statistic);
    if (!out.degree && statistic <= threshold) out.degree = d;
  }
  return out;
}

}  // namespace polygrowth
