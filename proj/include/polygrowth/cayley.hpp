#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polygrowth {

using Coord = std::int32_t;
/// Canonical normal form of a group element; its meaning is model specific.
using Element = std::vector<Coord>;
using ElementView = std::span<const Coord>;
using Generator = std::size_t;

inline constexpr std::size_t kDefaultVertexBudget = 5'000'000;

/**
 * A finitely generated group with an exact normal form and a fixed symmetric
 * generating set S.  Generators are numbered 0..|S|-1, S excludes the identity
 * and is closed under inverses (an involution is its own inverse).
 *
 * Right multiplication by a generator is the only group operation needed.
 */
class GroupModel {
 public:
  virtual ~GroupModel() = default;

  /// Stable textual id, e.g. "Z2", "H3", "F2"; parseable by make_model().
  virtual std::string descriptor() const = 0;
  virtual std::size_t generator_count() const = 0;
  virtual Generator inverse(Generator s) const = 0;
  virtual std::string generator_name(Generator s) const = 0;

  virtual Element identity() const = 0;
  /// out <- g * s.  `out` must not alias `g`.
  virtual void multiply(ElementView g, Generator s, Element& out) const = 0;

  /// Printable canonical key: no whitespace, never empty.
  virtual std::string key(ElementView g) const = 0;
  virtual Element parse_key(std::string_view key) const = 0;

  /// Number of real "coordinate-like" functions (abelianization coordinates).
  virtual std::size_t coordinate_count() const = 0;
  virtual double coordinate(ElementView g, std::size_t index) const = 0;

  /// Lattice rank when the model is Z^d (elements equal their coordinates).
  virtual std::optional<int> lattice_dimension() const { return std::nullopt; }

  Element evaluate(std::span<const Generator> word) const;
  /// Canonical byte key of the element represented by `word`.
  std::string canonicalize(std::span<const Generator> word) const;
  bool is_involution(Generator s) const { return inverse(s) == s; }
};

using ModelPtr = std::shared_ptr<const GroupModel>;

/// Builds a model from its descriptor.  Accepted: Z, Z<d>, H3, F<k>,
/// lamplighter, Dinf, C<k>.  Unknown names raise InvalidArgument listing
/// supported_models().
ModelPtr make_model(std::string_view name);
std::vector<std::string> supported_models();

struct Edge {
  std::int32_t u;
  std::int32_t v;
  std::int32_t generator;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * The radius-R ball of the Cayley graph viewed as a 1-complex.
 *
 * Vertices are stored in BFS order (generator index as tiebreak), so the first
 * V(r) vertices form the radius-r ball for every r <= R.  Immutable once built.
 */
class BallComplex {
 public:
  BallComplex(ModelPtr model, int radius, std::vector<Coord> arena,
              std::vector<std::uint32_t> offsets, std::vector<std::int32_t> norms,
              std::vector<Edge> edges);

  const GroupModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  int radius() const { return radius_; }
  std::size_t size() const { return norms_.size(); }
  std::size_t generator_count() const { return generators_; }

  ElementView element(std::size_t v) const {
    return {arena_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::int32_t norm(std::size_t v) const { return norms_[v]; }
  std::span<const std::int32_t> norms() const { return norms_; }
  std::span<const Edge> edges() const { return edges_; }

  /// Index of v*s, or -1 when v*s lies outside the ball.
  std::int32_t neighbor(std::size_t v, Generator s) const {
    return neighbors_[v * generators_ + s];
  }
  std::span<const std::int32_t> neighbors(std::size_t v) const {
    return {neighbors_.data() + v * generators_, generators_};
  }

  std::optional<std::size_t> find(ElementView g) const;
  /// Number of vertices of norm <= r (r clamped to the ball radius).
  std::size_t count_within(int r) const;
  std::string key(std::size_t v) const { return model_->key(element(v)); }

  /// Exact structural equality (model descriptor, vertices, norms, edges).
  bool same_as(const BallComplex& other) const;

 private:
  void build_index();

  ModelPtr model_;
  int radius_;
  std::size_t generators_;
  std::vector<Coord> arena_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::int32_t> norms_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> neighbors_;
  std::vector<std::uint32_t> table_;  // open addressing, stores index + 1
};

using BallPtr = std::shared_ptr<const BallComplex>;

/// Breadth-first enumeration of B(R).  Raises BudgetExceeded once more than
/// `budget` vertices would be needed.
BallPtr enumerate_ball(ModelPtr model, int radius, std::size_t budget = kDefaultVertexBudget);

struct GrowthTable {
  std::vector<std::uint64_t> values;  // values[r] = V(r)

  int max_radius() const { return static_cast<int>(values.size()) - 1; }
  std::uint64_t operator()(int r) const { return values.at(static_cast<std::size_t>(r)); }
  /// |S_G(r)| = V(r) - V(r-1), with |S_G(0)| = 1.
  std::uint64_t sphere(int r) const { return r == 0 ? values.at(0) : values.at(r) - values.at(r - 1); }
};

GrowthTable growth_table(const BallComplex& ball);
GrowthTable growth_table(ModelPtr model, int max_radius, std::size_t budget = kDefaultVertexBudget);

struct DegreeEstimate {
  /// Least d whose normalized ratio V(r)/r^d stops growing over the top half
  /// of the table; empty when no d <= max_degree qualifies.
  std::optional<int> degree;
  double slope = 0.0;  // least-squares slope of log V against log r (top half)
  std::vector<double> growth_statistic;  // per candidate d, see degree_estimate()
};

/**
 * For each candidate d, the statistic is
 *   (V(r_max)/r_max^d) / min_{r in top half} (V(r)/r^d),
 * which is 1 when the ratio is nonincreasing and about 2^{deg-d} when d is too
 * small.  The degree is the least d with statistic <= threshold.
 */
DegreeEstimate degree_estimate(const GrowthTable& table, double threshold = 1.25, int max_degree = 12);

}  // namespace polygrowth
