#pragma once

#include <cstdint>
#include <string>

#include "polygrowth/measure.hpp"

namespace polygrowth {

inline constexpr double kPoincareTolerance = 1e-9;

/// One evaluation of  int_{B(R)} |f - f_R|^2 <= 8|S|^2 R^2 V(2R)/V(R) int_{B(3R)} |grad f|^2.
struct PoincareReport {
  int radius = 0;
  double lhs = 0.0;
  double grad = 0.0;
  double constant = 0.0;
  double ratio = 0.0;  // lhs / (constant * grad); 0 when both sides vanish
  bool satisfied = true;
};

/// 8 |S|^2 R^2 V(2R) / V(R) for the ball's group.
double poincare_constant(const BallComplex& ball, int radius);

/// Requires f on a ball of radius >= 3R and R >= 1.
PoincareReport verify_poincare(const EdgeFunction& f, int radius);

enum class TrialKind { Random, Coordinate, Indicator, Signs, Norm, Constant };
std::string to_string(TrialKind kind);

struct TrialSet {
  std::size_t random = 0;    // i.i.d. uniform(-1, 1) vertex values
  bool adversarial = true;   // coordinate, identity indicator, +-1 signs, norm
  bool constant = false;
};

struct WorstCase {
  double max_ratio = 0.0;
  std::uint64_t function_hash = 0;  // FNV-1a of the arg-max vertex values
  TrialKind kind = TrialKind::Constant;
  std::size_t trial = 0;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
};

/// Builds the vertex values of one trial function; deterministic in (seed, trial).
std::vector<double> trial_function(const BallComplex& ball, TrialKind kind, std::uint64_t seed,
                                   std::size_t trial);

/// Stress sweep over the trial set on `ball` (radius >= 3R).  Trials run in
/// parallel; ties in the maximum go to the lowest trial index.
WorstCase worst_case_ratio(const BallPtr& ball, int radius, const TrialSet& trials, std::uint64_t seed);

/// R2^2 * int_{B(2R2)} |grad v|^2 / Q_{16 R2}(v, v) for v harmonic on the interior of
/// its ball (radius >= 16 R2).  Empirical only.
double reverse_poincare_constant(const EdgeFunction& v, int r2);

std::uint64_t hash_values(std::span<const double> values);

}  // namespace polygrowth
