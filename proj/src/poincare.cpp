#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "polygrowth/error.hpp"
#include "polygrowth/poincare.hpp"

namespace polygrowth {

namespace {

PoincareReport make_report(int radius, double lhs, double grad, double constant) {
  PoincareReport r;
  r.radius = radius;
  r.lhs = lhs;
  r.grad = grad;
  r.constant = constant;
  double rhs = constant * grad;
  if (rhs > 0)
    r.ratio = lhs / rhs;
  else
    r.ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  r.satisfied = lhs <= rhs + kPoincareTolerance * std::max(1.0, lhs);
  return r;
}

void require_ball(const BallComplex& ball, int radius) {
  if (radius < 1) throw InvalidArgument("Poincare radius must be >= 1");
  if (ball.radius() < 3 * radius)
    throw DomainMismatch("Poincare check at R=" + std::to_string(radius) + " needs a ball of radius " +
                         std::to_string(3 * radius) + ", have " + std::to_string(ball.radius()));
}

}  // namespace

std::string to_string(TrialKind kind) {
  switch (kind) {
    case TrialKind::Random: return "random";
    case TrialKind::Coordinate: return "coordinate";
    case TrialKind::Indicator: return "indicator";
    case TrialKind::Signs: return "signs";
    case TrialKind::Norm: return "norm";
    case TrialKind::Constant: return "constant";
  }
  return "unknown";
}

double poincare_constant(const BallComplex& ball, int radius) {
  if (ball.radius() < 2 * radius) throw DomainMismatch("Poincare constant needs V(2R)");
  double s = static_cast<double>(ball.generator_count());
  double r = radius;
  return 8.0 * s * s * r * r * static_cast<double>(ball.count_within(2 * radius)) /
         static_cast<double>(ball.count_within(radius));
}

PoincareReport verify_poincare(const EdgeFunction& f, int radius) {
  require_ball(*f.ball, radius);
  EdgeDomain inner(*f.ball, radius);
  EdgeDomain outer(*f.ball, 3 * radius);
  double mean = average(f, inner);
  return make_report(radius, l2_integral(f, mean, inner), dirichlet_energy(f, outer),
                     poincare_constant(*f.ball, radius));
}

std::uint64_t hash_values(std::span<const double> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double x : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::vector<double> trial_function(const BallComplex& ball, TrialKind kind, std::uint64_t seed,
                                   std::size_t trial) {
  std::vector<double> f(ball.size(), 0.0);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(kind)};
  std::mt19937_64 rng(seq);
  switch (kind) {
    case TrialKind::Random: {
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (auto& x : f) x = dist(rng);
      break;
    }
    case TrialKind::Signs: {
      std::bernoulli_distribution coin(0.5);
      for (auto& x : f) x = coin(rng) ? 1.0 : -1.0;
      break;
    }
    case TrialKind::Coordinate:
      for (std::size_t v = 0; v < ball.size(); ++v) f[v] = ball.model().coordinate(ball.element(v), 0);
      break;
    case TrialKind::Indicator:
      f[0] = 1.0;  // identity vertex is first in BFS order
      break;
    case TrialKind::Norm:
      for (std::size_t v = 0; v < ball.size(); ++v) f[v] = ball.norm(v);
      break;
    case TrialKind::Constant:
      std::fill(f.begin(), f.end(), 1.0);
      break;
  }
  return f;
}

WorstCase worst_case_ratio(const BallPtr& ball, int radius, const TrialSet& trials, std::uint64_t seed) {
  require_ball(*ball, radius);
  std::vector<TrialKind> plan(trials.random, TrialKind::Random);
  if (trials.adversarial)
    for (auto k : {TrialKind::Coordinate, TrialKind::Indicator, TrialKind::Signs, TrialKind::Norm})
      plan.push_back(k);
  if (trials.constant) plan.push_back(TrialKind::Constant);
  if (plan.empty()) throw InvalidArgument("empty Poincare trial set");

  const EdgeDomain inner(*ball, radius);
  const EdgeDomain outer(*ball, 3 * radius);
  const double constant = poincare_constant(*ball, radius);
  const double length = static_cast<double>(inner.total_length());

  std::vector<PoincareReport> reports(plan.size());
  const auto n = static_cast<std::ptrdiff_t>(plan.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    auto idx = static_cast<std::size_t>(t);
    auto f = trial_function(*ball, plan[idx], seed, idx);
    double mean = kernels::serial::midpoint_sum(inner.edges(), f) / length;
    reports[idx] = make_report(radius, kernels::serial::l2_deviation(inner.edges(), f, mean),
                               kernels::serial::dirichlet(outer.edges(), f), constant);
  }

  WorstCase worst;
  worst.evaluated = plan.size();
  bool first = true;
  for (std::size_t t = 0; t < plan.size(); ++t) {
    if (!reports[t].satisfied) ++worst.violations;
    if (first || reports[t].ratio > worst.max_ratio) {
      first = false;
      worst.max_ratio = reports[t].ratio;
      worst.trial = t;
      worst.kind = plan[t];
    }
  }
  worst.function_hash = hash_values(trial_function(*ball, worst.kind, seed, worst.trial));
  return worst;
}

double reverse_poincare_constant(const EdgeFunction& v, int r2) {
  if (r2 < 1) throw InvalidArgument("reverse Poincare radius must be >= 1");
  const auto& ball = *v.ball;
  if (ball.radius() < 16 * r2)
    throw DomainMismatch("reverse Poincare at R2=" + std::to_string(r2) + " needs a ball of radius " +
                         std::to_string(16 * r2));
  double scale = 1.0;
  for (double x : v.values) scale = std::max(scale, std::abs(x));
  if (harmonic_residual(v, ball.radius()) > 1e-8 * scale)
    throw InvalidArgument("reverse Poincare needs a function harmonic on the ball interior");
  EdgeDomain grad_domain(ball, 2 * r2);
  EdgeDomain mass_domain(ball, 16 * r2);
  double q = l2_integral(v, 0.0, mass_domain);
  if (q == 0.0) throw InvalidArgument("reverse Poincare constant undefined for v = 0");
  return static_cast<double>(r2) * r2 * dirichlet_energy(v, grad_domain) / q;
}

}  // namespace polygrowth
