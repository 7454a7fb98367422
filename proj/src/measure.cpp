#include <algorithm>
#include <cmath>

#include "polygrowth/error.hpp"
#include "polygrowth/measure.hpp"

namespace polygrowth {

namespace {

void check(const EdgeFunction& f, const EdgeDomain& domain) {
  if (!f.ball || f.ball.get() != domain.ball())
    throw DomainMismatch("edge function and edge domain live on different balls");
}

bool inside(std::int32_t du, std::int32_t dv, int radius) {
  return du >= 0 && dv >= 0 && du <= radius && dv <= radius && std::min(du, dv) <= radius - 1;
}

}  // namespace

EdgeDomain::EdgeDomain(const BallComplex& ball, int radius) : ball_(&ball), radius_(radius) {
  if (radius < 0 || radius > ball.radius())
    throw DomainMismatch("edge domain radius " + std::to_string(radius) + " exceeds ball radius " +
                         std::to_string(ball.radius()));
  for (const auto& e : ball.edges())
    if (inside(ball.norm(e.u), ball.norm(e.v), radius)) edges_.push_back({e.u, e.v});
}

EdgeDomain::EdgeDomain(const BallComplex& ball, std::span<const std::int32_t> distance, int radius)
    : ball_(&ball), radius_(radius) {
  if (distance.size() != ball.size()) throw DomainMismatch("distance array does not match ball size");
  for (const auto& e : ball.edges())
    if (inside(distance[e.u], distance[e.v], radius)) edges_.push_back({e.u, e.v});
}

EdgeFunction::EdgeFunction(BallPtr b, std::vector<double> v) : ball(std::move(b)), values(std::move(v)) {
  if (!ball) throw InvalidArgument("edge function needs a ball");
  if (values.size() != ball->size()) throw DomainMismatch("edge function needs one value per vertex");
  for (double x : values)
    if (!std::isfinite(x)) throw InvalidArgument("edge function values must be finite");
}

EdgeFunction::EdgeFunction(BallPtr b, double c) : ball(std::move(b)) {
  if (!ball) throw InvalidArgument("edge function needs a ball");
  values.assign(ball->size(), c);
}

double dirichlet_energy(const EdgeFunction& f, const EdgeDomain& domain) {
  check(f, domain);
  return kernels::parallel::dirichlet(domain.edges(), f.values);
}

double l2_integral(const EdgeFunction& f, double c, const EdgeDomain& domain) {
  check(f, domain);
  return kernels::parallel::l2_deviation(domain.edges(), f.values, c);
}

double average(const EdgeFunction& f, const EdgeDomain& domain) {
  check(f, domain);
  if (domain.total_length() == 0) throw InvalidArgument("average over an empty edge domain");
  return kernels::parallel::midpoint_sum(domain.edges(), f.values) /
         static_cast<double>(domain.total_length());
}

double harmonic_residual(const EdgeFunction& f, std::span<const std::size_t> vertices) {
  const auto& ball = *f.ball;
  double worst = 0.0;
  for (auto v : vertices) {
    double sum = 0.0;
    for (auto w : ball.neighbors(v)) {
      if (w < 0) throw DomainMismatch("harmonic residual requested at a vertex with missing neighbors");
      sum += f.values[w] - f.values[v];
    }
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

double harmonic_residual(const EdgeFunction& f, int interior_radius) {
  std::vector<std::size_t> interior(f.ball->count_within(interior_radius - 1));
  for (std::size_t v = 0; v < interior.size(); ++v) interior[v] = v;
  return harmonic_residual(f, interior);
}

}  // namespace polygrowth
