#pragma once

#include <span>
#include <vector>

#include "polygrowth/cayley.hpp"
#include "polygrowth/kernels.hpp"

namespace polygrowth {

/**
 * The edges "contained in" a ball B(x, R) of the Cayley 1-complex: both
 * endpoints at distance <= R from the center and at least one at distance
 * <= R-1.  Every edge has length 1, so the measure of the domain is the edge
 * count.
 */
class EdgeDomain {
 public:
  /// Domain of B(e, R) inside `ball`; requires R <= ball.radius().
  EdgeDomain(const BallComplex& ball, int radius);
  /// Domain of a ball whose center distances are given per vertex (-1 = far).
  EdgeDomain(const BallComplex& ball, std::span<const std::int32_t> distance, int radius);

  int radius() const { return radius_; }
  std::span<const EdgeEndpoints> edges() const { return edges_; }
  std::size_t total_length() const { return edges_.size(); }
  const BallComplex* ball() const { return ball_; }

 private:
  const BallComplex* ball_;
  int radius_;
  std::vector<EdgeEndpoints> edges_;
};

/// Vertex values with edge-linear interpolation.
struct EdgeFunction {
  BallPtr ball;
  std::vector<double> values;

  EdgeFunction() = default;
  EdgeFunction(BallPtr b, std::vector<double> v);
  /// Constant function c on `b`.
  EdgeFunction(BallPtr b, double c);
};

double dirichlet_energy(const EdgeFunction& f, const EdgeDomain& domain);
double l2_integral(const EdgeFunction& f, double c, const EdgeDomain& domain);
/// Exact mean of the interpolant against edge length; raises on empty domains.
double average(const EdgeFunction& f, const EdgeDomain& domain);

/// Max over vertices of norm < `interior_radius` of |sum_s (f(v s) - f(v))|.
double harmonic_residual(const EdgeFunction& f, int interior_radius);
/// Same for an arbitrary subset of vertices.
double harmonic_residual(const EdgeFunction& f, std::span<const std::size_t> vertices);

}  // namespace polygrowth
