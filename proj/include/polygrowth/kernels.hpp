#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace polygrowth {

struct EdgeEndpoints {
  std::int32_t u;
  std::int32_t v;
};

/**
 * Edge-integral kernels over a list of unit edges carrying linearly
 * interpolated vertex values.
 *
 * `serial` is the straightforward reference loop.  `parallel` splits the edge
 * list into fixed-size blocks, reduces each block under OpenMP and then adds
 * the block partials in order, so its result does not depend on the thread
 * count.  The public measure/harmonic functions call `parallel`.
 */
namespace kernels {

inline constexpr std::size_t kBlockEdges = 4096;

namespace serial {
/// sum (f(v) - f(u))^2
double dirichlet(std::span<const EdgeEndpoints> edges, std::span<const double> f);
/// sum (A^2 + AB + B^2)/3 with A = f(u)-c, B = f(v)-c
double l2_deviation(std::span<const EdgeEndpoints> edges, std::span<const double> f, double c);
/// sum (f(u) + f(v))/2
double midpoint_sum(std::span<const EdgeEndpoints> edges, std::span<const double> f);
/// out[i*k+j] = sum over edges of the exact product integral of columns i and j.
/// `columns` is column-major with leading dimension `stride` (>= vertex count).
void gram(std::span<const EdgeEndpoints> edges, std::span<const double> columns, std::size_t stride,
          std::size_t k, std::span<double> out);
}  // namespace serial

namespace parallel {
double dirichlet(std::span<const EdgeEndpoints> edges, std::span<const double> f);
double l2_deviation(std::span<const EdgeEndpoints> edges, std::span<const double> f, double c);
double midpoint_sum(std::span<const EdgeEndpoints> edges, std::span<const double> f);
void gram(std::span<const EdgeEndpoints> edges, std::span<const double> columns, std::size_t stride,
          std::size_t k, std::span<double> out);
}  // namespace parallel

}  // namespace kernels
}  // namespace polygrowth
