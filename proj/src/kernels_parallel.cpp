#include <algorithm>
#include <vector>

#include "polygrowth/kernels.hpp"

namespace polygrowth::kernels::parallel {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlockEdges - 1) / kBlockEdges; }

// Per-block partials in parallel, then an ordered sum.
template <class BlockFn>
double blocked_sum(std::span<const EdgeEndpoints> edges, BlockFn&& block_fn) {
  const std::size_t blocks = block_count(edges.size());
  if (blocks <= 1) return block_fn(edges);
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    auto first = static_cast<std::size_t>(b) * kBlockEdges;
    partial[static_cast<std::size_t>(b)] =
        block_fn(edges.subspan(first, std::min(kBlockEdges, edges.size() - first)));
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

}  // namespace

double dirichlet(std::span<const EdgeEndpoints> edges, std::span<const double> f) {
  return blocked_sum(edges, [&](std::span<const EdgeEndpoints> block) {
    double sum = 0.0;
    for (const auto& e : block) {
      double d = f[e.v] - f[e.u];
      sum += d * d;
    }
    return sum;
  });
}

double l2_deviation(std::span<const EdgeEndpoints> edges, std::span<const double> f, double c) {
  return blocked_sum(edges, [&](std::span<const EdgeEndpoints> block) {
    double sum = 0.0;
    for (const auto& e : block) {
      double a = f[e.u] - c;
      double b = f[e.v] - c;
      sum += (a * a + a * b + b * b) / 3.0;
    }
    return sum;
  });
}

double midpoint_sum(std::span<const EdgeEndpoints> edges, std::span<const double> f) {
  return blocked_sum(edges, [&](std::span<const EdgeEndpoints> block) {
    double sum = 0.0;
    for (const auto& e : block) sum += 0.5 * (f[e.u] + f[e.v]);
    return sum;
  });
}

void gram(std::span<const EdgeEndpoints> edges, std::span<const double> columns, std::size_t stride,
          std::size_t k, std::span<double> out) {
  const std::size_t blocks = std::max<std::size_t>(1, block_count(edges.size()));
  const std::size_t kk = k * k;
  std::vector<double> partial(blocks * kk, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    auto first = static_cast<std::size_t>(b) * kBlockEdges;
    auto last = std::min(edges.size(), first + kBlockEdges);
    double* acc = partial.data() + static_cast<std::size_t>(b) * kk;
    for (std::size_t n = first; n < last; ++n) {
      const auto& e = edges[n];
      for (std::size_t i = 0; i < k; ++i) {
        double ai = columns[i * stride + e.u];
        double bi = columns[i * stride + e.v];
        for (std::size_t j = i; j < k; ++j) {
          double aj = columns[j * stride + e.u];
          double bj = columns[j * stride + e.v];
          acc[i * k + j] += (2 * ai * aj + 2 * bi * bj + ai * bj + aj * bi) / 6.0;
        }
      }
    }
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t n = 0; n < kk; ++n) out[n] += partial[b * kk + n];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j) out[i * k + j] = out[j * k + i];
}

}  // namespace polygrowth::kernels::parallel
