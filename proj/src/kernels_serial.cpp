#include <algorithm>

#include "polygrowth/kernels.hpp"

namespace polygrowth::kernels::serial {

double dirichlet(std::span<const EdgeEndpoints> edges, std::span<const double> f) {
  double sum = 0.0;
  for (const auto& e : edges) {
    double d = f[e.v] - f[e.u];
    sum += d * d;
  }
  return sum;
}

double l2_deviation(std::span<const EdgeEndpoints> edges, std::span<const double> f, double c) {
  double sum = 0.0;
  for (const auto& e : edges) {
    double a = f[e.u] - c;
    double b = f[e.v] - c;
    sum += (a * a + a * b + b * b) / 3.0;
  }
  return sum;
}

double midpoint_sum(std::span<const EdgeEndpoints> edges, std::span<const double> f) {
  double sum = 0.0;
  for (const auto& e : edges) sum += 0.5 * (f[e.u] + f[e.v]);
  return sum;
}

void gram(std::span<const EdgeEndpoints> edges, std::span<const double> columns, std::size_t stride,
          std::size_t k, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& e : edges) {
    for (std::size_t i = 0; i < k; ++i) {
      double ai = columns[i * stride + e.u];
      double bi = columns[i * stride + e.v];
      for (std::size_t j = i; j < k; ++j) {
        double aj = columns[j * stride + e.u];
        double bj = columns[j * stride + e.v];
        out[i * k + j] += (2 * ai * aj + 2 * bi * bj + ai * bj + aj * bi) / 6.0;
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j) out[i * k + j] = out[j * k + i];
}

}  // namespace polygrowth::kernels::serial
