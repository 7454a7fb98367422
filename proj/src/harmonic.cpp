#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "polygrowth/error.hpp"
#include "polygrowth/harmonic.hpp"

namespace polygrowth {

EdgeFunction solve_dirichlet(const BallPtr& ball, std::span<const double> boundary) {
  if (boundary.size() != ball->size()) throw DomainMismatch("boundary data needs one entry per vertex");
  const int r_out = ball->radius();
  const std::size_t interior = ball->count_within(r_out - 1);
  std::vector<double> values(boundary.begin(), boundary.end());
  if (interior == 0) return EdgeFunction(ball, std::move(values));
  if (interior == ball->size()) throw InvalidArgument("Dirichlet problem on a ball without boundary");

  const auto degree = static_cast<double>(ball->generator_count());
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(interior));
  for (std::size_t v = 0; v < interior; ++v) {
    const auto row = static_cast<Eigen::Index>(v);
    triplets.emplace_back(row, row, degree);
    for (auto w : ball->neighbors(v)) {
      if (static_cast<std::size_t>(w) < interior)
        triplets.emplace_back(row, static_cast<Eigen::Index>(w), -1.0);
      else
        rhs[row] += boundary[w];
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(interior), static_cast<Eigen::Index>(interior));
  a.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  // connected ball with nonempty boundary: the Dirichlet Laplacian is SPD
  if (solver.info() != Eigen::Success) throw Error("Dirichlet system is singular");
  Eigen::VectorXd x = solver.solve(rhs);
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd r = rhs - a * x;
    x += solver.solve(r);
  }
  for (std::size_t v = 0; v < interior; ++v) values[v] = x[static_cast<Eigen::Index>(v)];
  return EdgeFunction(ball, std::move(values));
}

MaximumPrincipleCheck check_maximum_principle(const EdgeFunction& f) {
  const auto& ball = *f.ball;
  const std::size_t interior = ball.count_within(ball.radius() - 1);
  MaximumPrincipleCheck c;
  c.interior_max = c.boundary_max = -std::numeric_limits<double>::infinity();
  c.interior_min = c.boundary_min = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < ball.size(); ++v) {
    double x = f.values[v];
    if (v < interior) {
      c.interior_max = std::max(c.interior_max, x);
      c.interior_min = std::min(c.interior_min, x);
    } else {
      c.boundary_max = std::max(c.boundary_max, x);
      c.boundary_min = std::min(c.boundary_min, x);
    }
  }
  double slack = 1e-12 * std::max({1.0, std::abs(c.boundary_max), std::abs(c.boundary_min)});
  c.holds = interior == 0 ||
            (c.interior_max <= c.boundary_max + slack && c.interior_min >= c.boundary_min - slack);
  return c;
}

double mean_value_defect(const EdgeFunction& f) {
  const auto& ball = *f.ball;
  const std::size_t interior = ball.count_within(ball.radius() - 1);
  const auto degree = static_cast<double>(ball.generator_count());
  double worst = 0.0;
  for (std::size_t v = 0; v < interior; ++v) {
    double sum = 0.0;
    for (auto w : ball.neighbors(v)) sum += f.values[w];
    worst = std::max(worst, std::abs(f.values[v] - sum / degree));
  }
  return worst;
}

HarmonicBasis dirichlet_harmonic_basis(const BallPtr& ball) {
  HarmonicBasis basis;
  basis.ball = ball;
  basis.functions.emplace_back(ball, 1.0);
  basis.labels.emplace_back("1");
  const auto& model = ball->model();
  for (std::size_t j = 0; j < model.coordinate_count(); ++j) {
    std::vector<double> boundary(ball->size());
    for (std::size_t v = 0; v < ball->size(); ++v) boundary[v] = model.coordinate(ball->element(v), j);
    basis.functions.push_back(solve_dirichlet(ball, boundary));
    basis.labels.push_back("dirichlet(coord" + std::to_string(j) + ")");
  }
  return basis;
}

namespace {

template <class Kernel>
GramForm assemble(const HarmonicBasis& basis, int radius, Kernel&& kernel) {
  if (radius > basis.ball->radius())
    throw DomainMismatch("Gram radius " + std::to_string(radius) + " exceeds basis ball radius " +
                         std::to_string(basis.ball->radius()));
  EdgeDomain domain(*basis.ball, radius);
  const std::size_t k = basis.size();
  const std::size_t stride = basis.ball->size();
  std::vector<double> columns(k * stride);
  for (std::size_t i = 0; i < k; ++i)
    std::copy(basis.functions[i].values.begin(), basis.functions[i].values.end(),
              columns.begin() + static_cast<std::ptrdiff_t>(i * stride));
  std::vector<double> out(k * k);
  kernel(domain.edges(), columns, stride, k, out);
  GramForm g;
  g.radius = radius;
  g.matrix = Eigen::Map<Eigen::MatrixXd>(out.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  return g;
}

}  // namespace

GramForm gram(const HarmonicBasis& basis, int radius) {
  return assemble(basis, radius, [](auto&&... args) { kernels::parallel::gram(args...); });
}

GramForm gram_serial(const HarmonicBasis& basis, int radius) {
  return assemble(basis, radius, [](auto&&... args) { kernels::serial::gram(args...); });
}

LogDeterminant log_determinant(const Eigen::MatrixXd& q) {
  LogDeterminant out;
  const auto k = q.rows();
  if (k == 0) {
    out.positive_definite = true;
    out.min_scaled_eigenvalue = 1.0;
    return out;
  }
  Eigen::VectorXd diag = q.diagonal();
  if ((diag.array() <= 0.0).any()) return out;
  Eigen::VectorXd scale = diag.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd scaled = scale.asDiagonal() * q * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled, Eigen::EigenvaluesOnly);
  const auto& lambda = eig.eigenvalues();
  out.min_scaled_eigenvalue = lambda.minCoeff();
  // scaled matrix has unit diagonal, so eigenvalues sum to k
  if (out.min_scaled_eigenvalue <= 1e-12 * static_cast<double>(k)) return out;
  out.positive_definite = true;
  out.log_det = lambda.array().log().sum() + diag.array().log().sum();
  return out;
}

const ScaleEntry* GrowthFunctional::find(int i) const {
  if (entries.empty() || i < first_index() || i > last_index()) return nullptr;
  return &entries[static_cast<std::size_t>(i - first_index())];
}

double GrowthFunctional::h(int i) const {
  const auto* e = find(i);
  if (!e) throw ExhaustedRange("h(" + std::to_string(i) + ") lies outside the computed range");
  if (!e->positive_definite) throw NotPositiveDefinite("h undefined: Q is not positive definite", i);
  return e->h;
}

GrowthFunctional growth_functional(const HarmonicBasis& basis, int base, int i_min, int i_max) {
  if (base < 2) throw InvalidArgument("growth functional base must be >= 2");
  if (i_min < 0 || i_max < i_min) throw InvalidArgument("invalid index range for growth functional");
  if (basis.size() == 0) throw InvalidArgument("growth functional needs a nonempty basis");
  GrowthFunctional out;
  out.base = base;
  out.dimension = basis.size();
  const double k = static_cast<double>(basis.size());
  for (int i = i_min; i <= i_max; ++i) {
    auto radius64 = checked_pow(base, i);
    if (radius64 > basis.ball->radius())
      throw DomainMismatch("growth functional needs radius " + std::to_string(radius64) +
                           " but the basis ball has radius " + std::to_string(basis.ball->radius()));
    ScaleEntry e;
    e.index = i;
    e.radius = static_cast<int>(radius64);
    e.volume = basis.ball->count_within(e.radius);
    auto ld = log_determinant(gram(basis, e.radius).matrix);
    e.positive_definite = ld.positive_definite;
    if (ld.positive_definite) {
      e.log_det = ld.log_det;
      e.h = std::log(static_cast<double>(e.volume)) + ld.log_det / k;
      if (!out.i0) out.i0 = i;
    } else if (out.i0) {
      throw NotPositiveDefinite("Gram form lost positive definiteness at i=" + std::to_string(i), i);
    } else {
      e.log_det = -std::numeric_limits<double>::infinity();
      e.h = -std::numeric_limits<double>::infinity();
    }
    out.entries.push_back(e);
  }
  if (!out.i0) throw NotPositiveDefinite("no positive definite Gram form in requested range", i_max);
  return out;
}

}  // namespace polygrowth
