#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "polygrowth/dimension.hpp"
#include "polygrowth/error.hpp"
#include "polygrowth/poincare.hpp"

namespace polygrowth {

namespace {

bool edge_inside(std::int32_t du, std::int32_t dv, int radius) {
  return du >= 0 && dv >= 0 && du <= radius && dv <= radius && std::min(du, dv) <= radius - 1;
}

}  // namespace

// ---------------------------------------------------------------------------

bool ScaleCertificate::valid() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });
}

int ScaleCertificate::r1() const { return static_cast<int>(2 * checked_pow(base, i1)); }
int ScaleCertificate::r2() const { return static_cast<int>(checked_pow(base, i2)); }

std::vector<CertificateCheck> certificate_checks(const GrowthFunctional& h, double a, int w, int i1, int i2) {
  std::vector<CertificateCheck> out;
  const int gap = i2 - i1;
  out.push_back({"i2-i1 in (w,3w)", static_cast<double>(gap), 3.0 * w, gap > w && gap < 3 * w});
  double span = h.h(i2 + 1) - h.h(i1);
  out.push_back({"h(i2+1)-h(i1) < w a", span, w * a, span < w * a});
  double inc1 = h.h(i1 + 1) - h.h(i1);
  out.push_back({"h(i1+1)-h(i1) < a", inc1, a, inc1 < a});
  double inc2 = h.h(i2 + 1) - h.h(i2);
  out.push_back({"h(i2+1)-h(i2) < a", inc2, a, inc2 < a});
  return out;
}

ScaleCertificate select_scales(const GrowthFunctional& h, double d, int w) {
  if (w < 1) throw InvalidArgument("scale selection needs w >= 1");
  if (d <= 0) throw InvalidArgument("scale selection needs d > 0");
  if (!h.i0) throw NotPositiveDefinite("growth functional has no positive definite scale", h.last_index());
  const int i0 = *h.i0;
  const double a = 4.0 * d * std::log(static_cast<double>(h.base));

  for (int j0 = 0;; ++j0) {
    const int lo = i0 + 3 * w * j0;
    const int hi = lo + 3 * w;
    if (hi > h.last_index())
      throw ExhaustedRange("no block with h(i0+3w(j0+1)) - h(i0+3w j0) < w a up to i=" +
                           std::to_string(h.last_index()) + " (tried j0 < " + std::to_string(j0) + ")");
    if (!(h.h(hi) - h.h(lo) < w * a)) continue;

    std::optional<int> i1, i2;
    for (int i = lo; i < lo + w && !i1; ++i)
      if (h.h(i + 1) - h.h(i) < a) i1 = i;
    for (int i = lo + 2 * w; i < lo + 3 * w && !i2; ++i)
      if (h.h(i + 1) - h.h(i) < a) i2 = i;
    if (!i1 || !i2) continue;  // only reachable if h fails to be nondecreasing

    ScaleCertificate c;
    c.base = h.base;
    c.d = d;
    c.w = w;
    c.a = a;
    c.i0 = i0;
    c.j0 = j0;
    c.i1 = *i1;
    c.i2 = *i2;
    c.checks = certificate_checks(h, a, w, c.i1, c.i2);
    return c;
  }
}

// ---------------------------------------------------------------------------

std::vector<std::int32_t> bfs_distances(const BallComplex& ball, std::size_t source, int max_depth) {
  std::vector<std::int32_t> dist(ball.size(), -1);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    if (dist[v] == max_depth) continue;
    for (auto w : ball.neighbors(v)) {
      if (w < 0 || dist[w] >= 0) continue;
      dist[w] = dist[v] + 1;
      queue.push_back(static_cast<std::size_t>(w));
    }
  }
  return dist;
}

ControlledCover::ControlledCover(BallPtr ambient, int r1, int r2) : ball_(std::move(ambient)), r1_(r1), r2_(r2) {
  if (r1 < 1 || r2 < 0) throw InvalidArgument("cover needs R1 >= 1 and R2 >= 0");
  if (ball_->radius() < r2 + 3 * r1)
    throw DomainMismatch("cover with R1=" + std::to_string(r1) + ", R2=" + std::to_string(r2) +
                         " needs an ambient ball of radius " + std::to_string(r2 + 3 * r1));
  const std::size_t n = ball_->size();
  const std::size_t inner = ball_->count_within(r2);

  std::vector<char> blocked(n, 0);
  for (std::size_t v = 0; v < inner; ++v) {
    if (blocked[v]) continue;
    centers_.push_back(v);
    auto near = bfs_distances(*ball_, v, r1 - 1);
    for (std::size_t u = 0; u < n; ++u)
      if (near[u] >= 0) blocked[u] = 1;
  }

  reach_.resize(centers_.size());
  const auto nc = static_cast<std::ptrdiff_t>(centers_.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < nc; ++j) {
    auto dist = bfs_distances(*ball_, centers_[static_cast<std::size_t>(j)], 3 * r1);
    auto& list = reach_[static_cast<std::size_t>(j)];
    for (std::size_t u = 0; u < n; ++u)
      if (dist[u] >= 0) list.emplace_back(static_cast<std::int32_t>(u), dist[u]);
  }

  std::vector<std::uint32_t> count(n, 0), count3(n, 0);
  for (const auto& list : reach_) {
    for (auto [u, d] : list) {
      ++count3[u];
      if (d <= r1) ++count[u];
    }
  }
  multiplicity_ = *std::max_element(count.begin(), count.end());
  multiplicity3_ = *std::max_element(count3.begin(), count3.end());
}

std::vector<std::int32_t> ControlledCover::distances(std::size_t j) const {
  std::vector<std::int32_t> dist(ball_->size(), -1);
  for (auto [u, d] : reach_.at(j)) dist[u] = d;
  return dist;
}

EdgeDomain ControlledCover::domain(std::size_t j, int radius) const {
  if (radius > 3 * r1_) throw DomainMismatch("cover domains are tracked up to radius 3 R1");
  return EdgeDomain(*ball_, distances(j), radius);
}

CoverChecks ControlledCover::verify() const {
  CoverChecks c;
  const std::size_t n = ball_->size();
  const std::size_t nc = centers_.size();

  c.separated = true;
  for (std::size_t i = 0; i < nc && c.separated; ++i) {
    auto dist = distances(i);
    for (std::size_t j = 0; j < nc; ++j) {
      if (i == j) continue;
      auto d = dist[centers_[j]];
      if (d >= 0 && d < r1_) {
        c.separated = false;
        break;
      }
    }
  }

  std::vector<char> covered(n, 0);
  std::vector<std::uint32_t> half(n, 0);
  for (const auto& list : reach_) {
    for (auto [u, d] : list) {
      if (d <= r1_) covered[u] = 1;
      if (2 * d < r1_) ++half[u];
    }
  }
  const std::size_t inner = ball_->count_within(r2_);
  c.covering = std::all_of(covered.begin(), covered.begin() + static_cast<std::ptrdiff_t>(inner),
                           [](char x) { return x != 0; });
  c.half_balls_disjoint = std::all_of(half.begin(), half.end(), [](std::uint32_t x) { return x <= 1; });

  const int h = r1_ / 2;
  const auto edges = ball_->edges();
  std::vector<std::uint32_t> edge_count(edges.size(), 0);
  for (std::size_t j = 0; j < nc; ++j) {
    auto dist = distances(j);
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edge_inside(dist[edges[e].u], dist[edges[e].v], h)) ++edge_count[e];
  }
  c.half_domains_disjoint =
      std::all_of(edge_count.begin(), edge_count.end(), [](std::uint32_t x) { return x <= 1; });
  return c;
}

CoverBounds cover_bounds(const ControlledCover& cover, double a, int w) {
  CoverBounds b;
  b.multiplicity_bound = std::exp(a);
  b.cardinality_bound = std::exp(w * a);
  // compare in log space; the bounds overflow double for large a
  b.multiplicity_ok = std::log(static_cast<double>(cover.multiplicity3())) < a;
  b.cardinality_ok = std::log(static_cast<double>(cover.cardinality())) < w * a;
  return b;
}

// ---------------------------------------------------------------------------

PhiMatrix phi_matrix(const HarmonicBasis& basis, const ControlledCover& cover, PhiMeasure measure) {
  if (basis.ball != cover.ball()) throw DomainMismatch("basis and cover must share the ambient ball");
  const auto rows = static_cast<Eigen::Index>(cover.cardinality());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  PhiMatrix phi;
  phi.matrix.resize(rows, cols);
#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index j = 0; j < rows; ++j) {
    auto jj = static_cast<std::size_t>(j);
    if (measure == PhiMeasure::EdgeLength) {
      auto dom = cover.domain(jj, cover.r1());
      const double len = static_cast<double>(dom.total_length());
      for (Eigen::Index i = 0; i < cols; ++i)
        phi.matrix(j, i) =
            kernels::serial::midpoint_sum(dom.edges(), basis.functions[static_cast<std::size_t>(i)].values) / len;
    } else {
      auto dist = cover.distances(jj);
      for (Eigen::Index i = 0; i < cols; ++i) {
        const auto& f = basis.functions[static_cast<std::size_t>(i)].values;
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t u = 0; u < dist.size(); ++u) {
          if (dist[u] >= 0 && dist[u] <= cover.r1()) {
            sum += f[u];
            ++count;
          }
        }
        phi.matrix(j, i) = sum / static_cast<double>(count);
      }
    }
  }
  return phi;
}

std::vector<LocalPoincareReport> local_poincare_check(const ControlledCover& cover, const EdgeFunction& v,
                                                      double a) {
  if (v.ball != cover.ball()) throw DomainMismatch("function and cover must share the ambient ball");
  const double s = static_cast<double>(cover.ball()->generator_count());
  const double r1 = cover.r1();
  const double constant = 8.0 * s * s * std::exp(a) * r1 * r1;
  std::vector<LocalPoincareReport> out(cover.cardinality());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    auto jj = static_cast<std::size_t>(j);
    auto inner = cover.domain(jj, cover.r1());
    auto outer = cover.domain(jj, 3 * cover.r1());
    double mean = kernels::serial::midpoint_sum(inner.edges(), v.values) / static_cast<double>(inner.total_length());
    auto& r = out[jj];
    r.ball = jj;
    r.lhs = kernels::serial::l2_deviation(inner.edges(), v.values, mean);
    r.grad = kernels::serial::dirichlet(outer.edges(), v.values);
    r.rhs = constant * r.grad;
    r.ratio = r.rhs > 0 ? r.lhs / r.rhs : (r.lhs == 0 ? 0.0 : std::numeric_limits<double>::infinity());
    r.satisfied = r.lhs <= r.rhs + kPoincareTolerance * std::max(1.0, r.lhs);
  }
  return out;
}

// ---------------------------------------------------------------------------

DoublingSubspace select_doubling_subspace(const HarmonicBasis& basis, int r2, double a, int scale_ratio) {
  if (scale_ratio < 1) throw InvalidArgument("scale ratio must be >= 1");
  const auto small = gram(basis, r2).matrix;
  const auto large = gram(basis, scale_ratio * r2).matrix;
  if (!log_determinant(small).positive_definite)
    throw NotPositiveDefinite("Q_{R2} is not positive definite", r2);

  Eigen::VectorXd scale = small.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd b = scale.asDiagonal() * small * scale.asDiagonal();
  Eigen::MatrixXd q = scale.asDiagonal() * large * scale.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(q, b);
  if (ges.info() != Eigen::Success) throw Error("generalized eigenproblem failed");

  DoublingSubspace out;
  out.threshold = std::exp(2.0 * a);
  out.eigenvalues = ges.eigenvalues();
  out.eigenvectors = scale.asDiagonal() * ges.eigenvectors();
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i)
    if (std::log(std::max(out.eigenvalues[i], 1e-300)) < 2.0 * a) out.selected.push_back(i);
  const std::size_t half = (basis.size() + 1) / 2;
  const std::size_t keep = std::min(half, out.selected.size());
  out.coefficients.resize(out.eigenvectors.rows(), static_cast<Eigen::Index>(keep));
  for (std::size_t c = 0; c < keep; ++c)
    out.coefficients.col(static_cast<Eigen::Index>(c)) = out.eigenvectors.col(out.selected[c]);
  return out;
}

InjectivityReport phi_injectivity(const PhiMatrix& phi, const DoublingSubspace& subspace, std::size_t dim_v) {
  InjectivityReport r;
  r.dim_v = dim_v;
  r.dim_u = subspace.dimension();
  r.centers = static_cast<std::size_t>(phi.matrix.rows());
  if (r.dim_u > 0) {
    Eigen::MatrixXd restricted = phi.matrix * subspace.coefficients;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
    const auto& sv = svd.singularValues();
    r.sigma_max = sv.maxCoeff();
    // a wide matrix has a nontrivial kernel whatever its singular values
    r.sigma_min = r.dim_u > r.centers ? 0.0 : sv.minCoeff();
    r.injective = r.sigma_max > 0 && r.sigma_min > 1e-8 * r.sigma_max;
  }
  r.chain_holds = r.dim_v <= 2 * r.dim_u && r.dim_u <= r.centers;
  r.chain_equality = r.dim_v == 2 * r.dim_u;
  return r;
}

// ---------------------------------------------------------------------------

DimensionBound dimension_bound(std::size_t generators, double d, double c_chain) {
  if (c_chain <= 0) throw InvalidArgument("dimension bound needs C > 0");
  if (d <= 0) throw InvalidArgument("dimension bound needs d > 0");
  const double log16 = std::log(16.0);
  DimensionBound b;
  b.generators = generators;
  b.d = d;
  b.c_chain = c_chain;
  b.a = 4.0 * d * log16;
  b.log_wbig_rhs = -std::log(2.0 * c_chain) - 4.0 * b.a;
  b.w = std::max(1, static_cast<int>(std::floor((std::log(2.0) - b.log_wbig_rhs) / log16)) + 1);
  b.log_wbig_lhs = std::log(2.0) - b.w * log16;
  b.log_wbig_prev = std::log(2.0) - (b.w - 1) * log16;
  b.log_ewa = b.w * b.a;
  b.log_ewa_estimate = std::log(64.0 * c_chain) + 64.0 * d * d * log16;
  b.ewa_estimate_holds = b.log_ewa <= b.log_ewa_estimate;
  b.log_bound = std::log(128.0 * c_chain) + 64.0 * d * d * log16;
  return b;
}

// ---------------------------------------------------------------------------

PipelineReport run_pipeline(const HarmonicBasis& basis, const ScaleCertificate& certificate) {
  PipelineReport r;
  r.certificate = certificate;
  const int r1 = certificate.r1();
  const int r2 = certificate.r2();
  ControlledCover cover(basis.ball, r1, r2);
  r.cardinality = cover.cardinality();
  r.multiplicity = cover.multiplicity();
  r.multiplicity3 = cover.multiplicity3();
  r.cover_checks = cover.verify();
  r.bounds = cover_bounds(cover, certificate.a, certificate.w);
  for (const auto& f : basis.functions) {
    for (const auto& rep : local_poincare_check(cover, f, certificate.a)) {
      if (!rep.satisfied) ++r.local_poincare_violations;
      r.local_poincare_max_ratio = std::max(r.local_poincare_max_ratio, rep.ratio);
    }
  }
  r.subspace = select_doubling_subspace(basis, r2, certificate.a);
  r.injectivity = phi_injectivity(phi_matrix(basis, cover), r.subspace, basis.size());
  return r;
}

}  // namespace polygrowth
