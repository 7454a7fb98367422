#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polygrowth/harmonic.hpp"

namespace polygrowth {

// ---------------------------------------------------------------------------
// Scale selection

struct CertificateCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

struct ScaleCertificate {
  int base = 16;
  double d = 0.0;
  int w = 1;
  double a = 0.0;  // 4 d log b
  int i0 = 0;
  int j0 = 0;
  int i1 = 0;
  int i2 = 0;
  std::vector<CertificateCheck> checks;

  bool valid() const;
  int r1() const;  // 2 b^{i1}
  int r2() const;  // b^{i2}
};

/// Re-evaluates the four inequalities of a candidate pair against `h`.
std::vector<CertificateCheck> certificate_checks(const GrowthFunctional& h, double a, int w, int i1, int i2);

/**
 * Block search: the first j0 >= 0 with h(i0 + 3w(j0+1)) - h(i0 + 3w j0) < w a,
 * then the least i1 in [m, m+w) and least i2 in [m+2w, m+3w), m = i0 + 3w j0,
 * whose one-step increments are < a.  Raises ExhaustedRange when the table
 * ends before a block qualifies.
 */
ScaleCertificate select_scales(const GrowthFunctional& h, double d, int w);

// ---------------------------------------------------------------------------
// Controlled cover

struct CoverChecks {
  bool separated = false;            // centers pairwise at distance >= R1
  bool covering = false;             // every vertex of B(R2) within R1 of a center
  bool half_balls_disjoint = false;  // open vertex balls of radius R1/2
  bool half_domains_disjoint = false;  // edge domains of radius floor(R1/2)
};

class ControlledCover {
 public:
  /// Greedy maximal R1-separated subset of B(R2) in BFS order.  `ambient`
  /// must have radius >= R2 + 3 R1.
  ControlledCover(BallPtr ambient, int r1, int r2);

  const BallPtr& ball() const { return ball_; }
  int r1() const { return r1_; }
  int r2() const { return r2_; }
  std::span<const std::size_t> centers() const { return centers_; }
  std::size_t cardinality() const { return centers_.size(); }
  /// Max number of balls B(x_j, R1) containing one vertex.
  std::size_t multiplicity() const { return multiplicity_; }
  /// Same for the tripled balls B(x_j, 3 R1).
  std::size_t multiplicity3() const { return multiplicity3_; }

  /// Distances from center j, -1 beyond 3 R1.
  std::vector<std::int32_t> distances(std::size_t j) const;
  EdgeDomain domain(std::size_t j, int radius) const;

  CoverChecks verify() const;

 private:
  BallPtr ball_;
  int r1_;
  int r2_;
  std::vector<std::size_t> centers_;
  // per center: (vertex, distance) for distance <= 3 R1, BFS order
  std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> reach_;
  std::size_t multiplicity_ = 0;
  std::size_t multiplicity3_ = 0;
};

/// BFS distances from `source` inside `ball`, truncated at `max_depth` (-1 beyond).
std::vector<std::int32_t> bfs_distances(const BallComplex& ball, std::size_t source, int max_depth);

struct CoverBounds {
  double multiplicity_bound = 0.0;  // e^a
  double cardinality_bound = 0.0;   // e^{w a}
  bool multiplicity_ok = false;
  bool cardinality_ok = false;
};
CoverBounds cover_bounds(const ControlledCover& cover, double a, int w);

// ---------------------------------------------------------------------------
// Averaging map and local Poincare

enum class PhiMeasure { EdgeLength, VertexCount };

struct PhiMatrix {
  Eigen::MatrixXd matrix;  // |J| x k
};

PhiMatrix phi_matrix(const HarmonicBasis& basis, const ControlledCover& cover,
                     PhiMeasure measure = PhiMeasure::EdgeLength);

struct LocalPoincareReport {
  std::size_t ball = 0;
  double lhs = 0.0;   // int_{B_j} |v - v_{B_j}|^2
  double grad = 0.0;  // int_{3B_j} |grad v|^2
  double rhs = 0.0;   // 8|S|^2 e^a R1^2 grad
  double ratio = 0.0;
  bool satisfied = false;
};

std::vector<LocalPoincareReport> local_poincare_check(const ControlledCover& cover, const EdgeFunction& v,
                                                      double a);

// ---------------------------------------------------------------------------
// Doubling subspace

struct DoublingSubspace {
  double threshold = 0.0;           // e^{2a}
  Eigen::VectorXd eigenvalues;      // Q_{ratio R2} against Q_{R2}, ascending
  Eigen::MatrixXd eigenvectors;     // columns Q_{R2}-orthonormal, basis coordinates
  std::vector<Eigen::Index> selected;  // eigenvalue < threshold
  Eigen::MatrixXd coefficients;     // the first ceil(k/2) selected eigenvectors, as columns

  /// dim U: half of the basis dimension (rounded up), or fewer if too few pass.
  std::size_t dimension() const { return static_cast<std::size_t>(coefficients.cols()); }
  bool at_least_half(std::size_t k) const { return 2 * selected.size() >= k; }
};

DoublingSubspace select_doubling_subspace(const HarmonicBasis& basis, int r2, double a, int scale_ratio = 16);

struct InjectivityReport {
  std::size_t dim_v = 0;
  std::size_t dim_u = 0;
  std::size_t centers = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool injective = false;   // sigma_min > 1e-8 sigma_max
  bool chain_holds = false; // dim V <= 2 dim U <= 2 |J|
  bool chain_equality = false;  // dim V = 2 dim U
};

InjectivityReport phi_injectivity(const PhiMatrix& phi, const DoublingSubspace& subspace, std::size_t dim_v);

// ---------------------------------------------------------------------------
// Constant bookkeeping with the literal base 16

struct DimensionBound {
  std::size_t generators = 0;
  double d = 0.0;
  double c_chain = 1.0;
  double a = 0.0;              // 4 d log 16
  int w = 0;                   // least w with 2*16^{-w} < 1/(2 C e^{4a})
  double log_wbig_lhs = 0.0;   // log(2*16^{-w})
  double log_wbig_rhs = 0.0;   // log(1/(2 C e^{4a}))
  double log_wbig_prev = 0.0;  // log(2*16^{-(w-1)})
  double log_ewa = 0.0;        // w a
  double log_ewa_estimate = 0.0;  // log(64 C) + 64 d^2 log 16
  bool ewa_estimate_holds = false;
  double log_bound = 0.0;      // log(128 C) + 64 d^2 log 16
};

DimensionBound dimension_bound(std::size_t generators, double d, double c_chain);

// ---------------------------------------------------------------------------
// End to end

struct PipelineReport {
  ScaleCertificate certificate;
  std::size_t cardinality = 0;
  std::size_t multiplicity = 0;
  std::size_t multiplicity3 = 0;
  CoverChecks cover_checks;
  CoverBounds bounds;
  std::size_t local_poincare_violations = 0;
  double local_poincare_max_ratio = 0.0;
  DoublingSubspace subspace;
  InjectivityReport injectivity;
};

/// Runs cover, Phi, subspace selection and injectivity at the certificate's
/// scales.  `basis.ball` must reach 16 R2 (Gram) and R2 + 3 R1 (cover).
PipelineReport run_pipeline(const HarmonicBasis& basis, const ScaleCertificate& certificate);

}  // namespace polygrowth
