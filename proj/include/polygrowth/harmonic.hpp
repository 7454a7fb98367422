#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polygrowth/measure.hpp"

namespace polygrowth {

/// Integer polynomial in up to three lattice coordinates.
struct LatticePolynomial {
  struct Term {
    std::array<int, 3> exponents{};
    std::int64_t coefficient = 0;
  };

  int variables = 0;
  std::vector<Term> terms;

  int degree() const;
  double evaluate(ElementView point) const;
  /// Exact value; throws on int64 overflow.
  std::int64_t evaluate_exact(ElementView point) const;
  std::string to_string() const;
};

struct HarmonicPolynomialSpace {
  int lattice_dimension = 0;
  int max_degree = 0;
  /// Graded: basis[i].degree() is nondecreasing and the first n members span
  /// the harmonic polynomials of degree <= basis[n-1].degree().
  std::vector<LatticePolynomial> basis;

  std::size_t dimension() const { return basis.size(); }
};

/// Exact rational kernel of the discrete Laplacian of Z^d on polynomials of
/// degree <= max_degree.  d in {1,2,3}, max_degree <= 6.
HarmonicPolynomialSpace harmonic_polynomial_space(int lattice_dimension, int max_degree);

/// Solves the Dirichlet problem on `ball`: values of norm-R_out vertices are
/// taken from `boundary` (length ball.size(), interior entries ignored), and
/// the result is harmonic at every vertex of norm < R_out.
EdgeFunction solve_dirichlet(const BallPtr& ball, std::span<const double> boundary);

struct MaximumPrincipleCheck {
  double interior_max = 0.0, interior_min = 0.0;
  double boundary_max = 0.0, boundary_min = 0.0;
  bool holds = false;
};
MaximumPrincipleCheck check_maximum_principle(const EdgeFunction& f);
/// Max over interior vertices of |f(v) - mean of its |S| neighbors|.
double mean_value_defect(const EdgeFunction& f);

struct HarmonicBasis {
  BallPtr ball;
  std::vector<EdgeFunction> functions;
  std::vector<std::string> labels;

  std::size_t size() const { return functions.size(); }
  /// Radius below which every member is harmonic.
  int harmonic_radius() const { return ball->radius(); }
};

/// Restriction of the graded harmonic polynomial basis to a Z^d ball.
HarmonicBasis lattice_harmonic_basis(const BallPtr& ball, int max_degree);
/// Constant function plus Dirichlet solutions with coordinate boundary data.
/// Members are approximate global harmonic candidates.
HarmonicBasis dirichlet_harmonic_basis(const BallPtr& ball);

struct GramForm {
  int radius = 0;
  Eigen::MatrixXd matrix;
};

/// Q_R(u_i, u_j) over EdgeDomain(R).
GramForm gram(const HarmonicBasis& basis, int radius);
/// Reference assembly through the serial kernel.
GramForm gram_serial(const HarmonicBasis& basis, int radius);

struct LogDeterminant {
  double log_det = 0.0;
  bool positive_definite = false;
  double min_scaled_eigenvalue = 0.0;
};
/// log det of a symmetric PSD matrix via a Jacobi-scaled eigendecomposition.
LogDeterminant log_determinant(const Eigen::MatrixXd& q);

struct ScaleEntry {
  int index = 0;
  int radius = 0;       // b^i
  std::uint64_t volume = 0;  // V(b^i)
  bool positive_definite = false;
  double log_det = 0.0;
  double h = 0.0;       // log f(b^i), valid when positive_definite
};

struct GrowthFunctional {
  int base = 16;
  std::size_t dimension = 0;
  std::optional<int> i0;
  std::vector<ScaleEntry> entries;  // consecutive indices from the first requested

  const ScaleEntry* find(int i) const;
  /// h(i); throws ExhaustedRange outside the computed range.
  double h(int i) const;
  int first_index() const { return entries.front().index; }
  int last_index() const { return entries.back().index; }
};

/// Tabulates f(R) = V(R) det(Q_R)^{1/k} at R = b^i for i in [i_min, i_max].
/// Raises NotPositiveDefinite if no Q is PD in range, or if a non-PD form
/// appears after i0.
GrowthFunctional growth_functional(const HarmonicBasis& basis, int base, int i_min, int i_max);

std::int64_t checked_pow(std::int64_t base, int exponent);

}  // namespace polygrowth
