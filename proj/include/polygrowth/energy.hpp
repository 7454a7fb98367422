#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polygrowth/cayley.hpp"

namespace polygrowth {

/// Action of a group model on R^n by x -> rho(s) x + t(s), one map per generator.
class AffineAction {
 public:
  /// Validates orthogonality (1e-12), inverse compatibility and every relator (1e-9).
  AffineAction(ModelPtr model, std::vector<Eigen::MatrixXd> rho, std::vector<Eigen::VectorXd> t,
               std::vector<std::vector<Generator>> relators = {});

  const GroupModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  std::size_t dimension() const { return n_; }
  std::size_t generator_count() const { return rho_.size(); }
  const Eigen::MatrixXd& rho(Generator s) const { return rho_.at(s); }
  const Eigen::VectorXd& t(Generator s) const { return t_.at(s); }
  const std::vector<std::vector<Generator>>& relators() const { return relators_; }

  Eigen::VectorXd apply(Generator s, const Eigen::VectorXd& x) const;
  /// w.x for w = s_1 ... s_k, i.e. s_1.(s_2.(... s_k.x)).
  Eigen::VectorXd apply_word(std::span<const Generator> word, const Eigen::VectorXd& x) const;

 private:
  ModelPtr model_;
  std::size_t n_;
  std::vector<Eigen::MatrixXd> rho_;
  std::vector<Eigen::VectorXd> t_;
  std::vector<std::vector<Generator>> relators_;
};

/// Z = <g> acting on R by n -> x + n t.
AffineAction translation_action(double t);
/// Z/k acting on R^2 by rotation through 2 pi / k about the origin.
AffineAction rotation_action(int k);
/// Z acting on R^2 by rotation through theta about `center`.
AffineAction rotation_about_action(double theta, const Eigen::Vector2d& center);
/// Z^2 acting on R^4: commuting rotations of one plane about a random center and
/// translations of the complementary plane, conjugated by a random orthogonal map.
AffineAction random_lattice_action(std::uint64_t seed);

// ---------------------------------------------------------------------------

struct EnergyReport {
  Eigen::VectorXd x;
  double E = 0.0;
  Eigen::VectorXd grad;
  double grad_norm = 0.0;
};

/// E(x) = sum_s |s.x - x|^2 and its gradient 4 sum_s (x - s.x).
EnergyReport energy(const AffineAction& action, const Eigen::VectorXd& x);

enum class CriticalKind { Unique, Affine, All, None };
std::string to_string(CriticalKind kind);

struct CriticalPoint {
  CriticalKind kind = CriticalKind::None;
  Eigen::VectorXd x;  // unique solution, or the min-norm (least-squares) one
  Eigen::Index rank = 0;
  double residual = 0.0;  // |(|S| I - sum rho) x - sum t|
};

/// Solves (|S| I - sum_s rho(s)) x = sum_s t(s).
CriticalPoint critical_point(const AffineAction& action);

// ---------------------------------------------------------------------------

enum class DescentOutcome { FixedPoint, Stationary, MaxIterations };
std::string to_string(DescentOutcome outcome);

struct DescentOptions {
  std::optional<double> step;  // default 1 / (8 |S|)
  std::size_t max_iter = 200;
  double energy_tolerance = 1e-14;
};

struct DescentResult {
  DescentOutcome outcome = DescentOutcome::MaxIterations;
  double step = 0.0;
  std::vector<double> energies;  // E(x_0), ..., E(x_k)
  std::vector<double> distances; // |x_j - x_0|
  Eigen::VectorXd x;             // last iterate
  double fitted_lambda = 0.0;    // max_j E_{j+1} / E_j
  double fitted_d = 0.0;         // max_j |x_{j+1} - x_j| / sqrt(E_j)
  double distance_bound = 0.0;   // D sqrt(E_0) / (1 - sqrt(lambda)), inf if lambda >= 1
  bool within_bound = false;     // d(x_k, x_0) <= D sqrt(E_0) sum_{j<k} lambda^{j/2} for all k

  std::size_t steps() const { return energies.empty() ? 0 : energies.size() - 1; }
};

/// Fixed-step gradient descent.  Raises DivergenceError when E rises three
/// steps in a row.
DescentResult descend(const AffineAction& action, const Eigen::VectorXd& x0, const DescentOptions& options = {});

// ---------------------------------------------------------------------------

struct HarmonicMapReport {
  int sample_radius = 0;
  std::size_t vertices = 0;
  double max_residual = 0.0;      // max_g |sum_s (f(g s) - f(g))|
  double max_displacement = 0.0;  // max_g |f(g) - f(e)|
  bool nonconstant = false;
};

/// Checks that f(g) = g.x is harmonic on B_G(sample_radius).
HarmonicMapReport harmonic_map_check(const AffineAction& action, const Eigen::VectorXd& x, int sample_radius,
                                     std::size_t budget = kDefaultVertexBudget);

// ---------------------------------------------------------------------------

inline constexpr int kActionFormatVersion = 1;

void write_action(std::ostream& out, const AffineAction& action);
AffineAction read_action(std::istream& in);
void save_action(const std::string& path, const AffineAction& action);
AffineAction load_action(const std::string& path);

// ---------------------------------------------------------------------------

struct FolnerStep {
  int scale = 0;   // R
  int radius = 0;  // chosen r in [R/2, R]
  std::uint64_t sphere = 0;
  std::uint64_t volume = 0;
  double bound = 0.0;  // 3 A R^{d-1}
  bool satisfied = false;
  double ratio = 0.0;  // |S(r)| / V(r)
};

/// R = 2, 4, 8, ... <= r_max; the minimizing radius breaks ties toward the largest r.
std::vector<FolnerStep> folner_probe(const GrowthTable& table, int r_max, double A, double d);

}  // namespace polygrowth
