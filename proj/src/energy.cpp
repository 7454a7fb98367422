#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "polygrowth/energy.hpp"
#include "polygrowth/error.hpp"

namespace polygrowth {

namespace {

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

AffineAction::AffineAction(ModelPtr model, std::vector<Eigen::MatrixXd> rho, std::vector<Eigen::VectorXd> t,
                           std::vector<std::vector<Generator>> relators)
    : model_(std::move(model)), rho_(std::move(rho)), t_(std::move(t)), relators_(std::move(relators)) {
  const std::size_t k = model_->generator_count();
  if (rho_.size() != k || t_.size() != k)
    throw InvalidArgument("action needs one (rho, t) pair per generator of " + model_->descriptor() + " (" +
                          std::to_string(k) + ")");
  n_ = static_cast<std::size_t>(t_.front().size());
  if (n_ == 0) throw InvalidArgument("action dimension must be positive");
  const auto n = static_cast<Eigen::Index>(n_);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (Generator s = 0; s < k; ++s) {
    if (rho_[s].rows() != n || rho_[s].cols() != n || t_[s].size() != n)
      throw InvalidArgument("dimension mismatch in generator " + model_->generator_name(s));
    if (!rho_[s].allFinite() || !t_[s].allFinite())
      throw InvalidArgument("non-finite entry in generator " + model_->generator_name(s));
    double orth = (rho_[s].transpose() * rho_[s] - id).cwiseAbs().maxCoeff();
    if (orth > 1e-12)
      throw InvalidArgument("rho(" + model_->generator_name(s) + ") is not orthogonal (defect " +
                            std::to_string(orth) + ")");
  }
  for (Generator s = 0; s < k; ++s) {
    const Generator inv = model_->inverse(s);
    const double scale = 1.0 + t_[s].norm();
    if ((rho_[inv] - rho_[s].transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
        (t_[inv] + rho_[s].transpose() * t_[s]).norm() > 1e-12 * scale)
      throw InvalidArgument("generator " + model_->generator_name(s) + " and its inverse are incompatible");
  }
  if (!relators_.empty()) {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd probe(n);
    for (auto& x : probe) x = normal(rng);
    for (const auto& r : relators_) {
      for (auto s : r)
        if (s >= k) throw InvalidArgument("relator uses an unknown generator");
      double defect = (apply_word(r, probe) - probe).norm();
      if (defect > 1e-9 * (1.0 + probe.norm())) throw InvalidArgument("relator is not satisfied by the action");
    }
  }
}

Eigen::VectorXd AffineAction::apply(Generator s, const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != n_) throw InvalidArgument("point has the wrong dimension");
  return rho_.at(s) * x + t_.at(s);
}

Eigen::VectorXd AffineAction::apply_word(std::span<const Generator> word, const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  for (auto it = word.rbegin(); it != word.rend(); ++it) y = apply(*it, y);
  return y;
}

AffineAction translation_action(double t) {
  auto model = make_model("Z");
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(1, 1);
  return AffineAction(model, {id, id}, {Eigen::VectorXd::Constant(1, t), Eigen::VectorXd::Constant(1, -t)});
}

AffineAction rotation_action(int k) {
  auto model = make_model("C" + std::to_string(k));
  Eigen::MatrixXd r = rotation(2.0 * std::numbers::pi / k);
  std::vector<Eigen::MatrixXd> rho{r};
  std::vector<Eigen::VectorXd> t{Eigen::VectorXd::Zero(2)};
  if (model->generator_count() == 2) {
    rho.push_back(r.transpose());
    t.push_back(Eigen::VectorXd::Zero(2));
  }
  // r^k = 1
  std::vector<Generator> relator(static_cast<std::size_t>(k), 0);
  return AffineAction(model, std::move(rho), std::move(t), {relator});
}

AffineAction rotation_about_action(double theta, const Eigen::Vector2d& center) {
  auto model = make_model("Z");
  Eigen::Matrix2d r = rotation(theta);
  Eigen::VectorXd c = center;
  return AffineAction(model, {Eigen::MatrixXd(r), Eigen::MatrixXd(r.transpose())},
                      {c - r * c, c - r.transpose() * c});
}

AffineAction random_lattice_action(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.3, std::numbers::pi - 0.3);
  std::normal_distribution<double> normal;

  Eigen::MatrixXd g(4, 4);
  for (auto& x : g.reshaped()) x = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();

  Eigen::Vector2d center(normal(rng), normal(rng));
  Eigen::Vector2d shift_a(normal(rng), normal(rng)), shift_b(normal(rng), normal(rng));
  const double alpha = angle(rng), beta = angle(rng);

  auto make = [&](double theta, const Eigen::Vector2d& shift, Eigen::MatrixXd& rho, Eigen::VectorXd& t) {
    Eigen::MatrixXd local = Eigen::MatrixXd::Identity(4, 4);
    local.topLeftCorner(2, 2) = rotation(theta);
    Eigen::VectorXd tl(4);
    tl.head(2) = center - rotation(theta) * center;
    tl.tail(2) = shift;
    rho = q * local * q.transpose();
    t = q * tl;
  };
  std::vector<Eigen::MatrixXd> rho(4);
  std::vector<Eigen::VectorXd> t(4);
  make(alpha, shift_a, rho[0], t[0]);
  make(beta, shift_b, rho[2], t[2]);
  for (Generator s : {Generator{0}, Generator{2}}) {
    rho[s + 1] = rho[s].transpose();
    t[s + 1] = -rho[s].transpose() * t[s];
  }
  // x y x^-1 y^-1 = 1
  return AffineAction(make_model("Z2"), std::move(rho), std::move(t), {{0, 2, 1, 3}});
}

// ---------------------------------------------------------------------------

EnergyReport energy(const AffineAction& action, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != action.dimension())
    throw InvalidArgument("point dimension " + std::to_string(x.size()) + " does not match action dimension " +
                          std::to_string(action.dimension()));
  EnergyReport r;
  r.x = x;
  r.grad = Eigen::VectorXd::Zero(x.size());
  for (Generator s = 0; s < action.generator_count(); ++s) {
    Eigen::VectorXd disp = action.apply(s, x) - x;
    r.E += disp.squaredNorm();
    r.grad -= disp;
  }
  r.grad *= 4.0;
  r.grad_norm = r.grad.norm();
  return r;
}

std::string to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::Unique: return "unique";
    case CriticalKind::Affine: return "affine";
    case CriticalKind::All: return "all";
    case CriticalKind::None: return "none";
  }
  return "?";
}

CriticalPoint critical_point(const AffineAction& action) {
  const auto n = static_cast<Eigen::Index>(action.dimension());
  const double k = static_cast<double>(action.generator_count());
  Eigen::MatrixXd a = k * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (Generator s = 0; s < action.generator_count(); ++s) {
    a -= action.rho(s);
    b += action.t(s);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(a);

  CriticalPoint c;
  c.rank = cod.rank();
  c.x = cod.solve(b);
  c.residual = (a * c.x - b).norm();
  const bool consistent = c.residual <= 1e-9 * (1.0 + b.norm());
  if (!consistent)
    c.kind = CriticalKind::None;
  else if (c.rank == n)
    c.kind = CriticalKind::Unique;
  else if (c.rank == 0)
    c.kind = CriticalKind::All;
  else
    c.kind = CriticalKind::Affine;
  return c;
}

// ---------------------------------------------------------------------------

std::string to_string(DescentOutcome outcome) {
  switch (outcome) {
    case DescentOutcome::FixedPoint: return "fixed point";
    case DescentOutcome::Stationary: return "stationary, positive energy";
    case DescentOutcome::MaxIterations: return "max iterations";
  }
  return "?";
}

DescentResult descend(const AffineAction& action, const Eigen::VectorXd& x0, const DescentOptions& options) {
  DescentResult r;
  r.step = options.step.value_or(1.0 / (8.0 * static_cast<double>(action.generator_count())));
  if (!(r.step > 0)) throw InvalidArgument("descent step must be positive");

  Eigen::VectorXd x = x0;
  auto rep = energy(action, x);
  r.energies.push_back(rep.E);
  r.distances.push_back(0.0);
  int rises = 0;
  r.outcome = DescentOutcome::MaxIterations;
  for (std::size_t it = 0;; ++it) {
    if (rep.E <= options.energy_tolerance) {
      r.outcome = DescentOutcome::FixedPoint;
      break;
    }
    if (rep.grad_norm <= 1e-14 * (1.0 + x.norm())) {
      r.outcome = DescentOutcome::Stationary;
      break;
    }
    if (it == options.max_iter) break;
    Eigen::VectorXd next = x - r.step * rep.grad;
    auto next_rep = energy(action, next);
    r.fitted_lambda = std::max(r.fitted_lambda, next_rep.E / rep.E);
    r.fitted_d = std::max(r.fitted_d, (next - x).norm() / std::sqrt(rep.E));
    rises = next_rep.E > rep.E ? rises + 1 : 0;
    if (rises >= 3)
      throw DivergenceError("energy rose for 3 consecutive steps at step " + std::to_string(it + 1) +
                            "; decrease the step size");
    x = std::move(next);
    rep = std::move(next_rep);
    r.energies.push_back(rep.E);
    r.distances.push_back((x - x0).norm());
  }
  r.x = x;

  const double e0 = r.energies.front();
  const double root = std::sqrt(r.fitted_lambda);
  r.distance_bound = root < 1.0 ? r.fitted_d * std::sqrt(e0) / (1.0 - root)
                                : std::numeric_limits<double>::infinity();
  r.within_bound = true;
  double partial = 0.0;
  for (std::size_t k = 1; k < r.distances.size(); ++k) {
    partial += std::pow(r.fitted_lambda, static_cast<double>(k - 1) / 2.0);
    const double bound = r.fitted_d * std::sqrt(e0) * partial;
    if (r.distances[k] > bound * (1.0 + 1e-12) + 1e-15) r.within_bound = false;
  }
  return r;
}

// ---------------------------------------------------------------------------

HarmonicMapReport harmonic_map_check(const AffineAction& action, const Eigen::VectorXd& x, int sample_radius,
                                     std::size_t budget) {
  if (sample_radius < 0) throw InvalidArgument("sample radius must be nonnegative");
  if (static_cast<std::size_t>(x.size()) != action.dimension()) throw InvalidArgument("point has the wrong dimension");
  auto ball = enumerate_ball(action.model_ptr(), sample_radius + 1, budget);
  const auto n = static_cast<Eigen::Index>(action.dimension());

  // g -> (rho(g), t(g)) composed along BFS: (g s).y = rho(g)(rho(s) y + t(s)) + t(g)
  std::vector<Eigen::MatrixXd> rho(ball->size());
  std::vector<Eigen::VectorXd> t(ball->size());
  std::vector<char> known(ball->size(), 0);
  rho[0] = Eigen::MatrixXd::Identity(n, n);
  t[0] = Eigen::VectorXd::Zero(n);
  known[0] = 1;
  for (std::size_t v = 0; v < ball->size(); ++v) {
    for (Generator s = 0; s < ball->generator_count(); ++s) {
      auto w = ball->neighbor(v, s);
      if (w < 0 || known[w]) continue;
      rho[w] = rho[v] * action.rho(s);
      t[w] = rho[v] * action.t(s) + t[v];
      known[w] = 1;
    }
  }
  std::vector<Eigen::VectorXd> f(ball->size());
  for (std::size_t v = 0; v < ball->size(); ++v) f[v] = rho[v] * x + t[v];

  HarmonicMapReport r;
  r.sample_radius = sample_radius;
  r.vertices = ball->count_within(sample_radius);
  for (std::size_t v = 0; v < r.vertices; ++v) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    for (Generator s = 0; s < ball->generator_count(); ++s) sum += f[ball->neighbor(v, s)] - f[v];
    r.max_residual = std::max(r.max_residual, sum.norm());
    r.max_displacement = std::max(r.max_displacement, (f[v] - f[0]).norm());
  }
  r.nonconstant = r.max_displacement > 1e-9 * (1.0 + x.norm());
  return r;
}

// ---------------------------------------------------------------------------

std::vector<FolnerStep> folner_probe(const GrowthTable& table, int r_max, double A, double d) {
  if (r_max < 2) throw InvalidArgument("Folner probe needs R_max >= 2");
  if (table.max_radius() < r_max)
    throw InsufficientData("growth table reaches radius " + std::to_string(table.max_radius()) + ", probe needs " +
                           std::to_string(r_max));
  std::vector<FolnerStep> out;
  for (int R = 2; R <= r_max; R *= 2) {
    FolnerStep step;
    step.scale = R;
    step.radius = R;
    step.sphere = table.sphere(R);
    for (int r = R; r >= (R + 1) / 2; --r) {
      if (table.sphere(r) < step.sphere) {
        step.sphere = table.sphere(r);
        step.radius = r;
      }
    }
    step.volume = table(step.radius);
    step.bound = 3.0 * A * std::pow(static_cast<double>(R), d - 1.0);
    step.satisfied = static_cast<double>(step.sphere) < step.bound;
    step.ratio = static_cast<double>(step.sphere) / static_cast<double>(step.volume);
    out.push_back(step);
  }
  return out;
}

}  // namespace polygrowth
