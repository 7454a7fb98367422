#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "polygrowth/ball_io.hpp"
#include "polygrowth/cli.hpp"
#include "polygrowth/dimension.hpp"
#include "polygrowth/energy.hpp"
#include "polygrowth/error.hpp"
#include "polygrowth/poincare.hpp"

namespace polygrowth {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct RunConfig {
  std::string group = "Z2";
  int radius = 3;
  int base = 2;
  int degree = 2;
  int w = 1;
  double d = 2.0;
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  std::string format;
  std::string cache_dir;
  std::size_t budget = kDefaultVertexBudget;

  std::string fn = "all";
  int i_min = 0;
  int i_max = 4;
  std::string basis = "lattice";
  double c = 1.0;
  double A = 1.0;

  std::string action_path;
  std::string builtin = "rotation";
  int k = 4;
  double t = 1.0;
  double theta = 1.0;
  std::vector<double> center{0.0, 0.0};
  std::vector<double> x0;
  std::optional<double> step;
  std::size_t max_iter = 200;
  std::string write_action_path;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json vec_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

/// Everything the report needs to be reproduced: subcommand and every option value.
Json config_json(const CLI::App& sub) {
  Json cfg;
  cfg["subcommand"] = sub.get_name();
  for (const auto* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const auto& name = opt->get_lnames().front();
    if (opt->count() > 0) {
      auto results = opt->results();
      cfg[name] = results.size() == 1 ? Json(results.front()) : Json(results);
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

class Reporter {
 public:
  Reporter(std::ostream& out, const CLI::App& sub, std::string format)
      : out_(out), config_(config_json(sub)), format_(std::move(format)) {}

  bool csv() const { return format_ == "csv"; }

  void json(Json body) {
    Json doc;
    doc["format_version"] = kReportFormatVersion;
    doc["config"] = config_;
    for (auto& [k, v] : body.items()) doc[k] = v;
    out_ << doc.dump(2) << '\n';
  }

  void csv_header(const std::string& columns) {
    out_ << "# format_version=" << kReportFormatVersion;
    for (auto& [k, v] : config_.items()) out_ << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
    out_ << '\n' << columns << '\n';
  }
  std::ostream& row() { return out_; }

 private:
  std::ostream& out_;
  Json config_;
  std::string format_;
};

std::string cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv("POLYGROWTH_CACHE_DIR")) return env;
  return {};
}

fs::path ball_cache_path(const fs::path& dir, const GroupModel& model, int radius) {
  return dir / (model_hash(model) + "_R" + std::to_string(radius) + ".ball");
}

BallPtr obtain_ball(const ModelPtr& model, int radius, const RunConfig& cfg) {
  const auto dir = cache_dir(cfg);
  if (dir.empty()) return enumerate_ball(model, radius, cfg.budget);
  const auto path = ball_cache_path(dir, *model, radius);
  if (fs::exists(path)) {
    try {
      auto ball = load_ball(path);
      if (ball->model().descriptor() == model->descriptor() && ball->radius() == radius) return ball;
    } catch (const VersionMismatch&) {
    } catch (const CorruptFile&) {
    }
  }
  auto ball = enumerate_ball(model, radius, cfg.budget);
  fs::create_directories(dir);
  save_ball(path, *ball);
  return ball;
}

HarmonicBasis build_basis(const BallPtr& ball, const RunConfig& cfg) {
  if (cfg.basis == "lattice") return lattice_harmonic_basis(ball, cfg.degree);
  if (cfg.basis == "dirichlet") return dirichlet_harmonic_basis(ball);
  if (cfg.basis == "constant") {
    HarmonicBasis b;
    b.ball = ball;
    b.functions.emplace_back(ball, 1.0);
    b.labels.emplace_back("1");
    return b;
  }
  throw InvalidArgument("unknown basis '" + cfg.basis + "' (lattice, dirichlet, constant)");
}

Json growth_json(const GrowthFunctional& h) {
  Json rows = Json::array();
  for (const auto& e : h.entries) {
    Json r;
    r["i"] = e.index;
    r["R"] = e.radius;
    r["V"] = e.volume;
    r["positive_definite"] = e.positive_definite;
    if (e.positive_definite) {
      r["log_det"] = e.log_det;
      r["h"] = e.h;
    }
    rows.push_back(r);
  }
  return rows;
}

Json certificate_json(const ScaleCertificate& c) {
  Json j;
  j["base"] = c.base;
  j["d"] = c.d;
  j["w"] = c.w;
  j["a"] = c.a;
  j["i0"] = c.i0;
  j["j0"] = c.j0;
  j["i1"] = c.i1;
  j["i2"] = c.i2;
  j["R1"] = c.r1();
  j["R2"] = c.r2();
  Json checks = Json::array();
  for (const auto& ch : c.checks) checks.push_back({{"name", ch.name}, {"lhs", ch.lhs}, {"rhs", ch.rhs}, {"ok", ch.ok}});
  j["checks"] = checks;
  j["valid"] = c.valid();
  return j;
}

/// Ball radius that covers the h table up to i_max and the Gram form at 16 R2.
int pipeline_radius(const RunConfig& cfg, bool need_pipeline) {
  auto top = checked_pow(cfg.base, cfg.i_max);
  if (need_pipeline && cfg.i_max >= 1) top = std::max(top, 16 * checked_pow(cfg.base, cfg.i_max - 1));
  if (top > 1'000'000) throw InvalidArgument("requested scales exceed the supported radius");
  return static_cast<int>(top);
}

// ---------------------------------------------------------------------------

int cmd_growth(const RunConfig& cfg, Reporter& rep) {
  auto table = growth_table(make_model(cfg.group), cfg.radius, cfg.budget);
  if (rep.csv()) {
    rep.csv_header("R,V");
    for (int r = 0; r <= table.max_radius(); ++r) rep.row() << r << ',' << table(r) << '\n';
    return kExitOk;
  }
  Json body;
  body["V"] = table.values;
  if (table.values.size() >= 4) {
    auto est = degree_estimate(table);
    body["slope"] = est.slope;
    body["degree_estimate"] = est.degree ? Json(*est.degree) : Json(nullptr);
  }
  rep.json(body);
  return kExitOk;
}

TrialKind parse_kind(const std::string& name) {
  for (auto k : {TrialKind::Random, TrialKind::Coordinate, TrialKind::Indicator, TrialKind::Signs, TrialKind::Norm,
                 TrialKind::Constant})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown trial function '" + name + "'");
}

int cmd_poincare(const RunConfig& cfg, Reporter& rep) {
  if (cfg.radius < 1) throw InvalidArgument("poincare needs --radius >= 1");
  auto ball = obtain_ball(make_model(cfg.group), 3 * cfg.radius, cfg);
  const double constant = poincare_constant(*ball, cfg.radius);

  Json body;
  body["constant"] = constant;
  std::size_t violations = 0;
  if (cfg.fn == "all") {
    auto worst = worst_case_ratio(ball, cfg.radius, TrialSet{cfg.trials, true, false}, cfg.seed);
    auto f = trial_function(*ball, worst.kind, cfg.seed, worst.trial);
    auto r = verify_poincare(EdgeFunction(ball, std::move(f)), cfg.radius);
    violations = worst.violations;
    body["evaluated"] = worst.evaluated;
    body["violations"] = worst.violations;
    body["worst_kind"] = to_string(worst.kind);
    body["worst_trial"] = worst.trial;
    body["worst_hash"] = worst.function_hash;
    body["lhs"] = r.lhs;
    body["grad"] = r.grad;
    body["ratio"] = worst.max_ratio;
  } else {
    const auto kind = parse_kind(cfg.fn);
    Json trials = Json::array();
    PoincareReport worst;
    bool first = true;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      auto r = verify_poincare(EdgeFunction(ball, trial_function(*ball, kind, cfg.seed, t)), cfg.radius);
      if (!r.satisfied) ++violations;
      if (first || r.ratio > worst.ratio) worst = r;
      first = false;
      trials.push_back({{"trial", t}, {"lhs", r.lhs}, {"grad", r.grad}, {"ratio", r.ratio}, {"satisfied", r.satisfied}});
    }
    body["evaluated"] = cfg.trials;
    body["violations"] = violations;
    body["lhs"] = worst.lhs;
    body["grad"] = worst.grad;
    body["ratio"] = worst.ratio;
    body["trials"] = trials;
  }
  rep.json(body);
  return violations == 0 ? kExitOk : kExitVerification;
}

int cmd_harmonic_dim(const RunConfig& cfg, Reporter& rep) {
  auto model = make_model(cfg.group);
  auto dim = model->lattice_dimension();
  if (!dim) throw InvalidArgument("harmonic-dim needs a lattice group Z<d>");
  auto space = harmonic_polynomial_space(*dim, cfg.degree);

  // exact harmonicity on B(radius)
  auto ball = obtain_ball(model, cfg.radius + 1, cfg);
  bool exact = true;
  for (const auto& p : space.basis) {
    for (std::size_t v = 0; v < ball->count_within(cfg.radius) && exact; ++v) {
      std::int64_t sum = 0;
      const auto here = p.evaluate_exact(ball->element(v));
      for (auto w : ball->neighbors(v)) sum += p.evaluate_exact(ball->element(w)) - here;
      exact = sum == 0;
    }
  }

  std::vector<std::size_t> dims(static_cast<std::size_t>(cfg.degree) + 1, 0);
  for (const auto& p : space.basis)
    for (int D = p.degree(); D <= cfg.degree; ++D) ++dims[static_cast<std::size_t>(D)];

  if (rep.csv()) {
    rep.csv_header("degree,dimension");
    for (int D = 0; D <= cfg.degree; ++D) rep.row() << D << ',' << dims[static_cast<std::size_t>(D)] << '\n';
  } else {
    Json body;
    body["dimensions"] = dims;
    Json polys = Json::array();
    for (const auto& p : space.basis) polys.push_back(p.to_string());
    body["basis"] = polys;
    body["exactly_harmonic"] = exact;
    rep.json(body);
  }
  return exact ? kExitOk : kExitVerification;
}

int cmd_gram_scan(const RunConfig& cfg, Reporter& rep) {
  auto ball = obtain_ball(make_model(cfg.group), pipeline_radius(cfg, false), cfg);
  auto basis = build_basis(ball, cfg);
  auto h = growth_functional(basis, cfg.base, cfg.i_min, cfg.i_max);

  bool monotone = true;
  const ScaleEntry* prev = nullptr;
  for (const auto& e : h.entries) {
    if (prev && prev->positive_definite && e.positive_definite && e.h < prev->h) monotone = false;
    prev = &e;
  }
  if (rep.csv()) {
    rep.csv_header("i,R,V,positive_definite,log_det,h");
    for (const auto& e : h.entries)
      rep.row() << e.index << ',' << e.radius << ',' << e.volume << ',' << (e.positive_definite ? 1 : 0) << ','
                << num(e.log_det) << ',' << num(e.h) << '\n';
  } else {
    Json body;
    body["basis"] = basis.labels;
    body["i0"] = *h.i0;
    body["table"] = growth_json(h);
    body["h_nondecreasing"] = monotone;
    rep.json(body);
  }
  return monotone ? kExitOk : kExitVerification;
}

void save_certificate(const RunConfig& cfg, const GroupModel& model, const Json& certificate) {
  const auto dir = cache_dir(cfg);
  if (dir.empty()) return;
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / ("certificate_" + model_hash(model) + "_b" + std::to_string(cfg.base) + "_d" +
                                     num(cfg.d) + "_w" + std::to_string(cfg.w) + ".json"));
  out << certificate.dump(2) << '\n';
}

int cmd_scale_select(const RunConfig& cfg, Reporter& rep, bool pipeline) {
  auto model = make_model(cfg.group);
  auto ball = obtain_ball(model, pipeline_radius(cfg, pipeline), cfg);
  auto basis = build_basis(ball, cfg);
  auto h = growth_functional(basis, cfg.base, cfg.i_min, cfg.i_max);

  Json body;
  body["basis"] = basis.labels;
  body["table"] = growth_json(h);
  ScaleCertificate cert;
  try {
    cert = select_scales(h, cfg.d, cfg.w);
  } catch (const ExhaustedRange& e) {
    body["status"] = "exhausted-range";
    body["message"] = e.what();
    rep.json(body);
    return kExitExhausted;
  }
  body["status"] = "found";
  body["certificate"] = certificate_json(cert);
  body["ball_cache"] = ball_cache_path("", *model, ball->radius()).string();
  save_certificate(cfg, *model, body["certificate"]);
  if (!cert.valid()) {
    rep.json(body);
    return kExitVerification;
  }
  if (!pipeline) {
    rep.json(body);
    return kExitOk;
  }

  auto p = run_pipeline(basis, cert);
  Json cover;
  cover["R1"] = cert.r1();
  cover["R2"] = cert.r2();
  cover["cardinality"] = p.cardinality;
  cover["multiplicity"] = p.multiplicity;
  cover["multiplicity3"] = p.multiplicity3;
  cover["separated"] = p.cover_checks.separated;
  cover["covering"] = p.cover_checks.covering;
  cover["half_balls_disjoint"] = p.cover_checks.half_balls_disjoint;
  cover["half_domains_disjoint"] = p.cover_checks.half_domains_disjoint;
  cover["log_multiplicity_bound"] = cert.a;
  cover["log_cardinality_bound"] = cert.w * cert.a;
  cover["multiplicity_ok"] = p.bounds.multiplicity_ok;
  cover["cardinality_ok"] = p.bounds.cardinality_ok;
  cover["local_poincare_violations"] = p.local_poincare_violations;
  cover["local_poincare_max_ratio"] = p.local_poincare_max_ratio;
  body["cover"] = cover;

  Json sub;
  sub["threshold"] = p.subspace.threshold;
  sub["eigenvalues"] = vec_json(p.subspace.eigenvalues);
  sub["below_threshold"] = p.subspace.selected.size();
  sub["dimension"] = p.subspace.dimension();
  sub["at_least_half"] = p.subspace.at_least_half(basis.size());
  body["subspace"] = sub;

  Json inj;
  inj["dim_V"] = p.injectivity.dim_v;
  inj["dim_U"] = p.injectivity.dim_u;
  inj["centers"] = p.injectivity.centers;
  inj["sigma_min"] = p.injectivity.sigma_min;
  inj["sigma_max"] = p.injectivity.sigma_max;
  inj["injective"] = p.injectivity.injective;
  inj["chain_holds"] = p.injectivity.chain_holds;
  inj["chain_equality"] = p.injectivity.chain_equality;
  body["injectivity"] = inj;
  rep.json(body);

  const bool ok = p.cover_checks.separated && p.cover_checks.covering && p.cover_checks.half_balls_disjoint &&
                  p.cover_checks.half_domains_disjoint && p.bounds.multiplicity_ok && p.bounds.cardinality_ok &&
                  p.local_poincare_violations == 0 && p.injectivity.injective && p.injectivity.chain_holds;
  return ok ? kExitOk : kExitVerification;
}

int cmd_dim_bound(const RunConfig& cfg, Reporter& rep) {
  auto model = make_model(cfg.group);
  auto b = dimension_bound(model->generator_count(), cfg.d, cfg.c);
  Json body;
  body["generators"] = b.generators;
  body["a"] = b.a;
  body["w"] = b.w;
  body["log_wbig_lhs"] = b.log_wbig_lhs;
  body["log_wbig_rhs"] = b.log_wbig_rhs;
  body["log_wbig_prev"] = b.log_wbig_prev;
  body["w_minimal"] = b.log_wbig_lhs < b.log_wbig_rhs && !(b.log_wbig_prev < b.log_wbig_rhs);
  body["log_ewa"] = b.log_ewa;
  body["log_ewa_estimate"] = b.log_ewa_estimate;
  body["ewa_estimate_holds"] = b.ewa_estimate_holds;
  body["log_bound"] = b.log_bound;
  rep.json(body);
  return kExitOk;
}

AffineAction make_action(const RunConfig& cfg) {
  if (!cfg.action_path.empty()) return load_action(cfg.action_path);
  if (cfg.builtin == "translation") return translation_action(cfg.t);
  if (cfg.builtin == "rotation") return rotation_action(cfg.k);
  if (cfg.builtin == "rotation-about") {
    if (cfg.center.size() != 2) throw InvalidArgument("--center needs two coordinates");
    return rotation_about_action(cfg.theta, Eigen::Vector2d(cfg.center[0], cfg.center[1]));
  }
  if (cfg.builtin == "random-lattice") return random_lattice_action(cfg.seed);
  throw InvalidArgument("unknown builtin action '" + cfg.builtin +
                        "' (translation, rotation, rotation-about, random-lattice)");
}

int cmd_energy(const RunConfig& cfg, Reporter& rep) {
  auto action = make_action(cfg);
  if (!cfg.write_action_path.empty()) save_action(cfg.write_action_path, action);
  const auto n = static_cast<Eigen::Index>(action.dimension());
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  if (cfg.x0.empty()) {
    x0[0] = 1.0;
  } else {
    if (static_cast<Eigen::Index>(cfg.x0.size()) != n)
      throw InvalidArgument("--x has " + std::to_string(cfg.x0.size()) + " entries, action dimension is " +
                            std::to_string(n));
    for (Eigen::Index i = 0; i < n; ++i) x0[i] = cfg.x0[static_cast<std::size_t>(i)];
  }

  Json body;
  body["group"] = action.model().descriptor();
  body["n"] = action.dimension();
  auto e0 = energy(action, x0);
  body["start"] = {{"x", vec_json(x0)}, {"E", e0.E}, {"grad", vec_json(e0.grad)}, {"grad_norm", e0.grad_norm}};

  auto cp = critical_point(action);
  auto ec = energy(action, cp.x);
  body["critical_point"] = {{"kind", to_string(cp.kind)}, {"x", vec_json(cp.x)}, {"rank", cp.rank},
                            {"residual", cp.residual}, {"E", ec.E}, {"grad_norm", ec.grad_norm}};

  DescentOptions opts;
  opts.step = cfg.step;
  opts.max_iter = cfg.max_iter;
  auto d = descend(action, x0, opts);
  body["descent"] = {{"outcome", to_string(d.outcome)},
                     {"step", d.step},
                     {"steps", d.steps()},
                     {"final_E", d.energies.back()},
                     {"fitted_lambda", d.fitted_lambda},
                     {"fitted_D", d.fitted_d},
                     {"distance", d.distances.back()},
                     {"distance_bound", std::isfinite(d.distance_bound) ? Json(d.distance_bound) : Json(nullptr)},
                     {"within_bound", d.within_bound}};

  bool ok = true;
  if (cp.kind != CriticalKind::None) {
    auto hm = harmonic_map_check(action, cp.x, cfg.radius, cfg.budget);
    ok = hm.max_residual <= 1e-9 * (1.0 + cp.x.norm());
    body["harmonic_map"] = {{"sample_radius", hm.sample_radius},
                            {"vertices", hm.vertices},
                            {"max_residual", hm.max_residual},
                            {"max_displacement", hm.max_displacement},
                            {"nonconstant", hm.nonconstant}};
  }
  rep.json(body);
  return ok ? kExitOk : kExitVerification;
}

int cmd_folner(const RunConfig& cfg, Reporter& rep) {
  auto table = growth_table(make_model(cfg.group), cfg.radius, cfg.budget);
  auto steps = folner_probe(table, cfg.radius, cfg.A, cfg.d);
  if (rep.csv()) {
    rep.csv_header("R,r,sphere,volume,bound,satisfied,ratio");
    for (const auto& s : steps)
      rep.row() << s.scale << ',' << s.radius << ',' << s.sphere << ',' << s.volume << ',' << num(s.bound) << ','
                << (s.satisfied ? 1 : 0) << ',' << num(s.ratio) << '\n';
    return kExitOk;
  }
  Json rows = Json::array();
  for (const auto& s : steps)
    rows.push_back({{"R", s.scale}, {"r", s.radius}, {"sphere", s.sphere}, {"volume", s.volume}, {"bound", s.bound},
                    {"satisfied", s.satisfied}, {"ratio", s.ratio}});
  rep.json({{"steps", rows}});
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Growth, Poincare and harmonic-function experiments on Cayley graphs", "polygrowth"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, const std::string& default_format) {
    cfg.format = default_format;
    sub->add_option("--group", cfg.group, "Group model (" + CLI::detail::join(supported_models(), ", ") + ")")
        ->capture_default_str();
    sub->add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->default_str(default_format);
    sub->add_option("--seed", cfg.seed, "Seed for randomized sweeps")->capture_default_str();
    sub->add_option("--budget", cfg.budget, "Vertex budget per ball")->capture_default_str();
    sub->add_option("--cache-dir", cfg.cache_dir, "Ball cache directory (env POLYGROWTH_CACHE_DIR)");
  };
  auto scales = [&](CLI::App* sub) {
    sub->add_option("--base", cfg.base, "Scale base b")->capture_default_str();
    sub->add_option("--imin", cfg.i_min, "First scale index")->capture_default_str();
    sub->add_option("--imax", cfg.i_max, "Last scale index")->capture_default_str();
    sub->add_option("--basis", cfg.basis, "lattice | dirichlet | constant")->capture_default_str();
    sub->add_option("--degree", cfg.degree, "Polynomial degree of the lattice basis")->capture_default_str();
  };

  std::map<std::string, std::function<int(Reporter&)>> handlers;
  std::map<std::string, std::string> formats;

  auto* growth = app.add_subcommand("growth", "Ball sizes V(R)");
  formats["growth"] = "csv";
  growth->add_option("--radius", cfg.radius, "Max radius")->capture_default_str();
  handlers["growth"] = [&](Reporter& r) { return cmd_growth(cfg, r); };

  auto* poincare = app.add_subcommand("poincare", "Poincare inequality sweep");
  formats["poincare"] = "json";
  poincare->add_option("--radius", cfg.radius, "Ball radius R")->capture_default_str();
  poincare->add_option("--trials", cfg.trials, "Trials per function kind")->capture_default_str();
  poincare->add_option("--fn", cfg.fn, "all | random | coordinate | indicator | signs | norm | constant")
      ->capture_default_str();
  handlers["poincare"] = [&](Reporter& r) { return cmd_poincare(cfg, r); };

  auto* hdim = app.add_subcommand("harmonic-dim", "Dimensions of harmonic polynomial spaces on Z^d");
  formats["harmonic-dim"] = "csv";
  hdim->add_option("--degree", cfg.degree, "Max degree")->capture_default_str();
  hdim->add_option("--radius", cfg.radius, "Radius of the exact harmonicity check")->capture_default_str();
  handlers["harmonic-dim"] = [&](Reporter& r) { return cmd_harmonic_dim(cfg, r); };

  auto* gscan = app.add_subcommand("gram-scan", "Gram determinants and h(i) over scales");
  formats["gram-scan"] = "csv";
  scales(gscan);
  handlers["gram-scan"] = [&](Reporter& r) { return cmd_gram_scan(cfg, r); };

  auto* select = app.add_subcommand("scale-select", "Find scales i1, i2");
  formats["scale-select"] = "json";
  scales(select);
  select->add_option("--d", cfg.d, "Growth degree d")->capture_default_str();
  select->add_option("--w", cfg.w, "Block width w")->capture_default_str();
  handlers["scale-select"] = [&](Reporter& r) { return cmd_scale_select(cfg, r, false); };

  auto* cover = app.add_subcommand("cover", "Cover, averaging map and injectivity at selected scales");
  formats["cover"] = "json";
  scales(cover);
  cover->add_option("--d", cfg.d, "Growth degree d")->capture_default_str();
  cover->add_option("--w", cfg.w, "Block width w")->capture_default_str();
  handlers["cover"] = [&](Reporter& r) { return cmd_scale_select(cfg, r, true); };

  auto* dbound = app.add_subcommand("dim-bound", "Constant bookkeeping for the dimension bound");
  formats["dim-bound"] = "json";
  dbound->add_option("--d", cfg.d, "Growth degree d")->capture_default_str();
  dbound->add_option("--c", cfg.c, "Doubling constant C")->capture_default_str();
  handlers["dim-bound"] = [&](Reporter& r) { return cmd_dim_bound(cfg, r); };

  auto* en = app.add_subcommand("energy", "Energy, critical point, descent and harmonic map of an action");
  formats["energy"] = "json";
  en->add_option("--action", cfg.action_path, "Action descriptor file");
  en->add_option("--builtin", cfg.builtin, "translation | rotation | rotation-about | random-lattice")
      ->capture_default_str();
  en->add_option("--k", cfg.k, "Rotation order")->capture_default_str();
  en->add_option("--t", cfg.t, "Translation length")->capture_default_str();
  en->add_option("--theta", cfg.theta, "Rotation angle")->capture_default_str();
  en->add_option("--center", cfg.center, "Rotation center")->delimiter(',')->capture_default_str();
  en->add_option("--x", cfg.x0, "Start point")->delimiter(',');
  en->add_option("--step", cfg.step, "Descent step (default 1/(8|S|))");
  en->add_option("--max-iter", cfg.max_iter, "Descent iterations")->capture_default_str();
  en->add_option("--radius", cfg.radius, "Sample radius of the harmonic map check")->default_val(4);
  en->add_option("--write-action", cfg.write_action_path, "Save the action descriptor");
  handlers["energy"] = [&](Reporter& r) { return cmd_energy(cfg, r); };

  auto* folner = app.add_subcommand("folner", "Sphere sizes at dyadic scales");
  formats["folner"] = "csv";
  folner->add_option("--radius", cfg.radius, "Max scale R_max")->capture_default_str();
  folner->add_option("--A", cfg.A, "Growth constant A")->capture_default_str();
  folner->add_option("--d", cfg.d, "Growth degree d")->capture_default_str();
  handlers["folner"] = [&](Reporter& r) { return cmd_folner(cfg, r); };

  for (auto* sub : app.get_subcommands({})) common(sub, formats[sub->get_name()]);
  cfg.format.clear();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (cfg.format.empty()) cfg.format = formats[name];
  try {
    Reporter rep(out, *sub, cfg.format);
    return handlers.at(name)(rep);
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const ExhaustedRange& e) {
    err << "range exhausted: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const NotPositiveDefinite& e) {
    err << "range exhausted: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const InsufficientData& e) {
    err << "range exhausted: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const DivergenceError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const VersionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CorruptFile& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "failed: " << e.what() << '\n';
    return kExitVerification;
  }
}

}  // namespace polygrowth
