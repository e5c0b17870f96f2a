#include "experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace heatrecon::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scenario.domain.lo", "scenario.domain.hi", "scenario.T", "scenario.gamma", "scenario.U.lo",
      "scenario.U.hi", "scenario.target.x", "scenario.target.t", "probe.c", "probe.omega",
      "probe.omega_perp", "field.kind", "field.amplitude", "field.drift", "field.source",
      "field.t_source", "field.grid_path", "forward.initial", "forward.nx", "forward.nt", "forward.T",
      "forward.levels", "method", "cone.delta", "cone.aux", "constant.source", "constant.mu",
      "constant.C", "tau.values", "reference", "kernel.quad_tol", "kernel.max_panels",
      "kernel.exterior_cutoff_eps", "kernel.branch_R", "reconstruct.panel_phase",
      "reconstruct.target_digits", "reconstruct.order_factor", "reconstruct.arithmetic",
      "reconstruct.lattice_degree", "reconstruct.cone_order", "reconstruct.min_target_distance",
      "traces.time_panels", "traces.time_order", "traces.space_panels", "traces.space_order",
      "traces.initial_panels", "traces.initial_order", "noise.amplitude", "noise.kind", "noise.seed",
      "output.csv", "output.timing", "oracle.n", "oracle.cases", "oracle.tau_start", "oracle.tau_count",
      "oracle.density"};
  return keys;
}

class Reader {
 public:
  explicit Reader(const KeyValues& kv) : kv_(kv) {}

  bool has(const std::string& k) const { return kv_.count(k) != 0; }

  std::string str(const std::string& k, const std::string& def) const { return has(k) ? kv_.at(k) : def; }

  std::string required(const std::string& k) const {
    if (!has(k)) throw ConfigError("missing required key '" + k + "'");
    return kv_.at(k);
  }

  double num(const std::string& k, double def) const { return has(k) ? to_double(k, kv_.at(k)) : def; }

  int integer(const std::string& k, int def) const {
    if (!has(k)) return def;
    const double v = to_double(k, kv_.at(k));
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("key '" + k + "' must be an integer");
    return static_cast<int>(v);
  }

  bool flag(const std::string& k, bool def) const {
    if (!has(k)) return def;
    const std::string& v = kv_.at(k);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + k + "' must be true or false");
  }

  std::vector<double> list(const std::string& k, const std::string& text) const {
    std::string s = text;
    for (char& ch : s)
      if (ch == ',') ch = ' ';
    std::istringstream is(s);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(to_double(k, tok));
    return out;
  }

  std::vector<double> list(const std::string& k) const { return list(k, required(k)); }

  Vector vec(const std::string& k) const {
    const std::vector<double> v = list(k);
    if (v.empty() || v.size() > 3) throw ConfigError("key '" + k + "' needs one to three numbers");
    Vector r(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) r[static_cast<int>(i)] = v[i];
    return r;
  }

  // Groups separated by ';'.
  std::vector<std::vector<double>> groups(const std::string& k) const {
    std::vector<std::vector<double>> out;
    std::istringstream is(required(k));
    std::string part;
    while (std::getline(is, part, ';'))
      if (!trim(part).empty()) out.push_back(list(k, part));
    return out;
  }

 private:
  static double to_double(const std::string& k, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("key '" + k + "' has a non-numeric value '" + v + "'");
    }
  }

  const KeyValues& kv_;
};

Vector vector_of(const std::vector<double>& v) {
  Vector r(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r[static_cast<int>(i)] = v[i];
  return r;
}

ConstantSource parse_constant_source(const std::string& s) {
  if (s == "oracle") return ConstantSource::oracle;
  if (s == "edge") return ConstantSource::edge;
  if (s == "printed") return ConstantSource::printed;
  if (s == "triangle") return ConstantSource::triangle;
  if (s == "given") return ConstantSource::given;
  throw ConfigError("constant.source must be oracle, edge, printed, triangle or given (got '" + s + "')");
}

std::string to_string(ConstantSource s) {
  switch (s) {
    case ConstantSource::oracle: return "oracle";
    case ConstantSource::edge: return "edge";
    case ConstantSource::printed: return "printed";
    case ConstantSource::triangle: return "triangle";
    case ConstantSource::given: return "given";
  }
  return "";
}

}  // namespace

KeyValues read_key_values(std::istream& is) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }
  return kv;
}

KeyValues read_key_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return read_key_values(in);
}

void apply_override(KeyValues& kv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string to_string(Method m) { return m == Method::carleman ? "carleman" : "enclosure"; }

Method parse_method(const std::string& s) {
  if (s == "carleman") return Method::carleman;
  if (s == "enclosure") return Method::enclosure;
  throw ConfigError("method must be carleman or enclosure (got '" + s + "')");
}

ExperimentConfig parse_experiment(const KeyValues& kv) {
  for (const auto& [k, v] : kv)
    if (!known_keys().count(k)) throw ConfigError("unknown key '" + k + "'");
  const Reader r(kv);
  ExperimentConfig cfg;

  const bool any_scenario = r.has("scenario.domain.lo") || r.has("scenario.T") || r.has("scenario.target.x");
  if (any_scenario) {
    ScenarioGeometry& g = cfg.geom;
    g.domain = {r.vec("scenario.domain.lo"), r.vec("scenario.domain.hi")};
    g.T = r.num("scenario.T", std::numeric_limits<double>::quiet_NaN());
    if (!r.has("scenario.T")) throw ConfigError("missing required key 'scenario.T'");
    for (const std::vector<double>& p : r.groups("scenario.gamma")) {
      if (p.size() != 6) throw ConfigError("scenario.gamma pieces need axis side s_lo s_hi t_lo t_hi");
      g.gamma.push_back({static_cast<int>(p[0]), static_cast<int>(p[1]), p[2], p[3], p[4], p[5]});
    }
    g.U = {r.vec("scenario.U.lo"), r.vec("scenario.U.hi")};
    g.target = {r.vec("scenario.target.x"), r.num("scenario.target.t", 0.0)};
    if (!r.has("scenario.target.t")) throw ConfigError("missing required key 'scenario.target.t'");
    try {
      g.check_well_formed();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scenario: ") + e.what());
    }
  }

  const int n = any_scenario ? cfg.geom.dim() : r.integer("oracle.n", 1);
  cfg.oracle.n = n;
  const double c = r.num("probe.c", 2.0);
  Vector omega = r.has("probe.omega") ? r.vec("probe.omega") : (n == 1 ? Vector{1.0} : Vector{1.0, 0.0});
  std::optional<Vector> perp;
  if (r.has("probe.omega_perp")) perp = r.vec("probe.omega_perp");
  else if (n == 2 && !r.has("probe.omega")) perp = Vector{0.0, 1.0};
  try {
    cfg.probe = make_probe(c, omega, perp);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("probe: ") + e.what());
  }
  if (cfg.probe.dim() != n) throw ConfigError("probe.omega dimension does not match the scenario");

  FieldSpec& f = cfg.field;
  f.kind = r.str("field.kind", "constant");
  f.params.n = n;
  f.params.amplitude = r.num("field.amplitude", 1.0);
  f.params.drift = r.has("field.drift") ? r.vec("field.drift") : Vector(n);
  f.params.source = r.has("field.source") ? r.vec("field.source") : Vector(n);
  f.params.t_source = r.num("field.t_source", -1.0);
  f.grid_path = r.str("field.grid_path", "");
  f.forward_initial = r.str("forward.initial", "sin_pi");
  f.forward_grid = {r.integer("forward.nx", 64), r.integer("forward.nt", 256)};
  if (f.kind == "grid" && f.grid_path.empty()) throw ConfigError("field.kind = grid requires field.grid_path");
  if (f.kind != "forward" && f.kind != "grid") {
    try {
      (void)parse_field_kind(f.kind);
    } catch (const std::invalid_argument&) {
      throw ConfigError("field.kind must be constant, exponential, heat_kernel, polynomial, grid or forward (got '" +
                        f.kind + "')");
    }
  }
  if (f.forward_initial != "sin_pi" && f.forward_initial != "one")
    throw ConfigError("forward.initial must be sin_pi or one");

  cfg.method = parse_method(r.str("method", "carleman"));
  if (r.has("cone.delta")) {
    ConeSpec cone;
    const std::string d = r.str("cone.delta", "");
    if (d != "default") cone.delta = r.num("cone.delta", 0.0);
    if (r.has("cone.aux"))
      for (const std::vector<double>& p : r.groups("cone.aux")) cone.aux.push_back(vector_of(p));
    cfg.cone = cone;
  } else if (r.has("cone.aux")) {
    throw ConfigError("cone.aux requires cone.delta");
  }
  if (cfg.method == Method::enclosure && !cfg.cone)
    throw ConfigError("method = enclosure requires a cone spec (cone.delta = <value> or default)");

  cfg.constant_source = parse_constant_source(r.str("constant.source", "oracle"));
  if (cfg.constant_source == ConstantSource::given) {
    const std::vector<double> C = r.list("constant.C");
    if (C.size() != 2) throw ConfigError("constant.C needs a real and an imaginary part");
    cfg.given_constant = {r.num("constant.mu", 0.0), Complex(C[0], C[1])};
    if (!r.has("constant.mu")) throw ConfigError("missing required key 'constant.mu'");
  }

  if (r.has("tau.values")) cfg.taus = r.list("tau.values");
  const std::string ref = r.str("reference", "auto");
  cfg.reference_auto = ref == "auto";
  if (ref != "auto" && ref != "none") cfg.reference = r.num("reference", 0.0);

  KernelConfig& k = cfg.recon.kernel;
  k.quad_tol = r.num("kernel.quad_tol", k.quad_tol);
  k.max_panels = r.integer("kernel.max_panels", k.max_panels);
  k.exterior_cutoff_eps = r.num("kernel.exterior_cutoff_eps", k.exterior_cutoff_eps);
  k.branch_R = r.num("kernel.branch_R", k.branch_R);
  try {
    k.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }
  ReconstructConfig& rc = cfg.recon;
  rc.panel_phase = r.num("reconstruct.panel_phase", rc.panel_phase);
  rc.target_digits = r.num("reconstruct.target_digits", rc.target_digits);
  rc.order_factor = r.num("reconstruct.order_factor", rc.order_factor);
  try {
    rc.arithmetic = parse_arithmetic(r.str("reconstruct.arithmetic", "auto"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("reconstruct.arithmetic: ") + e.what());
  }
  rc.lattice_degree = r.integer("reconstruct.lattice_degree", rc.lattice_degree);
  rc.cone_order = r.integer("reconstruct.cone_order", rc.cone_order);
  rc.min_target_distance = r.num("reconstruct.min_target_distance", rc.min_target_distance);
  TraceOrders& t = rc.orders;
  t.time_panels = r.integer("traces.time_panels", t.time_panels);
  t.time_order = r.integer("traces.time_order", t.time_order);
  t.space_panels = r.integer("traces.space_panels", t.space_panels);
  t.space_order = r.integer("traces.space_order", t.space_order);
  t.initial_panels = r.integer("traces.initial_panels", t.initial_panels);
  t.initial_order = r.integer("traces.initial_order", t.initial_order);
  if (!(rc.panel_phase > 0.0) || !(rc.target_digits > 0.0) || !(rc.order_factor >= 1.0) || rc.lattice_degree < 1 ||
      rc.cone_order < 1)
    throw ConfigError("reconstruct: panel_phase and target_digits must be positive, order_factor >= 1, "
                      "lattice_degree and cone_order >= 1");

  cfg.noise.amplitude = r.num("noise.amplitude", 0.0);
  const std::string nk = r.str("noise.kind", "uniform");
  if (nk == "uniform") cfg.noise.kind = NoiseKind::uniform;
  else if (nk == "gaussian") cfg.noise.kind = NoiseKind::gaussian;
  else throw ConfigError("noise.kind must be uniform or gaussian");
  cfg.noise.seed = static_cast<std::uint64_t>(r.integer("noise.seed", 1));
  if (!(cfg.noise.amplitude >= 0.0)) throw ConfigError("noise.amplitude must be nonnegative");

  cfg.output_path = r.str("output.csv", "");
  cfg.timing = r.flag("output.timing", false);

  if (r.has("oracle.cases")) {
    for (const std::vector<double>& p : r.groups("oracle.cases")) {
      if (p.size() != 2) throw ConfigError("oracle.cases entries need c and delta");
      cfg.oracle.cases.emplace_back(p[0], p[1]);
    }
  } else {
    const bool numeric = r.has("cone.delta") && r.str("cone.delta", "") != "default";
    cfg.oracle.cases.emplace_back(c, numeric ? r.num("cone.delta", 0.1) : 0.1);
  }
  cfg.oracle.tau_start = r.num("oracle.tau_start", cfg.oracle.tau_start);
  cfg.oracle.tau_count = r.integer("oracle.tau_count", cfg.oracle.tau_count);
  cfg.oracle.density = r.str("oracle.density", "one");
  if (cfg.oracle.density != "one" && cfg.oracle.density != "linear")
    throw ConfigError("oracle.density must be one or linear");

  cfg.forward.T = r.num("forward.T", cfg.forward.T);
  if (r.has("forward.levels")) {
    cfg.forward.levels.clear();
    for (double v : r.list("forward.levels")) cfg.forward.levels.push_back(static_cast<int>(v));
  }
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path, const std::vector<std::string>& overrides) {
  KeyValues kv = read_key_values_file(path);
  for (const std::string& o : overrides) apply_override(kv, o);
  return parse_experiment(kv);
}

namespace {

struct Field {
  CaloricField field;
  std::optional<double> exact_at_target;
};

Field make_field(const ExperimentConfig& cfg) {
  const FieldSpec& f = cfg.field;
  const ScenarioGeometry& g = cfg.geom;
  if (f.kind == "grid") {
    std::ifstream in(f.grid_path);
    if (!in) throw ConfigError("cannot open field.grid_path '" + f.grid_path + "'");
    return {CaloricField::from_grid(read_grid_csv(in)), std::nullopt};
  }
  if (f.kind == "forward") {
    if (g.dim() != 1) throw ConfigError("field.kind = forward is one-dimensional");
    auto zero = [](const SpaceTimePoint&) { return 0.0; };
    if (f.forward_initial == "one") {
      return {solve_forward(g, [](double) { return 1.0; }, zero, zero, f.forward_grid), 1.0};
    }
    if (g.domain.lo[0] != 0.0 || g.domain.hi[0] != 1.0)
      throw ConfigError("forward.initial = sin_pi needs scenario.domain = (0, 1)");
    const SpaceTimePoint& p = g.target;
    return {solve_forward(
                g, [](double x) { return std::sin(kPi * x); },
                [](const SpaceTimePoint& q) { return -kPi * std::exp(-kPi * kPi * q.t); }, zero, f.forward_grid),
            std::exp(-kPi * kPi * p.t) * std::sin(kPi * p.x[0])};
  }
  const CaloricField field = analytic_solution(parse_field_kind(f.kind), f.params);
  return {field, field.value(g.target)};
}

VisibilityConstant choose_constant(const ExperimentConfig& cfg, const ConeRegion& cone) {
  switch (cfg.constant_source) {
    case ConstantSource::oracle: {
      const VisibilityFit fit = visibility_limit_numeric(
          cone, [](const SpaceTimePoint&) { return 1.0; },
          doubling_taus(cfg.oracle.tau_start, cfg.oracle.tau_count));
      return {fit.mu_fit, fit.C_fit};
    }
    case ConstantSource::edge: return edge_constant(cone);
    case ConstantSource::printed: return analytic_constant(cone);
    case ConstantSource::triangle: return triangle_rhs_constant(cone);
    case ConstantSource::given: return cfg.given_constant;
  }
  return {};
}

}  // namespace

ReconstructRun run_reconstruct(const ExperimentConfig& cfg) {
  if (cfg.geom.dim() == 0) throw ConfigError("reconstruct needs the scenario.* keys");
  ReconstructRun run;
  run.margins = validate_config(cfg.geom, cfg.probe);
  const Field f = make_field(cfg);
  std::optional<double> reference = cfg.reference;
  if (cfg.reference_auto) reference = f.exact_at_target;

  std::optional<MeasurementSet> data;
  if (cfg.noise.amplitude > 0.0) {
    data = extract_traces(f.field, cfg.geom, nullptr, cfg.recon.orders);
    add_noise(*data, cfg.noise);
  }
  Estimator estimator;
  if (cfg.method == Method::carleman) {
    estimator = [&](double tau) {
      return data ? carleman_estimate(*data, cfg.geom, cfg.probe, tau, cfg.recon)
                  : carleman_estimate(f.field, cfg.geom, cfg.probe, tau, cfg.recon);
    };
    run.report = tau_sweep(estimator, cfg.taus, reference);
    return run;
  }
  const double delta = cfg.cone->delta ? *cfg.cone->delta : default_cone_delta(cfg.geom, cfg.probe);
  run.cone_delta = delta;
  const ConeRegion cone = build_cone(cfg.geom.dim(), cfg.geom.target, cfg.probe, delta, cfg.cone->aux);
  const VisibilityConstant constant = choose_constant(cfg, cone);
  run.constant = constant;
  estimator = [&](double tau) {
    return data ? enclosure_estimate(*data, cfg.geom, cone, cfg.probe, tau, constant, cfg.recon)
                : enclosure_estimate(f.field, cfg.geom, cone, cfg.probe, tau, constant, cfg.recon);
  };
  run.report = tau_sweep(estimator, cfg.taus, reference);
  return run;
}

void write_reconstruct_summary(std::ostream& os, const ExperimentConfig& cfg, const ReconstructRun& run) {
  std::ostringstream s;
  s << std::setprecision(10);
  s << "method " << to_string(cfg.method) << ", field " << cfg.field.kind << ", c " << cfg.probe.c << '\n';
  s << "margins: final-time " << run.margins.final_time << ", initial-data " << run.margins.initial_data
    << ", lateral-boundary " << run.margins.lateral_boundary << '\n';
  if (run.cone_delta) s << "cone delta " << *run.cone_delta << '\n';
  if (run.constant)
    s << "constant (" << to_string(cfg.constant_source) << "): mu " << run.constant->mu << ", C "
      << run.constant->C.real() << (run.constant->C.imag() < 0 ? " - " : " + ") << std::abs(run.constant->C.imag())
      << "i\n";
  const SweepRow& last = run.report.rows.back();
  const SweepRow& best = run.report.rows[run.report.trend.stable_row];
  s << "final estimate (tau " << last.tau << "): " << last.estimate.real() << " + " << last.estimate.imag()
    << "i, quad_error " << last.quad_error << '\n';
  s << "best stable row: tau " << best.tau << ", estimate " << best.estimate.real() << '\n';
  if (last.reference) {
    s << "reference " << *last.reference << ", relative error " << last.rel_error << " (best stable "
      << best.rel_error << ")\n";
  }
  if (run.report.trend.defined) s << "error trend: log-slope " << run.report.trend.slope << " per unit tau\n";
  os << s.str();
}

std::vector<CalibrationRow> run_visibility_oracle(const ExperimentConfig& cfg) {
  const int n = cfg.oracle.n;
  SpaceTimePoint target = cfg.geom.dim() == n ? cfg.geom.target : SpaceTimePoint{Vector(n), 0.5};
  if (cfg.geom.dim() != n)
    for (int i = 0; i < n; ++i) target.x[i] = 0.5;
  std::vector<CalibrationRow> rows;
  const std::vector<double> taus = doubling_taus(cfg.oracle.tau_start, cfg.oracle.tau_count);
  for (const auto& [c, delta] : cfg.oracle.cases) {
    ProbeDirection pr = cfg.probe;
    pr.c = c;
    const ConeRegion cone = build_cone(n, target, pr, delta);
    CalibrationRow row = calibrate(cone, taus);
    if (cfg.oracle.density == "linear") {
      const SpaceTimePoint x0 = target;
      row.fit = visibility_limit_numeric(
          cone, [x0](const SpaceTimePoint& p) { return 1.0 + 0.1 * (p.x[0] - x0.x[0]); }, taus);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ForwardLevel> run_forward_study(const ExperimentConfig& cfg) {
  ScenarioGeometry g;
  g.domain = {Vector{0.0}, Vector{1.0}};
  g.T = cfg.forward.T;
  g.gamma = {GammaPiece{0, 1, 0.0, 0.0, 0.0, g.T}};
  g.U = g.domain;
  g.target = {Vector{0.5}, 0.5 * g.T};
  auto exact = [](double x, double t) { return std::exp(-kPi * kPi * t) * std::sin(kPi * x); };
  std::vector<ForwardLevel> out;
  for (int nx : cfg.forward.levels) {
    const CaloricField f = solve_forward(
        g, [&](double x) { return exact(x, 0.0); },
        [](const SpaceTimePoint& p) { return -kPi * std::exp(-kPi * kPi * p.t); },
        [](const SpaceTimePoint&) { return 0.0; }, {nx, nx});
    const GridData& d = *f.grid();
    double err = 0.0;
    for (int k = 0; k <= d.nt; ++k)
      for (int i = 0; i <= d.nx; ++i)
        err = std::max(err, std::abs(d.at(i, k) - exact(d.x_lo + i * d.h(), k * d.dt())));
    ForwardLevel lv{nx, nx, err, std::numeric_limits<double>::quiet_NaN()};
    if (!out.empty()) lv.ratio = out.back().max_error / err;
    out.push_back(lv);
  }
  return out;
}

void write_forward_csv(std::ostream& os, const std::vector<ForwardLevel>& levels) {
  os << "nx,nt,max_error,ratio\n";
  for (const ForwardLevel& l : levels) {
    std::ostringstream line;
    line << std::setprecision(17) << l.nx << ',' << l.nt << ',' << l.max_error << ',';
    if (std::isfinite(l.ratio)) line << l.ratio;
    os << line.str() << '\n';
  }
}

void write_checks_csv(std::ostream& os, const std::vector<CheckResult>& checks) {
  os << "name,pass,measured,threshold\n";
  for (const CheckResult& c : checks) {
    std::ostringstream line;
    line << std::setprecision(17) << c.name << ',' << (c.pass ? 1 : 0) << ',' << c.measured << ',' << c.threshold;
    os << line.str() << '\n';
  }
}

}  // namespace heatrecon::cli
