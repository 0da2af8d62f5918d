#include "gencalc/cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gencalc/derivative.hpp"
#include "gencalc/error.hpp"
#include "gencalc/io.hpp"
#include "gencalc/mechanics.hpp"
#include "gencalc/sturm_liouville.hpp"
#include "gencalc/units.hpp"
#include "gencalc/verify.hpp"

namespace gencalc {
namespace {

using std::numbers::pi;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void allow_keys(const Json& obj, const std::set<std::string>& keys, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!keys.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const Json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> get_optional(const Json& obj, const std::string& key) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  return get<T>(obj, key, T{});
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
}

// pmap: {"family": "khalil", "alpha": 0.5, "domain": [0.01, 1.0]}
PMap parse_pmap(const Json& spec) {
  allow_keys(spec, {"family", "alpha", "domain"}, "pmap");
  const auto name = get<std::string>(spec, "family", "classical");
  const auto family = parse_family(name);
  if (!family) throw ConfigError("unknown p-map family '" + name + "'");
  const auto alpha = get_optional<double>(spec, "alpha");
  if (family_needs_alpha(*family) && !alpha) throw ConfigError("p-map " + name + " needs alpha");

  const bool positive_only = *family == PMapFamily::khalil || *family == PMapFamily::katugampola;
  Interval domain = positive_only ? Interval::open(0.0, std::numeric_limits<double>::infinity())
                                  : Interval::real_line();
  if (spec.contains("domain")) {
    const auto d = get<std::vector<double>>(spec, "domain", {});
    if (d.size() != 2 || !(d[0] < d[1])) throw ConfigError("domain must be [lo, hi] with lo < hi");
    domain = Interval::closed(d[0], d[1]);
    // t = 0 itself is excluded for the fractional families.
    if (positive_only && d[0] == 0.0) domain.lo_open = true;
  }
  try {
    return make_builtin(*family, family_needs_alpha(*family) ? alpha : std::nullopt, domain);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// A function is a catalog name, a number, or {"step": {"at": x, "left": l, "right": r}}.
RealFunction parse_function(const Json& spec, std::vector<double>& breakpoints) {
  if (spec.is_string()) {
    try {
      return builtin_function(spec.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (spec.is_number()) return RealFunction::constant_fn(spec.get<double>());
  if (spec.is_object() && spec.contains("step")) {
    allow_keys(spec, {"step"}, "function");
    const auto& s = spec["step"];
    allow_keys(s, {"at", "left", "right"}, "step");
    const double at = get<double>(s, "at", 0.0);
    breakpoints.push_back(at);
    return step_function(at, get<double>(s, "left", -1.0), get<double>(s, "right", 1.0));
  }
  throw ConfigError("a function must be a catalog name, a number or a step object");
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  body(out);
}

std::vector<double> uniform_times(double t0, double t_end, int samples) {
  if (samples < 2) throw ConfigError("samples must be at least 2");
  if (!(t_end > t0)) throw ConfigError("t_end must exceed t0");
  std::vector<double> ts;
  for (int i = 0; i < samples; ++i) ts.push_back(t0 + (t_end - t0) * i / (samples - 1));
  ts.back() = t_end;
  return ts;
}

TauMethod parse_tau_method(const std::string& s) {
  if (s == "auto" || s == "automatic") return TauMethod::automatic;
  if (s == "closed_form") return TauMethod::closed_form;
  if (s == "quadrature") return TauMethod::quadrature;
  throw ConfigError("tau_method must be auto, closed_form or quadrature");
}

Json cmd_deriv(const Json& cfg) {
  allow_keys(cfg, {"pmap", "fn", "t", "method", "depth", "h0", "tol"}, "deriv config");
  const PMap pm = parse_pmap(cfg.value("pmap", Json::object()));
  std::vector<double> unused;
  const auto f = parse_function(cfg.value("fn", Json("t")), unused);
  const auto t = get_optional<double>(cfg, "t");
  if (!t) throw ConfigError("deriv needs t");
  if (!pm.domain().contains(*t)) throw ConfigError("t lies outside the p-map domain");
  LimitOptions opts;
  opts.depth = get<int>(cfg, "depth", opts.depth);
  opts.h0 = get_optional<double>(cfg, "h0");
  opts.tol = get<double>(cfg, "tol", opts.tol);
  const auto method = get<std::string>(cfg, "method", "limit");
  DerivativeResult r;
  if (method == "limit") r = gd_limit(pm, f, *t, opts);
  else if (method == "lift") r = gd_lift(pm, f, *t, opts);
  else throw ConfigError("method must be limit or lift");
  Json out = to_json(r);
  out["pmap"] = pm.label();
  out["t"] = *t;
  return out;
}

bool csv_requested(const Json& cfg) {
  const auto format = get<std::string>(cfg, "format", "json");
  if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
  return format == "csv";
}

template <class T>
std::string csv_text(const T& value) {
  std::ostringstream o;
  write_csv(o, value);
  return o.str();
}

Json cmd_sl(const Json& cfg, std::string& csv) {
  allow_keys(cfg, {"pmap", "interval", "bc", "mu", "nu", "n", "P", "q", "w", "lambda_max", "rtol",
                   "out", "eigenfunction", "format"},
             "sl config");
  SLProblem prob{parse_pmap(cfg.value("pmap", Json::object()))};
  const auto& d = prob.pm.domain();
  std::vector<double> interval{std::isfinite(d.lo) ? d.lo : 0.0, std::isfinite(d.hi) ? d.hi : 1.0};
  interval = get<std::vector<double>>(cfg, "interval", interval);
  if (interval.size() != 2) throw ConfigError("interval must be [a, b]");
  prob.a = interval[0];
  prob.b = interval[1];

  const auto bc = get<std::string>(cfg, "bc", "dirichlet");
  if (bc == "dirichlet") prob.mu = prob.nu = 0.0;
  else if (bc == "neumann") prob.mu = prob.nu = pi / 2;
  else if (bc != "angles") throw ConfigError("bc must be dirichlet, neumann or angles");
  prob.mu = get<double>(cfg, "mu", prob.mu);
  prob.nu = get<double>(cfg, "nu", prob.nu);
  if (cfg.contains("P")) prob.P = parse_function(cfg["P"], prob.breakpoints);
  if (cfg.contains("q")) prob.q = parse_function(cfg["q"], prob.breakpoints);
  if (cfg.contains("w")) prob.w = parse_function(cfg["w"], prob.breakpoints);
  try {
    validate(prob);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const int n = get<int>(cfg, "n", 5);
  if (n < 1) throw ConfigError("n must be positive");
  ShootingOptions opts;
  opts.lambda_max = get<double>(cfg, "lambda_max", opts.lambda_max);
  opts.rtol = get<double>(cfg, "rtol", opts.rtol);
  const auto spectrum = shoot_eigenvalues(prob, n, opts);
  if (csv_requested(cfg)) csv = csv_text(spectrum);

  Json out = to_json(spectrum);
  Json estimates = {{"plus", Json::array()}, {"minus", Json::array()}};
  for (int k = 1; k <= n; ++k) {
    if (spectrum.asymptotic_plus) estimates["plus"].push_back(asymptotic_estimate(prob, k, Side::plus));
    if (spectrum.asymptotic_minus) estimates["minus"].push_back(asymptotic_estimate(prob, k, Side::minus));
  }
  out["estimates"] = estimates;

  if (cfg.contains("out")) {
    const auto path = get<std::string>(cfg, "out", "");
    write_file(path, [&](std::ostream& o) { write_csv(o, spectrum); });
    out["spectrum_csv"] = path;
  }
  if (cfg.contains("eigenfunction")) {
    const auto& e = cfg["eigenfunction"];
    allow_keys(e, {"index", "side", "samples", "out"}, "eigenfunction");
    const int index = get<int>(e, "index", 1);
    const auto side = get<std::string>(e, "side", "plus");
    const auto& values = side == "minus" ? spectrum.lambda_minus : spectrum.lambda_plus;
    if (side != "plus" && side != "minus") throw ConfigError("eigenfunction side must be plus or minus");
    if (index < 1 || index > static_cast<int>(values.size())) throw ConfigError("eigenfunction index out of range");
    const double lambda = values[index - 1];
    const auto samples = eigenfunction(prob, lambda, get<int>(e, "samples", 4001), opts);
    const auto path = get<std::string>(e, "out", "eigenfunction.csv");
    write_file(path, [&](std::ostream& o) { write_csv(o, samples); });
    out["eigenfunction"] = {{"lambda", lambda},
                            {"csv", path},
                            {"residual", eigenfunction_residual(prob, lambda, samples)}};
  }
  return out;
}

Json trajectory_summary(const Trajectory& traj, const Json& cfg, std::string& csv) {
  if (csv_requested(cfg)) csv = csv_text(traj);
  Json out = {{"samples", traj.samples.size()}, {"labels", traj.labels}};
  const auto& last = traj.samples.back();
  Json final_state = Json::object();
  for (std::size_t i = 0; i < traj.labels.size(); ++i) final_state[traj.labels[i]] = last.state[i];
  out["final"] = {{"t", last.t}, {"tau", last.tau}, {"state", final_state}};
  if (cfg.contains("out")) {
    const auto path = get<std::string>(cfg, "out", "");
    write_file(path, [&](std::ostream& o) { write_csv(o, traj); });
    out["csv"] = path;
  }
  return out;
}

Json simulate_central_force(const Json& cfg, std::string& csv) {
  allow_keys(cfg, {"pmap", "k", "x0", "y0", "Dx0", "Dy0", "t0", "m", "t_end", "samples", "tau_method", "out", "format"},
             "central-force config");
  CentralForceConfig c{parse_pmap(cfg.value("pmap", Json::object()))};
  c.k = get<double>(cfg, "k", c.k);
  if (!(c.k > 0.0)) throw ConfigError("central force needs k > 0");
  c.x0 = get<double>(cfg, "x0", c.x0);
  c.y0 = get<double>(cfg, "y0", c.y0);
  c.Dx0 = get<double>(cfg, "Dx0", c.Dx0);
  c.Dy0 = get<double>(cfg, "Dy0", c.Dy0);
  c.t0 = get<double>(cfg, "t0", c.t0);
  c.m = get<double>(cfg, "m", c.m);
  const auto ts = uniform_times(c.t0, get<double>(cfg, "t_end", 1.0), get<int>(cfg, "samples", 1001));
  const auto traj = central_force_solve(c, ts, parse_tau_method(get<std::string>(cfg, "tau_method", "auto")));
  const auto k = ellipse_constants(c);
  Json out = trajectory_summary(traj, cfg, csv);
  out["constants"] = {{"c1", k.c1}, {"c2", k.c2}, {"d1", k.d1}, {"d2", k.d2}};
  out["ellipse_residual"] = ellipse_invariant(traj, k);
  return out;
}

Json simulate_gravity(const Json& cfg, std::string& csv) {
  allow_keys(cfg, {"pmap", "x0", "u0", "y0", "v0", "g", "t0", "t_end", "samples", "tau_method", "out", "format"},
             "gravity config");
  GravityConfig c{parse_pmap(cfg.value("pmap", Json::object()))};
  c.x0 = get<double>(cfg, "x0", c.x0);
  c.u0 = get<double>(cfg, "u0", c.u0);
  c.y0 = get<double>(cfg, "y0", c.y0);
  c.v0 = get<double>(cfg, "v0", c.v0);
  c.g = get<double>(cfg, "g", c.g);
  c.t0 = get<double>(cfg, "t0", c.t0);
  const auto ts = uniform_times(c.t0, get<double>(cfg, "t_end", 1.0), get<int>(cfg, "samples", 101));
  const auto traj = gravity_solve(c, ts, parse_tau_method(get<std::string>(cfg, "tau_method", "auto")));
  Json out = trajectory_summary(traj, cfg, csv);
  const auto classical = classical_fall(c, ts.back());
  out["classical_final"] = {{"x", classical[0]}, {"y", classical[1]}};
  return out;
}

Json simulate_drag(const Json& cfg, std::string& csv) {
  allow_keys(cfg, {"m", "g", "C", "rho", "A", "alpha", "sigma", "t_end", "samples", "out", "format"},
             "drag config");
  DragConfig c;
  c.m = get<double>(cfg, "m", c.m);
  c.g = get<double>(cfg, "g", c.g);
  c.C = get<double>(cfg, "C", c.C);
  c.rho = get<double>(cfg, "rho", c.rho);
  c.A = get<double>(cfg, "A", c.A);
  c.alpha = get<double>(cfg, "alpha", c.alpha);
  c.sigma = cfg.contains("sigma") ? get<double>(cfg, "sigma", 0.0) : sigma_from_environment();
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const double t_end = get<double>(cfg, "t_end", std::max(1.0, drag_saturation_time(c)));
  const auto ts = uniform_times(0.0, t_end, get<int>(cfg, "samples", 101));
  const auto traj = drag_solve(c, ts);
  Json out = trajectory_summary(traj, cfg, csv);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    if (std::isfinite(s.state[2])) worst = std::max(worst, s.state[2]);
  }
  out["terminal_velocity"] = terminal_velocity(c);
  out["c"] = drag_constant(c);
  out["max_residual"] = worst;
  out["sigma"] = c.sigma;
  return out;
}

NBodySystem two_body_circle() {
  return {{1.0, 1.0}, {{-0.5, 0.0, 0.0}, {0.5, 0.0, 0.0}}, {{0.0, -std::sqrt(0.5), 0.0}, {0.0, std::sqrt(0.5), 0.0}}, 1.0};
}

Json simulate_nbody(const Json& cfg, std::string& csv) {
  allow_keys(cfg, {"pmap", "masses", "positions", "velocities", "G", "t0", "t_end", "dt_tau", "preset", "samples",
                   "out", "out_tau", "format"},
             "nbody config");
  NBodySystem sys = two_body_circle();
  const auto preset = get<std::string>(cfg, "preset", "two_body_circle");
  if (preset != "two_body_circle") throw ConfigError("unknown n-body preset '" + preset + "'");
  if (cfg.contains("masses")) sys.masses = get<std::vector<double>>(cfg, "masses", {});
  if (cfg.contains("positions")) sys.positions = get<std::vector<Vec3>>(cfg, "positions", {});
  if (cfg.contains("velocities")) sys.velocities = get<std::vector<Vec3>>(cfg, "velocities", {});
  sys.G = get<double>(cfg, "G", sys.G);
  try {
    validate(sys);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const PMap pm = parse_pmap(cfg.value("pmap", Json::object()));
  const auto r = nbody_integrate(sys, pm, get<double>(cfg, "t0", 0.0), get<double>(cfg, "t_end", 1.0),
                                 get<double>(cfg, "dt_tau", 1e-3));
  // samples only thins the written rows; the step is set by dt_tau
  Trajectory shown = r.in_t;
  if (const auto rows = get_optional<int>(cfg, "samples")) {
    if (*rows < 2) throw ConfigError("samples must be at least 2");
    const std::size_t total = r.in_t.samples.size();
    if (static_cast<std::size_t>(*rows) < total) {
      shown.samples.clear();
      for (int i = 0; i < *rows; ++i) {
        shown.samples.push_back(r.in_t.samples[(total - 1) * static_cast<std::size_t>(i) / (*rows - 1)]);
      }
    }
  }
  Json out = trajectory_summary(shown, cfg, csv);
  out["steps"] = r.steps;
  out["energy_drift"] = r.energy_drift;
  out["angular_momentum_drift"] = r.angular_momentum_drift;
  double hausdorff = 0.0;
  for (std::size_t i = 0; i < sys.masses.size(); ++i) {
    hausdorff = std::max(hausdorff, hausdorff_distance(body_path(r.in_t, i), body_path(r.in_tau, i)));
  }
  out["path_hausdorff"] = hausdorff;
  if (cfg.contains("out_tau")) {
    const auto path = get<std::string>(cfg, "out_tau", "");
    write_file(path, [&](std::ostream& o) { write_csv(o, r.in_tau); });
    out["csv_tau"] = path;
  }
  return out;
}

Json cmd_units(const Json& cfg) {
  allow_keys(cfg, {"value", "unit", "alpha", "sigma"}, "units config");
  const auto value = get_optional<double>(cfg, "value");
  if (!value) throw ConfigError("units needs value");
  const auto [length, time] = [&] {
    try {
      return parse_si_unit(get<std::string>(cfg, "unit", "m/s"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const double alpha = get<double>(cfg, "alpha", 1.0);
  const double sigma = cfg.contains("sigma") ? get<double>(cfg, "sigma", 0.0) : sigma_from_environment();
  try {
    const auto q = from_si(*value, length, time, alpha, sigma);
    Json out = to_json(q);
    out["sigma"] = sigma;
    return out;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

struct PmapFlags {
  std::optional<std::string> family;
  std::optional<double> alpha;
  std::vector<double> domain;

  void attach(CLI::App* app) {
    app->add_option("--pmap", family, "p-map family");
    app->add_option("--alpha", alpha, "fractional order in (0, 1]");
    app->add_option("--domain", domain, "p-map domain lo hi")->expected(2);
  }

  void merge(Json& cfg) const {
    if (!family && !alpha && domain.empty()) return;
    Json& p = cfg["pmap"];
    if (!p.is_object()) p = Json::object();
    if (family) p["family"] = *family;
    if (alpha) p["alpha"] = *alpha;
    if (!domain.empty()) p["domain"] = domain;
  }
};

template <class T>
void put(Json& cfg, const char* key, const std::optional<T>& v) {
  if (v) cfg[key] = *v;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized and fractional derivative toolkit"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "JSON config with the same keys as the flags");

  PmapFlags pflags;

  auto* deriv = app.add_subcommand("deriv", "generalized derivative of a catalog function");
  std::optional<std::string> fn, method;
  std::optional<double> t;
  pflags.attach(deriv);
  deriv->add_option("--fn", fn, "catalog function name");
  deriv->add_option("--t", t, "evaluation point");
  deriv->add_option("--method", method, "limit or lift");
  std::optional<int> depth;
  std::optional<double> h0, tol;
  deriv->add_option("--depth", depth, "Richardson levels (default 4)");
  deriv->add_option("--h0", h0, "initial step (default 1e-3 max(1, |t|))");
  deriv->add_option("--tol", tol, "convergence tolerance (default 1e-6)");
  deriv->add_option("--config", config_path, "JSON config");

  auto* sl = app.add_subcommand("sl", "Sturm-Liouville eigenvalues by shooting");
  std::vector<double> interval;
  std::optional<std::string> bc, w, q, P, out_path, eigen_out;
  std::optional<int> n, eigen_index;
  std::optional<double> mu, nu, lambda_max;
  pflags.attach(sl);
  sl->add_option("--interval", interval, "a b")->expected(2);
  sl->add_option("--bc", bc, "dirichlet, neumann or angles");
  sl->add_option("--mu", mu, "left boundary angle");
  sl->add_option("--nu", nu, "right boundary angle");
  sl->add_option("--n", n, "eigenvalues per side");
  sl->add_option("--w", w, "weight (catalog name)");
  sl->add_option("--q", q, "potential (catalog name)");
  sl->add_option("--P", P, "coefficient P (catalog name)");
  sl->add_option("--lambda-max", lambda_max, "scan limit for |lambda|");
  std::optional<double> rtol;
  std::optional<std::string> format;
  sl->add_option("--rtol", rtol, "Pruefer integration tolerance (default 1e-12)");
  sl->add_option("--format", format, "json (default) or csv on stdout");
  sl->add_option("--out", out_path, "spectrum CSV");
  sl->add_option("--eigenfunction-out", eigen_out, "eigenfunction CSV (t, y, Dy)");
  sl->add_option("--eigenfunction-index", eigen_index, "index of the exported eigenfunction");
  sl->add_option("--config", config_path, "JSON config");

  auto* simulate = app.add_subcommand("simulate", "mechanics applications");
  simulate->require_subcommand(1);
  std::optional<double> t_end, t0;
  std::optional<int> samples;
  std::optional<std::string> sim_out;
  std::optional<double> dt_tau;
  std::string kind;
  for (const char* name : {"central-force", "gravity", "drag", "nbody"}) {
    auto* sub = simulate->add_subcommand(name);
    pflags.attach(sub);
    sub->add_option("--t0", t0, "start time");
    sub->add_option("--t-end", t_end, "end time");
    sub->add_option("--samples", samples, "number of samples");
    sub->add_option("--out", sim_out, "trajectory CSV");
    sub->add_option("--format", format, "json (default) or csv on stdout");
    if (std::string_view(name) == "nbody") sub->add_option("--dt-tau", dt_tau, "leapfrog step in tau (default 1e-3)");
    sub->add_option("--config", config_path, "JSON config");
    sub->callback([&kind, name] { kind = name; });
  }

  auto* units = app.add_subcommand("units", "SI to alpha-second conversion");
  std::optional<double> value, ualpha, sigma;
  std::optional<std::string> unit;
  units->add_option("--value", value, "SI magnitude");
  units->add_option("--unit", unit, "m, m/s or m/s2");
  units->add_option("--alpha", ualpha, "fractional order");
  units->add_option("--sigma", sigma, "seconds-to-alpha-seconds factor");
  units->add_option("--config", config_path, "JSON config");

  auto* verify = app.add_subcommand("verify", "run the fixture suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "gencalc: " << e.what() << '\n';
    out << Json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump(2) << '\n';
    return 2;
  }

  try {
    Json cfg = config_path ? load_config(*config_path) : Json::object();
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    pflags.merge(cfg);
    Json result;
    std::string csv;
    if (deriv->parsed()) {
      put(cfg, "fn", fn);
      put(cfg, "t", t);
      put(cfg, "method", method);
      put(cfg, "depth", depth);
      put(cfg, "h0", h0);
      put(cfg, "tol", tol);
      result = cmd_deriv(cfg);
    } else if (sl->parsed()) {
      if (!interval.empty()) cfg["interval"] = interval;
      put(cfg, "bc", bc);
      put(cfg, "mu", mu);
      put(cfg, "nu", nu);
      put(cfg, "n", n);
      put(cfg, "w", w);
      put(cfg, "q", q);
      put(cfg, "P", P);
      put(cfg, "lambda_max", lambda_max);
      put(cfg, "rtol", rtol);
      put(cfg, "format", format);
      put(cfg, "out", out_path);
      if (eigen_out || eigen_index) {
        Json e = cfg.value("eigenfunction", Json::object());
        if (eigen_out) e["out"] = *eigen_out;
        if (eigen_index) e["index"] = *eigen_index;
        cfg["eigenfunction"] = e;
      }
      result = cmd_sl(cfg, csv);
    } else if (simulate->parsed()) {
      put(cfg, "t0", t0);
      put(cfg, "t_end", t_end);
      put(cfg, "samples", samples);
      put(cfg, "out", sim_out);
      put(cfg, "format", format);
      put(cfg, "dt_tau", dt_tau);
      if (kind == "central-force") result = simulate_central_force(cfg, csv);
      else if (kind == "gravity") result = simulate_gravity(cfg, csv);
      else if (kind == "drag") {
        if (cfg.contains("t0")) throw ConfigError("drag starts at t = 0");
        if (cfg.contains("pmap")) {
          // the drag law fixes its own p-map; only --alpha carries over
          Json p = cfg["pmap"];
          cfg.erase("pmap");
          if (p.contains("family") || p.contains("domain")) throw ConfigError("drag takes alpha, not a p-map");
          if (p.contains("alpha")) cfg["alpha"] = p["alpha"];
        }
        result = simulate_drag(cfg, csv);
      } else result = simulate_nbody(cfg, csv);
    } else if (units->parsed()) {
      put(cfg, "value", value);
      put(cfg, "unit", unit);
      put(cfg, "alpha", ualpha);
      put(cfg, "sigma", sigma);
      result = cmd_units(cfg);
    } else if (verify->parsed()) {
      const auto fixtures = run_fixtures();
      Json list = Json::array();
      int failed = 0;
      for (const auto& f : fixtures) {
        list.push_back({{"name", f.name}, {"pass", f.pass}, {"detail", f.detail}});
        if (!f.pass) ++failed;
      }
      out << Json{{"fixtures", list}, {"passed", fixtures.size() - failed}, {"failed", failed}}.dump(2) << '\n';
      return failed == 0 ? 0 : 1;
    }
    if (!csv.empty()) out << csv;
    else out << result.dump(2) << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "gencalc: " << e.what() << '\n';
    out << Json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump(2) << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "gencalc: " << e.what() << '\n';
    out << Json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump(2) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "gencalc: " << e.what() << '\n';
    out << Json{{"error", {{"kind", "numerical"}, {"message", e.what()}}}}.dump(2) << '\n';
    return 1;
  }
}

}  // namespace gencalc
