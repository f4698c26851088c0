#include "mcf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "mcf/errors.hpp"
#include "mcf/exact.hpp"
#include "mcf/reflection.hpp"
#include "mcf/shape.hpp"

namespace mcf {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigError, field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      config_error(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double number(const json& obj, const char* key, const std::string& path, std::optional<double> fallback = {}) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error(field, "missing required number");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(field, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& path, std::optional<int> fallback = {}) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error(field, "missing required integer");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) config_error(field, "expected an integer, got " + std::string(v.type_name()));
  return v.get<int>();
}

std::string text(const json& obj, const char* key, const std::string& path, std::optional<std::string> fallback = {}) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error(field, "missing required string");
  }
  const json& v = obj.at(key);
  if (!v.is_string()) config_error(field, "expected a string, got " + std::string(v.type_name()));
  return v.get<std::string>();
}

const json& object(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) config_error(path.empty() ? key : path + "." + key, "missing required object");
  const json& v = obj.at(key);
  if (!v.is_object()) config_error(path.empty() ? key : path + "." + key, "expected an object, got " + std::string(v.type_name()));
  return v;
}

InitialData parse_initial(const json& j) {
  InitialData d;
  const std::string kind = text(j, "kind", "initial");
  if (kind == "equator") {
    reject_unknown(j, "initial", {"kind"});
    d.kind = InitialData::Kind::Equator;
  } else if (kind == "sphere") {
    reject_unknown(j, "initial", {"kind", "kappa0", "center_offset"});
    d.kind = InitialData::Kind::Sphere;
    d.kappa0 = number(j, "kappa0", "initial");
    d.center_offset = number(j, "center_offset", "initial", 0.0);
    if (!(d.kappa0 > 0.0 && d.kappa0 < 1.0)) config_error("initial.kappa0", "must lie in (0, 1)");
  } else if (kind == "profile") {
    reject_unknown(j, "initial", {"kind", "a0", "coefficients"});
    d.kind = InitialData::Kind::Profile;
    d.a0 = number(j, "a0", "initial", 0.0);
    if (j.contains("coefficients")) {
      const json& c = j.at("coefficients");
      if (!c.is_array()) config_error("initial.coefficients", "expected an array of numbers");
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_number()) config_error("initial.coefficients[" + std::to_string(i) + "]", "expected a number");
        d.coefficients.push_back(c[i].get<double>());
      }
    }
  } else {
    config_error("initial.kind", "expected equator, sphere or profile, got \"" + kind + "\"");
  }
  return d;
}

FlowConfig parse_flow(const json& j) {
  reject_unknown(j, "flow",
                 {"dt", "t_end", "method", "cfl_safety", "stop_min_radius", "stop_max_A", "record_every"});
  FlowConfig f;
  f.dt = number(j, "dt", "flow", f.dt);
  f.t_end = number(j, "t_end", "flow", f.t_end);
  const std::string method = text(j, "method", "flow", "rk4");
  if (method == "rk4")
    f.method = Method::RK4;
  else if (method == "euler")
    f.method = Method::Euler;
  else
    config_error("flow.method", "expected rk4 or euler, got \"" + method + "\"");
  f.cfl_safety = number(j, "cfl_safety", "flow", f.cfl_safety);
  f.stop_min_radius = number(j, "stop_min_radius", "flow", f.stop_min_radius);
  f.stop_max_A = number(j, "stop_max_A", "flow", f.stop_max_A);
  f.record_every = integer(j, "record_every", "flow", f.record_every);
  try {
    f.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, std::string(e.what()).substr(std::string("ConfigError: ").size()));
  }
  return f;
}

const std::set<std::string>& check_kinds() {
  static const std::set<std::string> kinds = {"harnack",      "q_ode", "identities", "inequalities",
                                              "decay",        "reflection", "fit_equator"};
  return kinds;
}

CheckRequest parse_check(const json& j, const std::string& path) {
  CheckRequest c;
  if (j.is_string()) {
    c.kind = j.get<std::string>();
  } else if (j.is_object()) {
    c.kind = text(j, "kind", path);
    c.params = j;
    c.params.erase("kind");
  } else {
    config_error(path, "expected a check name or an object with \"kind\"");
  }
  if (!check_kinds().contains(c.kind)) config_error(path + ".kind", "unknown check \"" + c.kind + "\"");
  const json& p = c.params;
  if (c.kind == "harnack") {
    reject_unknown(p, path, {"t_origin", "tolerance"});
    number(p, "t_origin", path, 0.0);
    if (p.contains("tolerance")) number(p, "tolerance", path);
  } else if (c.kind == "q_ode") {
    reject_unknown(p, path, {"epsilon", "t_origin", "tolerance"});
    number(p, "epsilon", path, 0.01);
    number(p, "t_origin", path, 0.0);
    if (p.contains("tolerance")) number(p, "tolerance", path);
  } else if (c.kind == "identities") {
    reject_unknown(p, path, {"levels", "base_N"});
    if (integer(p, "levels", path, 3) < 3) config_error(path + ".levels", "must be >= 3");
    if (integer(p, "base_N", path, 64) < kMinIntervals) config_error(path + ".base_N", "must be >= 16");
  } else if (c.kind == "inequalities") {
    reject_unknown(p, path, {"tolerance"});
    if (p.contains("tolerance")) number(p, "tolerance", path);
  } else if (c.kind == "decay") {
    reject_unknown(p, path, {"t_begin", "t_end"});
    number(p, "t_begin", path, -5.0);
    number(p, "t_end", path, 0.0);
  } else if (c.kind == "reflection") {
    reject_unknown(p, path, {"delta", "eta"});
    const double delta = number(p, "delta", path);
    if (!(delta > 0.0 && delta < std::numbers::pi / 4)) config_error(path + ".delta", "must lie in (0, pi/4)");
    if (!(number(p, "eta", path, 0.05) >= 0.0)) config_error(path + ".eta", "must be >= 0");
  } else {
    reject_unknown(p, path, {});
  }
  return c;
}

// Line and column of a byte offset, for parse diagnostics.
std::pair<int, int> locate(const std::string& s, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, s.size()); ++i) {
    if (s[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ProfileGrid Scenario::initial_grid(int N) const {
  const EquatorFrame frame = EquatorFrame::standard(n);
  switch (initial.kind) {
    case InitialData::Kind::Equator: return EquatorSolution{frame}.sample_as_grid(N);
    case InitialData::Kind::Sphere:
      return ShrinkingSphere::on_axis(frame, initial.kappa0, initial.center_offset).sample_as_grid(0.0, N, frame);
    case InitialData::Kind::Profile:
      return ProfileGrid::from_cosine_profile(n, N, initial.a0, initial.coefficients, frame);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown initial kind");
}

Scenario parse_scenario(const std::string& input) {
  json j;
  try {
    j = json::parse(input);
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(input, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorKind::ConfigError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
  if (!j.is_object()) config_error("<root>", "expected a JSON object");
  reject_unknown(j, "", {"spec", "name", "n", "N", "initial", "flow", "checks", "output_dir", "corrupt_sign"});
  if (integer(j, "spec", "") != kScenarioSpec) config_error("spec", "unsupported schema version (expected 1)");

  Scenario sc;
  sc.source = j;
  sc.name = text(j, "name", "");
  sc.n = integer(j, "n", "");
  if (sc.n < 2) config_error("n", "must be >= 2");
  sc.intervals = integer(j, "N", "", sc.intervals);
  if (sc.intervals < kMinIntervals) config_error("N", "must be >= 16");
  sc.initial = parse_initial(object(j, "initial", ""));
  if (j.contains("flow")) sc.flow = parse_flow(object(j, "flow", ""));
  if (j.contains("checks")) {
    const json& c = j.at("checks");
    if (!c.is_array()) config_error("checks", "expected an array");
    for (std::size_t i = 0; i < c.size(); ++i) sc.checks.push_back(parse_check(c[i], "checks[" + std::to_string(i) + "]"));
  }
  sc.output_dir = text(j, "output_dir", "", ".");
  if (j.contains("corrupt_sign")) {
    if (!j.at("corrupt_sign").is_boolean()) config_error("corrupt_sign", "expected a boolean");
    sc.corrupt_sign = j.at("corrupt_sign").get<bool>();
  }
  for (std::size_t i = 0; i < sc.checks.size(); ++i)
    if (sc.checks[i].kind == "decay" && sc.initial.kind != InitialData::Kind::Sphere)
      config_error("checks[" + std::to_string(i) + "]", "decay needs a sphere initial");

  try {
    (void)sc.initial_grid(sc.intervals);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, std::string("initial: ") + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read scenario file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---- Reports ---------------------------------------------------------------

CheckStatus combine(CheckStatus a, CheckStatus b) {
  if (a == CheckStatus::Fail || b == CheckStatus::Fail) return CheckStatus::Fail;
  if (a == CheckStatus::Inconclusive || b == CheckStatus::Inconclusive) return CheckStatus::Inconclusive;
  return CheckStatus::Pass;
}

int exit_code(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return 0;
    case CheckStatus::Fail: return 2;
    case CheckStatus::Inconclusive: return 3;
  }
  return 1;
}

namespace {

CheckStatus status_from(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "inconclusive") return CheckStatus::Inconclusive;
  throw Error(ErrorKind::InvalidArgument, "unknown status \"" + s + "\"");
}

// Non-finite values become null so that the report round-trips.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

CheckStatus pass_fail(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

}  // namespace

json to_json(const RunReport& r) {
  json j;
  j["spec"] = kScenarioSpec;
  j["scenario"] = r.scenario;
  j["tool_version"] = r.tool_version;
  j["termination"] = r.termination;
  j["states"] = r.states;
  j["t_final"] = num(r.t_final);
  j["status"] = to_string(r.status);
  j["checks"] = json::array();
  for (const auto& c : r.checks) j["checks"].push_back({{"kind", c.kind}, {"status", to_string(c.status)}, {"details", c.details}});
  if (r.sphere_oracle) {
    const auto& o = *r.sphere_oracle;
    j["sphere_oracle"] = {{"t", num(o.t)},
                          {"cos_r_simulated", num(o.cos_r_simulated)},
                          {"cos_r_exact", num(o.cos_r_exact)},
                          {"relative_error", num(o.relative_error)}};
  } else {
    j["sphere_oracle"] = nullptr;
  }
  j["warnings"] = r.warnings;
  j["config"] = r.config;
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.tool_version = j.at("tool_version").get<std::string>();
  r.termination = j.at("termination").get<std::string>();
  r.states = j.at("states").get<int>();
  r.t_final = j.at("t_final").is_null() ? std::nan("") : j.at("t_final").get<double>();
  r.status = status_from(j.at("status").get<std::string>());
  for (const auto& c : j.at("checks"))
    r.checks.push_back({c.at("kind").get<std::string>(), status_from(c.at("status").get<std::string>()), c.at("details")});
  if (!j.at("sphere_oracle").is_null()) {
    const auto& o = j.at("sphere_oracle");
    r.sphere_oracle = SphereOracle{o.at("t").get<double>(), o.at("cos_r_simulated").get<double>(),
                                   o.at("cos_r_exact").get<double>(), o.at("relative_error").get<double>()};
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.config = j.at("config");
  return r;
}

// ---- CSV -------------------------------------------------------------------

namespace {

void put(std::ostream& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out << buf;
}

std::vector<double> q_or_empty(const FlowState& st) {
  const ShapeData& s = st.shape;
  if (!s.strictly_convex()) return {};
  if (!std::all_of(s.H.begin(), s.H.end(), [](double h) { return h > 0.0; })) return {};
  return q_quantity(st, theta(st, dt_H_identity(st)));
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,k,u_k,rho_k,H_k,kappa1_k,kappa2_k,A_sq_k,Q_k\n";
  for (const FlowState& st : traj.states) {
    const ShapeData& s = st.shape;
    const auto q = q_or_empty(st);
    for (int k = 0; k < s.node_count(); ++k) {
      put(out, st.t);
      out << ',' << k << ',';
      put(out, st.grid.u(k));
      out << ',';
      put(out, st.grid.rho()[k]);
      out << ',';
      put(out, s.H[k]);
      out << ',';
      put(out, s.kappa1[k]);
      out << ',';
      put(out, s.kappa2[k]);
      out << ',';
      put(out, s.A_sq[k]);
      out << ',';
      if (!q.empty()) put(out, q[k]);
      out << '\n';
    }
  }
}

std::optional<SphereOracle> sphere_oracle(const Scenario& sc, const Trajectory& traj) {
  if (sc.initial.kind != InitialData::Kind::Sphere || traj.states.empty()) return std::nullopt;
  const EquatorFrame frame = EquatorFrame::standard(sc.n);
  const ShrinkingSphere family = ShrinkingSphere::on_axis(frame, sc.initial.kappa0, sc.initial.center_offset);
  const FlowState& last = traj.states.back();
  SphereOracle o;
  o.t = last.t;
  o.cos_r_exact = sc.initial.kappa0 * std::exp(sc.n * last.t);
  const Vec& c = family.center().coords();
  double worst = -1.0;
  for (int k = 0; k < last.grid.node_count(); ++k) {
    // Points of the profile plane; the rotation about the axis preserves
    // the distance to an on-axis center.
    const double rho = last.grid.rho()[k], u = last.grid.u(k);
    double cos_d = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      cos_d += c[i] * (std::cos(rho) * frame.e[i] + std::sin(rho) * std::cos(u) * frame.axis_a[i] +
                       std::sin(rho) * std::sin(u) * frame.w()[i]);
    const double err = std::abs(cos_d - o.cos_r_exact);
    if (err > worst) {
      worst = err;
      o.cos_r_simulated = cos_d;
    }
  }
  o.relative_error = worst / o.cos_r_exact;
  return o;
}

// ---- Checks ----------------------------------------------------------------

namespace {

CheckOutcome run_harnack(const Trajectory& traj, const CheckRequest& req, const Scenario& sc, std::uint64_t seed) {
  HarnackOptions opt;
  opt.t_origin = req.params.value("t_origin", 0.0);
  if (req.params.contains("tolerance")) opt.tolerance = req.params.at("tolerance").get<double>();
  opt.seed = seed;
  opt.lambda = sc.corrupt_sign ? -1.0 : 1.0;
  const HarnackReport h = harnack_check(traj, opt);
  CheckOutcome out{"harnack", pass_fail(h.pass), json::object()};
  out.details = {{"global_min", num(h.global_min)},     {"worst_node", h.worst_node},
                 {"worst_time", num(h.worst_time)},     {"tolerance", num(h.tolerance_used)},
                 {"minimality_slack", num(h.minimality_slack)}, {"skipped_states", h.skipped_states},
                 {"t_origin", num(opt.t_origin)},       {"lambda", num(opt.lambda)},
                 {"dtH_source", h.dtH_source},          {"seed", seed}};
  return out;
}

CheckOutcome run_q_ode(const Trajectory& traj, const CheckRequest& req) {
  std::optional<double> tol;
  if (req.params.contains("tolerance")) tol = req.params.at("tolerance").get<double>();
  const QOdeReport q = q_ode_check(traj, req.params.value("epsilon", 0.01), req.params.value("t_origin", 0.0), tol);
  CheckOutcome out{"q_ode", pass_fail(q.pass), json::object()};
  out.details = {{"epsilon", num(q.epsilon)},     {"t_origin", num(q.t_origin)}, {"min_margin", num(q.min_margin)},
                 {"worst_node", q.worst_node},    {"worst_time", num(q.worst_time)},
                 {"tolerance", num(q.tolerance)}, {"states_checked", q.states_checked}};
  return out;
}

json identity_json(const IdentityReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.results) {
    json res = json::array();
    for (double x : r.residuals) res.push_back(num(x));
    rows.push_back({{"id", r.id},
                    {"nested", r.nested},
                    {"levels", r.levels},
                    {"residuals", res},
                    {"order", r.exact ? json("exact") : num(r.order.value_or(std::nan("")))},
                    {"max_residual", num(r.max_residual)},
                    {"pass", r.pass}});
  }
  return rows;
}

CheckOutcome run_identities(const Scenario& sc, const CheckRequest& req, std::optional<int> levels_override) {
  const int levels = levels_override.value_or(req.params.value("levels", 3));
  const IdentityReport rep = convergence(sc, levels, req.params.value("base_N", 64));
  CheckOutcome out{"identities", pass_fail(rep.pass), json::object()};
  out.details = {{"identities", identity_json(rep)}};
  return out;
}

CheckOutcome run_inequalities(const Trajectory& traj, const CheckRequest& req) {
  std::optional<double> tol;
  if (req.params.contains("tolerance")) tol = req.params.at("tolerance").get<double>();
  const InequalityReport rep = inequality_suite(traj, tol);
  CheckOutcome out{"inequalities", rep.status, json::object()};
  json rows = json::array();
  for (const auto& r : rep.results)
    rows.push_back({{"id", r.id},
                    {"min_slack", num(r.min_slack)},
                    {"worst_node", r.worst_node},
                    {"worst_time", num(r.worst_time)},
                    {"tolerance", num(r.tolerance)},
                    {"noise_floor", num(r.noise_floor)},
                    {"status", to_string(r.status)}});
  out.details = {{"states_checked", rep.states_checked}, {"inequalities", rows}};
  return out;
}

CheckOutcome run_decay(const Scenario& sc, const CheckRequest& req) {
  const EquatorFrame frame = EquatorFrame::standard(sc.n);
  const auto family = ShrinkingSphere::on_axis(frame, sc.initial.kappa0, sc.initial.center_offset);
  const DecayReport d = decay_check(family, frame, req.params.value("t_begin", -5.0), req.params.value("t_end", 0.0));
  CheckOutcome out{"decay", pass_fail(d.pass), json::object()};
  out.details = {{"t_begin", num(d.t_begin)},
                 {"t_end", num(d.t_end)},
                 {"rate_H", num(d.rate_H)},
                 {"rate_A", num(d.rate_A)},
                 {"rate_height", num(d.rate_height)},
                 {"rate_gradA_sq", d.rate_gradA_sq ? num(*d.rate_gradA_sq) : json(nullptr)},
                 {"c0", num(d.c0)},
                 {"c1", num(d.c1)},
                 {"margin_H", num(d.margin_H)},
                 {"margin_A", num(d.margin_A)},
                 {"margin_log_H", num(d.margin_log_H)},
                 {"pass_height", d.pass_height}};
  return out;
}

CheckOutcome run_reflection(const Trajectory& traj, const CheckRequest& req, const Scenario& sc) {
  const double delta = req.params.at("delta").get<double>();
  const double eta = req.params.value("eta", 0.05);
  const ReflectionSpec spec = ReflectionSpec::in_profile_plane(EquatorFrame::standard(sc.n), delta);
  std::optional<double> worst;
  double worst_time = 0.0;
  json region = nullptr;
  int measured = 0;
  for (const FlowState& st : traj.states) {
    const ReflectionReport r = reflection_check(st, spec, eta);
    if (!r.defect) continue;
    ++measured;
    if (!worst || *r.defect < *worst) {
      worst = r.defect;
      worst_time = st.t;
      region = r.violating_region ? json::array({num(r.violating_region->first), num(r.violating_region->second)})
                                  : json(nullptr);
    }
  }
  const bool ok = worst && *worst >= -1e-10;
  CheckOutcome out{"reflection", pass_fail(ok), json::object()};
  out.details = {{"delta", num(delta)},
                 {"eta", num(eta)},
                 {"states_measured", measured},
                 {"min_defect", worst ? num(*worst) : json(nullptr)},
                 {"worst_time", num(worst_time)},
                 {"violating_region", region}};
  return out;
}

CheckOutcome run_fit_equator(const Trajectory& traj) {
  CheckOutcome out{"fit_equator", CheckStatus::Fail, json::object()};
  try {
    const auto pts = sample_points(traj.states.front().grid);
    const FittedEquator fit = fit_limit_equator(pts);
    json e = json::array();
    for (double x : fit.frame.e) e.push_back(num(x));
    out.status = CheckStatus::Pass;
    out.details = {{"e", e}, {"rms_height", num(fit.rms_height)}};
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::DegenerateFit) throw;
    out.details = {{"error", err.what()}};
  }
  return out;
}

}  // namespace

RunReport execute(const Scenario& sc, const RunOptions& options) {
  const Trajectory traj = run(FlowState::at(0.0, sc.initial_grid(sc.intervals)), sc.flow);

  // Checks only read the trajectory, so they run side by side.
  std::vector<std::future<CheckOutcome>> pending;
  for (const CheckRequest& req : sc.checks) {
    pending.push_back(std::async(std::launch::async, [&, req]() -> CheckOutcome {
      if (req.kind == "harnack") return run_harnack(traj, req, sc, options.seed);
      if (req.kind == "q_ode") return run_q_ode(traj, req);
      if (req.kind == "identities") return run_identities(sc, req, options.levels);
      if (req.kind == "inequalities") return run_inequalities(traj, req);
      if (req.kind == "decay") return run_decay(sc, req);
      if (req.kind == "reflection") return run_reflection(traj, req, sc);
      return run_fit_equator(traj);
    }));
  }

  RunReport rep;
  rep.scenario = sc.name;
  rep.termination = to_string(traj.termination);
  rep.states = static_cast<int>(traj.states.size());
  rep.t_final = traj.states.back().t;
  rep.warnings = traj.warnings;
  rep.config = sc.source;
  rep.sphere_oracle = sphere_oracle(sc, traj);
  rep.status = CheckStatus::Pass;
  for (auto& f : pending) {
    rep.checks.push_back(f.get());
    rep.status = combine(rep.status, rep.checks.back().status);
  }

  const std::filesystem::path dir = options.output_dir.value_or(sc.output_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "trajectory.csv");
    write_trajectory_csv(csv, traj);
    if (!csv) throw Error(ErrorKind::InvalidArgument, "failed writing " + (dir / "trajectory.csv").string());
  }
  std::ofstream js(dir / "report.json");
  js << to_json(rep).dump(2) << '\n';
  if (!js) throw Error(ErrorKind::InvalidArgument, "failed writing " + (dir / "report.json").string());
  return rep;
}

IdentityReport convergence(const Scenario& sc, int levels, int base_intervals) {
  if (levels < 3) throw Error(ErrorKind::InvalidArgument, "convergence needs at least 3 levels");
  std::vector<int> Ns;
  for (int i = 0; i < levels; ++i) Ns.push_back(base_intervals << i);
  return identity_suite([&](int N) { return FlowState::at(0.0, sc.initial_grid(N)); }, Ns);
}

void write_convergence_csv(std::ostream& out, const IdentityReport& rep) {
  out << "id,nested";
  if (!rep.results.empty())
    for (int N : rep.results.front().levels) out << ",residual_N" << N;
  out << ",order,pass\n";
  for (const auto& r : rep.results) {
    out << r.id << ',' << (r.nested ? 1 : 0);
    for (double x : r.residuals) {
      out << ',';
      put(out, x);
    }
    out << ',';
    if (r.exact)
      out << "exact";
    else if (r.order)
      put(out, *r.order);
    out << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
}

// ---- Oracle ----------------------------------------------------------------

std::vector<OracleRow> oracle_table(int n, double kappa0, const std::vector<double>& times,
                                    std::optional<double> t_origin) {
  const ShrinkingSphere family = ShrinkingSphere::on_axis(EquatorFrame::standard(n), kappa0);
  const double H0 = family.mean_curvature_at(0.0).H;
  std::vector<OracleRow> rows;
  for (double t : times) {
    const double r = family.radius_at(t);
    const auto c = family.mean_curvature_at(t);
    const double harnack =
        t_origin ? family.harnack_closed_form(t, *t_origin) : c.H * c.H * c.H / n;
    rows.push_back({t, r, c.H, c.A_sq, harnack, H0 * std::exp(n * t)});
  }
  return rows;
}

void write_oracle_csv(std::ostream& out, const std::vector<OracleRow>& rows) {
  out << "t,r,H,A_sq,harnack_min,H_bound\n";
  for (const auto& row : rows) {
    const double cols[] = {row.t, row.r, row.H, row.A_sq, row.harnack_min, row.H_bound};
    for (int i = 0; i < 6; ++i) {
      if (i) out << ',';
      put(out, cols[i]);
    }
    out << '\n';
  }
}

}  // namespace mcf
