// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "mcf/exact.hpp"
#include "mcf/reflection.hpp"
#include "mcf/scenario.hpp"
#include "mcf/shape.hpp"
#include "mcf/verifier.hpp"

using namespace mcf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Perturbed {
  int n;
  double a0;
  std::vector<double> c;
};

// Gentle perturbations at N = 128: larger amplitudes push the near-axis
// truncation error of the fourth-derivative slacks past the tolerance, finer
// grids push the sixth-derivative slack into round-off.
const std::vector<Perturbed>& perturbed_cases() {
  static const std::vector<Perturbed> cases = {
      {2, 0.5, {0.0, 0.02}},
      {2, 0.7, {0.02, 0.0, 0.005}},
      {3, 0.6, {0.0, 0.02}},
  };
  return cases;
}

const std::vector<Trajectory>& perturbed_runs() {
  static const std::vector<Trajectory> runs = [] {
    std::vector<Trajectory> out;
    for (const auto& p : perturbed_cases()) {
      FlowConfig c;
      c.dt = 1e-3;
      c.t_end = 0.1;
      out.push_back(
          run(FlowState::at(0.0, ProfileGrid::from_cosine_profile(p.n, 128, p.a0, p.c, EquatorFrame::standard(p.n))),
              c));
    }
    return out;
  }();
  return runs;
}

Outcome sphere_flow() {
  Outcome o;
  const auto f = EquatorFrame::standard(2);
  const auto family = ShrinkingSphere::on_axis(f, 0.5);
  FlowConfig c;
  c.dt = 1e-4;
  c.t_end = 0.2;
  c.method = Method::RK4;
  const auto start = std::chrono::steady_clock::now();
  const auto traj = run(FlowState::at(0.0, family.sample_as_grid(0.0, 200, f)), c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double exact = 0.5 * std::exp(2 * 0.2);
  double worst = 0.0;
  for (double rho : traj.states.back().grid.rho()) worst = std::max(worst, std::abs(std::cos(rho) - exact) / exact);
  o.require(traj.termination == Termination::ReachedTEnd, "run reached t_end");
  o.require(std::abs(traj.states.back().t - 0.2) < 1e-12, "final time 0.2");
  o.require(worst <= 1e-6, "cos r relative error <= 1e-6");
  o.note("rel err " + fmt("%.3e", worst) + ", " + fmt("%.2f", secs) + " s");
  return o;
}

Outcome ledger_accuracy() {
  Outcome o;
  const auto f = EquatorFrame::standard(2);
  const auto s = shape_data(ProfileGrid::constant(2, 64, std::numbers::pi / 3, f));
  double err = 0.0;
  for (int k = 0; k < s.node_count(); ++k)
    err = std::max({err, std::abs(s.H[k] - 2 / std::sqrt(3.0)), std::abs(s.A_sq[k] - 2.0 / 3.0),
                    std::abs(s.C[k] - 2 * std::pow(3.0, -1.5))});
  o.require(err <= 1e-10, "sphere H, |A|^2, C within 1e-10");
  o.note("sphere err " + fmt("%.2e", err));

  const std::vector<int> levels = {64, 128, 256};
  const std::vector<Perturbed> profiles = {{2, 0.6, {0.05, 0.03}}, {3, 0.5, {0.0, 0.04, 0.01}}};
  for (const auto& p : profiles) {
    std::vector<double> gaps;
    for (int N : levels) {
      const auto g = ProfileGrid::from_cosine_profile(p.n, N, p.a0, p.c, EquatorFrame::standard(p.n));
      const auto sd = shape_data(g);
      const auto ref = analytic_axisym_curvatures(g);
      double gap = 0.0;
      for (int k = 0; k < g.node_count(); ++k)
        gap = std::max({gap, std::abs(sd.kappa1[k] - ref.kappa1[k]), std::abs(sd.kappa2[k] - ref.kappa2[k])});
      gaps.push_back(gap);
    }
    const double order = convergence_order(levels, gaps);
    o.require(order >= 1.9, "curvature order >= 1.9 (n=" + std::to_string(p.n) + ")");
    o.note("order n=" + std::to_string(p.n) + " " + fmt("%.3f", order));
  }
  return o;
}

Outcome identities() {
  Outcome o;
  const std::vector<int> levels = {64, 128, 256};
  auto init = [](int N) {
    return FlowState::at(0.0, ProfileGrid::from_cosine_profile(2, N, 0.5, std::vector<double>{0.0, 0.06},
                                                               EquatorFrame::standard(2)));
  };
  const auto rep = identity_suite(init, levels);
  double worst = 1e9;
  std::string worst_id;
  for (const auto& r : rep.results) {
    o.require(r.pass, r.id);
    if (r.order && *r.order < worst) {
      worst = *r.order;
      worst_id = r.id;
    }
  }
  o.note("lowest order " + worst_id + " " + fmt("%.3f", worst));

  const auto f = EquatorFrame::standard(2);
  const auto st = FlowState::at(0.0, ProfileGrid::constant(2, 64, std::numbers::pi / 3, f));
  const auto dtH = dt_H_identity(st);
  const double expect = 16.0 / (3.0 * std::sqrt(3.0));
  double err = 0.0;
  for (double v : dtH) err = std::max(err, std::abs(v - expect));
  o.require(err <= 1e-8, "sphere dtH = 16/(3 sqrt 3)");
  o.note("sphere dtH err " + fmt("%.2e", err));
  return o;
}

Outcome harnack() {
  Outcome o;
  double worst_min = 1e300, worst_minimality = 1e300;
  for (std::size_t i = 0; i < perturbed_runs().size(); ++i) {
    HarnackOptions opt;
    opt.seed = 2024 + i;
    const auto h = harnack_check(perturbed_runs()[i], opt);
    o.require(h.global_min >= -h.tolerance_used, "run " + std::to_string(i) + " Harnack min >= -tol");
    o.require(h.minimality_slack >= -1e-10, "run " + std::to_string(i) + " minimality");
    o.require(!h.slices.empty(), "run " + std::to_string(i) + " has evaluated states");
    worst_min = std::min(worst_min, h.global_min);
    worst_minimality = std::min(worst_minimality, h.minimality_slack);
  }
  o.note("min " + fmt("%.3g", worst_min) + ", minimality slack " + fmt("%.3g", worst_minimality));

  // Negative control on the sphere family, with an ancient origin so the
  // H / 2(t - t0) term does not mask the flipped sign.
  const auto f = EquatorFrame::standard(2);
  FlowConfig c;
  c.dt = 1e-3;
  c.t_end = 0.1;
  const auto traj = run(FlowState::at(0.0, ShrinkingSphere::on_axis(f, 0.5).sample_as_grid(0.0, 64, f)), c);
  HarnackOptions ancient;
  ancient.t_origin = -1000.0;
  o.require(harnack_check(traj, ancient).pass, "sphere control passes unflipped");
  ancient.lambda = -1.0;
  const auto flipped = harnack_check(traj, ancient);
  o.require(!flipped.pass, "flipped n H term fails on the sphere");
  o.note("flipped min " + fmt("%.3g", flipped.global_min));
  return o;
}

Outcome q_and_ode() {
  Outcome o;
  double err = 0.0;
  for (int n : {2, 3}) {
    for (double r : {0.6, 1.0, 1.3}) {
      const auto st = FlowState::at(0.0, ProfileGrid::constant(n, 64, r, EquatorFrame::standard(n)));
      const auto q = q_quantity(st, theta(st, dt_H_identity(st)));
      const double expect = n / (std::tan(r) * std::tan(r));
      for (double v : q) err = std::max(err, std::abs(v - expect));
    }
  }
  o.require(err <= 1e-8, "sphere Q = n cot^2 r");
  o.note("sphere Q err " + fmt("%.2e", err));
  double margin = 1e300;
  for (std::size_t i = 0; i < perturbed_runs().size(); ++i) {
    const auto q = q_ode_check(perturbed_runs()[i], 0.01);
    o.require(q.pass, "run " + std::to_string(i) + " Q >= -1/(2(t - eps))");
    margin = std::min(margin, q.min_margin);
  }
  o.note("min margin " + fmt("%.3g", margin));
  return o;
}

Outcome inequalities() {
  Outcome o;
  for (std::size_t i = 0; i < perturbed_runs().size(); ++i) {
    const auto rep = inequality_suite(perturbed_runs()[i]);
    o.require(rep.status != CheckStatus::Fail, "run " + std::to_string(i) + " inequalities");
    double worst_ratio = 0.0;
    for (const auto& r : rep.results) {
      if (r.status == CheckStatus::Inconclusive) o.note(r.id + " inconclusive in run " + std::to_string(i));
      worst_ratio = std::max(worst_ratio, -r.min_slack / r.tolerance);
    }
    o.note("run " + std::to_string(i) + " worst slack/tol " + fmt("%.2f", -worst_ratio));
  }

  FlowConfig c;
  c.dt = 1e-3;
  c.t_end = 0.01;
  double err = 0.0;
  for (int n : {2, 3}) {
    const auto f = EquatorFrame::standard(n);
    const auto traj = run(FlowState::at(0.0, ShrinkingSphere::on_axis(f, 0.5).sample_as_grid(0.0, 64, f)), c);
    for (std::size_t i = 2; i + 2 < traj.states.size(); ++i) {
      const auto sl = inequality_slacks(traj, i);
      for (const auto* col : {&sl.gradient_bound, &sl.gradient_bound_algebraic, &sl.gradient_heat, &sl.theta_heat})
        for (double v : *col) err = std::max(err, std::abs(v));
    }
  }
  o.require(err <= 1e-6, "sphere slacks match their closed form 0");
  o.note("sphere slack err " + fmt("%.2e", err));
  return o;
}

Outcome decay() {
  Outcome o;
  const auto f = EquatorFrame::standard(2);
  const auto family = ShrinkingSphere::on_axis(f, 0.5);
  const auto d = decay_check(family, f);
  o.require(d.margin_H >= -1e-12, "H <= H(0) e^{nt}");
  o.require(d.margin_A >= -1e-12, "|A| <= |A|(0) e^{nt}");
  o.require(d.margin_log_H >= -1e-12, "d_t log H >= n");
  o.require(std::abs(d.rate_height - 2.0) <= 0.02, "height rate within 1% of n");
  o.require(d.pass, "decay report");
  const auto rows = oracle_table(2, 0.5, {-1.0, 0.0});
  o.require(std::abs(rows[0].H - 0.135646) <= 1e-6, "H(-1) = 0.135646");
  // H(0) e^{-2} = 0.1562717...; compared with the closed form, not a rounded decimal.
  o.require(std::abs(rows[0].H_bound - rows[1].H * std::exp(-2.0)) <= 1e-12, "bound(-1) = H(0) e^{-2}");
  o.require(rows[0].H <= rows[0].H_bound, "H(-1) <= bound(-1)");
  o.note("height rate " + fmt("%.5f", d.rate_height) + ", H(-1) " + fmt("%.6f", rows[0].H) + " <= " +
         fmt("%.6f", rows[0].H_bound));
  return o;
}

Outcome reflection() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  const auto f = EquatorFrame::standard(3);
  const double delta = 0.1;
  const auto spec = ReflectionSpec::in_profile_plane(f, delta);
  double inv = 0.0, iso = 0.0, hgt = 0.0;
  for (int i = 0; i < 200; ++i) {
    Vec a(f.ambient_dim()), b(f.ambient_dim());
    for (double& v : a) v = g(rng);
    for (double& v : b) v = g(rng);
    const auto x = SpherePoint::normalized(a), y = SpherePoint::normalized(b);
    const auto rx = reflect(x, spec);
    const auto rrx = reflect(rx, spec);
    for (std::size_t j = 0; j < a.size(); ++j) inv = std::max(inv, std::abs(rrx[j] - x[j]));
    iso = std::max(iso, std::abs(dot(rx.coords(), reflect(y, spec).coords()) - dot(x.coords(), y.coords())));
    const double h = dot(a, f.e);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] -= h * f.e[j];
    const auto e = SpherePoint::normalized(a);
    hgt = std::max(hgt, std::abs(height(reflect(e, spec), f) - 2 * std::sin(delta) * dot(e.coords(), spec.v)));
  }
  o.require(inv <= 1e-12 && iso <= 1e-12, "involutive isometry");
  o.require(hgt <= 1e-12, "height of reflected equator");

  const auto f2 = EquatorFrame::standard(2);
  const auto spec2 = ReflectionSpec::in_profile_plane(f2, delta);
  auto sphere_state = [&](double r, double offset) {
    return FlowState::at(0.0, ShrinkingSphere::on_axis(f2, std::cos(r), offset).sample_as_grid(0.0, 128, f2));
  };
  const auto sym = reflection_check(sphere_state(0.8, delta), spec2);
  o.require(sym.defect && std::abs(*sym.defect) <= 1e-10, "symmetric sphere defect 0");
  const auto near = reflection_check(sphere_state(std::numbers::pi / 2 - 0.01, 0.0), spec2);
  o.require(near.defect && *near.defect > 0.0, "near-equator sphere defect > 0");
  const auto bump = ProfileGrid::from_cosine_profile(2, 128, 0.8, std::vector<double>{-0.1, 0.0, 0.1}, f2);
  const auto asym = reflection_check(FlowState::at(0.0, bump), spec2);
  o.require(asym.defect && *asym.defect < 0.0, "asymmetric profile defect < 0");
  o.require(asym.violating_region && asym.violating_region->first < asym.violating_region->second,
            "nonempty violating interval");
  if (sym.defect && near.defect && asym.defect)
    o.note("defects " + fmt("%.1e", *sym.defect) + " / " + fmt("%.3g", *near.defect) + " / " +
           fmt("%.3g", *asym.defect));
  return o;
}

Outcome determinism() {
  Outcome o;
  const char* text = R"({
    "spec": 1, "name": "determinism", "n": 3, "N": 96,
    "initial": {"kind": "profile", "a0": 0.6, "coefficients": [0.01, 0.02]},
    "flow": {"dt": 1e-3, "t_end": 0.03},
    "checks": ["harnack", "inequalities"]
  })";
  const auto sc = parse_scenario(text);
  const std::filesystem::path root(SCRATCH_DIR);
  std::string csv[2];
  for (int i = 0; i < 2; ++i) {
    RunOptions opt;
    opt.output_dir = root / ("run" + std::to_string(i));
    std::filesystem::remove_all(*opt.output_dir);
    execute(sc, opt);
    std::ifstream in(*opt.output_dir / "trajectory.csv", std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    csv[i] = s.str();
  }
  o.require(!csv[0].empty(), "CSV written");
  o.require(csv[0] == csv[1], "bit-identical CSV");
  o.note(std::to_string(csv[0].size()) + " bytes");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 sphere-oracle flow accuracy", sphere_flow},
      {"2 curvature ledger", ledger_accuracy},
      {"3 evolution identities", identities},
      {"4 Harnack inequality", harnack},
      {"5 Q and ODE comparison", q_and_ode},
      {"6 inequality slacks", inequalities},
      {"7 backward decay", decay},
      {"8 reflection machinery", reflection},
      {"9 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s [%s] %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
