#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mcf/errors.hpp"
#include "mcf/exact.hpp"
#include "mcf/shape.hpp"
#include "mcf/verifier.hpp"

using namespace mcf;

namespace {

Trajectory sphere_run(int n, int N, double kappa0, double t_end, double dt = 1e-3) {
  const auto f = EquatorFrame::standard(n);
  FlowConfig c;
  c.dt = dt;
  c.t_end = t_end;
  return run(FlowState::at(0.0, ShrinkingSphere::on_axis(f, kappa0).sample_as_grid(0.0, N, f)), c);
}

Trajectory profile_run(int n, int N, double a0, std::vector<double> c, double t_end) {
  FlowConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = t_end;
  return run(FlowState::at(0.0, ProfileGrid::from_cosine_profile(n, N, a0, c, EquatorFrame::standard(n))), cfg);
}

}  // namespace

TEST_CASE("Q on spheres is n cot^2 r") {
  for (int n : {2, 3}) {
    const auto f = EquatorFrame::standard(n);
    const double r = 1.1;
    const auto st = FlowState::at(0.0, ProfileGrid::constant(n, 64, r, f));
    const auto th = theta(st, dt_H_identity(st));
    const auto q = q_quantity(st, th);
    const double expect = n / (std::tan(r) * std::tan(r));
    for (double v : q) CHECK(std::abs(v - expect) < 1e-8);
  }
}

TEST_CASE("Q needs positive mean curvature") {
  const auto f = EquatorFrame::standard(2);
  const auto st = FlowState::at(0.0, ProfileGrid::constant(2, 32, std::numbers::pi / 2 + 0.1, f));
  std::vector<double> zeros(st.shape.node_count(), 0.0);
  CHECK_THROWS_AS(q_quantity(st, zeros), Error);
}

TEST_CASE("V* minimizes the full Harnack expression") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double k1 = 0.5 + std::abs(u(rng)), k2 = 0.5 + std::abs(u(rng));
    const double H = k1 + k2, Hs = u(rng), dtH = u(rng);
    const double vs = -Hs / k1;
    const double at = harnack_full(dtH, H, Hs, k1, k2, vs, 0.0, 2, 0.3);
    CHECK(at == doctest::Approx(dtH - Hs * Hs / k1 - 2 * H + H / 0.6));
    for (int j = 0; j < 8; ++j) CHECK(harnack_full(dtH, H, Hs, k1, k2, vs + u(rng), u(rng), 2, 0.3) >= at - 1e-12);
  }
}

TEST_CASE("Harnack holds on the sphere and the flipped control fails") {
  const auto traj = sphere_run(2, 64, 0.5, 0.05);
  const auto ok = harnack_check(traj);
  CHECK(ok.pass);
  CHECK(ok.skipped_states == 1);  // t = t_origin
  CHECK(ok.minimality_slack >= -1e-10);

  HarnackOptions ancient;
  ancient.t_origin = -1000.0;
  CHECK(harnack_check(traj, ancient).pass);
  ancient.lambda = -1.0;
  const auto flipped = harnack_check(traj, ancient);
  CHECK_FALSE(flipped.pass);
  CHECK(flipped.global_min < -0.5);
}

TEST_CASE("Harnack and the Q barrier on a perturbed run") {
  const auto traj = profile_run(2, 64, 0.5, {0, 0.02}, 0.03);
  const auto h = harnack_check(traj);
  CHECK(h.pass);
  CHECK(h.slices.size() + h.skipped_states == traj.states.size());
  const auto q = q_ode_check(traj, 0.01);
  CHECK(q.pass);
  CHECK(q.states_checked > 0);
}

TEST_CASE("convergence order of synthetic residuals") {
  const std::vector<int> levels = {64, 128, 256};
  const std::vector<double> res = {1.0, 0.25, 0.0625};
  CHECK(convergence_order(levels, res) == doctest::Approx(2.0));
  const std::vector<double> first = {1.0, 0.5, 0.25};
  CHECK(convergence_order(levels, first) == doctest::Approx(1.0));
}

TEST_CASE("identity suite needs three levels") {
  const std::vector<int> two = {32, 64};
  auto init = [](int N) { return FlowState::at(0.0, ProfileGrid::constant(2, N, 1.0, EquatorFrame::standard(2))); };
  CHECK_THROWS_AS(identity_suite(init, two), Error);
}

TEST_CASE("identities are exact on the sphere") {
  const std::vector<int> levels = {32, 64, 128};
  auto init = [](int N) { return FlowState::at(0.0, ProfileGrid::constant(2, N, 1.0, EquatorFrame::standard(2))); };
  const auto rep = identity_suite(init, levels);
  CHECK(rep.pass);
  for (const auto& r : rep.results) {
    INFO(r.id);
    CHECK(r.exact);
    CHECK_FALSE(r.order.has_value());
  }
}

TEST_CASE("inequality slacks vanish on the sphere") {
  const auto traj = sphere_run(3, 64, 0.4, 0.01);
  for (std::size_t i = 2; i + 2 < traj.states.size(); ++i) {
    const auto sl = inequality_slacks(traj, i);
    for (int k = 0; k < traj.states[i].shape.node_count(); ++k) {
      CHECK(std::abs(sl.gradient_bound[k]) < 1e-6);
      CHECK(std::abs(sl.gradient_bound_algebraic[k]) < 1e-6);
      CHECK(std::abs(sl.gradient_heat[k]) < 1e-6);
      CHECK(std::abs(sl.theta_heat[k]) < 1e-6);
    }
  }
  CHECK(inequality_suite(traj).status == CheckStatus::Pass);
}

TEST_CASE("inequality suite on a gentle perturbation") {
  const auto traj = profile_run(2, 64, 0.5, {0, 0.02}, 0.02);
  const auto rep = inequality_suite(traj);
  CHECK(rep.states_checked == static_cast<int>(traj.states.size()) - 4);
  CHECK(rep.status == CheckStatus::Pass);
}

TEST_CASE("boundary states have no time stencil") {
  const auto traj = sphere_run(2, 32, 0.5, 0.005);
  CHECK_THROWS_AS(inequality_slacks(traj, 0), Error);
  CHECK_THROWS_AS(inequality_slacks(traj, traj.states.size() - 1), Error);
}

TEST_CASE("backward decay on the ancient family") {
  const auto f = EquatorFrame::standard(2);
  const auto d = decay_check(ShrinkingSphere::on_axis(f, 0.5), f);
  CHECK(d.pass);
  CHECK(d.margin_H >= -1e-12);
  CHECK(d.margin_A >= -1e-12);
  CHECK(d.margin_log_H >= -1e-12);
  CHECK(std::abs(d.rate_height - 2.0) < 0.02);
  CHECK_FALSE(d.rate_gradA_sq.has_value());
}

TEST_CASE("equator fit") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto f = EquatorFrame::standard(2);
  // Points near the equator tilted towards axis_a by 0.05.
  const double tilt = 0.05;
  std::vector<SpherePoint> pts;
  for (int i = 0; i < 400; ++i) {
    Vec x = {0.0, g(rng), g(rng), g(rng)};
    const double len = norm(x);
    for (double& v : x) v /= len;
    // rotate in the (e, a) plane
    const double e = x[0], a = x[1];
    x[0] = std::cos(tilt) * e - std::sin(tilt) * a;
    x[1] = std::sin(tilt) * e + std::cos(tilt) * a;
    pts.push_back(SpherePoint::normalized(x));
  }
  const auto fit = fit_limit_equator(pts);
  CHECK(std::abs(std::abs(fit.frame.e[0]) - std::cos(tilt)) < 1e-10);
  CHECK(fit.rms_height < 1e-10);

  // A small round sphere has no preferred equator.
  std::vector<SpherePoint> sphere;
  for (int axis = 1; axis < 4; ++axis)
    for (double sign : {-1.0, 1.0}) {
      Vec x = {std::cos(0.3), 0.0, 0.0, 0.0};
      x[axis] = sign * std::sin(0.3);
      sphere.push_back(SpherePoint::normalized(x));
    }
  CHECK_THROWS_AS(fit_limit_equator(sphere), Error);
  CHECK_THROWS_AS(fit_limit_equator(std::span(pts.data(), 3)), Error);
}
