#include "mcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcf/calculus.hpp"
#include "mcf/errors.hpp"

namespace mcf {

void FlowConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorKind::ConfigError, "flow.dt must be > 0");
  if (!(t_end >= 0.0)) throw Error(ErrorKind::ConfigError, "flow.t_end must be >= 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw Error(ErrorKind::ConfigError, "flow.cfl_safety must lie in (0, 1]");
  if (!(stop_min_radius > 0.0 && stop_min_radius < std::numbers::pi / 2))
    throw Error(ErrorKind::ConfigError, "flow.stop_min_radius must lie in (0, pi/2)");
  if (!(stop_max_A > 0.0)) throw Error(ErrorKind::ConfigError, "flow.stop_max_A must be > 0");
  if (record_every < 1) throw Error(ErrorKind::ConfigError, "flow.record_every must be >= 1");
}

FlowState FlowState::at(double t, ProfileGrid grid) {
  ShapeData shape = shape_data(grid);
  const ConvexityStatus conv = shape.convexity;
  return FlowState{t, std::move(grid), std::move(shape), conv};
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedTEnd: return "reached_t_end";
    case Termination::MinRadius: return "min_radius";
    case Termination::ConvexityLost: return "convexity_lost";
    case Termination::Blowup: return "blowup";
    case Termination::StepFailure: return "step_failure";
    case Termination::ChartBreakdown: return "chart_breakdown";
  }
  return "unknown";
}

namespace {

std::vector<double> graph_speed(std::span<const double> rho, double du, int n) {
  const auto rho_u = diff_u(rho, Parity::Even, du);
  const auto rho_uu = diff_uu(rho, Parity::Even, du);
  CurvatureLedger led;
  curvature_ledger(rho, rho_u, rho_uu, du, n, led);
  std::vector<double> out(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (!(led.nu_radial[k] > kChartTol))
      throw Error(ErrorKind::ChartBreakdown, "normal turned tangent to the radial direction at node " + std::to_string(k));
    out[k] = -led.H[k] / led.nu_radial[k];
  }
  return out;
}

bool valid_profile(std::span<const double> rho) {
  return std::all_of(rho.begin(), rho.end(),
                     [](double r) { return std::isfinite(r) && r > 0.0 && r < std::numbers::pi; });
}

void rejected_unless_valid(std::span<const double> rho) {
  if (!valid_profile(rho)) throw Error(ErrorKind::StepRejected, "profile left (0, pi) or became non-finite");
}

}  // namespace

std::vector<double> rhs(const ProfileGrid& grid) { return graph_speed(grid.rho(), grid.du(), grid.n()); }

std::vector<double> rhs(const FlowState& state) { return rhs(state.grid); }

double stable_dt(const ShapeData& shape, double cfl_safety) {
  double scale = 0.0;
  for (int k = 0; k < shape.node_count(); ++k) scale = std::max(scale, shape.graph_factor[k] / shape.g_uu[k]);
  return cfl_safety * shape.du * shape.du / (shape.n * scale + 1.0);
}

namespace {

std::vector<double> advance(std::span<const double> rho, double du, int n, double dt, Method method) {
  const std::size_t size = rho.size();
  std::vector<double> next(size);
  if (method == Method::Euler) {
    const auto k1 = graph_speed(rho, du, n);
    for (std::size_t i = 0; i < size; ++i) next[i] = rho[i] + dt * k1[i];
  } else {
    std::vector<double> tmp(size);
    const auto k1 = graph_speed(rho, du, n);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = rho[i] + 0.5 * dt * k1[i];
    rejected_unless_valid(tmp);
    const auto k2 = graph_speed(tmp, du, n);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = rho[i] + 0.5 * dt * k2[i];
    rejected_unless_valid(tmp);
    const auto k3 = graph_speed(tmp, du, n);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = rho[i] + dt * k3[i];
    rejected_unless_valid(tmp);
    const auto k4 = graph_speed(tmp, du, n);
    for (std::size_t i = 0; i < size; ++i) next[i] = rho[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  rejected_unless_valid(next);
  return next;
}

constexpr int kMaxRejections = 5;

// m equal substeps on the bare profile; the shape ledger is rebuilt once.
FlowState substeps(const FlowState& from, double h, int m, Method method) {
  const double dt = h / m;
  std::vector<double> rho = from.grid.rho();
  for (int j = 0; j < m; ++j) rho = advance(rho, from.grid.du(), from.grid.n(), dt, method);
  return FlowState::at(from.t + h, from.grid.with_rho(std::move(rho)));
}

}  // namespace

FlowState step(const FlowState& state, double dt, Method method) {
  return FlowState::at(state.t + dt,
                       state.grid.with_rho(advance(state.grid.rho(), state.grid.du(), state.grid.n(), dt, method)));
}

Trajectory run(const FlowState& initial, const FlowConfig& config) {
  config.validate();
  Trajectory traj;
  traj.states.push_back(initial);
  const bool initially_convex = initial.convexity.kind != ConvexityKind::Nonconvex;
  if (!initially_convex) traj.warnings.push_back("initial state is not weakly convex");

  const double t0 = initial.t;
  const long total = static_cast<long>(std::ceil((config.t_end - t0) / config.dt - 1e-9));
  FlowState cur = initial;
  bool recorded_last = true;
  traj.termination = Termination::ReachedTEnd;

  for (long i = 0; i < total; ++i) {
    const double t_next = std::min(t0 + static_cast<double>(i + 1) * config.dt, config.t_end);
    const double h = t_next - cur.t;
    try {
      (void)rhs(cur);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ChartBreakdown) throw;
      traj.termination = Termination::ChartBreakdown;
      break;
    }

    int m = std::max(1, static_cast<int>(std::ceil(h / stable_dt(cur.shape, config.cfl_safety))));
    int rejections = 0;
    bool advanced = false;
    FlowState next = cur;
    while (!advanced) {
      try {
        next = substeps(cur, h, m, config.method);
        advanced = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StepRejected && e.kind() != ErrorKind::ChartBreakdown) throw;
        if (++rejections >= kMaxRejections) break;
        m *= 2;
      }
    }
    if (!advanced) {
      traj.termination = Termination::StepFailure;
      break;
    }
    next.t = t_next;
    cur = std::move(next);
    traj.step_log.push_back({cur.t, h / m, m, rejections, cur.shape.max_abs_A(), cur.convexity.margin});

    recorded_last = false;
    if ((i + 1) % config.record_every == 0) {
      traj.states.push_back(cur);
      recorded_last = true;
    }

    const double min_rho = *std::min_element(cur.grid.rho().begin(), cur.grid.rho().end());
    if (min_rho < config.stop_min_radius) {
      traj.termination = Termination::MinRadius;
      break;
    }
    if (cur.shape.max_abs_A() > config.stop_max_A) {
      traj.termination = Termination::Blowup;
      break;
    }
    if (initially_convex && cur.convexity.kind == ConvexityKind::Nonconvex) {
      traj.termination = Termination::ConvexityLost;
      break;
    }
  }
  if (!recorded_last) traj.states.push_back(cur);
  return traj;
}

std::vector<double> dt_H_identity(const FlowState& state, double lambda) {
  const ShapeData& s = state.shape;
  std::vector<double> out(s.node_count());
  for (int k = 0; k < s.node_count(); ++k) out[k] = s.lapH[k] + s.H[k] * s.A_sq[k] + s.n * lambda * s.H[k];
  return out;
}

std::vector<double> dt_H_material(const Trajectory& trajectory, std::size_t index) {
  return normal_time_derivative(trajectory, index, [](const FlowState& st) { return st.shape.H; },
                                TimeStencil::Central3);
}

}  // namespace mcf
