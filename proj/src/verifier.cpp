#include "mcf/verifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mcf/errors.hpp"

namespace mcf {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<double> theta(const FlowState& state, std::span<const double> dtH) {
  const ShapeData& s = state.shape;
  require_strictly_convex(s);
  if (dtH.size() != static_cast<std::size_t>(s.node_count()))
    throw Error(ErrorKind::InvalidArgument, "dtH has the wrong length");
  std::vector<double> out(dtH.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = dtH[k] - s.normgradH_sq[k];
  return out;
}

std::vector<double> q_quantity(const FlowState& state, std::span<const double> th, double lambda) {
  const ShapeData& s = state.shape;
  std::vector<double> out(th.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!(s.H[k] > 0.0)) throw Error(ErrorKind::ZeroMeanCurvature, "H <= 0 at node " + std::to_string(k));
    out[k] = (th[k] - s.n * lambda * s.H[k]) / s.H[k];
  }
  return out;
}

double default_tolerance(const Trajectory& traj) {
  if (traj.states.empty()) return 0.0;
  const double du = traj.states.front().grid.du();
  const double dt = traj.states.size() > 1 ? traj.states[1].t - traj.states[0].t : 0.0;
  double max_A = 0.0;
  for (const auto& st : traj.states) max_A = std::max(max_A, st.shape.max_abs_A());
  return 10.0 * (du * du + dt) * (1.0 + max_A * max_A * max_A);
}

EtaTensor eta(const ShapeData& s, const Derivatives& d) {
  EtaTensor out;
  const int size = s.node_count();
  out.eta_uu.resize(size);
  out.eta_ang.resize(size);
  for (int k = 0; k < size; ++k) {
    const double w = d.H_s[k] / s.kappa1[k];
    out.eta_uu[k] = d.H_ss[k] + s.H[k] * s.kappa1[k] * s.kappa1[k] - w * d.k1_s[k];
    out.eta_ang[k] = d.hessH_ang[k] + s.H[k] * s.kappa2[k] * s.kappa2[k] - w * d.k2_s[k];
  }
  return out;
}

namespace {

std::vector<double> gradient_energy(const ShapeData& s) {
  const auto H_s = d_s(s, s.H, Parity::Even);
  std::vector<double> out(s.node_count());
  for (int k = 0; k < s.node_count(); ++k) out[k] = H_s[k] * H_s[k] / s.kappa1[k];
  return out;
}

bool strictly_convex_around(const Trajectory& traj, std::size_t index, int radius) {
  if (index < static_cast<std::size_t>(radius) || index + radius >= traj.states.size()) return false;
  for (std::size_t j = index - radius; j <= index + radius; ++j)
    if (!traj.states[j].shape.strictly_convex()) return false;
  return true;
}

}  // namespace

// ---- Harnack ---------------------------------------------------------------

double harnack_full(double dtH, double H, double H_s, double kappa1, double kappa2, double v1, double v_ang, int n,
                    double elapsed) {
  return dtH + H / (2.0 * elapsed) + 2.0 * v1 * H_s + kappa1 * v1 * v1 + kappa2 * v_ang * v_ang - n * H;
}

HarnackReport harnack_check(const Trajectory& traj, const HarnackOptions& options) {
  HarnackReport rep;
  rep.tolerance_used = options.tolerance.value_or(default_tolerance(traj));
  rep.global_min = std::numeric_limits<double>::infinity();
  rep.minimality_slack = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> radius(0.25, 2.0);

  for (const FlowState& st : traj.states) {
    const double elapsed = st.t - options.t_origin;
    const ShapeData& s = st.shape;
    const bool positive_H = std::all_of(s.H.begin(), s.H.end(), [](double h) { return h > 0.0; });
    if (!(elapsed > 0.0) || !s.strictly_convex() || !positive_H) {
      ++rep.skipped_states;
      continue;
    }
    const auto H_s = d_s(s, s.H, Parity::Even);
    const auto dtH = dt_H_identity(st, options.lambda);
    HarnackSlice slice;
    slice.t = st.t;
    slice.theta = theta(st, dtH);
    slice.q = q_quantity(st, slice.theta);
    const int size = s.node_count();
    slice.min_expr.resize(size);
    slice.minimizer_v.resize(size);
    for (int k = 0; k < size; ++k) {
      slice.min_expr[k] = slice.theta[k] - s.n * s.H[k] + s.H[k] / (2.0 * elapsed);
      const double v_star = -H_s[k] / s.kappa1[k];
      slice.minimizer_v[k] = v_star;
      if (slice.min_expr[k] < rep.global_min) {
        rep.global_min = slice.min_expr[k];
        rep.worst_node = k;
        rep.worst_time = st.t;
      }
      const double at_star = harnack_full(dtH[k], s.H[k], H_s[k], s.kappa1[k], s.kappa2[k], v_star, 0.0, s.n, elapsed);
      const double scale = 1.0 + std::abs(v_star);
      for (int j = 0; j < 8; ++j) {
        const double ang = j * std::numbers::pi / 4.0;
        const double r = radius(rng) * scale;
        const double v1 = v_star + r * std::cos(ang), v2 = r * std::sin(ang);
        const double full = harnack_full(dtH[k], s.H[k], H_s[k], s.kappa1[k], s.kappa2[k], v1, v2, s.n, elapsed);
        rep.minimality_slack = std::min(rep.minimality_slack, full - at_star);
      }
    }
    rep.slices.push_back(std::move(slice));
  }
  if (rep.slices.empty()) {
    rep.global_min = 0.0;
    rep.minimality_slack = 0.0;
    rep.pass = false;
    return rep;
  }
  rep.pass = rep.global_min >= -rep.tolerance_used && rep.minimality_slack >= -1e-10;
  return rep;
}

// ---- Q versus the ODE barrier ---------------------------------------------

QOdeReport q_ode_check(const Trajectory& traj, double epsilon, double t_origin, std::optional<double> tolerance) {
  QOdeReport rep;
  rep.epsilon = epsilon;
  rep.t_origin = t_origin;
  rep.tolerance = tolerance.value_or(default_tolerance(traj));
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (const FlowState& st : traj.states) {
    const double rel = st.t - t_origin;
    const ShapeData& s = st.shape;
    if (!(rel > epsilon) || !s.strictly_convex()) continue;
    if (!std::all_of(s.H.begin(), s.H.end(), [](double h) { return h > 0.0; })) continue;
    const auto q = q_quantity(st, theta(st, dt_H_identity(st)));
    const double barrier = -1.0 / (2.0 * (rel - epsilon));
    for (int k = 0; k < s.node_count(); ++k) {
      if (q[k] - barrier < rep.min_margin) {
        rep.min_margin = q[k] - barrier;
        rep.worst_node = k;
        rep.worst_time = st.t;
      }
    }
    ++rep.states_checked;
  }
  if (rep.states_checked == 0) {
    rep.min_margin = 0.0;
    rep.pass = false;
  } else {
    rep.pass = rep.min_margin >= -rep.tolerance;
  }
  return rep;
}

// ---- Evolution identities --------------------------------------------------

const std::vector<IdentityDef>& identity_catalog() {
  static const std::vector<IdentityDef> catalog = {
      {"metric", false},
      {"inverse_metric", false},
      {"weingarten_hessian", false},
      {"weingarten_heat", false},
      {"second_form_heat", false},
      {"mean_curvature", false},
      {"laplacian_commutator", true},
      {"dt_dtH", true},
      {"grad_dtH", false},
      {"gradient_commutator", false},
      {"A_sq", false},
      {"codazzi", false},
      {"gauss", false},
  };
  return catalog;
}

namespace {

constexpr TimeStencil kStencil = TimeStencil::Central5;

std::vector<double> normal_dtH(const Trajectory& traj, std::size_t index) {
  return normal_time_derivative(traj, index, [](const FlowState& s) { return s.shape.H; }, kStencil);
}

// d_t of the (already normal) d_t H, again in normal parametrization.
std::vector<double> normal_dt_dtH(const Trajectory& traj, std::size_t index) {
  const int r = stencil_radius(kStencil);
  if (index < static_cast<std::size_t>(2 * r) || index + 2 * r >= traj.states.size())
    throw Error(ErrorKind::BoundaryIndex, "nested time derivative lacks neighbours");
  std::vector<std::vector<double>> F;
  for (int j = -r; j <= r; ++j) F.push_back(normal_dtH(traj, index + j));
  const double tau = traj.states[index + 1].t - traj.states[index].t;
  const FlowState& st = traj.states[index];
  const auto T = tangential_velocity_u(st.shape);
  const auto F_u = diff_u(F[r], Parity::Even, st.shape.du);
  std::vector<double> out(F[r].size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = (-F[4][k] + 8.0 * F[3][k] - 8.0 * F[1][k] + F[0][k]) / (12.0 * tau) - T[k] * F_u[k];
  return out;
}

template <class Fn>
double band_max(const ShapeData& s, Fn&& residual) {
  double m = 0.0;
  const double du = s.du;
  for (int k = 0; k < s.node_count(); ++k) {
    const double u = k * du;
    if (u < kBand - 1e-12 || u > std::numbers::pi - kBand + 1e-12) continue;
    const double r = std::abs(residual(k));
    if (!(r == r)) return std::numeric_limits<double>::quiet_NaN();
    m = std::max(m, r);
  }
  return m;
}

}  // namespace

std::vector<double> identity_residuals(const Trajectory& traj, std::size_t index) {
  if (index < 4 || index + 4 >= traj.states.size())
    throw Error(ErrorKind::BoundaryIndex, "identity residuals need 4 recorded neighbours per side");
  const FlowState& st = traj.states[index];
  const ShapeData& s = st.shape;
  const Derivatives d = derivatives(s);
  const int n = s.n;
  const double m = n - 1.0;
  const auto& H = s.H;
  const auto& k1 = s.kappa1;
  const auto& k2 = s.kappa2;

  const auto dtH = normal_dtH(traj, index);
  const auto dt_k1 = normal_time_derivative(traj, index, [](const FlowState& x) { return x.shape.kappa1; }, kStencil);
  const auto dt_k2 = normal_time_derivative(traj, index, [](const FlowState& x) { return x.shape.kappa2; }, kStencil);
  const auto dt_g = normal_time_derivative_uu(traj, index, [](const FlowState& x) { return x.shape.g_uu; }, kStencil, 1);
  const auto dt_ginv = normal_time_derivative_uu(
      traj, index,
      [](const FlowState& x) {
        std::vector<double> v(x.shape.g_uu.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 / x.shape.g_uu[k];
        return v;
      },
      kStencil, -1);
  const auto dt_log_phi = normal_time_derivative_log_phi(traj, index, kStencil);
  const auto dt_h = normal_time_derivative_uu(
      traj, index,
      [](const FlowState& x) {
        std::vector<double> v(x.shape.g_uu.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = x.shape.kappa1[k] * x.shape.g_uu[k];
        return v;
      },
      kStencil, 1);
  const auto dt_lapH = normal_time_derivative(traj, index, [](const FlowState& x) { return x.shape.lapH; }, kStencil);
  const auto dt_Asq = normal_time_derivative(traj, index, [](const FlowState& x) { return x.shape.A_sq; }, kStencil);
  const auto dtdtH = normal_dt_dtH(traj, index);
  const auto lap_dtH = laplace_beltrami(s, dtH);
  const auto grad_dtH = d_s(s, dtH, Parity::Even);
  const auto grad_lapH = d_s(s, s.lapH, Parity::Even);
  std::vector<double> AH(s.node_count());
  for (int k = 0; k < s.node_count(); ++k) AH[k] = s.A_sq[k] * H[k];
  const auto grad_AH = d_s(s, AH, Parity::Even);
  const auto codazzi = codazzi_residual(st.grid);
  const auto gauss = gauss_residual(st.grid);

  auto hess_trace = [&](int k) { return k1[k] * d.H_ss[k] + m * k2[k] * d.hessH_ang[k]; };

  std::vector<double> out;
  out.push_back(band_max(s, [&](int k) {
    return std::max(std::abs(dt_g[k] + 2.0 * H[k] * k1[k] * s.g_uu[k]), std::abs(dt_log_phi[k] + H[k] * k2[k]));
  }));
  out.push_back(band_max(s, [&](int k) { return dt_ginv[k] - 2.0 * H[k] * k1[k] / s.g_uu[k]; }));
  out.push_back(band_max(s, [&](int k) {
    return std::max(std::abs(dt_k1[k] - (d.H_ss[k] + H[k] * k1[k] * k1[k] + H[k])),
                    std::abs(dt_k2[k] - (d.hessH_ang[k] + H[k] * k2[k] * k2[k] + H[k])));
  }));
  out.push_back(band_max(s, [&](int k) {
    return std::max(std::abs(dt_k1[k] - (d.lap_h11[k] + s.A_sq[k] * k1[k] + 2.0 * H[k] - n * k1[k])),
                    std::abs(dt_k2[k] - (d.lap_h22[k] + s.A_sq[k] * k2[k] + 2.0 * H[k] - n * k2[k])));
  }));
  out.push_back(band_max(s, [&](int k) {
    return dt_h[k] - s.g_uu[k] * (d.lap_h11[k] + s.A_sq[k] * k1[k] - 2.0 * H[k] * k1[k] * k1[k] + 2.0 * H[k] -
                                  n * k1[k]);
  }));
  out.push_back(band_max(s, [&](int k) { return dtH[k] - (s.lapH[k] + H[k] * s.A_sq[k] + n * H[k]); }));
  out.push_back(band_max(s, [&](int k) {
    return dt_lapH[k] - lap_dtH[k] - (2.0 * H[k] * hess_trace(k) + 2.0 * k1[k] * d.H_s[k] * d.H_s[k]);
  }));
  out.push_back(band_max(s, [&](int k) {
    const double rhs = lap_dtH[k] + 4.0 * H[k] * hess_trace(k) + 2.0 * k1[k] * d.H_s[k] * d.H_s[k] +
                       (s.A_sq[k] + n) * dtH[k] + 2.0 * H[k] * H[k] * s.C[k] + 2.0 * H[k] * H[k] * H[k];
    return dtdtH[k] - rhs;
  }));
  out.push_back(band_max(s, [&](int k) {
    return grad_dtH[k] -
           (d.lap_gradH[k] + grad_AH[k] + (k1[k] * k1[k] - H[k] * k1[k]) * d.H_s[k] + d.H_s[k]);
  }));
  out.push_back(band_max(s, [&](int k) {
    return grad_lapH[k] - d.lap_gradH[k] - (k1[k] * k1[k] - H[k] * k1[k] - m) * d.H_s[k];
  }));
  out.push_back(band_max(s, [&](int k) {
    const double A2 = s.A_sq[k];
    return dt_Asq[k] -
           (d.lap_A_sq[k] - 2.0 * d.gradA_sq[k] + 2.0 * A2 * A2 + 2.0 * (2.0 * H[k] * H[k] - n * A2));
  }));
  out.push_back(band_max(s, [&](int k) { return codazzi[k]; }));
  out.push_back(band_max(s, [&](int k) { return gauss[k]; }));
  return out;
}

double convergence_order(std::span<const int> levels, std::span<const double> residuals) {
  const std::size_t m = levels.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(levels[i]));
    const double y = std::log(residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return -slope;
}

IdentityReport identity_suite(const std::function<FlowState(int)>& initial, std::span<const int> levels,
                              const IdentityWindow& window) {
  if (levels.size() < 3) throw Error(ErrorKind::InvalidArgument, "convergence orders need at least 3 levels");
  const auto& catalog = identity_catalog();
  std::vector<std::vector<double>> table(catalog.size());

  for (int N : levels) {
    const FlowState start = initial(N);
    FlowConfig cfg;
    cfg.dt = window.tau;
    cfg.t_end = start.t + (window.eval_states + 8) * window.tau;
    cfg.method = window.method;
    cfg.cfl_safety = window.cfl_safety;
    const Trajectory traj = run(start, cfg);
    std::vector<double> worst(catalog.size(), 0.0);
    const bool complete = traj.termination == Termination::ReachedTEnd &&
                          traj.states.size() >= static_cast<std::size_t>(window.eval_states + 8);
    for (int e = 0; e < window.eval_states && complete; ++e) {
      const auto r = identity_residuals(traj, 4 + e);
      for (std::size_t i = 0; i < r.size(); ++i) worst[i] = std::max(worst[i], r[i]);
    }
    if (!complete) std::fill(worst.begin(), worst.end(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < catalog.size(); ++i) table[i].push_back(worst[i]);
  }

  IdentityReport rep;
  rep.pass = true;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    IdentityResult r;
    r.id = catalog[i].id;
    r.nested = catalog[i].nested;
    r.levels.assign(levels.begin(), levels.end());
    r.residuals = table[i];
    const bool finite = std::all_of(r.residuals.begin(), r.residuals.end(), [](double x) { return std::isfinite(x); });
    r.max_residual = finite ? *std::max_element(r.residuals.begin(), r.residuals.end())
                            : std::numeric_limits<double>::infinity();
    if (!finite) {
      r.pass = false;
    } else if (r.max_residual <= kExactFloor) {
      r.exact = true;
      r.pass = true;
    } else {
      r.order = convergence_order(levels, r.residuals);
      r.pass = *r.order >= (r.nested ? 0.9 : 1.9);
    }
    rep.pass = rep.pass && r.pass;
    rep.results.push_back(std::move(r));
  }
  return rep;
}

// ---- Inequalities -----------------------------------------------------

InequalitySlacks inequality_slacks(const Trajectory& traj, std::size_t index) {
  const FlowState& st = traj.states[index];
  const ShapeData& s = st.shape;
  require_strictly_convex(s);
  const Derivatives d = derivatives(s);
  const EtaTensor et = eta(s, d);
  const int n = s.n;
  const double m = n - 1.0;

  const auto dtP = normal_time_derivative(
      traj, index, [](const FlowState& x) { return gradient_energy(x.shape); }, kStencil);
  auto theta_field = [](const FlowState& x) {
    const ShapeData& y = x.shape;
    const auto P = gradient_energy(y);
    std::vector<double> v(y.node_count());
    for (int k = 0; k < y.node_count(); ++k) v[k] = y.lapH[k] + y.H[k] * y.A_sq[k] + y.n * y.H[k] - P[k];
    return v;
  };
  const auto dtTheta = normal_time_derivative(traj, index, theta_field, kStencil);
  const auto Th = theta_field(st);
  const auto lapTheta = laplace_beltrami(s, Th);

  double H_max = 0.0;
  for (double h : s.H) H_max = std::max(H_max, std::abs(h));
  const double du = s.du;
  const double noise = 100.0 * DBL_EPSILON * std::pow(std::max(1.0, H_max), 3) / (du * du * du * du);

  const int size = s.node_count();
  InequalitySlacks out;
  out.gradient_bound.resize(size);
  out.gradient_bound_algebraic.resize(size);
  out.gradient_heat.resize(size);
  out.theta_heat.resize(size);
  out.gradient_heat_noise_floor.assign(size, noise);
  for (int k = 0; k < size; ++k) {
    const double H = s.H[k], k1 = s.kappa1[k], k2 = s.kappa2[k];
    const double Hs = d.H_s[k], P = d.P[k], D = d.codazzi_term[k];
    const double common = 2.0 * k1 * Hs * Hs + s.A_sq[k] * P + 2.0 * H * d.A_sq_s[k] * Hs / k1 + n * P;

    const double rhs3 = -Hs * Hs * d.lap_h11[k] / (k1 * k1) + 2.0 * Hs * d.lap_gradH[k] / k1 + common;
    out.gradient_bound[k] = rhs3 - dtP[k];
    out.gradient_bound_algebraic[k] = n * P - (-(2.0 * H - n * k1) * Hs * Hs / (k1 * k1) + 2.0 * P);

    const double psiHs = d.hessH_ang[k];
    const double A = -2.0 * Hs * Hs / (k1 * k1) * (d.k1_s[k] * d.k1_s[k] / k1 + m * D * D / k2);
    const double B = 4.0 * Hs / k1 * (d.k1_s[k] * d.H_ss[k] / k1 + m * D * psiHs / k2);
    const double C = -2.0 * (d.H_ss[k] * d.H_ss[k] / k1 + m * psiHs * psiHs / k2);
    out.gradient_heat[k] = d.lapP[k] + A + B + C + common - dtP[k];

    const double e1 = et.eta_uu[k], e2 = et.eta_ang[k];
    const double tr = e1 + m * e2;
    const double quad = 2.0 * (e1 * e1 / k1 + m * e2 * e2 / k2 - tr * tr / H);
    const double rhs6 = lapTheta[k] + 2.0 * (Th[k] - n * H) * (Th[k] - n * H) / H + (s.A_sq[k] + n) * Th[k] + quad +
                        2.0 * H * H * H;
    out.theta_heat[k] = dtTheta[k] - rhs6;
  }
  return out;
}

InequalityReport inequality_suite(const Trajectory& traj, std::optional<double> tolerance) {
  const double tol = tolerance.value_or(default_tolerance(traj));
  const char* ids[] = {"gradient_bound", "gradient_bound_algebraic", "gradient_heat", "theta_heat"};
  InequalityReport rep;
  for (const char* id : ids) {
    InequalityResult r;
    r.id = id;
    r.tolerance = tol;
    r.min_slack = std::numeric_limits<double>::infinity();
    rep.results.push_back(r);
  }
  const int radius = stencil_radius(kStencil);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    if (!strictly_convex_around(traj, i, radius)) continue;
    const auto sl = inequality_slacks(traj, i);
    const std::vector<double>* cols[] = {&sl.gradient_bound, &sl.gradient_bound_algebraic, &sl.gradient_heat, &sl.theta_heat};
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t k = 0; k < cols[c]->size(); ++k) {
        const double v = (*cols[c])[k];
        if (v < rep.results[c].min_slack || !(v == v)) {
          rep.results[c].min_slack = v;
          rep.results[c].worst_node = static_cast<int>(k);
          rep.results[c].worst_time = traj.states[i].t;
        }
      }
    }
    rep.results[2].noise_floor = std::max(rep.results[2].noise_floor, sl.gradient_heat_noise_floor.front());
    ++rep.states_checked;
  }

  rep.status = CheckStatus::Pass;
  for (auto& r : rep.results) {
    if (rep.states_checked == 0 || !(r.min_slack == r.min_slack)) {
      r.status = CheckStatus::Fail;
    } else if (r.min_slack >= -r.tolerance) {
      r.status = CheckStatus::Pass;
    } else if (r.id == "gradient_heat" && r.min_slack >= -(r.tolerance + r.noise_floor)) {
      r.status = CheckStatus::Inconclusive;
    } else {
      r.status = CheckStatus::Fail;
    }
    if (rep.states_checked == 0) r.min_slack = 0.0;
    if (r.status == CheckStatus::Fail) rep.status = CheckStatus::Fail;
    else if (r.status == CheckStatus::Inconclusive && rep.status == CheckStatus::Pass)
      rep.status = CheckStatus::Inconclusive;
  }
  return rep;
}

// ---- Backward decay --------------------------------------------------------

namespace {

double fitted_rate(const std::vector<double>& t, const std::vector<double>& v) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double y = std::log(v[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  return (m * sty - st * sy) / (m * stt - st * st);
}

}  // namespace

DecayReport decay_check(const ShrinkingSphere& family, const EquatorFrame& frame, double t_begin, double t_end,
                        int samples, int intervals) {
  if (!(t_begin < t_end) || t_end > 0.0 || samples < 3)
    throw Error(ErrorKind::InvalidArgument, "decay window must satisfy t_begin < t_end <= 0 with >= 3 samples");
  const int n = family.n();
  DecayReport rep;
  rep.t_begin = t_begin;
  rep.t_end = t_end;
  const auto at0 = family.mean_curvature_at(0.0);
  const double H0 = at0.H, A0 = std::sqrt(at0.A_sq);
  rep.margin_H = rep.margin_A = rep.margin_log_H = std::numeric_limits<double>::infinity();

  const auto first_pts = sample_points(family.sample_as_grid(t_begin, intervals, frame));
  const FittedEquator fitted = fit_limit_equator(first_pts);

  std::vector<double> ts, Hs, As, heights, grads;
  bool grad_resolved = true;  // |grad A|^2 above roundoff at every window sample
  for (int i = 0; i < samples; ++i) {
    const double t = t_begin + (t_end - t_begin) * i / (samples - 1);
    const auto c = family.mean_curvature_at(t);
    const double A = std::sqrt(c.A_sq);
    const double growth = std::exp(n * t);
    rep.margin_H = std::min(rep.margin_H, H0 * growth - c.H);
    rep.margin_A = std::min(rep.margin_A, A0 * growth - A);
    rep.margin_log_H = std::min(rep.margin_log_H, family.dH_dt(t) / c.H - n);
    rep.c0 = std::max(rep.c0, A / growth);

    const ProfileGrid grid = family.sample_as_grid(t, intervals, frame);
    const ShapeData s = shape_data(grid);
    const Derivatives d = derivatives(s);
    const double g = *std::max_element(d.gradA_sq.begin(), d.gradA_sq.end());
    rep.c1 = std::max(rep.c1, g / (growth * growth));

    if (t <= -1.0 + 1e-12) {
      double sup_h = 0.0;
      for (const auto& x : sample_points(grid)) sup_h = std::max(sup_h, std::abs(height(x, fitted.frame)));
      ts.push_back(t);
      Hs.push_back(c.H);
      As.push_back(A);
      heights.push_back(sup_h);
      grads.push_back(g);
      if (!(g > 1e-20 * c.A_sq * c.A_sq)) grad_resolved = false;
    }
  }
  if (ts.size() >= 2) {
    rep.rate_H = fitted_rate(ts, Hs);
    rep.rate_A = fitted_rate(ts, As);
    rep.rate_height = fitted_rate(ts, heights);
    if (grad_resolved) rep.rate_gradA_sq = fitted_rate(ts, grads);
  }
  rep.pass_H = rep.margin_H >= -1e-12;
  rep.pass_A = rep.margin_A >= -1e-12;
  rep.pass_log_H = rep.margin_log_H >= -1e-12;
  rep.pass_height = ts.size() >= 2 && std::abs(rep.rate_height - n) <= 0.01 * n;
  rep.pass = rep.pass_H && rep.pass_A && rep.pass_log_H && rep.pass_height;
  return rep;
}

// ---- Limit equator ---------------------------------------------------------

FittedEquator fit_limit_equator(std::span<const SpherePoint> points) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "no sample points");
  const std::size_t dim = points.front().ambient_dim();
  if (points.size() < dim) throw Error(ErrorKind::InvalidArgument, "need at least n + 2 sample points");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& p : points) {
    const Eigen::Map<const Eigen::VectorXd> x(p.coords().data(), dim);
    M.noalias() += x * x.transpose();
    mean += x;
  }
  M /= static_cast<double>(points.size());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const auto& lam = es.eigenvalues();
  if (lam(1) - lam(0) < 1e-10) throw Error(ErrorKind::DegenerateFit, "smallest eigenvalue is not simple");
  Eigen::VectorXd e = es.eigenvectors().col(0);
  if (e.dot(mean) < 0.0) e = -e;
  const Eigen::VectorXd a = es.eigenvectors().col(1);
  // RMS taken from the samples: sqrt(lambda_min) would inflate eigenvalue roundoff.
  double sum_sq = 0.0;
  for (const auto& p : points) {
    const double h = Eigen::Map<const Eigen::VectorXd>(p.coords().data(), dim).dot(e);
    sum_sq += h * h;
  }
  Vec ev(e.data(), e.data() + dim), av(a.data(), a.data() + dim);
  return {EquatorFrame(std::move(ev), std::move(av)), std::sqrt(sum_sq / static_cast<double>(points.size()))};
}

}  // namespace mcf
