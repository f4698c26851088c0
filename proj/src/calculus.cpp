#include "mcf/calculus.hpp"

#include <cmath>

#include "mcf/errors.hpp"

namespace mcf {

std::vector<double> d_s(const ShapeData& s, std::span<const double> f, Parity parity) {
  auto out = diff_u(f, parity, s.du);
  for (int k = 0; k < s.node_count(); ++k) out[k] /= s.L[k];
  return out;
}

namespace {

std::vector<double> second_s(const ShapeData& s, std::span<const double> f, Parity parity) {
  const auto f_u = diff_u(f, parity, s.du);
  auto out = diff_uu(f, parity, s.du);
  for (int k = 0; k < s.node_count(); ++k) {
    const double L = s.L[k];
    out[k] = out[k] / (L * L) - f_u[k] * s.L_u[k] / (L * L * L);
  }
  return out;
}

}  // namespace

std::vector<double> d_ss(const ShapeData& s, std::span<const double> f) { return second_s(s, f, Parity::Even); }

std::vector<double> hess_ang(const ShapeData& s, std::span<const double> f) {
  const auto f_s = d_s(s, f, Parity::Even);
  std::vector<double> out(s.node_count());
  for (int k = 0; k < s.node_count(); ++k) {
    if (s.is_pole(k))
      out[k] = pole_limit_over_u(f, k, k == 0 ? 1 : -1, s.du) / s.g_uu[k];
    else
      out[k] = s.psi[k] * f_s[k];
  }
  return out;
}

std::vector<double> psi_sq_times(const ShapeData& s, std::span<const double> d) {
  std::vector<double> out(s.node_count());
  for (int k = 0; k < s.node_count(); ++k) {
    if (s.is_pole(k)) {
      // No stencil enters psi^2 d away from the axis, so use a fourth-order d_uu / 2 here.
      const int j = k == 0 ? 1 : -1;
      const double d_uu = (-d[k + 2 * j] + 16.0 * d[k + j] - 15.0 * d[k]) / (6.0 * s.du * s.du);
      out[k] = 0.5 * d_uu / s.g_uu[k];
    } else {
      out[k] = s.psi[k] * s.psi[k] * d[k];
    }
  }
  return out;
}

std::vector<double> vector_laplacian(const ShapeData& s, std::span<const double> c) {
  const auto c_s = d_s(s, c, Parity::Odd);
  const auto c_ss = second_s(s, c, Parity::Odd);
  const double m = s.n - 1.0;
  std::vector<double> out(s.node_count(), 0.0);
  for (int k = 0; k < s.node_count(); ++k) {
    if (s.is_pole(k)) continue;
    const double psi = s.psi[k];
    out[k] = c_ss[k] + m * psi * c_s[k] - m * psi * psi * c[k];
  }
  return out;
}

Derivatives derivatives(const ShapeData& s) {
  const int size = s.node_count();
  const double m = s.n - 1.0;
  Derivatives d;
  d.H_s = d_s(s, s.H, Parity::Even);
  d.H_ss = d_ss(s, s.H);
  d.hessH_ang = hess_ang(s, s.H);
  d.k1_s = d_s(s, s.kappa1, Parity::Even);
  d.k2_s = d_s(s, s.kappa2, Parity::Even);

  std::vector<double> gap(size);
  d.codazzi_term.resize(size);
  d.gradA_sq.resize(size);
  for (int k = 0; k < size; ++k) {
    gap[k] = s.kappa1[k] - s.kappa2[k];
    d.codazzi_term[k] = s.is_pole(k) ? 0.0 : gap[k] * s.psi[k];
    const double D = d.codazzi_term[k];
    d.gradA_sq[k] = d.k1_s[k] * d.k1_s[k] + m * d.k2_s[k] * d.k2_s[k] + 2.0 * m * D * D;
  }

  const auto psi2gap = psi_sq_times(s, gap);
  d.lap_h11 = laplace_beltrami(s, s.kappa1);
  d.lap_h22 = laplace_beltrami(s, s.kappa2);
  for (int k = 0; k < size; ++k) {
    d.lap_h11[k] -= 2.0 * m * psi2gap[k];
    d.lap_h22[k] += 2.0 * psi2gap[k];
  }
  d.lap_gradH = vector_laplacian(s, d.H_s);
  d.lap_A_sq = laplace_beltrami(s, s.A_sq);
  d.A_sq_s = d_s(s, s.A_sq, Parity::Even);

  d.P.assign(size, kNaN);
  d.lapP.assign(size, kNaN);
  if (s.strictly_convex()) {
    for (int k = 0; k < size; ++k) d.P[k] = d.H_s[k] * d.H_s[k] / s.kappa1[k];
    d.lapP = laplace_beltrami(s, d.P);
  }
  return d;
}

std::vector<double> tangential_velocity_u(const ShapeData& s) {
  std::vector<double> out(s.node_count());
  for (int k = 0; k < s.node_count(); ++k) out[k] = -s.H[k] * s.graph_factor[k] * s.rho_u[k] / s.g_uu[k];
  return out;
}

int stencil_radius(TimeStencil stencil) { return stencil == TimeStencil::Central3 ? 1 : 2; }

std::vector<double> fixed_u_time_derivative(const Trajectory& traj, std::size_t index, const StateField& field,
                                            TimeStencil stencil) {
  const int r = stencil_radius(stencil);
  const auto& st = traj.states;
  if (index < static_cast<std::size_t>(r) || index + r >= st.size())
    throw Error(ErrorKind::BoundaryIndex, "state " + std::to_string(index) + " lacks time neighbours");
  const double tau = st[index + 1].t - st[index].t;
  for (int j = -r; j < r; ++j) {
    const double gap = st[index + j + 1].t - st[index + j].t;
    if (!(tau > 0.0) || std::abs(gap - tau) > 1e-9 * tau)
      throw Error(ErrorKind::InvalidArgument, "time stencil needs uniformly spaced states");
  }
  const auto fp1 = field(st[index + 1]);
  const auto fm1 = field(st[index - 1]);
  std::vector<double> out(fp1.size());
  if (stencil == TimeStencil::Central3) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (fp1[k] - fm1[k]) / (2.0 * tau);
  } else {
    const auto fp2 = field(st[index + 2]);
    const auto fm2 = field(st[index - 2]);
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = (-fp2[k] + 8.0 * fp1[k] - 8.0 * fm1[k] + fm2[k]) / (12.0 * tau);
  }
  return out;
}

std::vector<double> normal_time_derivative(const Trajectory& traj, std::size_t index, const StateField& field,
                                           TimeStencil stencil) {
  auto out = fixed_u_time_derivative(traj, index, field, stencil);
  const FlowState& st = traj.states[index];
  const auto T = tangential_velocity_u(st.shape);
  const auto f = field(st);
  const auto f_u = diff_u(f, Parity::Even, st.shape.du);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= T[k] * f_u[k];
  return out;
}

std::vector<double> normal_time_derivative_uu(const Trajectory& traj, std::size_t index, const StateField& component,
                                              TimeStencil stencil, int sign) {
  auto out = fixed_u_time_derivative(traj, index, component, stencil);
  const FlowState& st = traj.states[index];
  const auto T = tangential_velocity_u(st.shape);
  const auto T_u = diff_u(T, Parity::Odd, st.shape.du);
  const auto c = component(st);
  const auto c_u = diff_u(c, Parity::Even, st.shape.du);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= T[k] * c_u[k] + sign * 2.0 * c[k] * T_u[k];
  return out;
}

std::vector<double> normal_time_derivative_log_phi(const Trajectory& traj, std::size_t index, TimeStencil stencil) {
  const auto phi_t = fixed_u_time_derivative(traj, index, [](const FlowState& s) { return s.shape.phi; }, stencil);
  const FlowState& st = traj.states[index];
  const ShapeData& s = st.shape;
  const auto T = tangential_velocity_u(s);
  const auto T_u = diff_u(T, Parity::Odd, s.du);
  std::vector<double> out(s.node_count());
  std::vector<double> phi_ut;
  for (int k = 0; k < s.node_count(); ++k) {
    if (s.is_pole(k)) {
      if (phi_ut.empty())
        phi_ut = fixed_u_time_derivative(traj, index, [](const FlowState& x) { return x.shape.phi_u; }, stencil);
      out[k] = phi_ut[k] / s.phi_u[k] - T_u[k];
    } else {
      out[k] = phi_t[k] / s.phi[k] - T[k] * s.phi_u[k] / s.phi[k];
    }
  }
  return out;
}

}  // namespace mcf
