#include "mcf/shape.hpp"

#include <algorithm>
#include <cmath>

#include "mcf/errors.hpp"
#include "mcf/spectral.hpp"

namespace mcf {

const char* to_string(ConvexityKind kind) {
  switch (kind) {
    case ConvexityKind::Strict: return "strict";
    case ConvexityKind::Weak: return "weak";
    case ConvexityKind::Nonconvex: return "nonconvex";
  }
  return "unknown";
}

double ShapeData::max_abs_A() const {
  double m = 0.0;
  for (double a : A_sq) m = std::max(m, a);
  return std::sqrt(m);
}

void require_strictly_convex(const ShapeData& shape) {
  if (!shape.strictly_convex())
    throw Error(ErrorKind::NotStrictlyConvex, "state is " + std::string(to_string(shape.convexity.kind)) +
                                                  " (margin " + std::to_string(shape.convexity.margin) + ")");
}

Embedding embed(const ProfileGrid& grid) {
  const auto& rho = grid.rho();
  const auto rho_u = diff_u(rho, Parity::Even, grid.du());
  const auto rho_uu = diff_uu(rho, Parity::Even, grid.du());
  const int last = grid.intervals();
  Embedding out;
  out.position.reserve(rho.size());
  for (int k = 0; k <= last; ++k) {
    const NodeGeometry g = node_geometry(rho[k], rho_u[k], rho_uu[k], grid.u(k), grid.is_pole(k));
    out.position.push_back(SpherePoint::normalized(grid.frame().from_local(g.position)));
    out.tangent_u.push_back(grid.frame().from_local(g.x_u));
    out.nu.push_back(grid.frame().from_local(g.nu));
  }
  return out;
}

std::vector<SpherePoint> sample_points(const ProfileGrid& grid) {
  const EquatorFrame& frame = grid.frame();
  std::vector<SpherePoint> pts;
  for (int k = 0; k <= grid.intervals(); ++k) {
    const double c = std::cos(grid.rho()[k]), s = std::sin(grid.rho()[k]);
    const double cu = std::cos(grid.u(k)), su = std::sin(grid.u(k));
    for (const Vec& b : frame.angular_basis()) {
      for (double sign : {1.0, -1.0}) {
        Vec x(frame.ambient_dim());
        for (std::size_t i = 0; i < x.size(); ++i)
          x[i] = c * frame.e[i] + s * (cu * frame.axis_a[i] + sign * su * b[i]);
        pts.push_back(SpherePoint::normalized(std::move(x)));
      }
    }
  }
  return pts;
}

ConvexityStatus convexity_status(const ShapeData& shape, double tol_convex) {
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < shape.node_count(); ++k) margin = std::min({margin, shape.kappa1[k], shape.kappa2[k]});
  ConvexityKind kind = ConvexityKind::Weak;
  if (margin > tol_convex) kind = ConvexityKind::Strict;
  else if (margin < -tol_convex) kind = ConvexityKind::Nonconvex;
  return {kind, margin, tol_convex};
}

ConvexityStatus convexity_status(const ShapeData& shape) {
  // Floor keeps roundoff on a totally geodesic state (|A| ~ 1e-17) from reading as strict.
  return convexity_status(shape, std::max(1e-8 * shape.max_abs_A(), 1e-12));
}

std::vector<double> laplace_beltrami(const ShapeData& shape, std::span<const double> field) {
  const auto f_u = diff_u(field, Parity::Even, shape.du);
  const auto f_uu = diff_uu(field, Parity::Even, shape.du);
  const int size = shape.node_count();
  std::vector<double> out(size);
  const double m = shape.n - 1.0;
  for (int k = 0; k < size; ++k) {
    const double L = shape.L[k];
    const double f_s = f_u[k] / L;
    const double f_ss = f_uu[k] / (L * L) - f_u[k] * shape.L_u[k] / (L * L * L);
    if (shape.is_pole(k)) {
      // psi f_s -> f_u / (L^2 u) on the axis.
      const int step = k == 0 ? 1 : -1;
      out[k] = f_ss + m * pole_limit_over_u(field, k, step, shape.du) / (L * L);
    } else {
      out[k] = f_ss + m * shape.psi[k] * f_s;
    }
  }
  return out;
}

std::vector<double> laplace_beltrami(const ProfileGrid& grid, std::span<const double> field) {
  return laplace_beltrami(shape_data(grid), field);
}

ShapeData shape_data(const ProfileGrid& grid, Execution exec) {
  const auto& rho = grid.rho();
  const double du = grid.du();
  ShapeData s;
  s.n = grid.n();
  s.du = du;
  s.rho_u = diff_u(rho, Parity::Even, du);
  const auto rho_uu = diff_uu(rho, Parity::Even, du);

  CurvatureLedger led;
  curvature_ledger(rho, s.rho_u, rho_uu, du, grid.n(), led, exec);

  const int size = grid.node_count();
  s.position = std::move(led.position);
  s.nu = std::move(led.nu);
  s.L = std::move(led.L);
  s.phi = std::move(led.phi);
  s.phi_u = std::move(led.phi_u);
  s.kappa1 = std::move(led.kappa1);
  s.kappa2 = std::move(led.kappa2);
  s.H = std::move(led.H);
  s.A_sq = std::move(led.A_sq);
  s.C = std::move(led.C);

  s.g_uu.resize(size);
  s.g_ang.resize(size);
  s.psi.resize(size);
  s.graph_factor.resize(size);
  for (int k = 0; k < size; ++k) {
    s.g_uu[k] = s.L[k] * s.L[k];
    s.g_ang[k] = s.phi[k] * s.phi[k];
    s.psi[k] = grid.is_pole(k) ? 0.0 : s.phi_u[k] / (s.L[k] * s.phi[k]);
    s.graph_factor[k] = 1.0 / led.nu_radial[k];
  }
  s.L_u = diff_u(s.L, Parity::Even, du);
  s.convexity = convexity_status(s);

  s.gradH_u = diff_u(s.H, Parity::Even, du);
  s.lapH = laplace_beltrami(s, s.H);
  s.b_uu.assign(size, kNaN);
  s.b_ang.assign(size, kNaN);
  s.normgradH_sq.assign(size, kNaN);
  if (s.strictly_convex()) {
    for (int k = 0; k < size; ++k) {
      s.b_uu[k] = 1.0 / s.kappa1[k];
      s.b_ang[k] = 1.0 / s.kappa2[k];
      const double h_s = s.gradH_u[k] / s.L[k];
      s.normgradH_sq[k] = h_s * h_s * s.b_uu[k];
    }
  }
  return s;
}

PrincipalCurvatures analytic_axisym_curvatures(const ProfileGrid& grid) {
  const CosineSeries series(grid.rho());
  PrincipalCurvatures out;
  const int size = grid.node_count();
  out.kappa1.resize(size);
  out.kappa2.resize(size);
  for (int k = 0; k < size; ++k) {
    const double u = grid.u(k);
    const double r = grid.rho()[k];
    const double r1 = series.derivative(u);
    const double r2 = series.second_derivative(u);
    const double f = std::sin(r), fp = std::cos(r);
    const double L = std::sqrt(r1 * r1 + f * f);
    // Geodesic curvature of (rho(u), u) in d rho^2 + sin^2(rho) du^2.
    out.kappa1[k] = (-f * r2 + 2.0 * fp * r1 * r1 + f * f * fp) / (L * L * L);
    // rho_u cot(u) tends to rho_uu on the axis.
    const double tilt = grid.is_pole(k) ? r2 : r1 * std::cos(u) / std::sin(u);
    out.kappa2[k] = (f * fp - tilt) / (L * f);
  }
  return out;
}

std::vector<double> codazzi_residual(const ProfileGrid& grid) {
  const ShapeData s = shape_data(grid);
  const auto k2_u = diff_u(s.kappa2, Parity::Even, s.du);
  std::vector<double> out(s.node_count(), 0.0);
  for (int k = 0; k < s.node_count(); ++k) {
    if (s.is_pole(k)) continue;
    out[k] = k2_u[k] / s.L[k] - (s.kappa1[k] - s.kappa2[k]) * s.psi[k];
  }
  return out;
}

std::vector<double> gauss_residual(const ProfileGrid& grid) {
  const ShapeData s = shape_data(grid);
  const double du = s.du;
  const auto& rho = grid.rho();
  const auto rho_uu = diff_uu(rho, Parity::Even, du);
  const auto L_uu = diff_uu(s.L, Parity::Even, du);
  const int last = s.node_count() - 1;
  std::vector<double> out(s.node_count());
  for (int k = 0; k <= last; ++k) {
    const double L = s.L[k];
    const double sr = std::sin(rho[k]), cr = std::cos(rho[k]);
    double sectional;
    if (s.is_pole(k)) {
      // -phi_ss / phi -> -phi_sss / phi_s on the axis; phi_uuu / phi_u = (3 cos(rho) rho'' - sin(rho)) / sin(rho).
      const double tilt = pole_limit_over_u(rho, k, k == 0 ? 1 : -1, du);
      sectional = -(3.0 * cr * tilt - sr) / (sr * L * L) + L_uu[k] / (L * L * L);
    } else {
      // phi = sin(rho) sin(u), differentiated by hand so spheres come out exact.
      const double u = du * k, su = std::sin(u), cu = std::cos(u);
      const double ru = s.rho_u[k];
      const double phi_uu = rho_uu[k] * cr * su - ru * ru * sr * su + 2.0 * ru * cr * cu - sr * su;
      const double phi_ss = phi_uu / (L * L) - s.phi_u[k] * s.L_u[k] / (L * L * L);
      sectional = -phi_ss / s.phi[k];
    }
    out[k] = sectional - (1.0 + s.kappa1[k] * s.kappa2[k]);
  }
  return out;
}

}  // namespace mcf
