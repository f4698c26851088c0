#include "mcf/kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

namespace mcf {

NodeGeometry node_geometry(double rho, double rho_u, double rho_uu, double u, bool pole, double pole_tilt) {
  const double sr = std::sin(rho), cr = std::cos(rho);
  const double su = std::sin(u), cu = std::cos(u);

  const Vec3 x{cr, sr * cu, sr * su};
  const Vec3 radial{-sr, cr * cu, cr * su};  // unit d/drho
  const Vec3 angular{0.0, -su, cu};          // unit d/du of sigma
  const Vec3 sigma{0.0, cu, su};

  NodeGeometry g{};
  g.position = x;
  for (int i = 0; i < 3; ++i) {
    g.x_u[i] = rho_u * radial[i] + sr * angular[i];
  }
  Vec3 x_uu;
  for (int i = 0; i < 3; ++i) {
    x_uu[i] = rho_uu * radial[i] - rho_u * rho_u * x[i] + 2.0 * cr * rho_u * angular[i] - sr * sigma[i];
  }

  const Vec3 c = cross3(x, g.x_u);
  const double c_len = std::sqrt(dot3(c, c));
  for (int i = 0; i < 3; ++i) g.nu[i] = -c[i] / c_len;

  g.L = std::sqrt(dot3(g.x_u, g.x_u));
  g.kappa1 = -dot3(x_uu, g.nu) / (g.L * g.L);
  if (pole) {
    // kappa2 = cot(rho) - (rho_u cot u) / sin^2(rho) in the limit; at the pole nu is the radial direction.
    const double tilt = std::isnan(pole_tilt) ? rho_uu : pole_tilt;
    g.kappa2 = cr / sr - tilt / (sr * sr);
  } else {
    g.kappa2 = g.nu[2] / (sr * su);
  }
  g.nu_radial = dot3(g.nu, radial);
  g.phi = pole ? 0.0 : sr * su;
  g.phi_u = g.x_u[2];
  return g;
}

void CurvatureLedger::resize(std::size_t size) {
  for (auto* v : {&position, &x_u, &nu}) v->resize(size);
  for (auto* v : {&L, &kappa1, &kappa2, &H, &A_sq, &C, &nu_radial, &phi, &phi_u}) v->resize(size);
}

double pole_limit_over_u(std::span<const double> f, int pole, int step, double du) {
  return (f[pole + 2 * step] + 8.0 * f[pole + step] - 9.0 * f[pole]) / (6.0 * du * du);
}

namespace {

inline void fill_node(std::span<const double> rho, std::span<const double> rho_u, std::span<const double> rho_uu,
                      double du, int n, int k, int last, CurvatureLedger& out) {
  const bool pole = k == 0 || k == last;
  double tilt = std::numeric_limits<double>::quiet_NaN();
  if (pole) tilt = pole_limit_over_u(rho, k == 0 ? 0 : last, k == 0 ? 1 : -1, du);
  const NodeGeometry g = node_geometry(rho[k], rho_u[k], rho_uu[k], du * k, pole, tilt);
  const double m = n - 1.0;
  out.position[k] = g.position;
  out.x_u[k] = g.x_u;
  out.nu[k] = g.nu;
  out.L[k] = g.L;
  out.kappa1[k] = g.kappa1;
  out.kappa2[k] = g.kappa2;
  out.H[k] = g.kappa1 + m * g.kappa2;
  out.A_sq[k] = g.kappa1 * g.kappa1 + m * g.kappa2 * g.kappa2;
  out.C[k] = g.kappa1 * g.kappa1 * g.kappa1 + m * g.kappa2 * g.kappa2 * g.kappa2;
  out.nu_radial[k] = g.nu_radial;
  out.phi[k] = g.phi;
  out.phi_u[k] = g.phi_u;
}

}  // namespace

void curvature_ledger(std::span<const double> rho, std::span<const double> rho_u, std::span<const double> rho_uu,
                      double du, int n, CurvatureLedger& out, Execution exec) {
  const int size = static_cast<int>(rho.size());
  const int last = size - 1;
  out.resize(size);
  if (exec == Execution::Serial) {
    for (int k = 0; k < size; ++k) fill_node(rho, rho_u, rho_uu, du, n, k, last, out);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int k = 0; k < size; ++k) fill_node(rho, rho_u, rho_uu, du, n, k, last, out);
}

}  // namespace mcf
