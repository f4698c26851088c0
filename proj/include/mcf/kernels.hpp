#pragma once

// Per-node curvature kernel for axisymmetric radial graphs. The node work is
// independent, so the loop comes in two flavours: a serial reference and an
// OpenMP version. Both call the same node function and must agree bitwise.

#include <limits>
#include <span>
#include <vector>

#include "mcf/sphere.hpp"

namespace mcf {

enum class Execution { Serial, Parallel };

/// Geometry of one node, expressed in the (e, axis_a, w) 2-sphere.
struct NodeGeometry {
  Vec3 position;
  Vec3 x_u;         // d/du of the embedding
  Vec3 nu;          // outward unit normal, tangent to the sphere
  double L;         // |X_u| = sqrt(g_uu)
  double kappa1;    // profile principal curvature
  double kappa2;    // rotational principal curvature (multiplicity n - 1)
  double nu_radial; // <nu, unit radial direction>
  double phi;       // angular warping radius sin(rho) sin(u)
  double phi_u;
};

/// Ambient second derivatives of the embedding give h = -<D^2 X, nu>; the
/// angular direction uses h_ang / g_ang = <nu, w> / <X, w>. On the rotation
/// axis (pole nodes) that ratio is replaced by its limit, with pole_tilt
/// standing in for lim rho_u cot(u) (rho_uu when NaN).
NodeGeometry node_geometry(double rho, double rho_u, double rho_uu, double u, bool pole,
                           double pole_tilt = std::numeric_limits<double>::quiet_NaN());

/// Discrete limit at a pole of (central difference of an even f) / (u - u_pole):
/// (f_2 + 8 f_1 - 9 f_0) / (6 du^2), with step = +1 at u = 0 and -1 at u = pi.
/// It tracks the interior stencil's O(du^2) error, so derived fields stay
/// smooth across the pole.
double pole_limit_over_u(std::span<const double> f, int pole, int step, double du);

struct CurvatureLedger {
  std::vector<Vec3> position, x_u, nu;
  std::vector<double> L, kappa1, kappa2, H, A_sq, C, nu_radial, phi, phi_u;

  void resize(std::size_t size);
};

/// rho, rho_u, rho_uu sampled on u_k = k * du; n is the hypersurface dimension.
void curvature_ledger(std::span<const double> rho, std::span<const double> rho_u, std::span<const double> rho_uu,
                      double du, int n, CurvatureLedger& out, Execution exec = Execution::Parallel);

}  // namespace mcf
