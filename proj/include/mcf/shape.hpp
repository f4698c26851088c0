#pragma once

#include <limits>
#include <span>
#include <vector>

#include "mcf/kernels.hpp"
#include "mcf/profile.hpp"
#include "mcf/sphere.hpp"

namespace mcf {

enum class ConvexityKind { Strict, Weak, Nonconvex };

struct ConvexityStatus {
  ConvexityKind kind;
  double margin;  // min over nodes of min(kappa1, kappa2)
  double tolerance;
};

const char* to_string(ConvexityKind kind);

/// Per-node curvature ledger. Tensor components are given in the orthonormal
/// frame (unit profile direction, unit angular directions) unless the name
/// says otherwise; the metric is diagonal with components g_uu and g_ang.
/// b_* and normgradH_sq are NaN unless the state is strictly convex.
struct ShapeData {
  int n = 0;
  double du = 0.0;

  std::vector<Vec3> position;  // (e, axis_a, w) coordinates
  std::vector<Vec3> nu;
  std::vector<double> rho_u;
  std::vector<double> g_uu, g_ang;
  std::vector<double> L, L_u;  // L = sqrt(g_uu)
  std::vector<double> phi, phi_u;
  std::vector<double> psi;  // d(log phi)/ds, 0 on the poles where it is singular
  std::vector<double> kappa1, kappa2;
  std::vector<double> H, A_sq, C;
  std::vector<double> b_uu, b_ang;
  std::vector<double> gradH_u;
  std::vector<double> normgradH_sq;  // b(grad H, grad H)
  std::vector<double> lapH;
  std::vector<double> graph_factor;  // 1 / <nu, unit radial>
  ConvexityStatus convexity{ConvexityKind::Weak, 0.0, 0.0};

  int node_count() const noexcept { return static_cast<int>(H.size()); }
  bool is_pole(int k) const noexcept { return k == 0 || k == node_count() - 1; }
  bool strictly_convex() const noexcept { return convexity.kind == ConvexityKind::Strict; }
  double max_abs_A() const;
};

/// Throws NotStrictlyConvex unless b and normgradH_sq are available.
void require_strictly_convex(const ShapeData& shape);

struct Embedding {
  std::vector<SpherePoint> position;
  std::vector<Vec> tangent_u;
  std::vector<Vec> nu;
};

/// Ambient positions, d/du tangents and outward normals of the profile nodes
/// (on the half 2-sphere spanned by e, axis_a, w).
Embedding embed(const ProfileGrid& grid);

/// Points X(u_k, theta) for theta = +-b_j over the angular basis b_j.
std::vector<SpherePoint> sample_points(const ProfileGrid& grid);

ShapeData shape_data(const ProfileGrid& grid, Execution exec = Execution::Parallel);

/// Default tol_convex = 1e-8 * max|A|.
ConvexityStatus convexity_status(const ShapeData& shape);
ConvexityStatus convexity_status(const ShapeData& shape, double tol_convex);

struct PrincipalCurvatures {
  std::vector<double> kappa1, kappa2;
};

/// Closed-form principal curvatures of the rotational graph, fed with
/// spectral (cosine series) derivatives of rho rather than stencils.
PrincipalCurvatures analytic_axisym_curvatures(const ProfileGrid& grid);

/// Laplace-Beltrami of an axisymmetric (even) field on the hypersurface.
std::vector<double> laplace_beltrami(const ShapeData& shape, std::span<const double> field);
std::vector<double> laplace_beltrami(const ProfileGrid& grid, std::span<const double> field);

/// d(kappa2)/ds - (kappa1 - kappa2) psi.
std::vector<double> codazzi_residual(const ProfileGrid& grid);
/// Intrinsic sectional curvature of the (profile, angular) plane minus 1 + kappa1 kappa2.
std::vector<double> gauss_residual(const ProfileGrid& grid);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace mcf
