#pragma once

// Covariant calculus for axisymmetric fields on a rotational hypersurface
// with metric ds^2 + phi(s)^2 g_{S^{n-1}}, in the orthonormal frame
// (e_1 = d/ds, e_alpha angular). psi = phi_s / phi. Scalars are even in u;
// the e_1 component of a gradient is odd and vanishes on the axis.

#include <functional>
#include <span>
#include <vector>

#include "mcf/flow.hpp"
#include "mcf/shape.hpp"

namespace mcf {

std::vector<double> d_s(const ShapeData& s, std::span<const double> f, Parity parity);
/// Second arclength derivative of an even field.
std::vector<double> d_ss(const ShapeData& s, std::span<const double> f);
/// Angular Hessian component psi f_s (limit f_ss on the axis).
std::vector<double> hess_ang(const ShapeData& s, std::span<const double> f);
/// psi^2 d for an even field d that vanishes to second order on the axis.
std::vector<double> psi_sq_times(const ShapeData& s, std::span<const double> d);
/// e_1 component of the rough Laplacian of the 1-form c ds (c odd).
std::vector<double> vector_laplacian(const ShapeData& s, std::span<const double> c);

/// Derived quantities used by the identity and inequality checks.
struct Derivatives {
  std::vector<double> H_s, H_ss, hessH_ang;
  std::vector<double> k1_s, k2_s;
  std::vector<double> codazzi_term;  // nabla_alpha h_{1 alpha} = (kappa1 - kappa2) psi
  std::vector<double> gradA_sq;      // |nabla A|^2
  std::vector<double> lap_h11, lap_h22;  // rough Laplacian of h (orthonormal frame)
  std::vector<double> lap_gradH;         // (Delta nabla H)_1
  std::vector<double> lap_A_sq, A_sq_s;
  std::vector<double> P;     // b(grad H, grad H), NaN unless strictly convex
  std::vector<double> lapP;
};

Derivatives derivatives(const ShapeData& s);

/// Tangential component T^u of the graph velocity -H v d_rho relative to the
/// normal motion -H nu.
std::vector<double> tangential_velocity_u(const ShapeData& s);

enum class TimeStencil { Central3, Central5 };
int stencil_radius(TimeStencil stencil);

using StateField = std::function<std::vector<double>(const FlowState&)>;

/// Fixed-u time derivative at state `index` from neighbours, which must be
/// uniformly spaced. Throws BoundaryIndex without enough neighbours.
std::vector<double> fixed_u_time_derivative(const Trajectory& traj, std::size_t index, const StateField& field,
                                            TimeStencil stencil);

/// Normal-parametrization derivative of an even scalar field.
std::vector<double> normal_time_derivative(const Trajectory& traj, std::size_t index, const StateField& field,
                                           TimeStencil stencil);

/// Normal-parametrization derivative of the u-u component of a covariant
/// (sign = +1) or contravariant (sign = -1) 2-tensor: the Lie derivative
/// along T^u is subtracted.
std::vector<double> normal_time_derivative_uu(const Trajectory& traj, std::size_t index, const StateField& component,
                                              TimeStencil stencil, int sign);

/// Normal-parametrization d_t log(phi), with the axis limit
/// d_t(phi_u)/phi_u - d_u T^u.
std::vector<double> normal_time_derivative_log_phi(const Trajectory& traj, std::size_t index, TimeStencil stencil);

}  // namespace mcf
