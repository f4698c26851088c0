#pragma once

// Pointwise evaluation of the evolution identities, the curvature inequalities and
// the Harnack quantity along recorded trajectories and the sphere family.

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcf/calculus.hpp"
#include "mcf/exact.hpp"
#include "mcf/flow.hpp"

namespace mcf {

enum class CheckStatus { Pass, Fail, Inconclusive };
const char* to_string(CheckStatus s);

/// Theta = dtH - b(grad H, grad H). Throws NotStrictlyConvex.
std::vector<double> theta(const FlowState& state, std::span<const double> dtH);
/// Q = (Theta - n lambda H) / H. Throws ZeroMeanCurvature when some H <= 0.
std::vector<double> q_quantity(const FlowState& state, std::span<const double> theta, double lambda = 1.0);

/// 10 (du^2 + dt) (1 + max|A|^3) over the trajectory; dt is the recorded spacing.
double default_tolerance(const Trajectory& traj);

struct EtaTensor {
  std::vector<double> eta_uu, eta_ang;  // orthonormal frame
};
EtaTensor eta(const ShapeData& s, const Derivatives& d);

// ---- Harnack ---------------------------------------------------------------

struct HarnackSlice {
  double t;
  std::vector<double> theta, q, min_expr;
  std::vector<double> minimizer_v;  // profile component of V*; angular part is 0
};

struct HarnackReport {
  std::vector<HarnackSlice> slices;
  double global_min = 0.0;
  int worst_node = -1;
  double worst_time = 0.0;
  double tolerance_used = 0.0;
  double minimality_slack = 0.0;  // min over nodes and sampled V of full(V) - full(V*)
  int skipped_states = 0;         // t <= t_origin or not strictly convex
  std::string dtH_source = "identity";
  bool pass = false;
};

struct HarnackOptions {
  double t_origin = 0.0;
  std::optional<double> tolerance;  // default_tolerance when empty
  std::uint64_t seed = 0;
  double lambda = 1.0;  // -1 flips the sign of the n H term (negative control)
};

/// dtH + H/(2(t - t0)) + 2 V_1 H_s + kappa1 V_1^2 + kappa2 |V_ang|^2 - n H.
double harnack_full(double dtH, double H, double H_s, double kappa1, double kappa2, double v1, double v_ang, int n,
                    double elapsed);

HarnackReport harnack_check(const Trajectory& traj, const HarnackOptions& options = {});

// ---- Q versus the ODE barrier ---------------------------------------------

struct QOdeReport {
  double epsilon = 0.0;
  double t_origin = 0.0;
  double min_margin = 0.0;  // min of Q - q(t)
  int worst_node = -1;
  double worst_time = 0.0;
  double tolerance = 0.0;
  int states_checked = 0;
  bool pass = false;
};

QOdeReport q_ode_check(const Trajectory& traj, double epsilon, double t_origin = 0.0,
                       std::optional<double> tolerance = std::nullopt);

// ---- Evolution identities --------------------------------------------------

/// Nodes with u in [kBand, pi - kBand] enter the identity residuals. The edge
/// is a grid node for every N divisible by 8.
inline constexpr double kBand = std::numbers::pi / 8;
/// Residuals below this at every level are reported as exact.
inline constexpr double kExactFloor = 1e-7;

struct IdentityDef {
  std::string id;
  bool nested;  // needs the order >= 0.9 threshold
};
const std::vector<IdentityDef>& identity_catalog();

/// Max residual of every catalogued identity at state `index` (needs 4
/// recorded neighbours on both sides), over the interior band.
std::vector<double> identity_residuals(const Trajectory& traj, std::size_t index);

struct IdentityResult {
  std::string id;
  bool nested = false;
  std::vector<int> levels;
  std::vector<double> residuals;
  std::optional<double> order;  // empty when exact
  bool exact = false;
  double max_residual = 0.0;
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityResult> results;
  bool pass = false;
};

struct IdentityWindow {
  double tau = 1e-3;       // spacing of the recorded states
  int eval_states = 3;     // evaluated states, each with 4 neighbours per side
  Method method = Method::RK4;
  double cfl_safety = 0.2;
};

/// Least-squares slope of -log(residual) against log(N).
double convergence_order(std::span<const int> levels, std::span<const double> residuals);

/// Flows `initial(N)` for each level over a short window and evaluates the
/// identity residuals; orders come from the residual maxima.
IdentityReport identity_suite(const std::function<FlowState(int)>& initial, std::span<const int> levels,
                              const IdentityWindow& window = {});

// ---- Inequalities -----------------------------------------------------

struct InequalitySlacks {
  std::vector<double> gradient_bound, gradient_bound_algebraic, gradient_heat, theta_heat;
  std::vector<double> gradient_heat_noise_floor;
};

/// Signed slack of each inequality at `index`, oriented so that the
/// inequality holds iff the slack is >= 0.
/// Time derivatives use the five-point stencil.
InequalitySlacks inequality_slacks(const Trajectory& traj, std::size_t index);

struct InequalityResult {
  std::string id;
  double min_slack = 0.0;
  int worst_node = -1;
  double worst_time = 0.0;
  double tolerance = 0.0;
  double noise_floor = 0.0;
  CheckStatus status = CheckStatus::Fail;
};

struct InequalityReport {
  std::vector<InequalityResult> results;
  int states_checked = 0;
  CheckStatus status = CheckStatus::Fail;
};

InequalityReport inequality_suite(const Trajectory& traj, std::optional<double> tolerance = std::nullopt);

// ---- Backward decay on the ancient family ----------------------------------

struct DecayReport {
  double t_begin = 0.0, t_end = 0.0;
  double rate_H = 0.0, rate_A = 0.0, rate_height = 0.0;
  std::optional<double> rate_gradA_sq;  // empty: |grad A| vanishes identically
  double c0 = 0.0, c1 = 0.0;
  double margin_H = 0.0, margin_A = 0.0;  // min of bound - value
  double margin_log_H = 0.0;              // min of d_t log H - n
  bool pass_H = false, pass_A = false, pass_log_H = false, pass_height = false;
  bool pass = false;
};

/// Closed-form checks over t in [t_begin, t_end] (t_end <= 0); the height is
/// measured against the equator fitted at t_begin.
DecayReport decay_check(const ShrinkingSphere& family, const EquatorFrame& frame, double t_begin = -5.0,
                        double t_end = 0.0, int samples = 41, int intervals = 64);

// ---- Limit equator ---------------------------------------------------------

struct FittedEquator {
  EquatorFrame frame;
  double rms_height;
};

/// Throws InvalidArgument with fewer than n+2 points, DegenerateFit when the
/// smallest eigenvalue of the second-moment form is not simple.
FittedEquator fit_limit_equator(std::span<const SpherePoint> points);

}  // namespace mcf
