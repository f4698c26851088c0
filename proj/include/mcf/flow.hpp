#pragma once

// Method-of-lines integration of d rho / dt = -H v, the radial-graph form of
// d_t F = -H nu, with explicit Runge-Kutta substeps under a parabolic CFL bound.

#include <string>
#include <vector>

#include "mcf/profile.hpp"
#include "mcf/shape.hpp"

namespace mcf {

enum class Method { RK4, Euler };

struct FlowConfig {
  double dt = 1e-4;  // base step; recorded states are multiples of it
  double t_end = 0.2;
  Method method = Method::RK4;
  double cfl_safety = 0.2;
  double stop_min_radius = 0.05;
  double stop_max_A = 1e6;
  int record_every = 1;

  void validate() const;
};

struct FlowState {
  double t = 0.0;
  ProfileGrid grid;
  ShapeData shape;
  ConvexityStatus convexity;

  /// Builds a state whose shape ledger is computed from `grid`.
  static FlowState at(double t, ProfileGrid grid);
};

enum class Termination { ReachedTEnd, MinRadius, ConvexityLost, Blowup, StepFailure, ChartBreakdown };
const char* to_string(Termination t);

struct StepRecord {
  double t;         // time at the end of the base step
  double dt;        // substep size actually used
  int substeps;
  int rejections;
  double max_A;
  double convexity_margin;
};

struct Trajectory {
  std::vector<FlowState> states;
  std::vector<StepRecord> step_log;
  Termination termination = Termination::ReachedTEnd;
  std::vector<std::string> warnings;
};

inline constexpr double kChartTol = 1e-6;

/// Per-node d rho / dt = -H v. Throws ChartBreakdown when <nu, radial> <= 1e-6.
std::vector<double> rhs(const FlowState& state);
std::vector<double> rhs(const ProfileGrid& grid);

/// cfl_safety du^2 / (n max(v g^uu) + 1).
double stable_dt(const ShapeData& shape, double cfl_safety);

/// One explicit step of size dt. Throws StepRejected if the result leaves
/// (0, pi) or is not finite.
FlowState step(const FlowState& state, double dt, Method method);

Trajectory run(const FlowState& initial, const FlowConfig& config);

/// Delta H + H |A|^2 + n lambda H. lambda = 1 is the sphere; other values are
/// only used for negative controls.
std::vector<double> dt_H_identity(const FlowState& state, double lambda = 1.0);

/// Second-order central difference of H at fixed u, minus the tangential
/// drift term, i.e. the normal-parametrization d_t H. Throws BoundaryIndex at
/// the trajectory ends.
std::vector<double> dt_H_material(const Trajectory& trajectory, std::size_t index);

}  // namespace mcf
