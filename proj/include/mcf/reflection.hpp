#pragma once

// Ordering of a reflected cap against the rest of an axisymmetric graph.
// Only normals V inside span(e, axis_a) are supported: they commute with the
// rotations of the profile, so the comparison reduces to the profile curve.

#include <optional>
#include <utility>
#include <vector>

#include "mcf/flow.hpp"
#include "mcf/sphere.hpp"

namespace mcf {

struct ReflectionReport {
  bool is_graph = false;
  double fixed_angle = 0.0;       // profile angle of the fixed set M cap P
  double eta = 0.0;               // half-width of the strip around it left out of the defect
  std::optional<double> defect;   // min over matched nodes of rho - rho_reflected
  std::optional<std::pair<double, double>> violating_region;  // u-interval with negative gap
  std::vector<double> matched_u, gap;
};

/// Reflects the cap M+ = {<x, V> > 0} and compares radial values with M- at
/// the M- node angles. A positive gap means the reflected cap lies higher.
/// Throws InvalidArgument when V is not in span(e, axis_a).
ReflectionReport reflection_check(const FlowState& state, const ReflectionSpec& spec, double eta = 0.05);

}  // namespace mcf
