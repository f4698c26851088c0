#include "mcf/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mcf/errors.hpp"
#include "mcf/spectral.hpp"

namespace mcf {

namespace {

constexpr double kViolation = 1e-10;

struct ProfileCurve {
  const CosineSeries& rho;
  const EquatorFrame& frame;

  SpherePoint at(double u) const {
    const double r = rho.value(u);
    return SpherePoint::normalized(
        frame.from_local({std::cos(r), std::sin(r) * std::cos(u), std::sin(r) * std::sin(u)}));
  }
};

// Bisection for a sign change of f on [lo, hi] with f(lo) > 0 >= f(hi).
template <class F>
double bisect(F&& f, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ReflectionReport reflection_check(const FlowState& state, const ReflectionSpec& spec, double eta) {
  const ProfileGrid& grid = state.grid;
  const EquatorFrame& frame = grid.frame();
  const double ve = dot(spec.v, frame.e), va = dot(spec.v, frame.axis_a);
  if (std::abs(ve * ve + va * va - 1.0) > 1e-10)
    throw Error(ErrorKind::InvalidArgument, "reflection normal must lie in span(e, axis_a)");
  if (!(eta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be >= 0");

  ReflectionReport rep;
  rep.eta = eta;
  rep.is_graph = std::all_of(state.shape.nu.begin(), state.shape.nu.end(), [](const Vec3& nu) { return nu[0] < 0.0; });
  if (!rep.is_graph) return rep;

  const CosineSeries series(grid.rho());
  const ProfileCurve curve{series, frame};
  auto side = [&](double u) { return dot(curve.at(u).coords(), spec.v); };

  const int size = grid.node_count();
  if (!(side(0.0) > 0.0)) return rep;
  int first_minus = -1;
  for (int k = 1; k < size; ++k) {
    if (side(grid.u(k)) <= 0.0) {
      first_minus = k;
      break;
    }
  }
  if (first_minus < 0) return rep;
  const double u_fixed = bisect(side, grid.u(first_minus - 1), grid.u(first_minus));
  rep.fixed_angle = u_fixed;

  auto reflected = [&](double u) {
    const Vec3 y = frame.to_local(reflect(curve.at(u), spec).coords());
    return std::pair{std::atan2(y[2], y[1]), std::acos(std::clamp(y[0], -1.0, 1.0))};
  };
  const double reach = reflected(0.0).first;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = first_minus; k < size; ++k) {
    const double u = grid.u(k);
    if (side(u) >= 0.0 || u > reach) continue;
    const double src = bisect([&](double x) { return reflected(x).first - u; }, 0.0, u_fixed);
    const double g = grid.rho()[k] - reflected(src).second;
    rep.matched_u.push_back(u);
    rep.gap.push_back(g);
    if (std::abs(u - u_fixed) <= eta) continue;
    rep.defect = rep.defect ? std::min(*rep.defect, g) : g;
    if (g < -kViolation) {
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
  }
  if (lo <= hi) rep.violating_region = std::pair{lo, hi};
  return rep;
}

}  // namespace mcf
