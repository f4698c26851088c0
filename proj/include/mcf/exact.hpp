#pragma once

// Closed-form solutions: static equators and the ancient family of shrinking
// geodesic spheres cos r(t) = kappa0 exp(n t).

#include "mcf/profile.hpp"
#include "mcf/sphere.hpp"

namespace mcf {

struct EquatorSolution {
  EquatorFrame frame;

  ProfileGrid sample_as_grid(int intervals) const;
};

class ShrinkingSphere {
 public:
  /// kappa0 = cos r(0) in (0, 1).
  ShrinkingSphere(int n, SpherePoint center, double kappa0);
  /// Sphere about the frame basepoint tilted by `offset` radians towards axis_a.
  static ShrinkingSphere on_axis(const EquatorFrame& frame, double kappa0, double offset = 0.0);

  int n() const noexcept { return n_; }
  double kappa0() const noexcept { return kappa0_; }
  const SpherePoint& center() const noexcept { return center_; }
  double collapse_time() const noexcept;

  /// arccos(kappa0 e^{n t}); throws Collapsed for t >= collapse_time.
  double radius_at(double t) const;

  struct Curvatures {
    double H, A_sq, C;
  };
  /// H = n cot r, |A|^2 = n cot^2 r, C = n cot^3 r.
  Curvatures mean_curvature_at(double t) const;

  /// dH/dt = H^3/n + n H and its time derivative.
  double dH_dt(double t) const;
  double d2H_dt2(double t) const;

  /// H^3/n + H / (2 (t - t_origin)): minimized Harnack expression (grad H = 0).
  double harnack_closed_form(double t, double t_origin) const;

  /// Radial graph over the equator of `frame`. The center must lie in
  /// span(e, axis_a) with offset a from e; throws NotAGraph when a + r >= pi/2
  /// or the basepoint is not enclosed (a >= r).
  ProfileGrid sample_as_grid(double t, int intervals, const EquatorFrame& frame) const;

 private:
  int n_;
  SpherePoint center_;
  double kappa0_;
};

}  // namespace mcf
