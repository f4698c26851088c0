#include "mcf/exact.hpp"

#include <cmath>
#include <numbers>

#include "mcf/errors.hpp"

namespace mcf {

ProfileGrid EquatorSolution::sample_as_grid(int intervals) const {
  return ProfileGrid::constant(frame.n(), intervals, std::numbers::pi / 2, frame);
}

ShrinkingSphere::ShrinkingSphere(int n, SpherePoint center, double kappa0)
    : n_(n), center_(std::move(center)), kappa0_(kappa0) {
  if (n_ < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
  if (center_.ambient_dim() != static_cast<std::size_t>(n_ + 2))
    throw Error(ErrorKind::InvalidArgument, "center has wrong ambient dimension");
  if (!(kappa0_ > 0.0 && kappa0_ < 1.0)) throw Error(ErrorKind::InvalidArgument, "kappa0 must lie in (0, 1)");
}

ShrinkingSphere ShrinkingSphere::on_axis(const EquatorFrame& frame, double kappa0, double offset) {
  Vec c(frame.ambient_dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::cos(offset) * frame.e[i] + std::sin(offset) * frame.axis_a[i];
  return ShrinkingSphere(frame.n(), SpherePoint::normalized(std::move(c)), kappa0);
}

double ShrinkingSphere::collapse_time() const noexcept { return -std::log(kappa0_) / n_; }

double ShrinkingSphere::radius_at(double t) const {
  if (t >= collapse_time()) throw Error(ErrorKind::Collapsed, "t is at or past the collapse time");
  return std::acos(kappa0_ * std::exp(n_ * t));
}

ShrinkingSphere::Curvatures ShrinkingSphere::mean_curvature_at(double t) const {
  const double c = kappa0_ * std::exp(n_ * t);
  if (c >= 1.0) throw Error(ErrorKind::Collapsed, "t is at or past the collapse time");
  const double cot = c / std::sqrt(1.0 - c * c);
  return {n_ * cot, n_ * cot * cot, n_ * cot * cot * cot};
}

double ShrinkingSphere::dH_dt(double t) const {
  const double H = mean_curvature_at(t).H;
  return H * H * H / n_ + n_ * H;
}

double ShrinkingSphere::d2H_dt2(double t) const {
  const double H = mean_curvature_at(t).H;
  return (3.0 * H * H / n_ + n_) * (H * H * H / n_ + n_ * H);
}

double ShrinkingSphere::harnack_closed_form(double t, double t_origin) const {
  if (!(t > t_origin)) throw Error(ErrorKind::InvalidArgument, "Harnack expression needs t > t_origin");
  const double H = mean_curvature_at(t).H;
  return H * H * H / n_ + H / (2.0 * (t - t_origin));
}

ProfileGrid ShrinkingSphere::sample_as_grid(double t, int intervals, const EquatorFrame& frame) const {
  if (frame.n() != n_) throw Error(ErrorKind::InvalidArgument, "frame dimension does not match the sphere");
  const double ce = dot(center_.coords(), frame.e);
  const double ca = dot(center_.coords(), frame.axis_a);
  if (std::abs(ce * ce + ca * ca - 1.0) > 1e-10)
    throw Error(ErrorKind::InvalidArgument, "center must lie in span(e, axis_a)");
  const double offset = std::atan2(ca, ce);
  const double r = radius_at(t);
  if (std::abs(offset) + r >= std::numbers::pi / 2)
    throw Error(ErrorKind::NotAGraph, "sphere reaches the equator of the graph chart");
  if (std::abs(offset) >= r) throw Error(ErrorKind::NotAGraph, "sphere does not enclose the basepoint");

  // cos r = cos(rho) cos(a) + sin(rho) sin(a) cos(u), solved for the outer root.
  std::vector<double> rho(intervals + 1);
  const double du = std::numbers::pi / intervals;
  for (int k = 0; k <= intervals; ++k) {
    const double A = std::cos(offset);
    const double B = std::sin(offset) * std::cos(k * du);
    const double R = std::hypot(A, B);
    rho[k] = offset == 0.0 ? r : std::atan2(B, A) + std::acos(std::cos(r) / R);
  }
  return ProfileGrid(n_, std::move(rho), frame);
}

}  // namespace mcf
