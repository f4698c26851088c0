#include "mcf/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcf/errors.hpp"

namespace mcf {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch in dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SpherePoint::SpherePoint(Vec coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3) throw Error(ErrorKind::InvalidArgument, "ambient dimension must be >= 3");
  if (std::abs(norm(coords_) - 1.0) > kUnitTol)
    throw Error(ErrorKind::InvalidArgument, "point is not on the unit sphere");
}

SpherePoint SpherePoint::normalized(Vec coords) {
  const double len = norm(coords);
  if (!(len > 0.0)) throw Error(ErrorKind::InvalidArgument, "cannot normalize the zero vector");
  for (double& c : coords) c /= len;
  return SpherePoint(std::move(coords));
}

EquatorFrame::EquatorFrame(Vec e_, Vec axis_a_) : e(std::move(e_)), axis_a(std::move(axis_a_)) {
  const std::size_t dim = e.size();
  if (dim < 4 || axis_a.size() != dim)
    throw Error(ErrorKind::InvalidArgument, "frame needs n >= 2, i.e. ambient dimension >= 4");
  if (std::abs(norm(e) - 1.0) > kUnitTol || std::abs(norm(axis_a) - 1.0) > kUnitTol ||
      std::abs(dot(e, axis_a)) > kUnitTol)
    throw Error(ErrorKind::InvalidArgument, "e and axis_a must be orthonormal");

  // Gram-Schmidt over the coordinate basis; picks up n vectors.
  std::vector<Vec> basis{e, axis_a};
  for (std::size_t j = 0; j < dim && basis.size() < dim; ++j) {
    Vec c(dim, 0.0);
    c[j] = 1.0;
    for (const Vec& b : basis) {
      const double p = dot(c, b);
      for (std::size_t i = 0; i < dim; ++i) c[i] -= p * b[i];
    }
    const double len = norm(c);
    if (len < 1e-6) continue;
    for (double& x : c) x /= len;
    basis.push_back(std::move(c));
  }
  angular_.assign(basis.begin() + 2, basis.end());
}

EquatorFrame EquatorFrame::standard(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
  Vec e(n + 2, 0.0), a(n + 2, 0.0);
  e[0] = 1.0;
  a[1] = 1.0;
  return EquatorFrame(std::move(e), std::move(a));
}

Vec EquatorFrame::from_local(const Vec3& local) const {
  const Vec& wv = w();
  Vec x(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) x[i] = local[0] * e[i] + local[1] * axis_a[i] + local[2] * wv[i];
  return x;
}

Vec3 EquatorFrame::to_local(std::span<const double> x) const { return {dot(x, e), dot(x, axis_a), dot(x, w())}; }

ReflectionSpec::ReflectionSpec(Vec v_, double delta_, const EquatorFrame& frame) : v(std::move(v_)), delta(delta_) {
  if (v.size() != frame.ambient_dim()) throw Error(ErrorKind::InvalidArgument, "reflection normal has wrong dimension");
  if (std::abs(norm(v) - 1.0) > kUnitTol) throw Error(ErrorKind::InvalidArgument, "reflection normal must be a unit vector");
  if (!(delta > 0.0 && delta < std::numbers::pi / 4))
    throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, pi/4)");
  if (std::abs(dot(v, frame.e) + std::sin(delta)) > kUnitTol)
    throw Error(ErrorKind::InvalidArgument, "<V, e> must equal -sin(delta)");
}

ReflectionSpec ReflectionSpec::in_profile_plane(const EquatorFrame& frame, double delta) {
  Vec v(frame.ambient_dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -std::sin(delta) * frame.e[i] + std::cos(delta) * frame.axis_a[i];
  return ReflectionSpec(std::move(v), delta, frame);
}

double height(const SpherePoint& x, const EquatorFrame& frame) { return dot(x.coords(), frame.e); }

double radial_distance(const SpherePoint& x, const EquatorFrame& frame) {
  return std::acos(std::clamp(height(x, frame), -1.0, 1.0));
}

SpherePoint radial_projection(const SpherePoint& x, const EquatorFrame& frame) {
  const double h = height(x, frame);
  Vec p = x.coords();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= h * frame.e[i];
  if (norm(p) < kPoleTol) throw Error(ErrorKind::DegeneratePole, "projection of +-e is the whole equator");
  return SpherePoint::normalized(std::move(p));
}

SpherePoint reflect(const SpherePoint& x, const ReflectionSpec& spec) {
  const double s = dot(x.coords(), spec.v);
  Vec y = x.coords();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= 2.0 * s * spec.v[i];
  // Renormalize away the O(eps) drift so the result stays a valid SpherePoint.
  return SpherePoint::normalized(std::move(y));
}

SpherePoint polar_to_ambient(double rho, const SpherePoint& sigma, const EquatorFrame& frame) {
  if (std::abs(height(sigma, frame)) > kPoleTol) throw Error(ErrorKind::InvalidArgument, "sigma must lie on the equator");
  Vec x(frame.ambient_dim());
  const double c = std::cos(rho), s = std::sin(rho);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = c * frame.e[i] + s * sigma[i];
  return SpherePoint::normalized(std::move(x));
}

}  // namespace mcf
