#pragma once

// Exact geometry of the unit sphere S^{n+1} in R^{n+2}: geodesic polar
// coordinates about a basepoint, height/projection functions and hyperplane
// reflections. Everything reduces to Euclidean inner products.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mcf {

using Vec = std::vector<double>;
using Vec3 = std::array<double, 3>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kPoleTol = 1e-10;

/// A point of S^{n+1} stored by its ambient coordinates.
class SpherePoint {
 public:
  /// Throws InvalidArgument unless | coords | = 1 within kUnitTol.
  explicit SpherePoint(Vec coords);
  /// Rescales a non-zero vector onto the sphere.
  static SpherePoint normalized(Vec coords);

  const Vec& coords() const noexcept { return coords_; }
  std::size_t ambient_dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  Vec coords_;
};

/// Reference equator E = e^perp with basepoint e and an axis inside E used
/// for axisymmetric profiles.
struct EquatorFrame {
  Vec e;
  Vec axis_a;
  double lambda = 1.0;

  /// Validates unit length and orthogonality; lambda must be exactly 1.
  EquatorFrame(Vec e_, Vec axis_a_);

  /// e = first basis vector, axis_a = second, in R^{n+2}.
  static EquatorFrame standard(int n);

  int n() const noexcept { return static_cast<int>(e.size()) - 2; }
  std::size_t ambient_dim() const noexcept { return e.size(); }

  /// Orthonormal basis of span(e, axis_a)^perp (n vectors). The first one is
  /// the profile plane direction w used by axisymmetric embeddings.
  const std::vector<Vec>& angular_basis() const noexcept { return angular_; }
  const Vec& w() const noexcept { return angular_.front(); }

  /// Ambient vector from coordinates in the (e, axis_a, w) 2-sphere.
  Vec from_local(const Vec3& local) const;
  Vec3 to_local(std::span<const double> x) const;

 private:
  std::vector<Vec> angular_;
};

/// Reflection normal V tilted below the equator: <V, e> = -sin(delta).
struct ReflectionSpec {
  Vec v;
  double delta;

  /// Validates |v| = 1, delta in (0, pi/4) and <v, e> = -sin(delta).
  ReflectionSpec(Vec v_, double delta_, const EquatorFrame& frame);

  /// V = -sin(delta) e + cos(delta) axis_a.
  static ReflectionSpec in_profile_plane(const EquatorFrame& frame, double delta);
};

double radial_distance(const SpherePoint& x, const EquatorFrame& frame);
double height(const SpherePoint& x, const EquatorFrame& frame);
/// Nearest point on E; throws DegeneratePole when x is within kPoleTol of +-e.
SpherePoint radial_projection(const SpherePoint& x, const EquatorFrame& frame);
SpherePoint reflect(const SpherePoint& x, const ReflectionSpec& spec);
/// cos(rho) e + sin(rho) sigma for sigma on E.
SpherePoint polar_to_ambient(double rho, const SpherePoint& sigma, const EquatorFrame& frame);

}  // namespace mcf
