#pragma once

// Axisymmetric radial graphs over the equator. A hypersurface is
//   X(u, theta) = cos(rho(u)) e + sin(rho(u)) (cos(u) a + sin(u) theta),
// theta in the unit sphere of span(e, a)^perp, sampled on u_k = k pi / N.
// Fields on the grid are even or odd under u -> -u (and u -> 2 pi - u); the
// stencils below extend them across the poles accordingly.

#include <span>
#include <vector>

#include "mcf/sphere.hpp"

namespace mcf {

inline constexpr int kMinIntervals = 16;

class ProfileGrid {
 public:
  /// rho has N + 1 entries. Throws InvalidArgument for n < 2, N < 16 or
  /// rho outside (0, pi).
  ProfileGrid(int n, std::vector<double> rho, EquatorFrame frame);

  /// rho(u) = pi/2 - a0 - sum_m coeffs[m-1] cos(m u).
  static ProfileGrid from_cosine_profile(int n, int intervals, double a0, std::span<const double> coeffs,
                                         const EquatorFrame& frame);
  static ProfileGrid constant(int n, int intervals, double rho, const EquatorFrame& frame);

  int n() const noexcept { return n_; }
  int intervals() const noexcept { return static_cast<int>(rho_.size()) - 1; }
  int node_count() const noexcept { return static_cast<int>(rho_.size()); }
  double du() const noexcept { return du_; }
  double u(int k) const noexcept { return du_ * k; }
  bool is_pole(int k) const noexcept { return k == 0 || k == intervals(); }

  const std::vector<double>& rho() const noexcept { return rho_; }
  const EquatorFrame& frame() const noexcept { return frame_; }

  /// Same frame and dimension, new radial values (validated).
  ProfileGrid with_rho(std::vector<double> rho) const;

 private:
  int n_;
  double du_;
  std::vector<double> rho_;
  EquatorFrame frame_;
};

enum class Parity { Even, Odd };

/// Second-order central differences with parity extension across u = 0, pi.
std::vector<double> diff_u(std::span<const double> f, Parity parity, double du);
std::vector<double> diff_uu(std::span<const double> f, Parity parity, double du);

/// Value at index j in [-N, 2N] under the parity extension.
double extended(std::span<const double> f, int j, Parity parity);

}  // namespace mcf
