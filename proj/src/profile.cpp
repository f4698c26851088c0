#include "mcf/profile.hpp"

#include <cmath>
#include <numbers>

#include "mcf/errors.hpp"

namespace mcf {

ProfileGrid::ProfileGrid(int n, std::vector<double> rho, EquatorFrame frame)
    : n_(n), du_(0.0), rho_(std::move(rho)), frame_(std::move(frame)) {
  if (n_ < 2) throw Error(ErrorKind::InvalidArgument, "hypersurface dimension n must be >= 2");
  if (frame_.n() != n_) throw Error(ErrorKind::InvalidArgument, "frame dimension does not match n");
  if (static_cast<int>(rho_.size()) < kMinIntervals + 1)
    throw Error(ErrorKind::InvalidArgument, "profile grid needs N >= 16");
  for (double r : rho_)
    if (!(r > 0.0 && r < std::numbers::pi)) throw Error(ErrorKind::InvalidArgument, "rho must lie in (0, pi)");
  du_ = std::numbers::pi / (static_cast<double>(rho_.size()) - 1.0);
}

ProfileGrid ProfileGrid::from_cosine_profile(int n, int intervals, double a0, std::span<const double> coeffs,
                                             const EquatorFrame& frame) {
  std::vector<double> rho(intervals + 1);
  const double du = std::numbers::pi / intervals;
  for (int k = 0; k <= intervals; ++k) {
    double r = std::numbers::pi / 2 - a0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) r -= coeffs[m] * std::cos(static_cast<double>(m + 1) * k * du);
    rho[k] = r;
  }
  return ProfileGrid(n, std::move(rho), frame);
}

ProfileGrid ProfileGrid::constant(int n, int intervals, double rho, const EquatorFrame& frame) {
  return ProfileGrid(n, std::vector<double>(intervals + 1, rho), frame);
}

ProfileGrid ProfileGrid::with_rho(std::vector<double> rho) const {
  if (rho.size() != rho_.size()) throw Error(ErrorKind::InvalidArgument, "node count mismatch");
  return ProfileGrid(n_, std::move(rho), frame_);
}

double extended(std::span<const double> f, int j, Parity parity) {
  const int last = static_cast<int>(f.size()) - 1;
  const double sign = parity == Parity::Even ? 1.0 : -1.0;
  if (j < 0) return sign * f[-j];
  if (j > last) return sign * f[2 * last - j];
  return f[j];
}

std::vector<double> diff_u(std::span<const double> f, Parity parity, double du) {
  const int size = static_cast<int>(f.size());
  std::vector<double> out(size);
  const double inv = 0.5 / du;
  for (int k = 0; k < size; ++k) out[k] = (extended(f, k + 1, parity) - extended(f, k - 1, parity)) * inv;
  return out;
}

std::vector<double> diff_uu(std::span<const double> f, Parity parity, double du) {
  const int size = static_cast<int>(f.size());
  std::vector<double> out(size);
  const double inv = 1.0 / (du * du);
  for (int k = 0; k < size; ++k)
    out[k] = (extended(f, k + 1, parity) - 2.0 * f[k] + extended(f, k - 1, parity)) * inv;
  return out;
}

}  // namespace mcf
