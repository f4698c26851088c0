#pragma once

#include <span>
#include <vector>

namespace mcf {

/// Even trigonometric interpolant f(u) = sum_m c_m cos(m u) through samples
/// on u_k = k pi / N (a type-I cosine transform). Smooth even profiles are
/// reproduced to near machine precision, which makes this an independent
/// differentiation route next to the finite-difference stencils.
class CosineSeries {
 public:
  explicit CosineSeries(std::span<const double> samples);

  double value(double u) const;
  double derivative(double u) const;
  double second_derivative(double u) const;

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

}  // namespace mcf
