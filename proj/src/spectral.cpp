#include "mcf/spectral.hpp"

#include <cmath>
#include <numbers>

#include "mcf/errors.hpp"

namespace mcf {

CosineSeries::CosineSeries(std::span<const double> samples) {
  const int last = static_cast<int>(samples.size()) - 1;
  if (last < 1) throw Error(ErrorKind::InvalidArgument, "cosine series needs at least two samples");
  coeffs_.assign(last + 1, 0.0);
  const double step = std::numbers::pi / last;
  for (int m = 0; m <= last; ++m) {
    double s = 0.0;
    for (int k = 0; k <= last; ++k) {
      const double w = (k == 0 || k == last) ? 0.5 : 1.0;
      // Reduce m*k modulo 2N before the cosine to keep the argument small.
      const long idx = (static_cast<long>(m) * k) % (2L * last);
      s += w * samples[k] * std::cos(step * static_cast<double>(idx));
    }
    coeffs_[m] = 2.0 * s / last;
  }
  coeffs_.front() *= 0.5;
  coeffs_.back() *= 0.5;
}

double CosineSeries::value(double u) const {
  double s = 0.0;
  for (std::size_t m = 0; m < coeffs_.size(); ++m) s += coeffs_[m] * std::cos(static_cast<double>(m) * u);
  return s;
}

double CosineSeries::derivative(double u) const {
  double s = 0.0;
  for (std::size_t m = 1; m < coeffs_.size(); ++m) {
    const double dm = static_cast<double>(m);
    s -= dm * coeffs_[m] * std::sin(dm * u);
  }
  return s;
}

double CosineSeries::second_derivative(double u) const {
  double s = 0.0;
  for (std::size_t m = 1; m < coeffs_.size(); ++m) {
    const double dm = static_cast<double>(m);
    s -= dm * dm * coeffs_[m] * std::cos(dm * u);
  }
  return s;
}

}  // namespace mcf
