#include "oamepr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "oamepr/errors.hpp"

namespace oamepr {

double wrap_angle(double phi) noexcept {
  if (phi >= -kPi && phi < kPi) {
    return phi;
  }
  double r = std::fmod(phi + kPi, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  // fmod can return exactly 2 pi after the shift for inputs just below pi.
  if (r >= kTwoPi) {
    r -= kTwoPi;
  }
  return r - kPi;
}

void require_grid_size(std::size_t n, const char* field) {
  if (n < kMinGridSize) {
    throw ValidationError(field, "grid size must be >= " + std::to_string(kMinGridSize));
  }
  if (!is_power_of_two(n)) {
    throw ValidationError(field, "grid size must be a power of two");
  }
}

AngularDensity::AngularDensity(std::vector<double> values, std::string meta)
    : values_(std::move(values)), meta_(std::move(meta)) {
  require_grid_size(values_.size(), "values");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("values", "density values must be finite and >= 0");
    }
  }
}

double AngularDensity::integral() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0) * step();
}

AngularDensity AngularDensity::normalized() const {
  const double total = integral();
  if (!(total > 0.0)) {
    throw ComputationError("cannot normalize a density with zero mass");
  }
  std::vector<double> out(values_);
  for (double& v : out) {
    v /= total;
  }
  return AngularDensity(std::move(out), meta_);
}

AngularDensity AngularDensity::shifted(long bins) const {
  const auto n = static_cast<long>(values_.size());
  const long s = ((bins % n) + n) % n;
  std::vector<double> out(values_.size());
  for (long k = 0; k < n; ++k) {
    out[static_cast<std::size_t>((k + s) % n)] = values_[static_cast<std::size_t>(k)];
  }
  return AngularDensity(std::move(out), meta_);
}

} // namespace oamepr
