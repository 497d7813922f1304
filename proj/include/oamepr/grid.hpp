#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace oamepr {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Smallest grid accepted by the sampling routines.
inline constexpr std::size_t kMinGridSize = 16;

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

/// Reduce an angle into [-pi, pi).
double wrap_angle(double phi) noexcept;

/// Grid node k of an n-point uniform grid on [-pi, pi): -pi + 2 pi k / n.
inline double grid_angle(std::size_t k, std::size_t n) noexcept {
  return -kPi + kTwoPi * static_cast<double>(k) / static_cast<double>(n);
}

/// A 2 pi-periodic probability density sampled at the nodes
/// phi_k = -pi + 2 pi k / n. Values are non-negative; index arithmetic wraps
/// modulo n. Construction does not renormalize; see `normalized()`.
class AngularDensity {
public:
  AngularDensity(std::vector<double> values, std::string meta);

  std::size_t n() const noexcept { return values_.size(); }
  double step() const noexcept { return kTwoPi / static_cast<double>(values_.size()); }
  double phi(std::size_t k) const noexcept { return grid_angle(k, values_.size()); }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  const std::string& meta() const noexcept { return meta_; }

  /// Riemann sum of the values times the grid step.
  double integral() const noexcept;

  /// Copy rescaled so that integral() == 1 up to rounding.
  AngularDensity normalized() const;

  /// Copy circularly shifted by `bins` grid cells (positive moves mass to
  /// larger angles).
  AngularDensity shifted(long bins) const;

private:
  std::vector<double> values_;
  std::string meta_;
};

/// Validates an n-point grid request; throws ValidationError naming `field`.
void require_grid_size(std::size_t n, const char* field = "n");

} // namespace oamepr
