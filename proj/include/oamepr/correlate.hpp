#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oamepr/grid.hpp"

namespace oamepr {

enum class ConvolutionMethod {
  Direct, // O(N^2) summation
  Fast,   // circular convolution through real FFTs
};

/// Fast-path outputs below this fraction of the peak are FFT round-off and are
/// set to zero.
inline constexpr double kFastConvolutionFloor = 1e-13;

/// Periodic convolution [P1 * P2](phi) = \int P1(phi') P2(phi - phi') dphi'
/// on the common grid, renormalized to unit mass. Both densities live on the
/// grid phi_k = -pi + 2 pi k / N, so the output is aligned with the inputs:
/// convolving with a density concentrated at angle a shifts P1 by a.
/// Throws ValidationError if the grids differ.
AngularDensity convolve_periodic(const AngularDensity& p1, const AngularDensity& p2,
                                 ConvolutionMethod method = ConvolutionMethod::Direct);

/// Closed-form trapezoid produced by two centred rectangular apertures,
/// with Delta1 = (w1 + w2)/2 and Delta2 = |w1 - w2|/2:
///   (Delta1 - Delta2) / (Delta1^2 - Delta2^2)     for |phi| < Delta2
///   (Delta1 - |phi|)  / (Delta1^2 - Delta2^2)     for Delta2 <= |phi| < Delta1
///   0                                            otherwise.
/// Arguments are swapped when w2 > w1. Throws DomainError if w1 + w2 > 2 pi.
double rect_conditional_density(double w1, double w2, double phi);

/// psi = sqrt(P) with zero phase on the grid of P.
class ConditionalWavefunction {
public:
  ConditionalWavefunction(std::vector<double> values, std::string source);

  std::size_t n() const noexcept { return values_.size(); }
  double step() const noexcept { return kTwoPi / static_cast<double>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  const std::string& source() const noexcept { return source_; }

  /// Discrete sum of psi^2 times the grid step.
  double norm_squared() const noexcept;

private:
  std::vector<double> values_;
  std::string source_;
};

ConditionalWavefunction conditional_wavefunction(const AngularDensity& p);

} // namespace oamepr
