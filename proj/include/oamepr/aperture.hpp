#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "oamepr/grid.hpp"
#include "oamepr/spectrum.hpp"

namespace oamepr {

enum class Shape { Rect, TruncGauss, TruncSuperGauss };

std::string_view to_string(Shape s) noexcept;

/// Parametric angular aperture. `w` is the full support width for Rect and
/// the scale parameter for the Gaussian families; `gamma` is the super
/// Gaussian exponent (ignored for Rect, forced to 1 for TruncGauss); `tau` is
/// the central angle.
struct ApertureSpec {
  Shape shape = Shape::TruncGauss;
  double w = kPi / 4.0;
  double gamma = 1.0;
  double tau = 0.0;

  static ApertureSpec rect(double w, double tau = 0.0) { return {Shape::Rect, w, 1.0, tau}; }
  static ApertureSpec gauss(double w, double tau = 0.0) {
    return {Shape::TruncGauss, w, 1.0, tau};
  }
  static ApertureSpec super_gauss(double w, double gamma, double tau = 0.0) {
    return {Shape::TruncSuperGauss, w, gamma, tau};
  }

  std::string describe() const;
};

/// A validated aperture with its normalization constant. Immutable.
class Aperture {
public:
  /// Throws ValidationError naming the field if w, gamma or tau is out of
  /// range (0 < w <= 2 pi, gamma >= 1, tau in [-pi, pi)).
  explicit Aperture(const ApertureSpec& spec);

  const ApertureSpec& spec() const noexcept { return spec_; }

  /// Prefactor of the profile so that it integrates to one over a period:
  /// 1/w for Rect, 1/(sqrt(pi) w erf(pi/w)) for TruncGauss and
  /// gamma / (w * lower_gamma(1/(2 gamma), (pi/w)^(2 gamma))) for the super
  /// Gaussian.
  double normalization() const noexcept { return normalization_; }

  /// Same aperture rotated to a new central angle (wrapped into [-pi, pi)).
  Aperture rotated_to(double tau) const;

  double density_at(double phi) const noexcept;

private:
  ApertureSpec spec_;
  double normalization_ = 0.0;
};

Aperture make_aperture(const ApertureSpec& spec);

/// P(phi; tau). phi is reduced modulo 2 pi relative to tau. For Rect the
/// support is |phi - tau| < w/2; a node lying exactly on an edge receives half
/// the plateau value, and w = 2 pi is the uniform density.
double density_at(const Aperture& aperture, double phi) noexcept;

/// Samples the aperture on an n-point grid and renormalizes so that the
/// discrete integral is exactly one. n must be a power of two >= 16.
AngularDensity sample(const Aperture& aperture, std::size_t n);

/// Uniform density 1/(2 pi) on an n-point grid.
AngularDensity uniform_density(std::size_t n);

struct AngleMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of phi in [-pi, pi) from discrete sums; the node at -pi
/// counts half at each end of the interval.
AngleMoments angle_moments(const AngularDensity& d);

struct UncertaintyReport {
  double delta_m = 0.0;
  double delta_phi = 0.0;
  double lhs = 0.0; // delta_m * delta_phi
  double rhs = 0.0; // |1 - 2 pi P(-pi)| / 2
  bool holds = false;
  bool unbounded = false; // OAM spread does not converge within the spectrum
};

/// Tolerance on lhs >= rhs.
inline constexpr double kUncertaintyTolerance = 1e-9;

/// Fraction of the truncated second moment sum_m m^2 c_m^2 carried by the
/// upper half of the spectrum above which the OAM spread is flagged unbounded.
inline constexpr double kUnboundedTailFraction = 0.01;

/// Checks Delta m * Delta phi >= |1 - 2 pi P(-pi)| / 2 (hbar = 1). Both spreads are
/// evaluated exactly for the trigonometric interpolant of sqrt(d); the spectrum
/// only decides the unbounded flag.
/// `spectrum` must be the transform of sqrt(d); `boundary_density` is P(-pi).
UncertaintyReport check_uncertainty(const AngularDensity& d, const OamSpectrum& spectrum,
                                    double boundary_density);

} // namespace oamepr
