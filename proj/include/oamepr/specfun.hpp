#pragma once

// Special functions used by the closed-form aperture and amplitude formulas.
//
// Fresnel integrals follow the normalization that tends to 1/2 at infinity:
//   C2(x) = (2 pi)^{-1/2} \int_0^x cos(t) / sqrt(t) dt
//   S2(x) = (2 pi)^{-1/2} \int_0^x sin(t) / sqrt(t) dt
// so C2(x) = C(sqrt(2x/pi)) in terms of the usual pi/2 convention.
//
// Accuracy contract: absolute error <= 1e-10 for arguments of magnitude <= 100.

namespace oamepr::specfun {

struct SpecFunResult {
  double value = 0.0;
  double est_abs_error = 0.0;
};

struct FresnelPair {
  double c2 = 0.0;
  double s2 = 0.0;
};

/// Both Fresnel integrals in one evaluation. Throws DomainError for x < 0.
FresnelPair fresnel_pair(double x);

SpecFunResult fresnel_c2_eval(double x);
SpecFunResult fresnel_s2_eval(double x);
double fresnel_c2(double x);
double fresnel_s2(double x);

/// Real error function.
double erf(double x) noexcept;

/// Above this value of b^2 - a^2 the unscaled Re erf(a + ib) overflows.
inline constexpr double kReErfMaxExponent = 700.0;

/// Re[erf(a + i b)]. Throws RangeError when b^2 - a^2 > kReErfMaxExponent.
double re_erf_complex(double a, double b);

/// exp(-b^2) * Re[erf(a + i b)]; bounded for every finite (a, b).
double re_erf_complex_scaled(double a, double b) noexcept;

/// Upper incomplete Gamma function \int_x^\infty t^{a-1} e^{-t} dt.
/// gamma_upper(a, 0) is the complete Gamma(a). Throws DomainError for a <= 0
/// or x < 0.
SpecFunResult gamma_upper_eval(double a, double x);
double gamma_upper(double a, double x);

/// Lower incomplete Gamma function \int_0^x t^{a-1} e^{-t} dt, evaluated
/// without cancellation for small x.
double gamma_lower(double a, double x);

} // namespace oamepr::specfun
