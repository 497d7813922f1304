#pragma once

// Independent reference implementations used only by the tests. Each oracle
// evaluates a defining integral or sum directly instead of the closed forms
// the library uses.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// \int_0^x cos(t)/sqrt(2 pi t) dt after t = pi s^2 / 2.
inline double fresnel_c2(double x) {
  const double upper = std::sqrt(2.0 * x / kPi);
  auto f = [](double s) { return std::cos(0.5 * kPi * s * s); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 12, 1e-13);
}

inline double fresnel_s2(double x) {
  const double upper = std::sqrt(2.0 * x / kPi);
  auto f = [](double s) { return std::sin(0.5 * kPi * s * s); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 12, 1e-13);
}

/// Re erf(a + ib) along the vertical path from a to a + ib:
/// erf(a) + (2/sqrt(pi)) e^{-a^2} \int_0^b e^{t^2} sin(2 a t) dt.
inline double re_erf(double a, double b) {
  auto f = [a](double t) { return std::exp(t * t - a * a) * std::sin(2.0 * a * t); };
  const double path =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, b, 12, 1e-13);
  return std::erf(a) + 2.0 / std::sqrt(kPi) * path;
}

/// \int_0^x t^{a-1} e^{-t} dt.
inline double gamma_lower(double a, double x) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([a](double t) { return std::pow(t, a - 1.0) * std::exp(-t); }, 0.0, x);
}

/// Unnormalized profiles.
inline double rect_profile(double w, double phi) { return std::abs(phi) < 0.5 * w ? 1.0 : 0.0; }
inline double super_gauss_profile(double w, double gamma, double phi) {
  return std::exp(-std::pow(std::abs(phi) / w, 2.0 * gamma));
}

/// \int_{-pi}^{pi} exp(-|phi/w|^{2 gamma}) dphi.
inline double super_gauss_mass(double w, double gamma) {
  auto f = [w, gamma](double phi) { return super_gauss_profile(w, gamma, phi); };
  return 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kPi, 12, 1e-13);
}

/// Overlap of two centred rectangles: |{x : |x| < w1/2, |phi - x| < w2/2}| / (w1 w2).
inline double rect_trapezoid(double w1, double w2, double phi) {
  const double lo = std::max(-0.5 * w1, phi - 0.5 * w2);
  const double hi = std::min(0.5 * w1, phi + 0.5 * w2);
  return std::max(0.0, hi - lo) / (w1 * w2);
}

/// (2 pi)^{-1/2} \int sqrt(trapezoid) cos(m phi) dphi by quadrature on each
/// smooth piece.
inline double rect_amplitude(double w1, double w2, int m) {
  const double d1 = 0.5 * (w1 + w2);
  const double d2 = 0.5 * std::abs(w1 - w2);
  auto f = [=](double phi) { return std::sqrt(rect_trapezoid(w1, w2, phi)) * std::cos(m * phi); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double flat =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, d2, 12, 1e-13);
  const double slope = ts.integrate(f, d2, d1);
  return 2.0 * (flat + slope) / std::sqrt(2.0 * kPi);
}

/// out_j = h sum_k p1_k p2(phi_j - phi_k), locating phi_j - phi_k on the grid
/// by its angle rather than by index arithmetic.
inline std::vector<double> convolve(const std::vector<double>& p1, const std::vector<double>& p2) {
  const std::size_t n = p1.size();
  const double h = 2.0 * kPi / static_cast<double>(n);
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi_j = -kPi + h * static_cast<double>(j);
    for (std::size_t k = 0; k < n; ++k) {
      const double phi_k = -kPi + h * static_cast<double>(k);
      const double d = std::remainder(phi_j - phi_k, 2.0 * kPi);
      const auto idx = static_cast<std::size_t>(std::lround((d + kPi) / h)) % n;
      out[j] += h * p1[k] * p2[idx];
    }
  }
  double mass = 0.0;
  for (const double v : out) {
    mass += v * h;
  }
  for (double& v : out) {
    v /= mass;
  }
  return out;
}

/// Variance of m under c_m^2 with c_m proportional to exp(-m^2 s / 2),
/// s = w1^2 + w2^2, summed term by term to |m| <= cap.
inline double gauss_series_variance(double w1, double w2, int cap) {
  const double s = w1 * w1 + w2 * w2;
  double p0 = 0.0;
  double p2 = 0.0;
  for (int m = -cap; m <= cap; ++m) {
    const double p = std::exp(-static_cast<double>(m) * m * s);
    p0 += p;
    p2 += p * m * m;
  }
  return p2 / p0;
}

/// Plain DFT of a complex sequence at integer m: (2 pi)^{-1/2} h sum psi_k e^{i m phi_k}.
template <typename Complex>
Complex dft(const std::vector<Complex>& psi, int m) {
  const std::size_t n = psi.size();
  const double h = 2.0 * kPi / static_cast<double>(n);
  Complex acc{};
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = -kPi + h * static_cast<double>(k);
    acc += psi[k] * Complex(std::cos(m * phi), std::sin(m * phi));
  }
  return acc * (h / std::sqrt(2.0 * kPi));
}

} // namespace oracle
