#include "oamepr/aperture.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oamepr/errors.hpp"
#include "oamepr/specfun.hpp"

namespace oamepr {
namespace {

// Nodes within this distance of a Rect edge count as lying on the edge.
constexpr double kEdgeTolerance = 1e-12;

double compute_normalization(const ApertureSpec& s) {
  switch (s.shape) {
  case Shape::Rect:
    return 1.0 / s.w;
  case Shape::TruncGauss:
    return 1.0 / (std::sqrt(kPi) * s.w * specfun::erf(kPi / s.w));
  case Shape::TruncSuperGauss: {
    const double x = std::pow(kPi / s.w, 2.0 * s.gamma);
    return s.gamma / (s.w * specfun::gamma_lower(1.0 / (2.0 * s.gamma), x));
  }
  }
  return 0.0;
}

} // namespace

std::string_view to_string(Shape s) noexcept {
  switch (s) {
  case Shape::Rect:
    return "rect";
  case Shape::TruncGauss:
    return "gauss";
  case Shape::TruncSuperGauss:
    return "tsg";
  }
  return "unknown";
}

std::string ApertureSpec::describe() const {
  if (shape == Shape::TruncSuperGauss) {
    return fmt::format("{}(w={:.12g},gamma={:.12g},tau={:.12g})", to_string(shape), w, gamma,
                       tau);
  }
  return fmt::format("{}(w={:.12g},tau={:.12g})", to_string(shape), w, tau);
}

Aperture::Aperture(const ApertureSpec& spec) : spec_(spec) {
  if (!(spec_.w > 0.0) || !(spec_.w <= kTwoPi)) {
    throw ValidationError("w", fmt::format("width {} outside (0, 2 pi]", spec_.w));
  }
  if (spec_.shape == Shape::TruncGauss) {
    spec_.gamma = 1.0;
  }
  if (spec_.shape == Shape::TruncSuperGauss && !(spec_.gamma >= 1.0 && std::isfinite(spec_.gamma))) {
    throw ValidationError("gamma", fmt::format("exponent {} must be >= 1", spec_.gamma));
  }
  if (!(spec_.tau >= -kPi && spec_.tau < kPi)) {
    throw ValidationError("tau", fmt::format("orientation {} outside [-pi, pi)", spec_.tau));
  }
  normalization_ = compute_normalization(spec_);
  if (!std::isfinite(normalization_) || !(normalization_ > 0.0)) {
    throw ValidationError("w", "normalization constant is not finite");
  }
}

Aperture Aperture::rotated_to(double tau) const {
  ApertureSpec s = spec_;
  s.tau = wrap_angle(tau);
  return Aperture(s);
}

double Aperture::density_at(double phi) const noexcept {
  const double d = wrap_angle(phi - spec_.tau);
  const double a = std::abs(d);
  switch (spec_.shape) {
  case Shape::Rect: {
    if (spec_.w == kTwoPi) {
      return normalization_;
    }
    const double half = 0.5 * spec_.w;
    if (a < half - kEdgeTolerance) {
      return normalization_;
    }
    if (a <= half + kEdgeTolerance) {
      return 0.5 * normalization_;
    }
    return 0.0;
  }
  case Shape::TruncGauss: {
    const double u = a / spec_.w;
    return normalization_ * std::exp(-u * u);
  }
  case Shape::TruncSuperGauss:
    return normalization_ * std::exp(-std::pow(a / spec_.w, 2.0 * spec_.gamma));
  }
  return 0.0;
}

Aperture make_aperture(const ApertureSpec& spec) { return Aperture(spec); }

double density_at(const Aperture& aperture, double phi) noexcept {
  return aperture.density_at(phi);
}

AngularDensity sample(const Aperture& aperture, std::size_t n) {
  require_grid_size(n);
  if (aperture.spec().shape == Shape::Rect && aperture.spec().w == kTwoPi) {
    return uniform_density(n);
  }
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = aperture.density_at(grid_angle(k, n));
  }
  return AngularDensity(std::move(values), aperture.spec().describe()).normalized();
}

AngularDensity uniform_density(std::size_t n) {
  require_grid_size(n);
  return AngularDensity(std::vector<double>(n, 1.0 / kTwoPi), "uniform");
}

// The node at -pi is the same point as +pi; it enters both moments as half
// its weight at each end.
AngleMoments angle_moments(const AngularDensity& d) {
  const double h = d.step();
  double mean = 0.0;
  for (std::size_t k = 1; k < d.n(); ++k) {
    mean += d.phi(k) * d[k];
  }
  mean *= h;
  const double lo = -kPi - mean;
  const double hi = kPi - mean;
  double var = 0.5 * (lo * lo + hi * hi) * d[0];
  for (std::size_t k = 1; k < d.n(); ++k) {
    const double x = d.phi(k) - mean;
    var += x * x * d[k];
  }
  return {mean, var * h};
}

namespace {

struct SpreadPair {
  double var_m = 0.0;
  double var_phi = 0.0;
};

// Spreads of m and phi for the trigonometric interpolant of sqrt(d), evaluated
// exactly for that interpolant. The interpolant has unit norm and passes
// through sqrt(P(-pi)), so the relation holds for it up to rounding.
SpreadPair interpolant_spreads(const AngularDensity& d) {
  const std::size_t n = d.n();
  const int half = static_cast<int>(n / 2);
  std::vector<std::complex<double>> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    roots[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  }
  // a[m + half] for m in [-half, half]; the Nyquist term is split evenly.
  std::vector<std::complex<double>> a(n + 1);
  for (int m = -half; m <= half; ++m) {
    std::complex<double> acc = 0.0;
    const std::size_t step = static_cast<std::size_t>(m < 0 ? m + 2 * half : m);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += std::sqrt(d[k]) * roots[idx];
      idx = (idx + step) % n;
    }
    a[static_cast<std::size_t>(m + half)] = acc * ((m % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(n));
  }
  a.front() *= 0.5;
  a.back() *= 0.5;

  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  for (int m = -half; m <= half; ++m) {
    const double p = std::norm(a[static_cast<std::size_t>(m + half)]);
    s0 += p;
    s1 += p * m;
    s2 += p * m * m;
  }
  // Fourier coefficients q_j of |psi|^2 against the series of phi and phi^2.
  double mean_phi = 0.0;
  double second_phi = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    std::complex<double> q = 0.0;
    for (std::size_t i = 0; i + j <= n; ++i) {
      q += a[i + j] * std::conj(a[i]);
    }
    if (j == 0) {
      second_phi += kTwoPi * kPi * kPi / 3.0 * q.real();
      continue;
    }
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    const double jj = static_cast<double>(j);
    mean_phi += 4.0 * kPi * sign * q.imag() / jj;
    second_phi += 8.0 * kPi * sign * q.real() / (jj * jj);
  }
  const double norm = kTwoPi * s0;
  const double mean_m = kTwoPi * s1 / norm;
  mean_phi /= norm;
  return {std::max(0.0, kTwoPi * s2 / norm - mean_m * mean_m),
          std::max(0.0, second_phi / norm - mean_phi * mean_phi)};
}

} // namespace

UncertaintyReport check_uncertainty(const AngularDensity& d, const OamSpectrum& spectrum,
                                    double boundary_density) {
  double p2 = 0.0;
  double tail2 = 0.0;
  for (int m = -spectrum.m_max; m <= spectrum.m_max; ++m) {
    const double c = spectrum.amp(m);
    p2 += c * c * m * m;
    if (2 * std::abs(m) > spectrum.m_max) {
      tail2 += c * c * m * m;
    }
  }
  const auto spreads = interpolant_spreads(d);
  if (!std::isfinite(spreads.var_m) || !std::isfinite(spreads.var_phi)) {
    throw ComputationError("check_uncertainty: non-finite spread");
  }
  UncertaintyReport r;
  r.delta_m = std::sqrt(spreads.var_m);
  r.delta_phi = std::sqrt(spreads.var_phi);
  r.unbounded = p2 > 0.0 && tail2 / p2 > kUnboundedTailFraction;
  r.lhs = r.delta_m * r.delta_phi;
  r.rhs = 0.5 * std::abs(1.0 - kTwoPi * boundary_density);
  r.holds = r.unbounded || r.lhs >= r.rhs - kUncertaintyTolerance;
  return r;
}

} // namespace oamepr
