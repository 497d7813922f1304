#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oamepr/aperture.hpp"
#include "oamepr/correlate.hpp"
#include "oamepr/errors.hpp"
#include "oamepr/oam.hpp"
#include "oracles.hpp"

using namespace oamepr;
using std::numbers::pi;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

AngularDensity spike(std::size_t n, std::size_t bin) {
  std::vector<double> v(n, 0.0);
  v[bin] = static_cast<double>(n) / (2 * pi);
  return AngularDensity(std::move(v), "spike");
}

ApertureSpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> family(0, 2);
  std::uniform_real_distribution<double> uw(0.05, pi);
  std::uniform_real_distribution<double> ug(1.0, 20.0);
  switch (family(rng)) {
  case 0:
    return ApertureSpec::rect(uw(rng));
  case 1:
    return ApertureSpec::gauss(uw(rng));
  default:
    return ApertureSpec::super_gauss(uw(rng), ug(rng));
  }
}

} // namespace

TEST_CASE("convolving with a spike at the origin is the identity") {
  const std::size_t n = 512;
  const auto p1 = sample(Aperture(ApertureSpec::gauss(0.6, 0.3)), n);
  const auto out = convolve_periodic(p1, spike(n, n / 2));
  CHECK(max_abs_diff(out.values(), p1.values()) < 1e-9);
}

TEST_CASE("convolving with an off-centre spike shifts the density") {
  const std::size_t n = 512;
  const auto p1 = sample(Aperture(ApertureSpec::super_gauss(0.5, 3.0)), n);
  for (const std::size_t bin : {std::size_t{0}, std::size_t{100}, std::size_t{300}}) {
    const auto out = convolve_periodic(p1, spike(n, bin));
    const long shift = static_cast<long>(bin) - static_cast<long>(n / 2);
    CHECK(max_abs_diff(out.values(), p1.shifted(shift).values()) < 1e-9);
  }
}

TEST_CASE("grid convolution matches the angle-indexed oracle") {
  const std::size_t n = 256;
  const auto p1 = sample(Aperture(ApertureSpec::gauss(0.5, 1.0)), n);
  const auto p2 = sample(Aperture(ApertureSpec::rect(0.8, -2.0)), n);
  const auto ref = oracle::convolve({p1.values().begin(), p1.values().end()},
                                    {p2.values().begin(), p2.values().end()});
  CHECK(max_abs_diff(convolve_periodic(p1, p2).values(), ref) < 1e-12);
}

TEST_CASE("rect pair convolution reproduces the trapezoid") {
  const std::size_t n = 512;
  const double w1 = pi / 4;
  const double w2 = pi / 64;
  const auto p = convolve_periodic(sample(Aperture(ApertureSpec::rect(w1)), n),
                                   sample(Aperture(ApertureSpec::rect(w2)), n));
  CHECK(p[n / 2] == doctest::Approx(4.0 / pi).epsilon(1e-12));
  // Half-weight edge nodes leave h / (4 w1 w2) at the four corners.
  const double corner = p.step() / (4.0 * w1 * w2);
  int corners = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(p.phi(k));
    const double diff = std::abs(p[k] - rect_conditional_density(w1, w2, p.phi(k)));
    if (std::abs(a - 0.5 * (w1 + w2)) < 1e-9 || std::abs(a - 0.5 * (w1 - w2)) < 1e-9) {
      ++corners;
      CHECK(diff == doctest::Approx(corner).epsilon(1e-10));
    } else {
      CHECK(diff < 1e-12);
    }
  }
  CHECK(corners == 4);
}

TEST_CASE("closed-form trapezoid") {
  const double w1 = pi / 4;
  const double w2 = pi / 64;
  const double d1 = 0.5 * (w1 + w2);
  CHECK(rect_conditional_density(w1, w2, 0.0) == doctest::Approx(4.0 / pi));
  CHECK(rect_conditional_density(w1, w2, d1) == 0.0);
  CHECK(rect_conditional_density(w2, w1, 0.1) == rect_conditional_density(w1, w2, 0.1));
  for (const double phi : {0.0, 0.01, 0.3, 0.39, 0.41, 1.0, -0.35}) {
    CHECK(std::abs(rect_conditional_density(w1, w2, phi) - oracle::rect_trapezoid(w1, w2, phi)) <
          1e-12);
  }
  auto f = [&](double phi) { return rect_conditional_density(w1, w2, phi); };
  const double mass =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -pi, pi, 12, 1e-13);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(rect_conditional_density(4.0, 3.0, 0.0), DomainError);
}

TEST_CASE("gaussian pair convolution matches the convolution-theorem series") {
  const std::size_t n = 512;
  const double w1 = pi / 4;
  const double w2 = pi / 64;
  const auto p = convolve_periodic(sample(Aperture(ApertureSpec::gauss(w1)), n),
                                   sample(Aperture(ApertureSpec::gauss(w2)), n));
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int m = -60; m <= 60; ++m) {
      sum += gauss_density_transform_analytic(w1, w2, m) * std::cos(m * p.phi(k));
    }
    worst = std::max(worst, std::abs(p[k] - sum / std::sqrt(2 * pi)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("convolution is commutative, even-preserving and normalized") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    const auto s1 = random_spec(rng);
    const auto s2 = random_spec(rng);
    const auto p1 = sample(Aperture(s1), 256);
    const auto p2 = sample(Aperture(s2), 256);
    const auto a = convolve_periodic(p1, p2);
    const auto b = convolve_periodic(p2, p1);
    CHECK(max_abs_diff(a.values(), b.values()) < 1e-12);
    CHECK(std::abs(a.integral() - 1.0) < 1e-9);
    for (std::size_t k = 1; k < 256; ++k) {
      CHECK(std::abs(a[k] - a[256 - k]) < 1e-12);
    }
  }
}

TEST_CASE("rect pair support ends at the outer trapezoid edge") {
  const std::size_t n = 512;
  const double w1 = pi / 4;
  const double w2 = pi / 64;
  const double d1 = 0.5 * (w1 + w2);
  const auto p = convolve_periodic(sample(Aperture(ApertureSpec::rect(w1)), n),
                                   sample(Aperture(ApertureSpec::rect(w2)), n));
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(p.phi(k)) >= d1 + p.step()) {
      CHECK(p[k] == 0.0);
    }
  }
}

TEST_CASE("shifting one input shifts the output") {
  const auto p1 = sample(Aperture(ApertureSpec::gauss(0.4)), 256);
  const auto p2 = sample(Aperture(ApertureSpec::rect(0.9)), 256);
  const auto base = convolve_periodic(p1, p2);
  for (const long k : {3L, -50L, 128L}) {
    const auto moved = convolve_periodic(p1, p2.shifted(k));
    CHECK(max_abs_diff(moved.values(), base.shifted(k).values()) < 1e-15);
  }
}

TEST_CASE("fast path agrees with direct summation") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const auto p1 = sample(Aperture(random_spec(rng)), 1024);
    const auto p2 = sample(Aperture(random_spec(rng)), 1024);
    const auto d = convolve_periodic(p1, p2, ConvolutionMethod::Direct);
    const auto f = convolve_periodic(p1, p2, ConvolutionMethod::Fast);
    CHECK(max_abs_diff(d.values(), f.values()) < 1e-10);
  }
}

TEST_CASE("grid mismatch is rejected") {
  const auto p1 = sample(Aperture(ApertureSpec::gauss(0.4)), 256);
  const auto p2 = sample(Aperture(ApertureSpec::gauss(0.4)), 512);
  CHECK_THROWS_AS(convolve_periodic(p1, p2), ValidationError);
}

TEST_CASE("conditional wavefunction") {
  const auto u = uniform_density(256);
  const auto psi_u = conditional_wavefunction(u);
  for (std::size_t k = 0; k < 256; ++k) {
    CHECK(psi_u[k] == doctest::Approx(1.0 / std::sqrt(2 * pi)).epsilon(1e-14));
  }
  const auto p = convolve_periodic(sample(Aperture(ApertureSpec::rect(pi / 4)), 512),
                                   sample(Aperture(ApertureSpec::rect(pi / 64)), 512));
  const auto psi = conditional_wavefunction(p);
  for (std::size_t k = 0; k < 512; ++k) {
    CHECK(std::abs(psi[k] * psi[k] - p[k]) < 1e-12);
    CHECK(psi[k] >= 0.0);
  }
  CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}
