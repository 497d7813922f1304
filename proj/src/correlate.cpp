#include "oamepr/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numeric>

#include <fftw3.h>
#include <fmt/format.h>

#include "oamepr/errors.hpp"

namespace oamepr {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

std::vector<std::complex<double>> forward(std::span<const double> in) {
  const int n = static_cast<int>(in.size());
  std::vector<double> buf(in.begin(), in.end());
  std::vector<std::complex<double>> out(in.size() / 2 + 1);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(n, buf.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

std::vector<double> backward(std::vector<std::complex<double>> in, std::size_t n) {
  std::vector<double> out(n);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                    out.data(), FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

// out[j] = h * sum_k p1[k] p2[(j - k + N/2) mod N]. The N/2 offset keeps the
// output on the same angular frame, since phi_k + phi_l = phi_{k + l + N/2}.
std::vector<double> direct_sum(std::span<const double> p1, std::span<const double> p2,
                               double h) {
  const std::size_t n = p1.size();
  const std::size_t half = n / 2;
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += p1[k] * p2[(j + half + n - k) % n];
    }
    out[j] = h * acc;
  }
  return out;
}

std::vector<double> fast_sum(std::span<const double> p1, std::span<const double> p2, double h) {
  const std::size_t n = p1.size();
  auto f1 = forward(p1);
  const auto f2 = forward(p2);
  for (std::size_t i = 0; i < f1.size(); ++i) {
    // Multiplying by (-1)^i applies the N/2 index offset.
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    f1[i] *= f2[i] * sign;
  }
  auto raw = backward(std::move(f1), n);
  const double scale = h / static_cast<double>(n);
  double peak = 0.0;
  for (double& v : raw) {
    v *= scale;
    peak = std::max(peak, v);
  }
  const double floor = kFastConvolutionFloor * peak;
  for (double& v : raw) {
    if (v < floor) {
      v = 0.0;
    }
  }
  return raw;
}

} // namespace

AngularDensity convolve_periodic(const AngularDensity& p1, const AngularDensity& p2,
                                 ConvolutionMethod method) {
  if (p1.n() != p2.n()) {
    throw ValidationError("p2", fmt::format("grid size {} does not match {}", p2.n(), p1.n()));
  }
  const double h = p1.step();
  auto out = method == ConvolutionMethod::Direct ? direct_sum(p1.values(), p2.values(), h)
                                                 : fast_sum(p1.values(), p2.values(), h);
  return AngularDensity(std::move(out), fmt::format("conv[{} * {}]", p1.meta(), p2.meta()))
      .normalized();
}

double rect_conditional_density(double w1, double w2, double phi) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) {
    throw DomainError("rect_conditional_density: widths must be > 0");
  }
  if (w1 + w2 > kTwoPi) {
    throw DomainError("rect_conditional_density: w1 + w2 exceeds 2 pi");
  }
  if (w2 > w1) {
    std::swap(w1, w2);
  }
  const double delta1 = 0.5 * (w1 + w2);
  const double delta2 = 0.5 * (w1 - w2);
  const double denom = delta1 * delta1 - delta2 * delta2;
  const double a = std::abs(wrap_angle(phi));
  if (a < delta2) {
    return (delta1 - delta2) / denom;
  }
  if (a < delta1) {
    return (delta1 - a) / denom;
  }
  return 0.0;
}

ConditionalWavefunction::ConditionalWavefunction(std::vector<double> values, std::string source)
    : values_(std::move(values)), source_(std::move(source)) {
  require_grid_size(values_.size(), "values");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("values", "wavefunction values must be finite and >= 0");
    }
  }
}

double ConditionalWavefunction::norm_squared() const noexcept {
  double s = 0.0;
  for (double v : values_) {
    s += v * v;
  }
  return s * step();
}

ConditionalWavefunction conditional_wavefunction(const AngularDensity& p) {
  std::vector<double> psi(p.n());
  std::transform(p.values().begin(), p.values().end(), psi.begin(),
                 [](double v) { return std::sqrt(v); });
  return ConditionalWavefunction(std::move(psi), p.meta());
}

} // namespace oamepr
