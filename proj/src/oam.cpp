#include "oamepr/oam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "oamepr/errors.hpp"
#include "oamepr/grid.hpp"
#include "oamepr/specfun.hpp"

namespace oamepr {
namespace {

// exp(2 pi i j / n) for j = 0..n-1.
std::vector<std::complex<double>> unit_roots(std::size_t n) {
  std::vector<std::complex<double>> roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    roots[j] = {std::cos(a), std::sin(a)};
  }
  return roots;
}

void require_truncation(int m_max, std::size_t n) {
  if (m_max < 1) {
    throw ValidationError("m_max", "truncation index must be >= 1");
  }
  const int bound = max_truncation_for_grid(n);
  if (m_max > bound) {
    throw ValidationError("m_max", fmt::format("truncation index {} exceeds grid bound n/4 = {}",
                                               m_max, bound));
  }
}

// e^{i m phi_k} = (-1)^m e^{2 pi i m k / n}; the root index is reduced exactly.
template <typename Value>
std::complex<double> grid_transform(std::span<const Value> psi,
                                    const std::vector<std::complex<double>>& roots, int m) {
  const auto n = static_cast<long long>(psi.size());
  const long long step = ((static_cast<long long>(m) % n) + n) % n;
  std::complex<double> acc = 0.0;
  long long idx = 0;
  for (long long k = 0; k < n; ++k) {
    acc += psi[static_cast<std::size_t>(k)] * roots[static_cast<std::size_t>(idx)];
    idx += step;
    if (idx >= n) {
      idx -= n;
    }
  }
  const double h = kTwoPi / static_cast<double>(n);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return acc * (sign * h / std::sqrt(kTwoPi));
}

void require_rect_widths(double& w1, double& w2) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) {
    throw DomainError("rect amplitude: widths must be > 0");
  }
  if (w2 > w1) {
    std::swap(w1, w2);
  }
  if (w1 + w2 > kTwoPi) {
    throw DomainError("rect amplitude: w1 + w2 exceeds 2 pi");
  }
}

void require_gauss_widths(double w1, double w2) {
  for (double w : {w1, w2}) {
    if (!(w > 0.0) || !(w <= kTwoPi)) {
      throw DomainError("gauss amplitude: widths must lie in (0, 2 pi]");
    }
  }
}

SeriesFit fit_log(std::span<const VarianceEntry> entries) {
  const auto n = static_cast<double>(entries.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& e : entries) {
    sx += std::log(static_cast<double>(e.m_max));
    sy += e.variance;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& e : entries) {
    const double dx = std::log(static_cast<double>(e.m_max)) - mx;
    const double dy = e.variance - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  SeriesFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& e : entries) {
    const double r =
        e.variance - (fit.intercept + fit.slope * std::log(static_cast<double>(e.m_max)));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.residual_rms = std::sqrt(ss_res / n);
  return fit;
}

std::vector<int> checked_truncations(std::span<const int> m_maxes) {
  if (m_maxes.empty()) {
    throw ValidationError("m_maxes", "at least one truncation index is required");
  }
  for (std::size_t i = 1; i < m_maxes.size(); ++i) {
    if (m_maxes[i] <= m_maxes[i - 1]) {
      throw ValidationError("m_maxes", "truncation indices must be strictly increasing");
    }
  }
  return {m_maxes.begin(), m_maxes.end()};
}

} // namespace

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
  case Provenance::Numeric:
    return "numeric";
  case Provenance::AnalyticRect:
    return "analytic-rect";
  case Provenance::GaussApprox:
    return "gauss-approx";
  }
  return "unknown";
}

double OamSpectrum::norm_squared() const noexcept {
  double s = 0.0;
  for (double c : amps) {
    s += c * c;
  }
  return s;
}

OamSpectrum transform_numeric(const ConditionalWavefunction& psi, int m_max) {
  require_truncation(m_max, psi.n());
  const auto roots = unit_roots(psi.n());
  OamSpectrum out;
  out.m_max = m_max;
  out.provenance = Provenance::Numeric;
  out.grid_n = psi.n();
  out.amps.resize(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m) {
    const auto c = grid_transform(psi.values(), roots, m);
    if (std::abs(c.imag()) > kMaxImaginaryResidue) {
      throw ComputationError(fmt::format(
          "transform_numeric: imaginary residue {:.3e} at m = {} exceeds {:.0e}; "
          "the wavefunction is not even about phi = 0",
          c.imag(), m, kMaxImaginaryResidue));
    }
    out.amps[static_cast<std::size_t>(m + m_max)] = c.real();
  }
  return out;
}

std::vector<std::complex<double>> transform_complex(std::span<const std::complex<double>> psi,
                                                    int m_max) {
  if (!is_power_of_two(psi.size())) {
    throw ValidationError("psi", "grid size must be a power of two");
  }
  require_truncation(m_max, psi.size());
  const auto roots = unit_roots(psi.size());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m) {
    out[static_cast<std::size_t>(m + m_max)] = grid_transform(psi, roots, m);
  }
  return out;
}

double rect_amplitude_analytic(double w1, double w2, int m) {
  require_rect_widths(w1, w2);
  const double delta1 = 0.5 * (w1 + w2);
  const double delta2 = 0.5 * (w1 - w2);
  const double ramp = delta1 - delta2;
  if (m == 0) {
    // (2 pi)^{-1/2} times the integral of the sqrt-trapezoid.
    return std::sqrt(2.0 / kPi) * (delta2 + 2.0 * ramp / 3.0) / std::sqrt(delta1 + delta2);
  }
  const double k = std::abs(static_cast<double>(m));
  const auto f = specfun::fresnel_pair(k * ramp);
  const double num = std::sin(k * delta1) * f.c2 - std::cos(k * delta1) * f.s2;
  return num / (std::sqrt(delta1 * delta1 - delta2 * delta2) * k * std::sqrt(k));
}

OamSpectrum rect_spectrum_analytic(double w1, double w2, int m_max) {
  if (m_max < 1) {
    throw ValidationError("m_max", "truncation index must be >= 1");
  }
  OamSpectrum out;
  out.m_max = m_max;
  out.provenance = Provenance::AnalyticRect;
  out.amps.resize(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = 0; m <= m_max; ++m) {
    const double c = rect_amplitude_analytic(w1, w2, m);
    out.amps[static_cast<std::size_t>(m_max + m)] = c;
    out.amps[static_cast<std::size_t>(m_max - m)] = c;
  }
  return out;
}

double gauss_amplitude_approx(double w1, double w2, int m) {
  require_gauss_widths(w1, w2);
  const double s = w1 * w1 + w2 * w2;
  const double trunc = specfun::erf(kPi / w1) * specfun::erf(kPi / w2);
  const double mm = static_cast<double>(m);
  return std::pow(s / kPi, 0.25) / std::sqrt(trunc) * std::exp(-0.5 * mm * mm * s);
}

OamSpectrum gauss_spectrum_approx(double w1, double w2, int m_max) {
  if (m_max < 1) {
    throw ValidationError("m_max", "truncation index must be >= 1");
  }
  OamSpectrum out;
  out.m_max = m_max;
  out.provenance = Provenance::GaussApprox;
  out.amps.resize(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m) {
    out.amps[static_cast<std::size_t>(m + m_max)] = gauss_amplitude_approx(w1, w2, m);
  }
  return out;
}

double gauss_density_transform_analytic(double w1, double w2, int m) {
  require_gauss_widths(w1, w2);
  const double mm = static_cast<double>(m);
  // exp(-m^2 (w1^2 + w2^2) / 4) = exp(-b1^2) exp(-b2^2) with b_j = m w_j / 2,
  // which is exactly the scaling carried by re_erf_complex_scaled.
  const double f1 = specfun::re_erf_complex_scaled(kPi / w1, 0.5 * mm * w1);
  const double f2 = specfun::re_erf_complex_scaled(kPi / w2, 0.5 * mm * w2);
  const double trunc = specfun::erf(kPi / w1) * specfun::erf(kPi / w2);
  return f1 * f2 / (trunc * std::sqrt(kTwoPi));
}

double conditional_variance(std::span<const double> weights, int m_max) {
  if (weights.size() != static_cast<std::size_t>(2 * m_max + 1)) {
    throw ValidationError("weights", "expected 2 m_max + 1 entries");
  }
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  for (int m = -m_max; m <= m_max; ++m) {
    const double p = weights[static_cast<std::size_t>(m + m_max)];
    p0 += p;
    p1 += p * m;
    p2 += p * m * static_cast<double>(m);
  }
  if (!(p0 > 0.0)) {
    throw ComputationError("conditional_variance: spectrum has zero norm");
  }
  const double mean = p1 / p0;
  return std::max(0.0, p2 / p0 - mean * mean);
}

double conditional_variance(const OamSpectrum& spectrum, int m_max) {
  if (m_max < 0 || m_max > spectrum.m_max) {
    throw ValidationError("m_max", fmt::format("truncation {} outside [0, {}]", m_max,
                                               spectrum.m_max));
  }
  std::vector<double> w(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m) {
    const double c = spectrum.amp(m);
    w[static_cast<std::size_t>(m + m_max)] = c * c;
  }
  return conditional_variance(w, m_max);
}

double conditional_variance(const OamSpectrum& spectrum) {
  return conditional_variance(spectrum, spectrum.m_max);
}

std::string_view to_string(Convergence c) noexcept {
  switch (c) {
  case Convergence::Converged:
    return "converged";
  case Convergence::LogDivergent:
    return "log-divergent";
  case Convergence::Undetermined:
    return "undetermined";
  }
  return "unknown";
}

ConvergenceAnalysis analyze_convergence(std::span<const VarianceEntry> entries) {
  if (entries.size() < kMinSeriesEntries) {
    throw ValidationError("entries", fmt::format("need at least {} entries, got {}",
                                                 kMinSeriesEntries, entries.size()));
  }
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].m_max <= entries[i - 1].m_max) {
      throw ValidationError("entries", "truncation indices must be strictly increasing");
    }
  }
  const int first = entries.front().m_max;
  const int last = entries.back().m_max;
  if (first < 1 || last < 10 * first) {
    throw ValidationError("entries", "series must span at least one decade of M");
  }

  ConvergenceAnalysis out;
  double lo = entries.back().variance;
  double hi = lo;
  for (const auto& e : entries) {
    if (10.0 * e.m_max >= static_cast<double>(last)) {
      lo = std::min(lo, e.variance);
      hi = std::max(hi, e.variance);
    }
  }
  const double ref = std::abs(entries.back().variance);
  out.last_decade_change = hi == lo ? 0.0 : (ref > 0.0 ? (hi - lo) / ref : INFINITY);
  out.fit = fit_log(entries);

  if (out.last_decade_change < kConvergedRelativeChange) {
    out.classification = Convergence::Converged;
  } else if (out.fit.slope > kLogSlopeThreshold && out.fit.r_squared > kLogRSquaredThreshold) {
    out.classification = Convergence::LogDivergent;
  } else {
    out.classification = Convergence::Undetermined;
  }
  return out;
}

Convergence classify_convergence(std::span<const VarianceEntry> entries) {
  return analyze_convergence(entries).classification;
}

std::vector<int> default_truncations(int cap, int first) {
  std::vector<int> out;
  for (int m = first; m <= cap; m *= 2) {
    out.push_back(m);
  }
  return out;
}

VarianceSeries variance_series(const OamSpectrum& spectrum, std::span<const int> m_maxes) {
  const auto ms = checked_truncations(m_maxes);
  VarianceSeries series;
  for (int m : ms) {
    series.entries.push_back({m, conditional_variance(spectrum, m)});
  }
  const auto analysis = analyze_convergence(series.entries);
  series.classification = analysis.classification;
  series.fit = analysis.fit;
  series.last_decade_change = analysis.last_decade_change;
  return series;
}

VarianceSeries variance_series(const ConditionalWavefunction& psi, std::span<const int> m_maxes) {
  const auto ms = checked_truncations(m_maxes);
  return variance_series(transform_numeric(psi, ms.back()), ms);
}

} // namespace oamepr
