#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oamepr/correlate.hpp"
#include "oamepr/spectrum.hpp"

namespace oamepr {

/// Largest imaginary part tolerated (and then discarded) when transforming a
/// real, even wavefunction.
inline constexpr double kMaxImaginaryResidue = 1e-10;

/// Largest truncation index supported by an n-point grid.
constexpr int max_truncation_for_grid(std::size_t n) noexcept { return static_cast<int>(n / 4); }

/// c_m = (2 pi)^{-1/2} \int e^{i m phi} psi(phi) dphi by the periodic
/// rectangle rule on the wavefunction grid, for |m| <= m_max.
/// Throws ValidationError if m_max exceeds n/4 and ComputationError if the
/// imaginary part of any amplitude exceeds kMaxImaginaryResidue.
OamSpectrum transform_numeric(const ConditionalWavefunction& psi, int m_max);

/// Complex amplitudes of an arbitrary-phase wavefunction on an n-point grid,
/// index order m + m_max.
std::vector<std::complex<double>> transform_complex(std::span<const std::complex<double>> psi,
                                                    int m_max);

/// Closed-form amplitude of sqrt of the rect-rect trapezoid:
///   c_m = [sin(|m| D1) C2(|m| (D1 - D2)) - cos(|m| D1) S2(|m| (D1 - D2))]
///         / (sqrt(D1^2 - D2^2) |m|^{3/2}),
/// with the m = 0 value taken from the direct integral of the wavefunction.
/// Requires 0 < w2 <= w1 and w1 + w2 <= 2 pi (arguments are swapped if
/// w2 > w1).
double rect_amplitude_analytic(double w1, double w2, int m);
OamSpectrum rect_spectrum_analytic(double w1, double w2, int m_max);

/// Amplitude of sqrt of two untruncated Gaussians convolved, keeping the
/// truncation factors only in the prefactor.
double gauss_amplitude_approx(double w1, double w2, int m);
OamSpectrum gauss_spectrum_approx(double w1, double w2, int m_max);

/// (2 pi)^{-1/2} \int e^{i m phi} [P1 * P2](phi) dphi for two truncated
/// Gaussians, from the convolution theorem. Uses the exp(-b^2)-scaled real
/// part of the complex error function so large |m| does not overflow.
double gauss_density_transform_analytic(double w1, double w2, int m);

/// Variance of m under |c_m|^2 / sum |c|^2 for |m| <= m_max.
/// Throws ComputationError for an all-zero spectrum.
double conditional_variance(const OamSpectrum& spectrum);

/// As above with probabilities |c_m|^2 given directly in index order m + m_max.
double conditional_variance(std::span<const double> weights, int m_max);

/// Variance at a smaller truncation of the same spectrum.
double conditional_variance(const OamSpectrum& spectrum, int m_max);

enum class Convergence { Converged, LogDivergent, Undetermined };

std::string_view to_string(Convergence c) noexcept;

/// Thresholds used by classify_convergence.
inline constexpr double kConvergedRelativeChange = 0.01;
inline constexpr double kLogSlopeThreshold = 0.05;
inline constexpr double kLogRSquaredThreshold = 0.98;
inline constexpr std::size_t kMinSeriesEntries = 6;

struct VarianceEntry {
  int m_max = 0;
  double variance = 0.0;
};

/// Least-squares fit variance = intercept + slope * ln(M).
struct SeriesFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_rms = 0.0;
};

struct ConvergenceAnalysis {
  Convergence classification = Convergence::Undetermined;
  double last_decade_change = 0.0; // (max - min) / |last| over M >= M_last / 10
  SeriesFit fit;
};

/// Converged if the last-decade relative change is below 1 %; LogDivergent
/// if the fit against ln M has slope > 0.05 and R^2 > 0.98; Undetermined
/// otherwise. Needs >= 6 entries with strictly increasing M spanning a decade.
ConvergenceAnalysis analyze_convergence(std::span<const VarianceEntry> entries);
Convergence classify_convergence(std::span<const VarianceEntry> entries);

struct VarianceSeries {
  std::vector<VarianceEntry> entries;
  Convergence classification = Convergence::Undetermined;
  std::optional<SeriesFit> fit;
  double last_decade_change = 0.0;
};

/// Truncation indices first, 2 first, 4 first, ... not exceeding `cap`.
std::vector<int> default_truncations(int cap, int first = 1);

/// First truncation index of the default analytic rect series; below it the
/// variance has not yet entered its logarithmic regime.
inline constexpr int kRectSeriesFirstTruncation = 4;

VarianceSeries variance_series(const ConditionalWavefunction& psi, std::span<const int> m_maxes);

/// Series from a precomputed spectrum (e.g. the analytic rect amplitudes).
VarianceSeries variance_series(const OamSpectrum& spectrum, std::span<const int> m_maxes);

} // namespace oamepr
