#pragma once

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "oamepr/aperture.hpp"
#include "oamepr/correlate.hpp"
#include "oamepr/oam.hpp"

namespace oamepr {

/// Tolerance on the normalization of table weights and conditionals.
inline constexpr double kTableNormTolerance = 1e-9;

/// One conditioning outcome m1: its weight |c_{m1}|^2 and P[m2 | m1].
struct ConditionalRow {
  double weight = 0.0;
  std::map<int, double> conditional;
};

/// Model of the measured OAM correlations P[m2 | m1].
class OamCorrelationModel {
public:
  enum class Kind { PerfectAnticorrelation, Table };

  /// m2 = pump_m - m1 with certainty.
  static OamCorrelationModel perfect(int pump_m = 0);

  /// Throws ValidationError if the weights or any conditional fail to sum to
  /// one within kTableNormTolerance, or if a probability is negative.
  static OamCorrelationModel table(std::map<int, ConditionalRow> rows);

  Kind kind() const noexcept { return kind_; }
  int pump_m() const noexcept { return pump_m_; }
  const std::map<int, ConditionalRow>& rows() const noexcept { return rows_; }

  /// Variance of m2 given m1 under this model.
  double conditional_variance(int m1) const;

private:
  Kind kind_ = Kind::PerfectAnticorrelation;
  int pump_m_ = 0;
  std::map<int, ConditionalRow> rows_;
};

std::string_view to_string(OamCorrelationModel::Kind k) noexcept;

/// <var[m2 | m1]>_{m1}, weighted by |c_{m1}|^2. Zero for perfect
/// anticorrelation.
double lhs_average(const OamCorrelationModel& model);

struct TauVariance {
  double tau = 0.0;
  double variance = 0.0;
};

struct RhsResult {
  double rhs = 0.0;
  std::vector<TauVariance> rhs_at_tau;
};

/// <min var[m2 | P1(phi1; tau1)]>_{tau1} under perfect angle correlation.
/// For each of `tau_grid` orientations tau1 = aperture1.tau + 2 pi k / tau_grid
/// the pipeline is: rotate P1 -> convolve with P2 -> sqrt -> transform ->
/// conditional variance at m_max. Orientations are weighted uniformly.
RhsResult rhs_average(const ApertureSpec& aperture1, const ApertureSpec& analyzer2, int tau_grid,
                      int m_max, std::size_t grid_n,
                      ConvolutionMethod method = ConvolutionMethod::Direct);

struct CriterionOptions {
  int tau_grid = 8;
  int m_max = 20;
  std::size_t grid_n = 512;
  ConvolutionMethod method = ConvolutionMethod::Direct;
};

struct CriterionInputs {
  OamCorrelationModel model;
  ApertureSpec aperture1;
  ApertureSpec analyzer2;
  CriterionOptions options;
};

struct CriterionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool verdict = false; // lhs < rhs
  Convergence classification = Convergence::Undetermined;
  ConvergenceAnalysis convergence;
  CriterionInputs inputs;
  std::vector<TauVariance> rhs_at_tau;
};

/// Truncation series used to classify the inferred variance of an aperture
/// pair: the closed-form rect amplitudes up to M = 1024 when both apertures
/// are rectangular, otherwise the numeric transform up to grid_n / 4 of the
/// pair centred at zero.
VarianceSeries pair_variance_series(const ApertureSpec& aperture1, const ApertureSpec& analyzer2,
                                    std::size_t grid_n,
                                    ConvolutionMethod method = ConvolutionMethod::Direct);

/// Evaluates lhs < rhs. A log-divergent rhs is still reported at m_max, with
/// the classification attached.
CriterionReport evaluate(const OamCorrelationModel& model, const ApertureSpec& aperture1,
                         const ApertureSpec& analyzer2, const CriterionOptions& opts = {});

} // namespace oamepr
