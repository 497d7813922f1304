#include "oamepr/criterion.hpp"

#include <cmath>
#include <future>

#include <fmt/format.h>

#include "oamepr/errors.hpp"

namespace oamepr {
namespace {

constexpr int kRectSeriesCap = 1024;

double inferred_variance(const Aperture& a1, const Aperture& a2, int m_max, std::size_t grid_n,
                         ConvolutionMethod method) {
  const auto p = convolve_periodic(sample(a1, grid_n), sample(a2, grid_n), method);
  const auto psi = conditional_wavefunction(p);
  // The pipeline is centred on tau1, so amplitudes carry a phase; only
  // |c_m|^2 enters the variance.
  std::vector<std::complex<double>> values(psi.values().begin(), psi.values().end());
  const auto c = transform_complex(values, m_max);
  std::vector<double> weights(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    weights[i] = std::norm(c[i]);
  }
  return conditional_variance(weights, m_max);
}

} // namespace

OamCorrelationModel OamCorrelationModel::perfect(int pump_m) {
  OamCorrelationModel m;
  m.kind_ = Kind::PerfectAnticorrelation;
  m.pump_m_ = pump_m;
  return m;
}

OamCorrelationModel OamCorrelationModel::table(std::map<int, ConditionalRow> rows) {
  if (rows.empty()) {
    throw ValidationError("table", "at least one m1 row is required");
  }
  double total = 0.0;
  for (const auto& [m1, row] : rows) {
    if (!(row.weight >= 0.0)) {
      throw ValidationError("weight", fmt::format("negative weight for m1 = {}", m1));
    }
    total += row.weight;
    if (row.conditional.empty()) {
      throw ValidationError("conditional", fmt::format("empty conditional for m1 = {}", m1));
    }
    double sum = 0.0;
    for (const auto& [m2, p] : row.conditional) {
      if (!(p >= 0.0)) {
        throw ValidationError("conditional",
                              fmt::format("negative probability P[{} | {}]", m2, m1));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kTableNormTolerance) {
      throw ValidationError("conditional",
                            fmt::format("P[m2 | {}] sums to {:.12g}, not 1", m1, sum));
    }
  }
  if (std::abs(total - 1.0) > kTableNormTolerance) {
    throw ValidationError("weight", fmt::format("weights sum to {:.12g}, not 1", total));
  }
  OamCorrelationModel m;
  m.kind_ = Kind::Table;
  m.rows_ = std::move(rows);
  return m;
}

double OamCorrelationModel::conditional_variance(int m1) const {
  if (kind_ == Kind::PerfectAnticorrelation) {
    return 0.0;
  }
  const auto it = rows_.find(m1);
  if (it == rows_.end()) {
    throw ValidationError("m1", fmt::format("no conditional for m1 = {}", m1));
  }
  double mean = 0.0;
  double second = 0.0;
  for (const auto& [m2, p] : it->second.conditional) {
    mean += p * m2;
    second += p * m2 * static_cast<double>(m2);
  }
  return std::max(0.0, second - mean * mean);
}

std::string_view to_string(OamCorrelationModel::Kind k) noexcept {
  return k == OamCorrelationModel::Kind::PerfectAnticorrelation ? "perfect" : "table";
}

double lhs_average(const OamCorrelationModel& model) {
  if (model.kind() == OamCorrelationModel::Kind::PerfectAnticorrelation) {
    return 0.0;
  }
  double acc = 0.0;
  for (const auto& [m1, row] : model.rows()) {
    acc += row.weight * model.conditional_variance(m1);
  }
  return acc;
}

RhsResult rhs_average(const ApertureSpec& aperture1, const ApertureSpec& analyzer2, int tau_grid,
                      int m_max, std::size_t grid_n, ConvolutionMethod method) {
  if (tau_grid < 1) {
    throw ValidationError("tau_grid", "at least one orientation is required");
  }
  require_grid_size(grid_n, "grid_n");
  // Only |c_m|^2 enters, so the pipeline runs in the analyzer frame; a global
  // rotation of both apertures then leaves the sampled grids unchanged.
  const Aperture base(aperture1);
  ApertureSpec centred = analyzer2;
  centred.tau = 0.0;
  const Aperture a2(centred);

  std::vector<double> taus(static_cast<std::size_t>(tau_grid));
  std::vector<std::future<double>> jobs;
  jobs.reserve(taus.size());
  for (int k = 0; k < tau_grid; ++k) {
    taus[static_cast<std::size_t>(k)] =
        wrap_angle(aperture1.tau + kTwoPi * static_cast<double>(k) / tau_grid);
    const Aperture a1 = base.rotated_to(wrap_angle(aperture1.tau - analyzer2.tau +
                                                   kTwoPi * static_cast<double>(k) / tau_grid));
    jobs.push_back(std::async(std::launch::async, [a1, &a2, m_max, grid_n, method] {
      return inferred_variance(a1, a2, m_max, grid_n, method);
    }));
  }

  RhsResult out;
  double acc = 0.0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const double v = jobs[k].get();
    out.rhs_at_tau.push_back({taus[k], v});
    acc += v;
  }
  out.rhs = acc / static_cast<double>(tau_grid);
  return out;
}

VarianceSeries pair_variance_series(const ApertureSpec& aperture1, const ApertureSpec& analyzer2,
                                    std::size_t grid_n, ConvolutionMethod method) {
  ApertureSpec s1 = aperture1;
  ApertureSpec s2 = analyzer2;
  s1.tau = 0.0;
  s2.tau = 0.0;
  const Aperture a1(s1);
  const Aperture a2(s2);
  if (s1.shape == Shape::Rect && s2.shape == Shape::Rect) {
    const auto spectrum = rect_spectrum_analytic(s1.w, s2.w, kRectSeriesCap);
    return variance_series(spectrum, default_truncations(kRectSeriesCap, kRectSeriesFirstTruncation));
  }
  const auto psi =
      conditional_wavefunction(convolve_periodic(sample(a1, grid_n), sample(a2, grid_n), method));
  return variance_series(psi, default_truncations(max_truncation_for_grid(grid_n)));
}

CriterionReport evaluate(const OamCorrelationModel& model, const ApertureSpec& aperture1,
                         const ApertureSpec& analyzer2, const CriterionOptions& opts) {
  CriterionReport report;
  report.inputs = {model, aperture1, analyzer2, opts};
  report.lhs = lhs_average(model);
  const auto rhs =
      rhs_average(aperture1, analyzer2, opts.tau_grid, opts.m_max, opts.grid_n, opts.method);
  report.rhs = rhs.rhs;
  report.rhs_at_tau = rhs.rhs_at_tau;
  report.verdict = report.lhs < report.rhs;

  const auto series = pair_variance_series(aperture1, analyzer2, opts.grid_n, opts.method);
  report.classification = series.classification;
  report.convergence.classification = series.classification;
  report.convergence.last_decade_change = series.last_decade_change;
  if (series.fit) {
    report.convergence.fit = *series.fit;
  }
  return report;
}

} // namespace oamepr
