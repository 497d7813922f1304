#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "oamepr/correlate.hpp"
#include "oamepr/criterion.hpp"
#include "oamepr/grid.hpp"
#include "oamepr/oam.hpp"

namespace oamepr::io {

/// Reals in every emitted file carry 12 significant digits.
std::string format_real(double v);

/// Round to 12 significant digits (JSON numbers then print in that form).
double round_real(double v);

// Each CSV starts with "# <params>" followed by the column header.

/// phi,p
void write_density_csv(std::ostream& os, const AngularDensity& d, std::string_view params);

/// phi,p,psi
void write_conditional_csv(std::ostream& os, const AngularDensity& p,
                           const ConditionalWavefunction& psi, std::string_view params);

/// m,c,c_squared
void write_spectrum_csv(std::ostream& os, const OamSpectrum& s, std::string_view params);

/// m_max,variance,classification
void write_series_csv(std::ostream& os, const VarianceSeries& s, std::string_view params);

nlohmann::ordered_json to_json(const ApertureSpec& spec);
nlohmann::ordered_json to_json(const OamCorrelationModel& model);

/// Keys in order: lhs, rhs, verdict, classification, inputs, rhs_at_tau.
nlohmann::ordered_json to_json(const CriterionReport& report);

/// Table model from {"<m1>": {"weight": w, "conditional": {"<m2>": p, ...}}, ...}.
/// Throws ValidationError on malformed input or failed normalization.
OamCorrelationModel parse_table_model(const nlohmann::json& j);
OamCorrelationModel load_table_model(const std::filesystem::path& path);

} // namespace oamepr::io
