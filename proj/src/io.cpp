#include "oamepr/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "oamepr/errors.hpp"

namespace oamepr::io {
namespace {

int parse_index(const std::string& key, const char* field) {
  int value = 0;
  const auto* end = key.data() + key.size();
  const auto [ptr, ec] = std::from_chars(key.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(field, fmt::format("'{}' is not an integer OAM index", key));
  }
  return value;
}

double number_at(const nlohmann::json& j, const char* key, const char* field) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ValidationError(field, fmt::format("missing numeric '{}'", key));
  }
  return j.at(key).get<double>();
}

} // namespace

std::string format_real(double v) { return fmt::format("{:.12g}", v); }

double round_real(double v) {
  if (!std::isfinite(v)) {
    return v;
  }
  return std::stod(format_real(v));
}

void write_density_csv(std::ostream& os, const AngularDensity& d, std::string_view params) {
  os << "# " << params << '\n' << "phi,p\n";
  for (std::size_t k = 0; k < d.n(); ++k) {
    os << format_real(d.phi(k)) << ',' << format_real(d[k]) << '\n';
  }
}

void write_conditional_csv(std::ostream& os, const AngularDensity& p,
                           const ConditionalWavefunction& psi, std::string_view params) {
  if (p.n() != psi.n()) {
    throw ValidationError("psi", "grid size does not match the density");
  }
  os << "# " << params << '\n' << "phi,p,psi\n";
  for (std::size_t k = 0; k < p.n(); ++k) {
    os << format_real(p.phi(k)) << ',' << format_real(p[k]) << ',' << format_real(psi[k]) << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const OamSpectrum& s, std::string_view params) {
  os << "# " << params << '\n' << "m,c,c_squared\n";
  for (int m = -s.m_max; m <= s.m_max; ++m) {
    const double c = s.amp(m);
    os << m << ',' << format_real(c) << ',' << format_real(c * c) << '\n';
  }
}

void write_series_csv(std::ostream& os, const VarianceSeries& s, std::string_view params) {
  os << "# " << params << '\n' << "m_max,variance,classification\n";
  const auto cls = to_string(s.classification);
  for (const auto& e : s.entries) {
    os << e.m_max << ',' << format_real(e.variance) << ',' << cls << '\n';
  }
}

nlohmann::ordered_json to_json(const ApertureSpec& spec) {
  nlohmann::ordered_json j;
  j["shape"] = std::string(to_string(spec.shape));
  j["w"] = round_real(spec.w);
  j["gamma"] = round_real(spec.gamma);
  j["tau"] = round_real(spec.tau);
  return j;
}

nlohmann::ordered_json to_json(const OamCorrelationModel& model) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(model.kind()));
  if (model.kind() == OamCorrelationModel::Kind::PerfectAnticorrelation) {
    j["pump_m"] = model.pump_m();
    return j;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::object();
  for (const auto& [m1, row] : model.rows()) {
    nlohmann::ordered_json cond = nlohmann::ordered_json::object();
    for (const auto& [m2, p] : row.conditional) {
      cond[std::to_string(m2)] = round_real(p);
    }
    rows[std::to_string(m1)] = {{"weight", round_real(row.weight)}, {"conditional", cond}};
  }
  j["table"] = rows;
  return j;
}

nlohmann::ordered_json to_json(const CriterionReport& report) {
  nlohmann::ordered_json j;
  j["lhs"] = round_real(report.lhs);
  j["rhs"] = round_real(report.rhs);
  j["verdict"] = report.verdict;
  j["classification"] = std::string(to_string(report.classification));

  const auto& in = report.inputs;
  nlohmann::ordered_json inputs;
  inputs["model"] = to_json(in.model);
  inputs["aperture1"] = to_json(in.aperture1);
  inputs["analyzer2"] = to_json(in.analyzer2);
  inputs["tau_grid"] = in.options.tau_grid;
  inputs["m_max"] = in.options.m_max;
  inputs["grid_n"] = in.options.grid_n;
  inputs["convolution"] = in.options.method == ConvolutionMethod::Direct ? "direct" : "fast";
  j["inputs"] = inputs;

  nlohmann::ordered_json taus = nlohmann::ordered_json::array();
  for (const auto& t : report.rhs_at_tau) {
    taus.push_back({{"tau", round_real(t.tau)}, {"variance", round_real(t.variance)}});
  }
  j["rhs_at_tau"] = taus;
  return j;
}

OamCorrelationModel parse_table_model(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ValidationError("table", "expected an object keyed by m1");
  }
  std::map<int, ConditionalRow> rows;
  for (const auto& [key, entry] : j.items()) {
    const int m1 = parse_index(key, "table");
    if (!entry.is_object()) {
      throw ValidationError("table", fmt::format("row '{}' is not an object", key));
    }
    ConditionalRow row;
    row.weight = number_at(entry, "weight", "weight");
    if (!entry.contains("conditional") || !entry.at("conditional").is_object()) {
      throw ValidationError("conditional", fmt::format("row '{}' lacks a conditional map", key));
    }
    for (const auto& [k2, p] : entry.at("conditional").items()) {
      if (!p.is_number()) {
        throw ValidationError("conditional", fmt::format("P[{} | {}] is not a number", k2, key));
      }
      row.conditional[parse_index(k2, "conditional")] = p.get<double>();
    }
    rows[m1] = std::move(row);
  }
  return OamCorrelationModel::table(std::move(rows));
}

OamCorrelationModel load_table_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("model", fmt::format("cannot open table file '{}'", path.string()));
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("model", fmt::format("'{}' is not valid JSON: {}", path.string(),
                                               e.what()));
  }
  return parse_table_model(j);
}

} // namespace oamepr::io
