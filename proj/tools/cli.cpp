#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "oamepr/correlate.hpp"
#include "oamepr/criterion.hpp"
#include "oamepr/errors.hpp"
#include "oamepr/io.hpp"
#include "oamepr/oam.hpp"

namespace oamepr::cli {
namespace {

constexpr int kDefaultSpectrumMax = 20;
constexpr int kAnalyticSeriesCap = 1024;
constexpr double kMinSweepGamma = 1.0;
constexpr double kMaxSweepGamma = 100.0;

struct Emission {
  std::string suffix; // empty for the primary file
  std::string body;
};

struct FamilyFlags {
  std::string family = "rect";
  std::string width;
};

Shape parse_shape(const std::string& name) {
  if (name == "rect") {
    return Shape::Rect;
  }
  if (name == "gauss") {
    return Shape::TruncGauss;
  }
  if (name == "tsg") {
    return Shape::TruncSuperGauss;
  }
  throw ValidationError("family", fmt::format("unknown family '{}'", name));
}

ApertureSpec make_spec(Shape shape, double w, double gamma) {
  switch (shape) {
  case Shape::Rect:
    return ApertureSpec::rect(w);
  case Shape::TruncGauss:
    return ApertureSpec::gauss(w);
  case Shape::TruncSuperGauss:
    return ApertureSpec::super_gauss(w, gamma);
  }
  return ApertureSpec::rect(w);
}

bool is_pair(const RunConfig& cfg, Shape shape) {
  return cfg.family1.shape == shape && cfg.family2.shape == shape;
}

int single_m_max(const RunConfig& cfg, int fallback) {
  if (cfg.m_max.empty()) {
    return fallback;
  }
  if (cfg.m_max.size() != 1) {
    throw ValidationError("m-max", "this command takes a single truncation index");
  }
  return cfg.m_max.front();
}

void require_truncation(int m_max, int cap) {
  if (m_max < 1 || m_max > cap) {
    throw ValidationError("m-max", fmt::format("{} is outside [1, {}]", m_max, cap));
  }
}

ConditionalWavefunction pair_wavefunction(const ApertureSpec& s1, const ApertureSpec& s2,
                                          std::size_t n) {
  return conditional_wavefunction(
      convolve_periodic(sample(Aperture(s1), n), sample(Aperture(s2), n)));
}

std::string series_suffix(double gamma) { return fmt::format("_g{:g}", gamma); }

std::vector<Emission> run_aperture(const RunConfig& cfg) {
  std::ostringstream a1;
  std::ostringstream a2;
  io::write_density_csv(a1, sample(Aperture(cfg.family1), cfg.grid_n),
                        param_record(cfg, "aperture1"));
  io::write_density_csv(a2, sample(Aperture(cfg.family2), cfg.grid_n),
                        param_record(cfg, "analyzer2"));
  return {{"", a1.str()}, {"_analyzer", a2.str()}};
}

std::vector<Emission> run_convolve(const RunConfig& cfg) {
  const auto p = convolve_periodic(sample(Aperture(cfg.family1), cfg.grid_n),
                                   sample(Aperture(cfg.family2), cfg.grid_n));
  std::ostringstream os;
  io::write_conditional_csv(os, p, conditional_wavefunction(p), param_record(cfg, "conditional"));
  return {{"", os.str()}};
}

std::optional<OamSpectrum> analytic_spectrum(const RunConfig& cfg, int m_max) {
  if (is_pair(cfg, Shape::Rect)) {
    return rect_spectrum_analytic(cfg.family1.w, cfg.family2.w, m_max);
  }
  if (is_pair(cfg, Shape::TruncGauss)) {
    return gauss_spectrum_approx(cfg.family1.w, cfg.family2.w, m_max);
  }
  return std::nullopt;
}

std::vector<Emission> run_spectrum(const RunConfig& cfg) {
  const int m_max = single_m_max(cfg, kDefaultSpectrumMax);
  auto analytic = analytic_spectrum(cfg, m_max);
  if (cfg.source == "analytic") {
    if (!analytic) {
      throw ValidationError("source", "analytic amplitudes exist only for rect or gauss pairs");
    }
    std::ostringstream os;
    io::write_spectrum_csv(os, *analytic, param_record(cfg, "spectrum"));
    return {{"", os.str()}};
  }
  require_truncation(m_max, max_truncation_for_grid(cfg.grid_n));
  const auto numeric = transform_numeric(pair_wavefunction(cfg.family1, cfg.family2, cfg.grid_n),
                                         m_max);
  std::ostringstream os;
  io::write_spectrum_csv(os, numeric, param_record(cfg, "spectrum"));
  std::vector<Emission> files{{"", os.str()}};
  if (analytic) {
    RunConfig companion = cfg;
    companion.source = "analytic";
    std::ostringstream as;
    io::write_spectrum_csv(as, *analytic, param_record(companion, "spectrum"));
    files.push_back({"_analytic", as.str()});
  }
  return files;
}

std::vector<int> truncations(const RunConfig& cfg, int cap, int first = 1) {
  auto list = cfg.m_max.empty() ? default_truncations(cap, first) : cfg.m_max;
  for (const int m : list) {
    require_truncation(m, cap);
  }
  return list;
}

std::vector<Emission> run_variance_series(const RunConfig& cfg) {
  VarianceSeries series;
  if (cfg.source == "analytic") {
    const auto list = truncations(cfg, kAnalyticSeriesCap, kRectSeriesFirstTruncation);
    const int top = *std::max_element(list.begin(), list.end());
    const auto spectrum = analytic_spectrum(cfg, top);
    if (!spectrum) {
      throw ValidationError("source", "analytic amplitudes exist only for rect or gauss pairs");
    }
    series = variance_series(*spectrum, list);
  } else {
    const auto list = truncations(cfg, max_truncation_for_grid(cfg.grid_n));
    series = variance_series(pair_wavefunction(cfg.family1, cfg.family2, cfg.grid_n), list);
  }
  std::ostringstream os;
  io::write_series_csv(os, series, param_record(cfg, "series"));
  return {{"", os.str()}};
}

std::vector<Emission> run_gamma_sweep(const RunConfig& cfg) {
  for (const double g : cfg.gammas) {
    if (!(g >= kMinSweepGamma && g <= kMaxSweepGamma)) {
      throw ValidationError("gammas", fmt::format("{:g} is outside [1, 100]", g));
    }
  }
  const auto list = truncations(cfg, max_truncation_for_grid(cfg.grid_n));

  std::vector<std::future<VarianceSeries>> jobs;
  jobs.reserve(cfg.gammas.size());
  for (const double g : cfg.gammas) {
    jobs.push_back(std::async(std::launch::async, [&cfg, &list, g] {
      return variance_series(pair_wavefunction(ApertureSpec::super_gauss(cfg.family1.w, g),
                                               ApertureSpec::super_gauss(cfg.family2.w, g),
                                               cfg.grid_n),
                             list);
    }));
  }

  std::ostringstream table;
  table << "# " << param_record(cfg, "gamma-table") << '\n'
        << "gamma,classification,variance_at_max,last_decade_change,slope,r_squared\n";
  std::vector<Emission> files(1);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const double g = cfg.gammas[i];
    const auto series = jobs[i].get();
    const auto fit = series.fit.value_or(SeriesFit{});
    table << io::format_real(g) << ',' << to_string(series.classification) << ','
          << io::format_real(series.entries.back().variance) << ','
          << io::format_real(series.last_decade_change) << ',' << io::format_real(fit.slope)
          << ',' << io::format_real(fit.r_squared) << '\n';

    RunConfig row = cfg;
    row.family1 = ApertureSpec::super_gauss(cfg.family1.w, g);
    row.family2 = ApertureSpec::super_gauss(cfg.family2.w, g);
    std::ostringstream os;
    io::write_series_csv(os, series, param_record(row, "series"));
    files.push_back({series_suffix(g), os.str()});
  }
  files.front().body = table.str();
  return files;
}

OamCorrelationModel parse_model(const std::string& spec) {
  if (spec == "perfect") {
    return OamCorrelationModel::perfect();
  }
  constexpr std::string_view kTablePrefix = "table:";
  if (spec.rfind(kTablePrefix, 0) == 0 && spec.size() > kTablePrefix.size()) {
    return io::load_table_model(spec.substr(kTablePrefix.size()));
  }
  throw ValidationError("model", fmt::format("expected 'perfect' or 'table:<path>', got '{}'",
                                             spec));
}

std::vector<Emission> run_criterion(const RunConfig& cfg) {
  const auto model = parse_model(cfg.model);
  CriterionOptions opts;
  opts.tau_grid = cfg.tau_grid;
  opts.grid_n = cfg.grid_n;
  opts.m_max = single_m_max(cfg, opts.m_max);
  require_truncation(opts.m_max, max_truncation_for_grid(cfg.grid_n));
  if (opts.tau_grid < 1) {
    throw ValidationError("tau-grid", "must be at least 1");
  }
  const auto report = evaluate(model, cfg.family1, cfg.family2, opts);

  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "# " << param_record(cfg, "criterion") << " lhs=" << io::format_real(report.lhs)
       << " rhs=" << io::format_real(report.rhs) << " verdict=" << (report.verdict ? "true" : "false")
       << " classification=" << to_string(report.classification) << '\n'
       << "tau,variance\n";
    for (const auto& t : report.rhs_at_tau) {
      os << io::format_real(t.tau) << ',' << io::format_real(t.variance) << '\n';
    }
  } else {
    os << io::to_json(report).dump(2) << '\n';
  }
  return {{"", os.str()}};
}

std::vector<Emission> dispatch(const RunConfig& cfg) {
  if (cfg.format == "json" && cfg.command != "criterion") {
    throw ValidationError("format", fmt::format("'{}' emits csv only", cfg.command));
  }
  if (cfg.command == "aperture") {
    return run_aperture(cfg);
  }
  if (cfg.command == "convolve") {
    return run_convolve(cfg);
  }
  if (cfg.command == "spectrum") {
    return run_spectrum(cfg);
  }
  if (cfg.command == "variance-series") {
    return run_variance_series(cfg);
  }
  if (cfg.command == "gamma-sweep") {
    return run_gamma_sweep(cfg);
  }
  return run_criterion(cfg);
}

void emit(const RunConfig& cfg, const std::vector<Emission>& files, std::ostream& out) {
  if (cfg.out.empty()) {
    for (const auto& f : files) {
      out << f.body;
    }
    out.flush();
    return;
  }
  for (const auto& f : files) {
    const auto path = f.suffix.empty() ? cfg.out : companion_path(cfg.out, f.suffix);
    std::ofstream os(path, std::ios::binary);
    os << f.body;
    if (!os) {
      throw std::runtime_error(fmt::format("cannot write '{}'", path));
    }
  }
}

void add_common_options(CLI::App& sub, RunConfig& cfg, FamilyFlags& f1, FamilyFlags& f2,
                        double& gamma, std::size_t& grid_n) {
  const std::vector<std::string> families{"rect", "gauss", "tsg"};
  sub.add_option("--family1", f1.family, "Aperture family for photon 1")
      ->check(CLI::IsMember(families));
  sub.add_option("--family2", f2.family, "Analyzer family for photon 2")
      ->check(CLI::IsMember(families));
  sub.add_option("--w1", f1.width, "Width of aperture 1 (real or multiple of pi, e.g. 0.25pi)");
  sub.add_option("--w2", f2.width, "Width of analyzer 2 (real or multiple of pi)");
  sub.add_option("--gamma", gamma, "Super Gaussian exponent for tsg families");
  sub.add_option("--grid-n", grid_n, "Angular grid size (power of two >= 16)");
  sub.add_option("--m-max", cfg.m_max, "Truncation index, or comma separated list")
      ->delimiter(',');
  sub.add_option("--tau-grid", cfg.tau_grid, "Number of aperture orientations averaged");
  sub.add_option("--model", cfg.model, "OAM correlation model: perfect or table:<path>");
  sub.add_option("--out", cfg.out, "Output file (default stdout)");
  sub.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--gammas", cfg.gammas, "Exponents for gamma-sweep")->delimiter(',');
  sub.add_option("--source", cfg.source, "Amplitude source")
      ->check(CLI::IsMember({"numeric", "analytic"}));
}

} // namespace

double parse_width(std::string_view text, const char* field) {
  std::string_view number = text;
  double scale = 1.0;
  if (number.size() >= 2 && number.substr(number.size() - 2) == "pi") {
    number.remove_suffix(2);
    scale = kPi;
    if (number.empty()) {
      return kPi;
    }
  }
  double value = 0.0;
  const auto* end = number.data() + number.size();
  const auto [ptr, ec] = std::from_chars(number.data(), end, value);
  if (number.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError(field, fmt::format("'{}' is not a width", text));
  }
  return value * scale;
}

std::string companion_path(const std::string& path, std::string_view suffix) {
  const std::filesystem::path p(path);
  auto name = p.stem().string();
  name.append(suffix);
  name += p.extension().string();
  return (p.parent_path() / name).string();
}

std::string param_record(const RunConfig& cfg, std::string_view role) {
  const auto& a = cfg.family1;
  const auto& b = cfg.family2;
  std::string record = fmt::format(
      "command={} file={} family1={} w1={} gamma1={} tau1={} family2={} w2={} gamma2={} tau2={} "
      "grid_n={}",
      cfg.command, role, to_string(a.shape), io::format_real(a.w), io::format_real(a.gamma),
      io::format_real(a.tau), to_string(b.shape), io::format_real(b.w), io::format_real(b.gamma),
      io::format_real(b.tau), cfg.grid_n);
  if (!cfg.m_max.empty()) {
    record += fmt::format(" m_max={}", fmt::join(cfg.m_max, ";"));
  }
  if (cfg.command == "spectrum" || cfg.command == "variance-series") {
    record += fmt::format(" source={}", cfg.source);
  }
  if (cfg.command == "gamma-sweep") {
    std::vector<std::string> gs;
    for (const double g : cfg.gammas) {
      gs.push_back(io::format_real(g));
    }
    record += fmt::format(" gammas={}", fmt::join(gs, ";"));
  }
  if (cfg.command == "criterion") {
    record += fmt::format(" model={} tau_grid={}", cfg.model, cfg.tau_grid);
  }
  return record;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  FamilyFlags f1{"rect", "0.25pi"};
  FamilyFlags f2{"rect", "0.015625pi"};
  double gamma = 1.0;
  std::size_t grid_n = cfg.grid_n;

  CLI::App app{"Angular EPR toolkit: aperture densities, OAM spectra and the steering criterion",
               "oamepr"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"aperture", "Sample both apertures (phi,p)"},
      {"convolve", "Conditional density and wavefunction (phi,p,psi)"},
      {"spectrum", "OAM amplitudes of the conditional wavefunction (m,c,c_squared)"},
      {"variance-series", "Conditional OAM variance against truncation index"},
      {"gamma-sweep", "Variance series and classification per super Gaussian exponent"},
      {"criterion", "Evaluate the EPR steering criterion (JSON report)"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common_options(*sub, cfg, f1, f2, gamma, grid_n);
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    require_grid_size(grid_n, "grid-n");
    cfg.grid_n = grid_n;
    cfg.family1 = make_spec(parse_shape(f1.family), parse_width(f1.width, "w1"), gamma);
    cfg.family2 = make_spec(parse_shape(f2.family), parse_width(f2.width, "w2"), gamma);
    static_cast<void>(Aperture(cfg.family1));
    static_cast<void>(Aperture(cfg.family2));
    emit(cfg, dispatch(cfg), out);
  } catch (const ValidationError& e) {
    err << "oamepr: invalid " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "oamepr: precondition failed: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "oamepr: computation failed: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitOk;
}

} // namespace oamepr::cli
