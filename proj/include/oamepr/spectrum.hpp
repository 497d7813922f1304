#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace oamepr {

enum class Provenance { Numeric, AnalyticRect, GaussApprox };

std::string_view to_string(Provenance p) noexcept;

/// Real OAM amplitudes c_m for m = -m_max..m_max, stored in index order
/// m + m_max.
struct OamSpectrum {
  int m_max = 0;
  std::vector<double> amps;
  Provenance provenance = Provenance::Numeric;
  std::size_t grid_n = 0; // grid used for Numeric spectra, 0 otherwise

  double amp(int m) const { return amps.at(static_cast<std::size_t>(m + m_max)); }

  /// sum of c_m^2 over |m| <= m_max.
  double norm_squared() const noexcept;
};

} // namespace oamepr
