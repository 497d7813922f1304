#include <algorithm>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oamepr/aperture.hpp"
#include "oamepr/correlate.hpp"
#include "oamepr/criterion.hpp"
#include "oamepr/errors.hpp"
#include "oamepr/io.hpp"
#include "oamepr/oam.hpp"
#include "oamepr/specfun.hpp"

namespace py = pybind11;
using namespace oamepr;

namespace {

py::array_t<double> to_array(std::span<const double> values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) {
    throw ValidationError("values", "expected a one-dimensional array");
  }
  return {a.data(), a.data() + a.size()};
}

AngularDensity density_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return AngularDensity(to_vector(a), "python");
}

ConvolutionMethod method_from(const std::string& name) {
  if (name == "direct") {
    return ConvolutionMethod::Direct;
  }
  if (name == "fast") {
    return ConvolutionMethod::Fast;
  }
  throw ValidationError("method", "expected 'direct' or 'fast'");
}

OamCorrelationModel model_from(const py::object& model) {
  if (model.is_none()) {
    return OamCorrelationModel::perfect();
  }
  if (py::isinstance<py::str>(model)) {
    if (model.cast<std::string>() == "perfect") {
      return OamCorrelationModel::perfect();
    }
    throw ValidationError("model", "expected 'perfect' or a table mapping");
  }
  const auto json_text = py::module_::import("json").attr("dumps")(model).cast<std::string>();
  return io::parse_table_model(nlohmann::json::parse(json_text));
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Angular EPR toolkit: aperture densities, OAM spectra and the steering criterion";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_OverflowError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ComputationError>(m, "ComputationError", PyExc_RuntimeError);

  m.def("fresnel_c2", &specfun::fresnel_c2, py::arg("x"));
  m.def("fresnel_s2", &specfun::fresnel_s2, py::arg("x"));
  m.def("re_erf_complex", &specfun::re_erf_complex, py::arg("a"), py::arg("b"));
  m.def("gamma_upper", &specfun::gamma_upper, py::arg("a"), py::arg("x"));

  py::enum_<Shape>(m, "Shape")
      .value("RECT", Shape::Rect)
      .value("GAUSS", Shape::TruncGauss)
      .value("TSG", Shape::TruncSuperGauss);

  py::class_<ApertureSpec>(m, "ApertureSpec")
      .def(py::init<>())
      .def_static("rect", &ApertureSpec::rect, py::arg("w"), py::arg("tau") = 0.0)
      .def_static("gauss", &ApertureSpec::gauss, py::arg("w"), py::arg("tau") = 0.0)
      .def_static("super_gauss", &ApertureSpec::super_gauss, py::arg("w"), py::arg("gamma"),
                  py::arg("tau") = 0.0)
      .def_readwrite("shape", &ApertureSpec::shape)
      .def_readwrite("w", &ApertureSpec::w)
      .def_readwrite("gamma", &ApertureSpec::gamma)
      .def_readwrite("tau", &ApertureSpec::tau)
      .def("__repr__", &ApertureSpec::describe);

  m.def(
      "normalization", [](const ApertureSpec& s) { return Aperture(s).normalization(); },
      py::arg("spec"));
  m.def(
      "sample",
      [](const ApertureSpec& s, std::size_t n) { return to_array(sample(Aperture(s), n).values()); },
      py::arg("spec"), py::arg("n") = 512, "Normalized aperture density on the n-point grid");
  m.def(
      "grid",
      [](std::size_t n) {
        require_grid_size(n);
        std::vector<double> phi(n);
        for (std::size_t k = 0; k < n; ++k) {
          phi[k] = grid_angle(k, n);
        }
        return to_array(phi);
      },
      py::arg("n") = 512);

  m.def(
      "convolve",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p1,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& p2,
         const std::string& method) {
        return to_array(
            convolve_periodic(density_from(p1), density_from(p2), method_from(method)).values());
      },
      py::arg("p1"), py::arg("p2"), py::arg("method") = "direct");
  m.def(
      "rect_conditional_density", &rect_conditional_density, py::arg("w1"), py::arg("w2"),
      py::arg("phi"));

  m.def(
      "transform",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& density, int m_max) {
        const auto psi = conditional_wavefunction(density_from(density));
        return to_array(transform_numeric(psi, m_max).amps);
      },
      py::arg("density"), py::arg("m_max"),
      "Amplitudes c_m, m = -m_max..m_max, of sqrt(density)");
  m.def(
      "rect_spectrum", [](double w1, double w2, int m_max) {
        return to_array(rect_spectrum_analytic(w1, w2, m_max).amps);
      },
      py::arg("w1"), py::arg("w2"), py::arg("m_max"));
  m.def(
      "gauss_spectrum", [](double w1, double w2, int m_max) {
        return to_array(gauss_spectrum_approx(w1, w2, m_max).amps);
      },
      py::arg("w1"), py::arg("w2"), py::arg("m_max"));
  m.def(
      "conditional_variance",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& amps) {
        const auto a = to_vector(amps);
        if (a.size() % 2 == 0) {
          throw ValidationError("amps", "expected 2 m_max + 1 amplitudes");
        }
        std::vector<double> w(a.size());
        std::transform(a.begin(), a.end(), w.begin(), [](double c) { return c * c; });
        return conditional_variance(w, static_cast<int>(a.size() / 2));
      },
      py::arg("amps"));

  m.def(
      "variance_series",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& density,
         std::vector<int> m_maxes) {
        const auto psi = conditional_wavefunction(density_from(density));
        if (m_maxes.empty()) {
          m_maxes = default_truncations(max_truncation_for_grid(psi.n()));
        }
        const auto series = variance_series(psi, m_maxes);
        py::list entries;
        for (const auto& e : series.entries) {
          entries.append(py::make_tuple(e.m_max, e.variance));
        }
        py::dict out;
        out["entries"] = entries;
        out["classification"] = std::string(to_string(series.classification));
        out["last_decade_change"] = series.last_decade_change;
        return out;
      },
      py::arg("density"), py::arg("m_maxes") = std::vector<int>{});

  m.def(
      "evaluate_json",
      [](const py::object& model, const ApertureSpec& a1, const ApertureSpec& a2, int tau_grid,
         int m_max, std::size_t grid_n) {
        CriterionOptions opts;
        opts.tau_grid = tau_grid;
        opts.m_max = m_max;
        opts.grid_n = grid_n;
        const auto parsed = model_from(model);
        py::gil_scoped_release release;
        return io::to_json(evaluate(parsed, a1, a2, opts)).dump();
      },
      py::arg("model"), py::arg("aperture1"), py::arg("analyzer2"), py::arg("tau_grid") = 8,
      py::arg("m_max") = 20, py::arg("grid_n") = 512);
}
