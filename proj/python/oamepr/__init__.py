"""Angular EPR toolkit: aperture densities, OAM spectra and the steering criterion."""

import json

from ._core import (
    ApertureSpec,
    ComputationError,
    DomainError,
    RangeError,
    Shape,
    ValidationError,
    conditional_variance,
    convolve,
    evaluate_json,
    fresnel_c2,
    fresnel_s2,
    gamma_upper,
    gauss_spectrum,
    grid,
    normalization,
    re_erf_complex,
    rect_conditional_density,
    rect_spectrum,
    sample,
    transform,
    variance_series,
)


def evaluate(model, aperture1, analyzer2, tau_grid=8, m_max=20, grid_n=512):
    """Criterion report as a dict with keys lhs, rhs, verdict, classification, inputs, rhs_at_tau."""
    return json.loads(evaluate_json(model, aperture1, analyzer2, tau_grid, m_max, grid_n))


__all__ = [
    "ApertureSpec",
    "ComputationError",
    "DomainError",
    "RangeError",
    "Shape",
    "ValidationError",
    "conditional_variance",
    "convolve",
    "evaluate",
    "fresnel_c2",
    "fresnel_s2",
    "gamma_upper",
    "gauss_spectrum",
    "grid",
    "normalization",
    "re_erf_complex",
    "rect_conditional_density",
    "rect_spectrum",
    "sample",
    "transform",
    "variance_series",
]
