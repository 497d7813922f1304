import json
import math
import os
import subprocess

import numpy as np
import pytest

import oamepr

W1 = math.pi / 4
W2 = math.pi / 64


def pair_density(a, b, n=512):
    return oamepr.convolve(oamepr.sample(a, n), oamepr.sample(b, n))


def test_special_functions():
    assert oamepr.fresnel_c2(0.0) == 0.0
    assert abs(oamepr.fresnel_s2(1000.0) - 0.5) < 0.02
    assert abs(oamepr.re_erf_complex(1.3, 0.0) - math.erf(1.3)) < 1e-13
    assert abs(oamepr.gamma_upper(0.5, 0.0) - math.sqrt(math.pi)) < 1e-14
    with pytest.raises(oamepr.DomainError):
        oamepr.fresnel_c2(-1.0)
    with pytest.raises(oamepr.RangeError):
        oamepr.re_erf_complex(1.0, 40.0)


def test_sampling_is_normalized():
    phi = oamepr.grid(512)
    assert phi[0] == -math.pi
    for spec in (oamepr.ApertureSpec.rect(W1), oamepr.ApertureSpec.gauss(W1),
                 oamepr.ApertureSpec.super_gauss(W1, 3.0)):
        p = oamepr.sample(spec, 512)
        assert p.shape == (512,)
        assert abs(p.sum() * 2 * math.pi / 512 - 1.0) < 1e-12


def test_validation_error():
    with pytest.raises(oamepr.ValidationError):
        oamepr.sample(oamepr.ApertureSpec.gauss(3 * math.pi), 512)
    with pytest.raises(ValueError):
        oamepr.sample(oamepr.ApertureSpec.gauss(1.0), 500)


def test_rect_spectrum_matches_closed_form():
    p = pair_density(oamepr.ApertureSpec.rect(W1), oamepr.ApertureSpec.rect(W2), 2048)
    numeric = oamepr.transform(p, 20)
    analytic = oamepr.rect_spectrum(W1, W2, 20)
    assert np.max(np.abs(numeric - analytic)) < 5e-4
    assert abs(oamepr.rect_conditional_density(W1, W2, 0.0) - 4 / math.pi) < 1e-12


def test_gauss_pipeline():
    p = pair_density(oamepr.ApertureSpec.gauss(W1), oamepr.ApertureSpec.gauss(W2))
    fast = oamepr.convolve(oamepr.sample(oamepr.ApertureSpec.gauss(W1), 512),
                           oamepr.sample(oamepr.ApertureSpec.gauss(W2), 512), "fast")
    assert np.max(np.abs(p - fast)) < 1e-10
    amps = oamepr.transform(p, 5)
    assert np.max(np.abs(amps - oamepr.gauss_spectrum(W1, W2, 5))) < 1e-3
    assert abs(oamepr.conditional_variance(oamepr.transform(p, 64)) - 0.8074) < 0.01
    series = oamepr.variance_series(p)
    assert series["classification"] == "converged"
    assert [m for m, _ in series["entries"]] == [1, 2, 4, 8, 16, 32, 64, 128]


def test_criterion_report():
    report = oamepr.evaluate("perfect", oamepr.ApertureSpec.gauss(W1),
                             oamepr.ApertureSpec.gauss(W2), tau_grid=4)
    assert list(report) == ["lhs", "rhs", "verdict", "classification", "inputs", "rhs_at_tau"]
    assert report["verdict"] is True
    assert len(report["rhs_at_tau"]) == 4

    wide = {str(m1): {"weight": w, "conditional": {str(-m1 - 2): 0.25, str(-m1): 0.5,
                                                     str(-m1 + 2): 0.25}}
            for m1, w in ((-1, 0.25), (0, 0.5), (1, 0.25))}
    table = oamepr.evaluate(wide, oamepr.ApertureSpec.gauss(W1), oamepr.ApertureSpec.gauss(W2),
                            tau_grid=2)
    assert report["rhs"] < table["lhs"]
    assert table["verdict"] is False


@pytest.mark.skipif("OAMEPR_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_criterion_json():
    out = subprocess.run([os.environ["OAMEPR_CLI"], "criterion", "--family1", "gauss",
                          "--family2", "gauss", "--tau-grid", "2"],
                         check=True, capture_output=True, text=True).stdout
    assert json.loads(out)["verdict"] is True
