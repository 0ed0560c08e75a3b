import math

import numpy as np
import pytest

import fspde


def test_ml_exponential():
    value, method = fspde.ml(1.0, 1.0, -2.0)
    assert value == pytest.approx(math.exp(-2.0), rel=1e-14)
    assert method in ("series", "integral", "asymptotic")


def test_ml_routes_agree():
    s, _ = fspde.ml(0.7, 1.0, -1.5, "series")
    i, _ = fspde.ml(0.7, 1.0, -1.5, "integral")
    assert s == pytest.approx(i, rel=1e-10)


def test_ml_rejects_positive_argument():
    with pytest.raises(fspde.DomainError):
        fspde.ml(0.5, 1.0, 1.0)


def test_frac_integral_of_constant():
    t = np.linspace(0.0, 1.0, 65)
    out = fspde.frac_integral(np.ones_like(t), 0.5)
    exact = t**0.5 / math.gamma(1.5)
    assert np.max(np.abs(out - exact)) < 1e-12


def test_norm_of_cosine():
    n, length = 64, 2 * math.pi
    x = np.arange(n) * length / n
    f = np.cos(3 * x)
    assert fspde.norm(f, length) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert fspde.norm(f, length, "sobolev", 1.0) == pytest.approx(math.sqrt(10 * math.pi), rel=1e-12)


def test_derived_exponents_and_gate():
    e = fspde.derived_exponents(1.0, 1.0, 1.0, 2.0)
    assert e["c0"] == pytest.approx(1.0)
    assert e["d0"] == pytest.approx(2.0)
    assert fspde.white_noise_admissible(1.0, 1.0, 1.0, 2.0, 0.0, 1)
    assert not fspde.white_noise_admissible(1.0, 1.0, 1.0, 2.0, 0.0, 2)


def test_parameter_error():
    with pytest.raises(fspde.ParameterError, match="beta2"):
        fspde.derived_exponents(1.0, 1.0, 1.6, 2.0)


def test_simulate_is_reproducible():
    cfg = {
        "params": {"alpha": 0.8, "beta1": 0.9, "beta2": 0.7, "p": 2},
        "grid": {"d": 1, "N": 32},
        "time": {"T": 1, "steps": 16},
        "noise": {"levy": {"lambda": 3, "law": "two_point"}, "wiener": {"K": 1}},
        "data": {"u0": "cos1", "g": "sin2", "h": "bump"},
    }
    a = fspde.simulate(cfg, 5)
    b = fspde.simulate(cfg, 5)
    assert a["values"].shape == (17, 32)
    assert np.array_equal(a["values"], b["values"])
    assert a["converged"]


def test_config_error_pointer():
    with pytest.raises(fspde.ConfigError, match="/grid/N"):
        fspde.simulate({"params": {"alpha": 1, "beta1": 1, "beta2": 1, "p": 2}, "grid": {"N": 7}}, 1)


def test_verify_scaling():
    cfg = {"params": {"alpha": 1, "beta1": 1, "beta2": 1, "p": 2}, "verify": {"samples": 2}}
    report = fspde.verify("scaling", cfg)
    assert report["verdict"] == "pass"
    assert "scaling" in fspde.claims
