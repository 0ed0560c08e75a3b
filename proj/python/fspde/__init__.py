"""Fractional stochastic heat equations on the torus."""

import json

from . import _fspde
from ._fspde import (
    AccuracyError,
    ConfigError,
    DomainError,
    Error,
    ParameterError,
    ResolutionError,
    SizeError,
    claims,
    derived_exponents,
    frac_integral,
    ml,
    norm,
    rl_derivative,
    white_noise_admissible,
)

__all__ = [
    "AccuracyError",
    "ConfigError",
    "DomainError",
    "Error",
    "ParameterError",
    "ResolutionError",
    "SizeError",
    "claims",
    "derived_exponents",
    "frac_integral",
    "ml",
    "norm",
    "rl_derivative",
    "simulate",
    "verify",
    "white_noise_admissible",
]


def simulate(config, seed=1):
    """Solve an experiment config (dict or JSON text) for one seed."""
    text = config if isinstance(config, str) else json.dumps(config)
    return _fspde.simulate(text, seed)


def verify(claim, config):
    """Run a verification claim and return the report as a dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_fspde.verify(claim, text))
