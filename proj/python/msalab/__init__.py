"""Two-particle Anderson model multiscale checks (Python front end to the C++ library)."""

import json

from . import _msalab
from ._msalab import ConfigError, InfeasibleSchedule, MsalabError, wilson_interval

__all__ = [
    "ConfigError",
    "InfeasibleSchedule",
    "MsalabError",
    "canonical_config",
    "classify",
    "config_hash",
    "estimate",
    "schedule",
    "spectrum",
    "wilson_interval",
]


def _text(config):
    return json.dumps(config or {})


def config_hash(config=None):
    return _msalab.config_hash(_text(config))


def canonical_config(config=None):
    return json.loads(_msalab.canonical_config(_text(config)))


def schedule(config=None):
    """Scale lengths, masses and the parameter constraint report."""
    return json.loads(_msalab.schedule(_text(config)))


def spectrum(config=None):
    """Ascending eigenvalues of the configured box (numpy array)."""
    return _msalab.spectrum(_text(config))


def classify(config=None):
    return json.loads(_msalab.classify(_text(config)))


def estimate(config=None):
    """Monte Carlo frequency of config["event"] with its Wilson interval."""
    return json.loads(_msalab.estimate(_text(config)))
