"""Truncated and boomerang differential search on small block ciphers."""

import json

from ._qtrunc import ResourceError, algorithm1, sample_budget, walsh_spectrum
from . import _qtrunc

__all__ = [
    "ResourceError",
    "algorithm1",
    "attack",
    "complexity",
    "find_boomerang",
    "find_truncated",
    "key_fraction_above",
    "sample_budget",
    "verify",
    "walsh_spectrum",
]


def _cfg(config):
    return json.dumps(config or {})


def _result(out):
    return out.exit_code, json.loads(out.report)


def complexity(n, m, sigma, tau, rounds, enc_gates):
    return json.loads(_qtrunc._complexity(n, m, sigma, tau, rounds, enc_gates))


def find_truncated(config):
    """Returns (exit_code, report) for a run configuration dict."""
    return _result(_qtrunc._find_truncated(_cfg(config)))


def find_boomerang(config):
    return _result(_qtrunc._find_boomerang(_cfg(config)))


def verify(report, config=None):
    return _result(_qtrunc._verify(_cfg(config), json.dumps(report)))


def attack(report, config=None):
    return _result(_qtrunc._attack(_cfg(config), json.dumps(report)))


def key_fraction_above(cipher, t, a, b, sigma, direction="forward"):
    if isinstance(cipher, str):
        cipher = {"name": cipher}
    return _qtrunc.key_fraction_above(json.dumps(cipher), t, a, b, sigma, direction)
