"""Exact time-domain Kron reduction of RL networks.

Network, excitation and model arguments accept a dict, a JSON string or a
path to a JSON file.
"""

import json
import os

import numpy as np

from . import _core
from ._core import KronredError, compare, draw_gammas

__all__ = [
    "KronredError",
    "compare",
    "draw_gammas",
    "validate",
    "reduce",
    "load_model",
    "simulate",
    "phasor",
    "heuristic_reduce",
    "experiment",
]


def _text(obj):
    if isinstance(obj, dict):
        return json.dumps(obj)
    if isinstance(obj, os.PathLike):
        with open(obj, encoding="utf-8") as fh:
            return fh.read()
    if isinstance(obj, str) and not obj.lstrip().startswith("{"):
        with open(obj, encoding="utf-8") as fh:
            return fh.read()
    return obj


def validate(network):
    return _core.validate(_text(network))


def reduce(network, strategy="nullbasis"):
    return _core.reduce(_text(network), strategy)


def load_model(model):
    return _core.model_from_json(_text(model))


def simulate(network, excitation, f0=None, *, dt=1e-4, t_end=1.0, stride=1, method="reduced",
             strategy="nullbasis"):
    net = _text(network)
    if f0 is None:
        f0 = np.zeros(_core.validate(net)["edges"])
    return _core.simulate(net, _text(excitation), np.asarray(f0, dtype=float), dt, t_end, stride, method,
                          strategy)


def phasor(network, omega, v1):
    return _core.phasor(_text(network), omega, [complex(v) for v in v1])


def heuristic_reduce(network, omega0, allow_unphysical=False):
    return json.loads(_core.heuristic_reduce(_text(network), omega0, allow_unphysical))


def experiment(which="sinusoid", seed=7, strategy="nullbasis"):
    res = _core.experiment(which, seed, strategy)
    res["synthesized"] = json.loads(res["synthesized"])
    return res
