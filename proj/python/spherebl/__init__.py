"""Symmetric spherical Brascamp-Lieb toolkit.

Exact values (exponents, counts) are returned as Python ints or Fractions;
structured results are plain dicts and lists.
"""

import json
from fractions import Fraction

from . import _core
from ._core import InputError, SphereblError

__version__ = _core.__version__

__all__ = [
    "InputError",
    "SphereblError",
    "balanced_exponent",
    "balanced_local_delta",
    "critical_gamma",
    "decompose",
    "edge_membership_count",
    "enumerate_symmetries",
    "exponent_report",
    "j_max",
    "lie_closure",
    "overcount_factor",
    "per_function_exponents",
    "run",
    "uniform_exponent",
]


def _edges(n, edges):
    return json.dumps({"n": n, "edges": [list(e) for e in edges]})


def _fraction(text):
    q = json.loads(text)
    return Fraction(int(q["num"]), int(q["den"]))


def decompose(n, edges):
    """Closure, maximality and block structure of a set of 1-based pairs."""
    return json.loads(_core.decompose(_edges(n, edges)))


def lie_closure(n, edges):
    """Edges of the Lie closure as 1-based pairs."""
    return [tuple(e) for e in json.loads(_core.lie_closure(_edges(n, edges)))["edges"]]


def balanced_exponent(n, lengths):
    return int(_core.balanced_exponent(n, list(lengths)))


def j_max(n, lengths):
    return int(_core.j_max(n, list(lengths)))


def edge_membership_count(n, lengths):
    return int(_core.edge_membership_count(n, list(lengths)))


def overcount_factor(n, lengths):
    return int(_core.overcount_factor(n, list(lengths)))


def critical_gamma(n, lengths):
    return _fraction(_core.critical_gamma(n, list(lengths)))


def balanced_local_delta(n, lengths):
    return _fraction(_core.balanced_local_delta(n, list(lengths)))


def exponent_report(n_or_family, lengths=None):
    """Report for a balanced type (n, lengths) or for a family given as a list
    of symmetry / edge-set dicts."""
    if lengths is None:
        return json.loads(_core.family_report(json.dumps(n_or_family)))
    return json.loads(_core.exponent_report(n_or_family, list(lengths)))


def uniform_exponent(family):
    return _core.uniform_exponent(json.dumps(family))


def per_function_exponents(family):
    return list(_core.per_function_exponents(json.dumps(family)))


def enumerate_symmetries(n, lengths, cap=None):
    args = (n, list(lengths)) if cap is None else (n, list(lengths), cap)
    return json.loads(_core.enumerate(*args))


def run(mode, scenario, seed=None, samples=None, shards=None):
    """Run a scenario document and return the full run record as a dict."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    return json.loads(_core.run(mode, text, seed=seed, samples=samples, shards=shards))
