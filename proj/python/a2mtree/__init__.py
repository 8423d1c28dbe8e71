"""Algebraic two-level measure trees.

Thin Python layer over the C++ core. Trees with measures are plain dicts in
the JSON layout used by the command-line tool::

    {"vertices": [...], "edges": [[a, b], ...],
     "nu": {"weights": ["1/2", ...], "measures": [{"3": "1/4", ...}, ...]}}

Masses may be given as ``fractions.Fraction``, ints or "p/q" strings; results
come back as ``Fraction``.
"""

import json
from fractions import Fraction

from . import _core
from ._core import (
    AlgebraicTree,
    DegenerateArc,
    EnumerationTooLarge,
    InvalidArgument,
    SampleOnBranchPoint,
    UnknownVertex,
    enumerate_triangulations,
    hausdorff_distance,
    validate_triangulation,
)

__all__ = [
    "AlgebraicTree",
    "DegenerateArc",
    "EnumerationTooLarge",
    "InvalidArgument",
    "SampleOnBranchPoint",
    "UnknownVertex",
    "branch_point_distribution",
    "d_s",
    "decode",
    "encode",
    "enumerate_triangulations",
    "hausdorff_distance",
    "history_to_tree",
    "restrict",
    "shape_distribution",
    "simulate",
    "validate_triangulation",
]


def _dump(obj):
    def default(x):
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        raise TypeError(f"cannot serialise {type(x).__name__}")

    return json.dumps(obj, default=default)


def _measure(obj):
    return {int(k): Fraction(v) for k, v in obj.items()}


def _a2m(obj):
    nu = obj["nu"]
    return {
        **obj,
        "nu": {
            "weights": [Fraction(w) for w in nu["weights"]],
            "measures": [_measure(m) for m in nu["measures"]],
        },
    }


def decode(triangulation):
    """Dual a2m tree of a triangulation dict {"n", "diagonals", "arcs"[, "measure"]}."""
    return _a2m(json.loads(_core._decode(_dump(triangulation))))


def encode(a2m, root=None, flips=()):
    """Triangulation with arc measure coding a binary a2m tree."""
    out = json.loads(_core._encode(_dump(a2m), root, list(flips)))
    out["arcs"] = [Fraction(a) for a in out["arcs"]]
    out["measure"] = {
        "weights": [Fraction(w) for w in out["measure"]["weights"]],
        "measures": [_measure(m) for m in out["measure"]["measures"]],
    }
    return out


def branch_point_distribution(a2m):
    """xi of the intensity measure, as {vertex: Fraction}."""
    return _measure(json.loads(_core._branch_point_distribution(_dump(a2m))))


def shape_distribution(a2m, m, n, method="exact", samples=10000, seed=0, jobs=1):
    """Shape distribution {code: probability} plus metadata."""
    return json.loads(_core._shape_distribution(_dump(a2m), m, list(n), method, samples, seed, jobs))


def d_s(a, b, m_max=2, budget=10, samples=10000, seed=0):
    """Truncated d_s; returns (value, tail_bound, terms)."""
    return _core._d_s(_dump(a), _dump(b), m_max, budget, samples, seed)


def simulate(M, N, gamma_h=1.0, gamma_p=1.0, seed=0):
    """Nested Kingman merger history as a dict."""
    return json.loads(_core._simulate(M, list(N), gamma_h, gamma_p, seed))


def history_to_tree(history):
    """Rooted a2m tree of a history; adds "root" and "leaves" keys."""
    return _a2m(json.loads(_core._history_to_tree(json.dumps(history))))


def restrict(history, J):
    """Induced history on the one-based index pairs J."""
    return json.loads(_core._restrict(json.dumps(history), [tuple(p) for p in J]))
