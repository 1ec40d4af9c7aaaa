"""Contextuality-by-Default analysis of systems of dichotomous random variables.

Thin wrapper over the compiled core: every probability crosses the boundary as
an exact rational string, converted here to fractions.Fraction.
"""

from fractions import Fraction

from . import _core
from ._core import (
    System,
    parse_system,
    serialize_system,
    pr_box,
    trivial_system,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "System",
    "parse_system",
    "serialize_system",
    "pr_box",
    "trivial_system",
    "perturbed_pr_box",
    "perturbed_trivial",
    "make_ab_system",
    "contexts",
    "contents",
    "connections",
    "is_consistently_connected",
    "marginal",
    "canonical_sample_space",
    "analyze",
    "chsh",
    "maximal_coupling",
    "product_coupling",
    "reduced_coupling_feasible",
    "pair_coupling_bruteforce",
    "deterministic_mixture_feasible",
    "grid_search_omega",
    "simulate",
]


def _rat(value):
    return str(Fraction(value))


def _frac_map(d):
    return {key: Fraction(value) for key, value in d.items()}


def _connection(raw):
    out = dict(raw)
    out["p_a"] = Fraction(raw["p_a"])
    out["p_b"] = Fraction(raw["p_b"])
    if "delta" in raw:
        out["delta"] = Fraction(raw["delta"])
    return out


def _coupling(raw):
    return {"variables": list(raw["variables"]), "atoms": _frac_map(raw["atoms"])}


def perturbed_pr_box(epsilon):
    return _core.perturbed_pr_box(_rat(epsilon))


def perturbed_trivial(epsilon):
    return _core.perturbed_trivial(_rat(epsilon))


def make_ab_system(tables):
    """tables: {"11": (p, q, r), ...} with p = Pr[first=+1], q = Pr[second=+1],
    r = Pr[both=+1], each a Fraction, int, or rational string."""
    packed = {label: tuple(_rat(x) for x in pqr) for label, pqr in tables.items()}
    return _core.make_ab_system(packed)


def contexts(system):
    return [
        {"id": c["id"], "contents": list(c["contents"]), "probabilities": _frac_map(c["probabilities"])}
        for c in _core.contexts(system)
    ]


def contents(system):
    return list(_core.contents(system))


def connections(system):
    return [_connection(c) for c in _core.connections(system)]


def is_consistently_connected(system):
    raw = _core.is_consistently_connected(system)
    return {"consistent": raw["consistent"], "checks": [_connection(c) for c in raw["checks"]]}


def marginal(system, context, subset):
    return _frac_map(_core.marginal(system, context, list(subset)))


def canonical_sample_space(system, context):
    raw = _core.canonical_sample_space(system, context)
    points = []
    for p in raw["points"]:
        points.append({"point": p["point"], "mass": Fraction(p["mass"]), "values": dict(p["values"])})
    return {"context": raw["context"], "points": points}


def analyze(system, max_vars=16):
    raw = _core.analyze(system, max_vars)
    return {
        "connections": [_connection(c) for c in raw["connections"]],
        "omegas": [Fraction(w) for w in raw["omegas"]],
        "omega_primes": [Fraction(w) for w in raw["omega_primes"]],
        "cntx": Fraction(raw["cntx"]),
        "contextual": raw["contextual"],
        "witness": _coupling(raw["witness"]),
    }


def chsh(system):
    raw = _core.chsh(system)
    return {
        "contexts": list(raw["contexts"]),
        "expectations": [Fraction(e) for e in raw["expectations"]],
        "s_value": Fraction(raw["s_value"]),
        "contextual": raw["contextual"],
    }


def maximal_coupling(p, q):
    raw = _core.maximal_coupling(_rat(p), _rat(q))
    table = [tuple(Fraction(x) for x in row) for row in raw["table"]]
    return {"table": table, "equality_prob": Fraction(raw["equality_prob"])}


def product_coupling(system, max_vars=16):
    return _coupling(_core.product_coupling(system, max_vars))


def reduced_coupling_feasible(system, max_vars=16):
    raw = _core.reduced_coupling_feasible(system, max_vars)
    return {
        "feasible": raw["feasible"],
        "contents": list(raw["contents"]),
        "atoms": _frac_map(raw["atoms"]),
    }


def pair_coupling_bruteforce(p, q, denominator):
    return Fraction(_core.pair_coupling_bruteforce(_rat(p), _rat(q), denominator))


def deterministic_mixture_feasible(system):
    return _core.deterministic_mixture_feasible(system)


def grid_search_omega(system, denominator, max_vars=16):
    raw = _core.grid_search_omega(system, denominator, max_vars)
    return {
        "best_objective": Fraction(raw["best_objective"]),
        "best_coupling": _coupling(raw["best_coupling"]),
        "denominator": raw["denominator"],
    }
