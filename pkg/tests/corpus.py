"""Shared instances for the test suite."""

import math

import numpy as np

from meanscope import (UAB, Binomial, GeodesicMeasure, Geodesic, HansenDensity, HansenMean,
                       Power, Section5Example, Stolarsky, adjoint, theorem_counterexample)


def named_means():
    """Admissible means across every family, keyed by a readable label."""
    out = {}
    for a in (0.0, 0.3, 0.5, 1.0):
        out[f"power({a})"] = Power(a)
    for p in (-1.0, -0.5, 0.0, 0.25, 0.5, 1.0):
        out[f"binomial({p})"] = Binomial(p)
    for a, b in [(1, 0.5), (1, 0), (1, -1), (0.5, -1), (2, 1), (-1, -2), (0.5, 0.5), (0, -1),
                 (1, -0.5), (0.25, -0.25), (-0.5, -1.5), (1.5, 0.75)]:
        out[f"uab({a},{b})"] = UAB(float(a), float(b))
    for a in (-2.0, -1.5, -1.0, 0.0, 0.5, 1.0, 2.0):
        out[f"stolarsky({a})"] = Stolarsky(a)
    out["geodesic(atoms)"] = Geodesic(GeodesicMeasure(((0.2, 0.0), (0.5, 0.4), (0.3, 1.0))))
    out["geodesic(uniform)"] = Geodesic(GeodesicMeasure((), density=lambda a: np.ones_like(a)))
    out["slow_pmi_example"] = Section5Example()
    out["hansen(theorem)"] = HansenMean(theorem_counterexample())
    out["hansen(shift 2)"] = HansenMean(HansenDensity.indicator(-math.inf, -2.0))
    out["hansen(band 1)"] = HansenMean(HansenDensity.indicator(-1.0, 0.0))
    out["adjoint(binomial(0.5))"] = adjoint(Binomial(0.5))
    return out


def random_density(rng, max_pieces=5):
    """Piecewise-constant weight with random breakpoints on ``(-inf, 0]``."""
    n = int(rng.integers(1, max_pieces + 1))
    cuts = np.sort(-np.exp(rng.uniform(-4.0, 4.0, size=n)))
    edges = [-math.inf] + list(cuts) + [0.0]
    pieces = []
    for c, d in zip(edges[:-1], edges[1:]):
        if rng.random() < 0.8:
            pieces.append((c, d, float(rng.uniform(0.0, 1.0))))
    if not pieces:
        pieces.append((edges[0], edges[1], 0.5))
    return HansenDensity(tuple(pieces))


def random_geodesic(rng):
    n = int(rng.integers(1, 6))
    w = rng.dirichlet(np.ones(n))
    w = w / w.sum()
    return GeodesicMeasure(tuple(zip(w.tolist(), rng.uniform(0.0, 1.0, size=n).tolist())))
