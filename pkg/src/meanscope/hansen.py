"""Integral representation of normalized operator monotone functions.

A weight ``h`` on ``(-inf, 0]`` with values in ``[0, 1]`` defines

    f(t) = exp( integral of (1/(lam - t) - 1/(lam - 1)) h(lam) dlam ),

and every normalized operator monotone function arises this way.  Only
piecewise-constant weights are supported; for those every integral below has
an elementary antiderivative on each piece.  A quadrature route is kept as an
independent cross-check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .means_core import MeanFunction, ParameterError, _as_positive
from .numerics import adaptive_simpson

__all__ = [
    "HansenDensity",
    "HansenMean",
    "IntegrandReport",
    "hansen_eval",
    "hansen_logf",
    "pmi_integrand",
    "gcv_integrand",
    "log_convexity",
    "theorem_counterexample",
    "theorem_closed_form",
    "phi_eval",
    "psi_eval",
    "phi_derivative",
]

MAX_PIECES = 64
QUAD_TOL = 1e-9
# padding (in log|lam|) beyond the kernel scales where the integrand is < e^-40
_TAIL = 40.0


@dataclass(frozen=True)
class HansenDensity:
    """Piecewise-constant weight: ``pieces`` is a tuple of ``(start, end, value)``.

    ``start`` may be ``-inf``; intervals are sorted, disjoint and inside
    ``(-inf, 0]``; values lie in ``[0, 1]``.
    """

    pieces: tuple

    def __post_init__(self):
        pieces = tuple(sorted((float(c), float(d), float(v)) for c, d, v in self.pieces))
        object.__setattr__(self, "pieces", pieces)
        if len(pieces) > MAX_PIECES:
            raise ParameterError(f"at most {MAX_PIECES} pieces are supported")
        prev_end = -math.inf
        for i, (c, d, v) in enumerate(pieces):
            if not c < d:
                raise ParameterError(f"piece {i}: empty interval ({c}, {d})")
            if d > 0.0 or math.isinf(d):
                raise ParameterError(f"piece {i}: interval must end at or below 0")
            if not 0.0 <= v <= 1.0:
                raise ParameterError(f"piece {i}: value {v} outside [0, 1]")
            if i and c < prev_end:
                raise ParameterError(f"piece {i} overlaps the previous piece")
            prev_end = d

    @classmethod
    def indicator(cls, start, end, value=1.0):
        return cls(((start, end, value),))

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "HansenDensity":
        pieces = []
        for rec in records:
            try:
                start, end, value = rec["from"], rec["to"], rec["value"]
            except (KeyError, TypeError) as exc:
                raise ParameterError(f"malformed density record {rec!r}") from exc
            if start == "-inf":
                start = -math.inf
            if isinstance(start, str) or isinstance(end, str) or isinstance(value, str):
                raise ParameterError(f"malformed density record {rec!r}")
            pieces.append((start, end, value))
        return cls(tuple(pieces))

    @classmethod
    def from_json(cls, text: str) -> "HansenDensity":
        try:
            records = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"density is not valid JSON: {exc}") from exc
        if not isinstance(records, list):
            raise ParameterError("density JSON must be an array of pieces")
        return cls.from_records(records)

    def to_records(self) -> list:
        return [{"from": "-inf" if math.isinf(c) else c, "to": d, "value": v}
                for c, d, v in self.pieces]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam)
        for c, d, v in self.pieces:
            out = np.where((lam > c) & (lam < d), v, out)
        return out


@dataclass(frozen=True)
class IntegrandReport:
    t: float
    r: float | None
    value: float
    method: str


def _log_shift(x, lam):
    """``log(e^x - lam)`` for ``lam <= 0``."""
    if lam == 0.0:
        return x
    return np.logaddexp(x, math.log(-lam))


def hansen_logf(h: HansenDensity, x):
    """``log f(e^x)`` by the exact per-piece antiderivative."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for c, d, v in h.pieces:
        if v == 0.0:
            continue
        term = _log_shift(x, d) - math.log1p(-d)
        if not math.isinf(c):
            term = term - (_log_shift(x, c) - math.log1p(-c))
        out = out + v * term
    return out


# ---------------------------------------------------------------------------
# quadrature route: lam = -w with w = e^s, integrating over s piece by piece

def _quad(h: HansenDensity, kernel, scales):
    """Integrate ``kernel(w) * w`` (already in the ``s = log w`` variable)."""
    logs = [math.log(s) for s in scales if s > 0]
    s_lo = min(logs + [0.0]) - _TAIL
    s_hi = max(logs + [0.0]) + _TAIL
    total = 0.0
    for c, d, v in h.pieces:
        if v == 0.0:
            continue
        a = s_lo if d == 0.0 else max(math.log(-d), s_lo)
        b = s_hi if math.isinf(c) else math.log(-c)
        if b <= a:
            continue
        val, _ = adaptive_simpson(kernel, a, b, tol=QUAD_TOL)
        total += v * val
    return total


def _quad_logf(h, t):
    def kernel(s):
        w = np.exp(s)
        # (1/(lam - t) - 1/(lam - 1)) * w with lam = -w
        return (t - 1.0) * w / ((w + t) * (w + 1.0))
    return _quad(h, kernel, (t,))


def _quad_pmi(h, t, r):
    big = t**r

    def kernel(s):
        w = np.exp(s)
        return ((big - 1.0) / ((w + big) * (w + 1.0))
                - r * (t - 1.0) / ((w + t) * (w + 1.0))) * w
    return _quad(h, kernel, (t, big))


def _quad_gcv(h, t):
    def kernel(s):
        w = np.exp(s)
        # (lam + t)/(lam - t)^3 * w
        return (w - t) / (w + t) ** 3 * w
    return _quad(h, kernel, (t,))


def _check_method(method):
    if method not in ("closed_form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")


def hansen_eval(h: HansenDensity, t, method="closed_form"):
    """Value of the represented function at ``t``."""
    _check_method(method)
    t = _as_positive(t)
    if method == "closed_form":
        out = np.exp(hansen_logf(h, np.log(t)))
    else:
        out = np.exp(np.vectorize(lambda tt: _quad_logf(h, tt))(t))
    return float(out) if out.ndim == 0 else out


def pmi_integrand(h: HansenDensity, t, r, method="closed_form"):
    """Power-monotonicity criterion ``log f(t^r) - r log f(t)``.

    Nonnegative for all ``t > 0`` and ``r >= 1`` exactly when the
    represented mean is power monotone increasing.  The closed form works in
    ``log t``, so ``t^r`` beyond the float range is harmless.
    """
    _check_method(method)
    t = _as_positive(t)
    r = np.asarray(r, dtype=float)
    if np.any(r < 1.0):
        raise ValueError("r must be >= 1")
    if method == "closed_form":
        x = np.log(t)
        out = hansen_logf(h, r * x) - r * hansen_logf(h, x)
    else:
        if np.any(r * np.abs(np.log(t)) > 690.0):
            raise OverflowError("quadrature route needs t^r within the float range")
        out = np.vectorize(lambda tt, rr: _quad_pmi(h, tt, rr))(t, r)
    return float(out) if np.ndim(out) == 0 else out


def _gcv_piece_antiderivative(lam, t):
    # -1/(lam - t) - t/(lam - t)^2 combined over a common denominator, which
    # avoids cancellation at lam = 0; vanishes at -inf
    return -lam / (lam - t) ** 2


def gcv_integrand(h: HansenDensity, t, method="closed_form"):
    """Geometric-convexity criterion ``integral of (lam + t)/(lam - t)^3 h``.

    Nonnegative for all ``t`` exactly when ``f`` is geometrically convex.
    It equals ``F''(log t) / t`` where ``F(x) = log f(e^x)``; see
    :func:`log_convexity`.
    """
    _check_method(method)
    t = _as_positive(t)
    if method == "quadrature":
        out = np.vectorize(lambda tt: _quad_gcv(h, tt))(t)
        return float(out) if out.ndim == 0 else out
    out = np.zeros_like(t)
    for c, d, v in h.pieces:
        if v == 0.0:
            continue
        term = _gcv_piece_antiderivative(d, t)
        if not math.isinf(c):
            term = term - _gcv_piece_antiderivative(c, t)
        out = out + v * term
    return float(out) if out.ndim == 0 else out


def log_convexity(h: HansenDensity, t, method="closed_form"):
    """Second derivative of ``x -> log f(e^x)`` at ``x = log t``."""
    t = _as_positive(t)
    return t * gcv_integrand(h, t, method)


@dataclass(frozen=True)
class HansenMean(MeanFunction):
    """The mean whose representing weight is ``density``."""

    density: HansenDensity

    def logf(self, x):
        return hansen_logf(self.density, x)

    def describe(self):
        return {"family": "hansen", "density": self.density.to_records()}


THEOREM_WEIGHT = 9.0 / 14.0


def theorem_counterexample() -> HansenDensity:
    """Weight ``9/14`` on ``(-inf, -2)`` and ``5/14`` on ``(-1, 0)``.

    The induced mean is power monotone increasing but not geometrically
    convex (its log-convexity fails for small ``t``).
    """
    return HansenDensity(((-math.inf, -2.0, THEOREM_WEIGHT),
                          (-1.0, 0.0, 1.0 - THEOREM_WEIGHT)))


def theorem_closed_form(t):
    """``((t + 2)/3)^(9/14) * (2t/(t + 1))^(5/14)``."""
    t = _as_positive(t)
    a = THEOREM_WEIGHT
    return ((t + 2.0) / 3.0) ** a * (2.0 * t / (t + 1.0)) ** (1.0 - a)


def phi_eval(beta, r, t):
    """``beta*log(3^(r-1)(t^r+2)/(t+2)^r) - log(2^(r-1)(t^r+1)/(t+1)^r)``.

    For the counterexample weight the power criterion equals
    ``(5/14) * phi_eval(9/5, r, t)``.
    """
    t = np.asarray(t, dtype=float)
    tr = t**r
    first = (r - 1.0) * math.log(3.0) + np.log(tr + 2.0) - r * np.log(t + 2.0)
    second = (r - 1.0) * math.log(2.0) + np.log(tr + 1.0) - r * np.log(t + 1.0)
    out = beta * first - second
    return float(out) if out.ndim == 0 else out


def psi_eval(beta, r, t):
    """``(beta - 1/2) t^(r+1) + (beta - 1)(t^r + t) - (2 - beta)``."""
    t = np.asarray(t, dtype=float)
    out = (beta - 0.5) * t ** (r + 1.0) + (beta - 1.0) * (t**r + t) - (2.0 - beta)
    return float(out) if out.ndim == 0 else out


def phi_derivative(beta, r, t):
    """``d phi / dt = 2 r (t^(r-1) - 1) psi / ((t^r+2)(t^r+1)(t+2)(t+1))``."""
    t = np.asarray(t, dtype=float)
    tr = t**r
    out = (2.0 * r * (t ** (r - 1.0) - 1.0) * psi_eval(beta, r, t)
           / ((tr + 2.0) * (tr + 1.0) * (t + 2.0) * (t + 1.0)))
    return float(out) if np.ndim(out) == 0 else out
