"""Representation functions of operator means and operations on them.

Every function is stored through its logarithmic profile
``F(x) = log f(exp(x))``.  This is the natural coordinate for all the
properties studied in this package (geometric convexity is convexity of
``F``; the power inequality ``f(t)^r <= f(t^r)`` reads ``r F(x) <= F(r x)``)
and it removes overflow problems for large powers of ``t``.

The singular parameter seams of the ``u_{a,b}`` and Stolarsky families are
handled by rewriting ``(t^a - 1) / a`` as ``log(t) * exp(a x / 2) * sinhc(a x / 2)``
with ``sinhc(y) = sinh(y) / y``, which is analytic in ``a`` and ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import logsumexp

from .numerics import bisect_increasing, log_cosh, log_sinhc

__all__ = [
    "DomainError",
    "ParameterError",
    "BracketError",
    "MeanFunction",
    "Power",
    "Binomial",
    "UAB",
    "Stolarsky",
    "GeodesicMeasure",
    "Geodesic",
    "Section5Example",
    "PolynomialU",
    "FromCallable",
    "Product",
    "PowerOf",
    "Sum",
    "SigmaCompose",
    "Adjoint",
    "InverseOf",
    "arithmetic",
    "harmonic",
    "evaluate",
    "gamma_contains",
    "adjoint",
    "compose_sigma",
    "geodesic_eval",
    "numeric_inverse",
]


class DomainError(ValueError):
    """Raised when a function is evaluated outside ``(0, inf)``."""


class ParameterError(ValueError):
    """Raised for family parameters outside their admissible region."""


class BracketError(RuntimeError):
    """Raised when a monotone root bracket cannot be established."""


def _as_positive(t):
    t = np.asarray(t, dtype=float)
    if not np.all(t > 0):  # also rejects nan
        raise DomainError("functions are defined on (0, inf) only")
    return t


class MeanFunction:
    """Base class for positive functions on ``(0, inf)``.

    Subclasses implement :meth:`logf`, the map ``x -> log f(exp(x))``.
    ``is_mean`` marks families whose members are normalized operator
    monotone functions (i.e. represent operator means).
    """

    is_mean = True

    def logf(self, x):
        raise NotImplementedError

    def __call__(self, t):
        t = _as_positive(t)
        out = np.exp(self.logf(np.log(t)))
        return float(out) if out.ndim == 0 else out

    def log(self, t):
        """``log f(t)`` without exponentiating."""
        t = _as_positive(t)
        out = self.logf(np.log(t))
        return float(out) if np.ndim(out) == 0 else out

    def describe(self) -> dict:
        return {"family": type(self).__name__}


@dataclass(frozen=True)
class Power(MeanFunction):
    """Weighted geometric mean ``t^alpha``, ``0 <= alpha <= 1``."""

    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ParameterError(f"Power needs alpha in [0, 1], got {self.alpha}")

    def logf(self, x):
        return self.alpha * np.asarray(x, dtype=float)

    def describe(self):
        return {"family": "power", "alpha": self.alpha}


@dataclass(frozen=True)
class Binomial(MeanFunction):
    """Power mean ``b_p(t) = ((t^p + 1) / 2)^(1/p)``, ``-1 <= p <= 1``.

    ``p = 0`` is the geometric mean ``sqrt(t)``.
    """

    p: float

    def __post_init__(self):
        if not -1.0 <= self.p <= 1.0:
            raise ParameterError(f"Binomial needs p in [-1, 1], got {self.p}")

    def logf(self, x):
        x = np.asarray(x, dtype=float)
        p = self.p
        z = 0.5 * p * x
        # log b_p(e^x) = x/2 + log(cosh(p x / 2)) / p
        small = np.abs(z) < 1e-3
        with np.errstate(divide="ignore", invalid="ignore"):
            direct = log_cosh(z) / p
        series = p * x * x / 8.0 * (1.0 - z * z / 6.0)
        return 0.5 * x + np.where(small, series, direct)

    def describe(self):
        return {"family": "binomial", "p": self.p}


def gamma_contains(a: float, b: float) -> bool:
    """Membership of ``(a, b)`` in the admissible region of ``u_{a,b}``.

    The region is the union of the strip ``0 < a - b <= 1`` (with
    ``-1 <= a <= 2``, ``-2 <= b <= 1``), the box ``[0, 1] x [-1, 0]`` minus
    the origin, and the diagonal ``a = b != 0``, all inside ``[-2, 2]^2``.
    """
    a = float(a)
    b = float(b)
    if not (-2.0 <= a <= 2.0 and -2.0 <= b <= 2.0):
        return False
    strip = 0.0 < a - b <= 1.0 and -1.0 <= a <= 2.0 and -2.0 <= b <= 1.0
    box = 0.0 <= a <= 1.0 and -1.0 <= b <= 0.0 and not (a == 0.0 and b == 0.0)
    diagonal = a == b and a != 0.0
    return strip or box or diagonal


@dataclass(frozen=True)
class UAB(MeanFunction):
    """``u_{a,b}(t) = (b/a) (t^a - 1) / (t^b - 1)`` for ``(a, b)`` in Gamma.

    ``(t^c - 1) / c`` is read as ``log t`` when ``c = 0``; ``u_{a,a} = 1``.
    """

    a: float
    b: float

    def __post_init__(self):
        if not gamma_contains(self.a, self.b):
            raise ParameterError(f"(a, b) = ({self.a}, {self.b}) is outside Gamma")

    def logf(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.a, self.b
        return 0.5 * (a - b) * x + log_sinhc(0.5 * a * x) - log_sinhc(0.5 * b * x)

    def describe(self):
        return {"family": "uab", "a": self.a, "b": self.b}


def _d1_log_sinhc(y):
    # coth(y) - 1/y
    y = np.asarray(y, dtype=float)
    ay = np.abs(y)
    small = ay < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = 1.0 / np.tanh(y) - 1.0 / y
    return np.where(small, y / 3.0 - y**3 / 45.0, direct)


def _d2_log_sinhc(y):
    # 1/y^2 - 1/sinh(y)^2
    y = np.abs(np.asarray(y, dtype=float))
    small = y < 1e-2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        direct = 1.0 / (y * y) - 1.0 / np.sinh(y) ** 2
    return np.where(small, 1.0 / 3.0 - y * y / 15.0, direct)


@dataclass(frozen=True)
class Stolarsky(MeanFunction):
    """Stolarsky mean ``S_alpha(1, t)``, ``-2 <= alpha <= 2``.

    ``alpha = 0`` gives the logarithmic mean, ``alpha = 1`` the identric mean.
    """

    alpha: float

    def __post_init__(self):
        if not -2.0 <= self.alpha <= 2.0:
            raise ParameterError(f"Stolarsky needs alpha in [-2, 2], got {self.alpha}")

    def logf(self, x):
        x = np.asarray(x, dtype=float)
        al = self.alpha
        y = 0.5 * x
        d = al - 1.0
        if abs(d) < 1e-6:
            return y + y * _d1_log_sinhc(y) + 0.5 * d * y * y * _d2_log_sinhc(y)
        return y + (log_sinhc(al * y) - log_sinhc(y)) / d

    def describe(self):
        return {"family": "stolarsky", "alpha": self.alpha}


_GL_NODES, _GL_WEIGHTS = leggauss(64)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


@dataclass(frozen=True)
class GeodesicMeasure:
    """Probability measure on the exponent interval ``[0, 1]``.

    Point masses are given as ``(weight, exponent)`` pairs; an optional
    continuous density is integrated with a fixed 64-node Gauss-Legendre rule.
    """

    atoms: tuple = ()
    density: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        atoms = tuple((float(w), float(e)) for w, e in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        for w, e in atoms:
            if w < 0.0:
                raise ParameterError("atom weights must be nonnegative")
            if not 0.0 <= e <= 1.0:
                raise ParameterError("atom exponents must lie in [0, 1]")
        total = sum(w for w, _ in atoms) + self.continuous_mass()
        if abs(total - 1.0) > 1e-12:
            raise ParameterError(f"measure has total mass {total!r}, expected 1")

    def _density_weights(self):
        rho = np.asarray(self.density(_GL_NODES), dtype=float) * np.ones_like(_GL_NODES)
        if np.any(rho < 0):
            raise ParameterError("density must be nonnegative")
        return rho * _GL_WEIGHTS

    def continuous_mass(self) -> float:
        if self.density is None:
            return 0.0
        return float(np.sum(self._density_weights()))

    def log_terms(self):
        """Weights and exponents of the discrete sum used for evaluation."""
        w = [w for w, _ in self.atoms]
        e = [e for _, e in self.atoms]
        if self.density is not None:
            w.extend(self._density_weights())
            e.extend(_GL_NODES)
        return np.asarray(w, dtype=float), np.asarray(e, dtype=float)


@dataclass(frozen=True)
class Geodesic(MeanFunction):
    """Geodesic mean ``t -> integral of t^alpha dp(alpha)``."""

    measure: GeodesicMeasure

    def logf(self, x):
        x = np.asarray(x, dtype=float)
        w, e = self.measure.log_terms()
        keep = w > 0
        w, e = w[keep], e[keep]
        terms = np.log(w)[:, None] + e[:, None] * x.reshape(1, -1)
        return logsumexp(terms, axis=0).reshape(x.shape)

    def describe(self):
        return {"family": "geodesic", "atoms": [list(a) for a in self.measure.atoms],
                "density": self.measure.density is not None}


@dataclass(frozen=True)
class Section5Example(MeanFunction):
    """``((1/3) t + (2/3) t^(1/3)) / ((1/3) + (2/3) t^(1/3))``.

    Dominates ``t^(1/3)`` but ``f(t^r) / f(t)^r -> 2^(1-r)`` as ``t -> 0``.
    """

    def logf(self, x):
        x = np.asarray(x, dtype=float)
        third, two_thirds = math.log(1.0 / 3.0), math.log(2.0 / 3.0)
        num = np.logaddexp(x + third, x / 3.0 + two_thirds)
        den = np.logaddexp(third, x / 3.0 + two_thirds)
        return num - den

    def describe(self):
        return {"family": "section5"}


@dataclass(frozen=True)
class PolynomialU(MeanFunction):
    """``u(t) = beta * prod_i (t + a_i)^gamma_i`` with ``a_1 = 0``.

    Not a mean itself; its inverse is (when ``u(1) = 1``).
    """

    beta: float
    roots: tuple
    exponents: tuple

    is_mean = False

    def __post_init__(self):
        roots = tuple(float(r) for r in self.roots)
        exps = tuple(float(g) for g in self.exponents)
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "exponents", exps)
        if len(roots) != len(exps) or not roots:
            raise ParameterError("roots and exponents must be nonempty and of equal length")
        if roots[0] != 0.0 or any(r1 >= r2 for r1, r2 in zip(roots, roots[1:])):
            raise ParameterError("roots must satisfy 0 = a_1 < a_2 < ... < a_n")
        if exps[0] < 1.0 or any(g <= 0.0 for g in exps):
            raise ParameterError("exponents need gamma_1 >= 1 and gamma_i > 0")
        if self.beta <= 0.0:
            raise ParameterError("beta must be positive")

    @classmethod
    def normalized(cls, roots: Sequence[float], exponents: Sequence[float]) -> "PolynomialU":
        """The member with ``u(1) = 1``."""
        log_u1 = sum(g * math.log1p(a) for a, g in zip(roots, exponents))
        return cls(math.exp(-log_u1), tuple(roots), tuple(exponents))

    def logf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, math.log(self.beta))
        for a, g in zip(self.roots, self.exponents):
            out = out + g * (x if a == 0.0 else np.logaddexp(x, math.log(a)))
        return out

    def describe(self):
        return {"family": "polynomial_u", "beta": self.beta,
                "roots": list(self.roots), "exponents": list(self.exponents)}


class FromCallable(MeanFunction):
    """Wrap an ordinary positive function ``t -> f(t)``.

    Intended for ad-hoc test functions such as ``t**2``; no normalization
    or monotonicity is assumed.
    """

    is_mean = False

    def __init__(self, func, name="callable", is_mean=False):
        self.func = func
        self.name = name
        self.is_mean = is_mean

    def logf(self, x):
        return np.log(self.func(np.exp(np.asarray(x, dtype=float))))

    def describe(self):
        return {"family": "callable", "name": self.name}

    def __repr__(self):
        return f"FromCallable({self.name!r})"


@dataclass(frozen=True)
class Product(MeanFunction):
    """Pointwise product ``f * g``."""

    f: MeanFunction
    g: MeanFunction
    op = "product"

    @property
    def is_mean(self):
        return False

    def logf(self, x):
        return self.f.logf(x) + self.g.logf(x)

    def describe(self):
        return {"family": "composite", "op": self.op,
                "operands": [self.f.describe(), self.g.describe()]}


@dataclass(frozen=True)
class PowerOf(MeanFunction):
    """Pointwise power ``f^alpha``, ``alpha > 0``."""

    f: MeanFunction
    alpha: float
    op = "power"

    def __post_init__(self):
        if self.alpha <= 0:
            raise ParameterError("PowerOf needs alpha > 0")

    @property
    def is_mean(self):
        return self.f.is_mean and self.alpha <= 1.0

    def logf(self, x):
        return self.alpha * self.f.logf(x)

    def describe(self):
        return {"family": "composite", "op": self.op, "alpha": self.alpha,
                "operands": [self.f.describe()]}


@dataclass(frozen=True)
class Sum(MeanFunction):
    """Pointwise sum ``f + g`` (not normalized)."""

    f: MeanFunction
    g: MeanFunction
    op = "sum"
    is_mean = False

    def logf(self, x):
        return np.logaddexp(self.f.logf(x), self.g.logf(x))

    def describe(self):
        return {"family": "composite", "op": self.op,
                "operands": [self.f.describe(), self.g.describe()]}


@dataclass(frozen=True)
class SigmaCompose(MeanFunction):
    """``t -> f(t) * h(g(t) / f(t))``: the mean ``sigma_h`` applied to f and g."""

    f: MeanFunction
    g: MeanFunction
    h: MeanFunction
    op = "sigma"

    @property
    def is_mean(self):
        return self.f.is_mean and self.g.is_mean and self.h.is_mean

    def logf(self, x):
        lf = self.f.logf(x)
        return lf + self.h.logf(self.g.logf(x) - lf)

    def describe(self):
        return {"family": "composite", "op": self.op,
                "operands": [self.f.describe(), self.g.describe(), self.h.describe()]}


@dataclass(frozen=True)
class Adjoint(MeanFunction):
    """``f*(t) = 1 / f(1/t)``."""

    inner: MeanFunction

    @property
    def is_mean(self):
        return self.inner.is_mean

    def logf(self, x):
        return -self.inner.logf(-np.asarray(x, dtype=float))

    def describe(self):
        return {"family": "adjoint", "inner": self.inner.describe()}


# initial root bracket in t, widened geometrically up to the overflow limits
_BRACKET = (math.log(1e-12), math.log(1e12))
_BRACKET_LIMIT = 700.0


@dataclass(frozen=True)
class InverseOf(MeanFunction):
    """Functional inverse of ``t -> t^shift * f(t)``."""

    inner: MeanFunction
    shift: float = 0.0

    def __post_init__(self):
        if self.shift < 0:
            raise ParameterError("shift must be nonnegative")

    @property
    def is_mean(self):
        return self.inner.is_mean or isinstance(self.inner, PolynomialU)

    def _forward(self, y):
        return self.shift * y + self.inner.logf(y)

    def logf(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1)
        lo, hi = _BRACKET
        while True:
            ok_lo = self._forward(np.array([lo]))[0] <= flat.min()
            ok_hi = self._forward(np.array([hi]))[0] >= flat.max()
            if ok_lo and ok_hi:
                break
            if (not ok_lo and lo <= -_BRACKET_LIMIT) or (not ok_hi and hi >= _BRACKET_LIMIT):
                raise BracketError(
                    "t^shift * f(t) does not cover the requested values on the search bracket")
            if not ok_lo:
                lo = max(2.0 * lo, -_BRACKET_LIMIT)
            if not ok_hi:
                hi = min(2.0 * hi, _BRACKET_LIMIT)
        y = bisect_increasing(self._forward, flat, lo, hi)
        return y.reshape(x.shape)

    def describe(self):
        return {"family": "inverse", "shift": self.shift, "inner": self.inner.describe()}


def arithmetic() -> Binomial:
    return Binomial(1.0)


def harmonic() -> Binomial:
    return Binomial(-1.0)


def evaluate(f: MeanFunction, t):
    """Value of ``f`` at ``t > 0`` (scalar or array)."""
    return f(t)


def adjoint(f: MeanFunction) -> MeanFunction:
    """Adjoint ``t -> 1/f(1/t)``; applying it twice returns the original."""
    if isinstance(f, Adjoint):
        return f.inner
    return Adjoint(f)


def compose_sigma(f: MeanFunction, g: MeanFunction, h: MeanFunction) -> SigmaCompose:
    return SigmaCompose(f, g, h)


def geodesic_eval(m: GeodesicMeasure, t):
    return Geodesic(m)(t)


def numeric_inverse(f: MeanFunction, shift: float, s):
    """Solve ``t^shift * f(t) = s`` for ``t``.

    Examples
    --------
    >>> round(numeric_inverse(Power(1.0), 1.0, 4.0), 12)
    2.0
    """
    return InverseOf(f, shift)(s)
