"""Grid-based membership tests for classes of operator means.

All verdicts are of the form "holds on the grid" or "violated (with a
witness)".  A grid test can refute a universally quantified inequality but
never prove it.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .means_core import UAB, Binomial, MeanFunction, ParameterError, Stolarsky, gamma_contains
from .matmean import jacobi_eigh
from .numerics import golden_section_min

__all__ = [
    "GridSpec",
    "ToleranceConfig",
    "Witness",
    "ClassificationReport",
    "DerivativeError",
    "second_difference",
    "power_gap",
    "check_gcv",
    "check_gcc",
    "check_pmi",
    "check_pmd",
    "check_pmi_r",
    "check_pmi_inf",
    "derivative_at_one",
    "loewner_matrix",
    "loewner_test",
    "check_om",
    "classify",
    "region_scan",
    "ScanResult",
    "PROPERTIES",
]

DEFAULT_R_VALUES = tuple(1.0 + 2.0**-k for k in range(7)) + (3.0, 5.0, 10.0)
LOEWNER_MAX_POINTS = 12
LOEWNER_SLACK = 1e-8


class DerivativeError(RuntimeError):
    """Finite-difference estimate of ``f'(1)`` is too noisy."""


@dataclass(frozen=True)
class GridSpec:
    t_min: float = 1e-4
    t_max: float = 1e4
    n_points: int = 241
    scale: str = "log"
    r_values: tuple = DEFAULT_R_VALUES

    def __post_init__(self):
        object.__setattr__(self, "r_values", tuple(float(r) for r in self.r_values))
        if not 0 < self.t_min < 1 < self.t_max:
            raise ValueError("grid needs 0 < t_min < 1 < t_max")
        if self.n_points < 3:
            raise ValueError("grid needs at least 3 points")
        if self.scale != "log":
            raise ValueError("only log-spaced grids are supported")
        if not self.r_values or any(r < 1 for r in self.r_values):
            raise ValueError("r values must be at least 1")

    def xs(self) -> np.ndarray:
        return np.linspace(math.log(self.t_min), math.log(self.t_max), self.n_points)

    def ts(self) -> np.ndarray:
        return np.exp(self.xs())

    @property
    def step(self) -> float:
        return (math.log(self.t_max) - math.log(self.t_min)) / (self.n_points - 1)

    def to_dict(self) -> dict:
        return asdict(self) | {"r_values": list(self.r_values)}

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        return cls(**{k: (tuple(v) if k == "r_values" else v) for k, v in d.items()})


@dataclass(frozen=True)
class ToleranceConfig:
    rel_eval: float = 1e-10
    criterion_slack: float = 1e-10
    fd_step: float = 1e-4
    derivative_tol: float = 1e-6

    def __post_init__(self):
        if min(self.rel_eval, self.criterion_slack, self.fd_step, self.derivative_tol) <= 0:
            raise ValueError("tolerances must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ToleranceConfig":
        return cls(**d)


@dataclass(frozen=True)
class Witness:
    t: Optional[float]
    r: Optional[float]
    value: float


@dataclass
class ClassificationReport:
    property: str
    verdict: str
    witness: Optional[Witness]
    grid: GridSpec
    tolerances: ToleranceConfig
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds_on_grid"

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "verdict": self.verdict,
            "witness": None if self.witness is None else asdict(self.witness),
            "grid": self.grid.to_dict(),
            "tolerances": self.tolerances.to_dict(),
            "details": self.details,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _report(prop, ok, witness, grid, tol, **details):
    return ClassificationReport(prop, "holds_on_grid" if ok else "violated",
                                None if ok else witness, grid, tol, details)


def _refine(func, xs, i, sign):
    """Golden-section refinement of an extremum of ``func`` near ``xs[i]``.

    ``sign = +1`` minimises, ``-1`` maximises.  Never returns a point worse
    than the grid point itself.
    """
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    x, v = golden_section_min(lambda z: sign * float(func(z)), lo, hi)
    v_grid = sign * float(func(xs[i]))
    if v_grid <= v:
        return float(xs[i]), sign * v_grid
    return float(x), sign * v


# ---------------------------------------------------------------------------
# geometric convexity


def second_difference(f: MeanFunction, t, h):
    """``(F(x+h) - 2F(x) + F(x-h)) / h^2`` with ``F(x) = log f(e^x)``, ``x = log t``."""
    x = np.log(np.asarray(t, dtype=float))
    return (f.logf(x + h) - 2.0 * f.logf(x) + f.logf(x - h)) / (h * h)


def _check_log_convexity(f, grid, tol, prop):
    grid = grid or GridSpec()
    tol = tol or ToleranceConfig()
    xs = grid.xs()
    h = grid.step
    F = f.logf(xs)
    d2 = (F[2:] - 2.0 * F[1:-1] + F[:-2]) / (h * h)
    inner = xs[1:-1]
    sign = 1.0 if prop == "GCV" else -1.0
    i = int(np.argmin(sign * d2))
    extreme = float(d2[i])
    ok = sign * extreme >= -tol.criterion_slack
    witness = None
    if not ok:
        x, v = _refine(lambda z: second_difference(f, math.exp(z), h), inner, i, sign)
        witness = Witness(t=math.exp(x), r=None, value=v)
    return _report(prop, ok, witness, grid, tol, extreme_value=extreme, step=h)


def check_gcv(f: MeanFunction, grid: GridSpec | None = None,
              tol: ToleranceConfig | None = None) -> ClassificationReport:
    """Convexity of ``x -> log f(e^x)`` via second differences on the log grid.

    Examples
    --------
    >>> from meanscope.means_core import Power
    >>> check_gcv(Power(0.3)).verdict
    'holds_on_grid'
    """
    return _check_log_convexity(f, grid, tol, "GCV")


def check_gcc(f: MeanFunction, grid: GridSpec | None = None,
              tol: ToleranceConfig | None = None) -> ClassificationReport:
    """Concavity counterpart of :func:`check_gcv`."""
    return _check_log_convexity(f, grid, tol, "GCC")


# ---------------------------------------------------------------------------
# power monotonicity


def power_gap(f: MeanFunction, t, r):
    """``log f(t^r) - r log f(t)``; nonnegative for pmi means."""
    x = np.log(np.asarray(t, dtype=float))
    r = np.asarray(r, dtype=float)
    return f.logf(r * x) - r * f.logf(x)


def _check_power(f, grid, tol, prop, r_values):
    tol = tol or ToleranceConfig()
    xs = grid.xs()
    F = f.logf(xs)
    sign = -1.0 if prop == "PMD" else 1.0
    best = None
    details = {}
    for r in r_values:
        gap = f.logf(r * xs) - r * F
        if r == 1.0:
            # degenerate exponent: the gap must vanish identically
            details["max_abs_gap_r1"] = float(np.max(np.abs(gap)))
        i = int(np.argmin(sign * gap))
        if best is None or sign * gap[i] < sign * best[2]:
            best = (r, i, float(gap[i]))
    r, i, extreme = best
    ok = sign * extreme >= -tol.criterion_slack
    witness = None
    if not ok:
        x, v = _refine(lambda z: power_gap(f, math.exp(z), r), xs, i, sign)
        witness = Witness(t=math.exp(x), r=r, value=v)
    return _report(prop, ok, witness, grid, tol, extreme_value=extreme, extreme_r=r, **details)


def check_pmi(f: MeanFunction, grid: GridSpec | None = None,
              tol: ToleranceConfig | None = None) -> ClassificationReport:
    """``f(t)^r <= f(t^r)`` over every ``(t, r)`` of the grid."""
    grid = grid or GridSpec()
    return _check_power(f, grid, tol, "PMI", grid.r_values)


def check_pmd(f: MeanFunction, grid: GridSpec | None = None,
              tol: ToleranceConfig | None = None) -> ClassificationReport:
    """``f(t)^r >= f(t^r)`` over every ``(t, r)`` of the grid."""
    grid = grid or GridSpec()
    return _check_power(f, grid, tol, "PMD", grid.r_values)


def check_pmi_r(f: MeanFunction, r: float, grid: GridSpec | None = None,
                tol: ToleranceConfig | None = None) -> ClassificationReport:
    """Single-exponent version of :func:`check_pmi`."""
    if r <= 1:
        raise ValueError("r must exceed 1")
    grid = grid or GridSpec()
    rep = _check_power(f, grid, tol, "PMI_r", (float(r),))
    rep.details["r"] = float(r)
    return rep


def derivative_at_one(f: MeanFunction, h: float = 1e-4, derivative_tol: float = 1e-6) -> float:
    """``f'(1)`` by a central difference with one Richardson step.

    Two Richardson estimates (steps ``h`` and ``2h``) must agree within
    ``derivative_tol``.
    """
    def central(s):
        return (f(1.0 + s) - f(1.0 - s)) / (2.0 * s)

    d_half, d_one, d_two = central(h / 2), central(h), central(2 * h)
    fine = (4.0 * d_half - d_one) / 3.0
    coarse = (4.0 * d_one - d_two) / 3.0
    if not abs(fine - coarse) <= derivative_tol:
        raise DerivativeError(f"f'(1) estimates disagree: {fine!r} vs {coarse!r}")
    return float(fine)


def check_pmi_inf(f: MeanFunction, grid: GridSpec | None = None,
                  tol: ToleranceConfig | None = None) -> ClassificationReport:
    """``f(t) >= t^{f'(1)} (1 - tol)`` on the grid."""
    grid = grid or GridSpec()
    tol = tol or ToleranceConfig()
    d = derivative_at_one(f, tol.fd_step, tol.derivative_tol)
    xs = grid.xs()
    gap = f.logf(xs) - d * xs
    i = int(np.argmin(gap))
    extreme = float(gap[i])
    ok = extreme >= math.log1p(-tol.rel_eval)
    witness = None
    if not ok:
        x, v = _refine(lambda z: f.logf(z) - d * z, xs, i, 1.0)
        witness = Witness(t=math.exp(x), r=None, value=float(v))
    return _report("PMI_inf", ok, witness, grid, tol, derivative_at_one=d,
                   extreme_value=extreme)


# ---------------------------------------------------------------------------
# operator monotonicity (necessary condition)


def _derivative(f, x, step):
    h = step * x

    def central(s):
        return (f(x + s) - f(x - s)) / (2.0 * s)

    return (4.0 * central(h / 2) - central(h)) / 3.0


def loewner_matrix(f: MeanFunction, points: Sequence[float], fd_step: float = 1e-4):
    """Divided-difference matrix ``[(f(x_i) - f(x_j)) / (x_i - x_j)]``."""
    x = np.asarray(points, dtype=float)
    if x.ndim != 1 or len(x) < 1:
        raise ValueError("points must be a nonempty 1-d sequence")
    if len(x) > LOEWNER_MAX_POINTS:
        raise ValueError(f"at most {LOEWNER_MAX_POINTS} points")
    if len(np.unique(x)) != len(x):
        raise ValueError("points must be distinct")
    if np.any(x <= 0):
        raise ValueError("points must be positive")
    fx = np.asarray(f(x), dtype=float)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    L = (fx[:, None] - fx[None, :]) / dx
    np.fill_diagonal(L, [_derivative(f, xi, fd_step) for xi in x])
    return 0.5 * (L + L.T)


def loewner_test(f: MeanFunction, points: Sequence[float], fd_step: float = 1e-4) -> float:
    """Minimum eigenvalue of the Loewner matrix of ``f`` at ``points``.

    A clearly negative value shows ``f`` is not operator monotone; a
    nonnegative one is merely consistent with it.
    """
    return float(jacobi_eigh(loewner_matrix(f, points, fd_step))[0][0])


def check_om(f: MeanFunction, grid: GridSpec | None = None, tol: ToleranceConfig | None = None,
             points: Sequence[float] | None = None) -> ClassificationReport:
    grid = grid or GridSpec()
    tol = tol or ToleranceConfig()
    if points is None:
        points = np.geomspace(max(grid.t_min, 1e-2), min(grid.t_max, 1e2), 8)
    value = loewner_test(f, points, tol.fd_step)
    ok = value >= -LOEWNER_SLACK
    return _report("OM_loewner", ok, Witness(t=None, r=None, value=value), grid, tol,
                   min_eigenvalue=value, points=[float(p) for p in points])


PROPERTIES = ("om", "gcv", "gcc", "pmi", "pmd", "pmi_r", "pmi_inf")


def classify(f: MeanFunction, props: Iterable[str], grid: GridSpec | None = None,
             tol: ToleranceConfig | None = None, r: float = 2.0) -> list:
    """Run several checks; ``props`` are names from :data:`PROPERTIES`."""
    out = []
    for prop in props:
        prop = prop.strip().lower()
        if prop == "om":
            out.append(check_om(f, grid, tol))
        elif prop == "gcv":
            out.append(check_gcv(f, grid, tol))
        elif prop == "gcc":
            out.append(check_gcc(f, grid, tol))
        elif prop == "pmi":
            out.append(check_pmi(f, grid, tol))
        elif prop == "pmd":
            out.append(check_pmd(f, grid, tol))
        elif prop == "pmi_r":
            out.append(check_pmi_r(f, r, grid, tol))
        elif prop == "pmi_inf":
            out.append(check_pmi_inf(f, grid, tol))
        else:
            raise ValueError(f"unknown property {prop!r}")
    return out


# ---------------------------------------------------------------------------
# parameter region scans

_CHECKERS = {"gcv": check_gcv, "gcc": check_gcc, "pmi": check_pmi, "pmd": check_pmd}


def _predict(family, params, prop):
    if family == "uab":
        a, b = params
        convex, concave = abs(a) >= abs(b), abs(a) <= abs(b)
    elif family == "stolarsky":
        (al,) = params
        convex, concave = -1.0 <= al <= 2.0, -2.0 <= al <= -1.0
    elif family == "binomial":
        (p,) = params
        convex, concave = p >= 0.0, p <= 0.0
    else:
        raise ValueError(f"unknown family {family!r}")
    return convex if prop in ("gcv", "pmi") else concave


def _build(family, params):
    if family == "uab":
        return UAB(*params)
    if family == "stolarsky":
        return Stolarsky(*params)
    if family == "binomial":
        return Binomial(*params)
    raise ValueError(f"unknown family {family!r}")


def _admissible(family, params):
    if family == "uab":
        return gamma_contains(*params)
    lo_hi = {"stolarsky": (-2.0, 2.0), "binomial": (-1.0, 1.0)}[family]
    return lo_hi[0] <= params[0] <= lo_hi[1]


PARAM_NAMES = {"uab": ("a", "b"), "stolarsky": ("alpha",), "binomial": ("p",)}


@dataclass
class ScanResult:
    family: str
    property: str
    rows: list  # (params, predicted, observed)
    skipped: list

    @property
    def mismatches(self) -> list:
        return [row for row in self.rows if row[1] != row[2]]

    def agreement(self) -> float:
        return 1.0 - len(self.mismatches) / max(len(self.rows), 1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(PARAM_NAMES[self.family]) + ["predicted", "observed"])
        for params, pred, obs in self.rows:
            w.writerow([repr(float(v)) for v in params] + [int(pred), int(obs)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        names = PARAM_NAMES[self.family]
        return {
            "family": self.family,
            "property": self.property,
            "n_points": len(self.rows),
            "n_skipped": len(self.skipped),
            "mismatches": [dict(zip(names, p)) | {"predicted": pr, "observed": ob}
                           for p, pr, ob in self.mismatches],
        }


def region_scan(family: str, param_grid: Iterable, prop: str,
                grid: GridSpec | None = None, tol: ToleranceConfig | None = None) -> ScanResult:
    """Compare grid verdicts with the known parameter regions of a family.

    ``family`` is ``"uab"`` (points ``(a, b)``), ``"stolarsky"`` or
    ``"binomial"`` (scalars).  Inadmissible parameters are skipped.
    """
    prop = prop.lower()
    if prop not in _CHECKERS:
        raise ValueError(f"region scans support {sorted(_CHECKERS)}, got {prop!r}")
    if family not in PARAM_NAMES:
        raise ValueError(f"unknown family {family!r}")
    rows, skipped = [], []
    for params in param_grid:
        params = tuple(float(v) for v in np.atleast_1d(params))
        if not _admissible(family, params):
            skipped.append(params)
            continue
        try:
            f = _build(family, params)
        except ParameterError:
            skipped.append(params)
            continue
        observed = _CHECKERS[prop](f, grid, tol).holds
        rows.append((params, _predict(family, params, prop), observed))
    return ScanResult(family, prop, rows, skipped)
