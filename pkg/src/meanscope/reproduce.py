"""Scripted experiments that re-derive the named separation results.

Each experiment returns a JSON-ready dict with a top-level ``"pass"`` flag and
every intermediate number it used.
"""

from __future__ import annotations

import math

import numpy as np

from .classify import (GridSpec, ToleranceConfig, check_gcv, check_pmi, check_pmi_inf,
                       check_pmi_r, region_scan)
from .hansen import HansenMean, gcv_integrand, phi_eval, pmi_integrand, theorem_counterexample
from .means_core import Section5Example

__all__ = ["EXPERIMENTS", "run", "theorem_gcv_pmi", "section5_separation", "region_uab",
           "region_stolarsky"]

THEOREM_R = (1.1, 1.5, 2.0, 3.0, 5.0, 10.0)


def theorem_gcv_pmi(grid: GridSpec | None = None, tol: ToleranceConfig | None = None) -> dict:
    """Mean that is power monotone increasing but not geometrically convex."""
    grid = grid or GridSpec()
    tol = tol or ToleranceConfig()
    h = theorem_counterexample()
    ts = grid.ts()
    pmi_min = {}
    for r in THEOREM_R:
        vals = pmi_integrand(h, ts, r)
        pmi_min[str(r)] = float(np.min(vals))
    phi_at_one = {str(r): phi_eval(9.0 / 5.0, r, 1.0) for r in THEOREM_R}
    gcv_small_t = gcv_integrand(h, 1e-3)
    mean = HansenMean(h)
    gcv_report = check_gcv(mean, grid, tol)
    pmi_report = check_pmi(mean, GridSpec(grid.t_min, grid.t_max, grid.n_points,
                                          r_values=THEOREM_R), tol)
    checks = {
        "pmi_criterion_nonnegative": min(pmi_min.values()) >= -tol.criterion_slack,
        "phi_vanishes_at_one": max(abs(v) for v in phi_at_one.values()) <= 1e-12,
        "gcv_criterion_negative_small_t": gcv_small_t <= -0.03,
        "check_gcv_violated": not gcv_report.holds,
        "check_pmi_holds": pmi_report.holds,
    }
    return {
        "name": "theorem_gcv_pmi",
        "pass": all(checks.values()),
        "checks": checks,
        "density": h.to_records(),
        "pmi_criterion_min_by_r": pmi_min,
        "phi_at_one": phi_at_one,
        "gcv_criterion_at_1e-3": gcv_small_t,
        "gcv_criterion_limit_t_to_0": -1.0 / 28.0,
        "gcv_report": gcv_report.to_dict(),
        "pmi_report": pmi_report.to_dict(),
    }


def section5_separation(grid: GridSpec | None = None, tol: ToleranceConfig | None = None) -> dict:
    """A mean dominating ``t^{f'(1)}`` that is in no single-exponent pmi class."""
    grid = grid or GridSpec()
    tol = tol or ToleranceConfig()
    f = Section5Example()
    inf_report = check_pmi_inf(f, grid, tol)
    deriv = inf_report.details["derivative_at_one"]
    t = 1e-10
    ratios = {}
    for r in (2.0, 3.0):
        ratio = math.exp(float(f.logf(r * math.log(t)) - r * f.logf(math.log(t))))
        ratios[str(r)] = {"ratio": ratio, "limit": 2.0 ** (1.0 - r),
                          "rel_error": abs(ratio / 2.0 ** (1.0 - r) - 1.0)}
    r2_report = check_pmi_r(f, 2.0, grid, tol)
    checks = {
        "pmi_inf_holds": inf_report.holds,
        "derivative_is_one_third": abs(deriv - 1.0 / 3.0) <= 1e-6,
        "ratio_matches_limit": all(v["rel_error"] <= 1e-3 for v in ratios.values()),
        "pmi_r2_violated": (not r2_report.holds) and r2_report.witness is not None,
    }
    return {
        "name": "section5_separation",
        "pass": all(checks.values()),
        "checks": checks,
        "derivative_at_one": deriv,
        "ratios_at_t_1e-10": ratios,
        "pmi_inf_report": inf_report.to_dict(),
        "pmi_r2_report": r2_report.to_dict(),
    }


def _interior(params):
    a, b = params
    return abs(a) != abs(b)


def region_uab(grid: GridSpec | None = None, tol: ToleranceConfig | None = None,
               step: float = 0.25) -> dict:
    """u_{a,b}: grid verdicts against ``|a| >= |b|`` (GCV) and ``|a| <= |b|`` (GCC)."""
    vals = np.round(np.arange(-2.0, 2.0 + step / 2, step), 12)
    pts = [(a, b) for a in vals for b in vals]
    out = {"name": "region_uab", "step": step}
    ok = True
    for prop in ("gcv", "gcc"):
        scan = region_scan("uab", pts, prop, grid, tol)
        interior = [m for m in scan.mismatches if _interior(m[0])]
        out[prop] = scan.to_dict() | {"interior_mismatches": len(interior)}
        ok = ok and not interior
    out["pass"] = ok
    return out


def region_stolarsky(grid: GridSpec | None = None, tol: ToleranceConfig | None = None,
                     step: float = 0.25) -> dict:
    """Stolarsky: GCV exactly on ``[-1, 2]``, GCC exactly on ``[-2, -1]``."""
    alphas = np.round(np.arange(-2.0, 2.0 + step / 2, step), 12)
    out = {"name": "region_stolarsky", "step": step}
    ok = True
    for prop in ("gcv", "gcc"):
        scan = region_scan("stolarsky", alphas, prop, grid, tol)
        out[prop] = scan.to_dict()
        ok = ok and not scan.mismatches
    out["pass"] = ok
    return out


EXPERIMENTS = {
    "theorem_gcv_pmi": theorem_gcv_pmi,
    "section5_separation": section5_separation,
    "region_uab": region_uab,
    "region_stolarsky": region_stolarsky,
}


def run(name: str, grid: GridSpec | None = None, tol: ToleranceConfig | None = None) -> dict:
    try:
        exp = EXPERIMENTS[name]
    except KeyError:
        raise ValueError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    return exp(grid, tol)
