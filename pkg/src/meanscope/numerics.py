"""Small numerical kernels shared by the other modules.

Everything here works on plain floats / numpy arrays and has no knowledge of
operator means.
"""

import math

import numpy as np

__all__ = [
    "log_sinhc",
    "log_cosh",
    "adaptive_simpson",
    "golden_section_min",
    "bisect_increasing",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def log_sinhc(y):
    """``log(sinh(y) / y)`` evaluated without overflow or cancellation.

    Even in ``y``; equals 0 at ``y = 0``.
    """
    y = np.abs(np.asarray(y, dtype=float))
    out = np.empty_like(y)
    small = y < 1e-3
    ys = y[small]
    y2 = ys * ys
    # series: y^2/6 - y^4/180 + y^6/2835
    out[small] = y2 * (1.0 / 6.0 - y2 * (1.0 / 180.0 - y2 / 2835.0))
    yl = y[~small]
    out[~small] = yl - np.log(2.0 * yl) + np.log1p(-np.exp(-2.0 * yl))
    return out


def log_cosh(y):
    """``log(cosh(y))`` for arbitrary real ``y``."""
    y = np.abs(np.asarray(y, dtype=float))
    return y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0)


def adaptive_simpson(func, a, b, tol=1e-9, max_depth=60):
    """Integrate a vectorised ``func`` over ``[a, b]`` with adaptive Simpson.

    The refinement is breadth-first: all unconverged panels of one level are
    evaluated in a single call to ``func``.  Each panel at depth ``k`` gets
    the tolerance ``tol / 2**k``; accepted panels contribute the Richardson
    corrected value ``S2 + (S2 - S1) / 15``.

    Returns
    -------
    value : float
    error : float
        Sum of the accepted panel error estimates.
    """
    if a == b:
        return 0.0, 0.0
    lo = np.array([float(a)])
    hi = np.array([float(b)])
    mid = 0.5 * (lo + hi)
    f_lo, f_mid, f_hi = (func(lo), func(mid), func(hi))
    whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
    eps = np.array([float(tol)])

    total = 0.0
    err = 0.0
    for depth in range(max_depth + 1):
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        f_lm = func(lm)
        f_rm = func(rm)
        left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid)
        right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi)
        delta = left + right - whole
        done = np.abs(delta) <= 15.0 * eps
        if depth == max_depth:
            done[:] = True
        total += float(np.sum(left[done] + right[done] + delta[done] / 15.0))
        err += float(np.sum(np.abs(delta[done]) / 15.0))
        keep = ~done
        if not keep.any():
            break
        # children: [lo, mid] and [mid, hi]
        lo, mid, hi = (
            np.concatenate([lo[keep], mid[keep]]),
            np.concatenate([lm[keep], rm[keep]]),
            np.concatenate([mid[keep], hi[keep]]),
        )
        f_lo, f_mid, f_hi = (
            np.concatenate([f_lo[keep], f_mid[keep]]),
            np.concatenate([f_lm[keep], f_rm[keep]]),
            np.concatenate([f_mid[keep], f_hi[keep]]),
        )
        whole = np.concatenate([left[keep], right[keep]])
        eps = np.concatenate([eps[keep], eps[keep]]) / 2.0
    return total, err


def golden_section_min(func, a, b, xtol=1e-10, max_iter=200):
    """Minimise a scalar function on ``[a, b]`` by golden-section search.

    Returns ``(x, func(x))`` for the best point visited, endpoints included.
    """
    best_x, best_f = a, func(a)
    fb = func(b)
    if fb < best_f:
        best_x, best_f = b, fb
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(max_iter):
        if abs(b - a) <= xtol * (1.0 + abs(a) + abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = func(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def bisect_increasing(func, target, lo, hi, xtol=1e-14, max_iter=200):
    """Solve ``func(x) = target`` for a nondecreasing vectorised ``func``.

    ``target`` may be an array; ``lo`` and ``hi`` are scalars that must
    bracket every root.  Bisection shrinks each bracket until its width is
    below ``xtol`` (relative to the bracket magnitude), then one secant step
    between the bracket ends gives the final estimate.
    """
    target = np.asarray(target, dtype=float)
    a = np.full(target.shape, float(lo))
    b = np.full(target.shape, float(hi))
    ga = func(a) - target
    gb = func(b) - target
    for _ in range(max_iter):
        width = b - a
        if np.all(width <= xtol * (1.0 + np.abs(a) + np.abs(b))):
            break
        m = 0.5 * (a + b)
        gm = func(m) - target
        left = gm >= 0.0
        b = np.where(left, m, b)
        gb = np.where(left, gm, gb)
        a = np.where(left, a, m)
        ga = np.where(left, ga, gm)
    denom = gb - ga
    with np.errstate(invalid="ignore", divide="ignore"):
        x = np.where(denom > 0, a - ga * (b - a) / denom, 0.5 * (a + b))
    return np.clip(x, a, b)
