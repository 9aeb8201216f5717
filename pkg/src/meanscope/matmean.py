"""Positive-definite matrices, functional calculus and operator means.

The mean of positive definite ``A`` and ``B`` for a representation function
``f`` is ``A^(1/2) f(A^(-1/2) B A^(-1/2)) A^(1/2)``.  Eigendecompositions use
a cyclic Jacobi solver with a diagonal-relative stopping rule, which keeps
small eigenvalues of ill-conditioned positive matrices accurate to high
relative precision.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .means_core import MeanFunction, Power
from .numerics import golden_section_min

__all__ = [
    "EigenConvergenceError",
    "ConditioningWarning",
    "jacobi_eigh",
    "jacobi_left_svd",
    "PositiveMatrix",
    "AndoHiaiWitness",
    "apply_function",
    "matrix_power",
    "operator_mean",
    "transformer_check",
    "random_positive",
    "random_orthogonal",
    "ando_hiai_search",
    "read_matrix",
    "write_matrix",
]

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
CONDITION_WARN = 1e12


class EigenConvergenceError(RuntimeError):
    pass


class ConditioningWarning(RuntimeWarning):
    pass


def jacobi_eigh(M, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    A rotation on ``(p, q)`` is skipped once
    ``|a_pq| <= tol * sqrt(|a_pp * a_qq|)``; the iteration stops after a
    sweep without rotations.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    V : ndarray, shape (n, n)
        Orthonormal eigenvectors as columns.
    """
    A = np.array(M, dtype=float, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return A[0].copy(), V
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app, aqq = A[p, p], A[q, q]
                if abs(apq) <= tol * math.sqrt(abs(app * aqq)):
                    continue
                rotated = True
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                V[:, p] = c * vp - s * V[:, q]
                V[:, q] = s * vp + c * V[:, q]
        if not rotated:
            w = np.diag(A).copy()
            order = np.argsort(w)
            return w[order], V[:, order]
    raise EigenConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def jacobi_left_svd(X, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Singular values and left singular vectors by one-sided Jacobi.

    Columns of ``X`` are rotated pairwise until mutually orthogonal, which
    gives ``X X^T = U diag(s^2) U^T`` without ever forming ``X X^T``; small
    singular values of row- or column-graded ``X`` stay relatively accurate.

    Returns
    -------
    s : ndarray, shape (n,)
        Singular values in ascending order.
    U : ndarray, shape (m, n)
        Matching left singular vectors as columns.
    """
    Y = np.array(X, dtype=float, copy=True)
    n = Y.shape[1]
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                a = Y[:, p] @ Y[:, p]
                b = Y[:, q] @ Y[:, q]
                g = Y[:, p] @ Y[:, q]
                if g == 0.0 or abs(g) <= tol * math.sqrt(a * b):
                    continue
                rotated = True
                zeta = (b - a) / (2.0 * g)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                yp = Y[:, p].copy()
                Y[:, p] = c * yp - s * Y[:, q]
                Y[:, q] = s * yp + c * Y[:, q]
        if not rotated:
            sv = np.linalg.norm(Y, axis=0)
            order = np.argsort(sv)
            sv = sv[order]
            return sv, Y[:, order] / np.where(sv > 0.0, sv, 1.0)
    raise EigenConvergenceError(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")


def _min_eig(M) -> float:
    return float(jacobi_eigh(0.5 * (M + M.T))[0][0])


class PositiveMatrix:
    """Real symmetric strictly positive definite matrix with cached spectrum.

    Matrices built with :meth:`from_spectrum` keep the given eigenpairs as
    their cache instead of re-diagonalising the assembled entries, so powers
    and rescalings of ill-conditioned matrices do not lose their small
    eigenvalues.
    """

    __slots__ = ("entries", "eigenvalues", "eigenvectors")

    def __init__(self, entries):
        M = np.atleast_2d(np.asarray(entries, dtype=float))
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("matrix must be square")
        norm = np.linalg.norm(M)
        if np.max(np.abs(M - M.T), initial=0.0) > 1e-12 * norm:
            raise ValueError("matrix is not symmetric")
        M = 0.5 * (M + M.T)
        w, V = jacobi_eigh(M)
        self._set(M, w, V)

    def _set(self, M, w, V):
        if not w[0] > 0.0:
            raise ValueError(f"matrix is not positive definite (min eigenvalue {w[0]:.3e})")
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", V)

    def __setattr__(self, name, value):
        raise AttributeError("PositiveMatrix is immutable")

    @classmethod
    def from_spectrum(cls, eigenvalues, Q) -> "PositiveMatrix":
        """Assemble ``Q diag(eigenvalues) Q^T`` for orthogonal ``Q``."""
        w = np.asarray(eigenvalues, dtype=float).copy()
        Q = np.asarray(Q, dtype=float).copy()
        order = np.argsort(w)
        w, Q = w[order], Q[:, order]
        M = (Q * w) @ Q.T
        obj = cls.__new__(cls)
        obj._set(0.5 * (M + M.T), w, Q)
        return obj

    def __repr__(self):
        return f"PositiveMatrix(dim={self.dim}, eigenvalues={self.eigenvalues!r})"

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def condition(self) -> float:
        return float(self.eigenvalues[-1] / self.eigenvalues[0])

    def spectral_apply(self, func: Callable) -> np.ndarray:
        """``Q func(Lambda) Q^T`` as a plain symmetric array."""
        V = self.eigenvectors
        M = (V * np.asarray(func(self.eigenvalues), dtype=float)) @ V.T
        return 0.5 * (M + M.T)

    def apply(self, func: Callable) -> "PositiveMatrix":
        return PositiveMatrix.from_spectrum(func(self.eigenvalues), self.eigenvectors)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def scaled(self, c: float) -> "PositiveMatrix":
        return PositiveMatrix.from_spectrum(c * self.eigenvalues, self.eigenvectors)


def _as_pd(A) -> PositiveMatrix:
    return A if isinstance(A, PositiveMatrix) else PositiveMatrix(A)


def apply_function(f: Callable, A) -> PositiveMatrix:
    """Functional calculus ``f(A)`` for a positive function ``f``."""
    return _as_pd(A).apply(lambda w: np.asarray(f(w), dtype=float))


def matrix_power(A, p: float) -> PositiveMatrix:
    return _as_pd(A).apply(lambda w: w**p)


def _mean(f: MeanFunction, A: PositiveMatrix, B: PositiveMatrix) -> PositiveMatrix:
    if A.condition > CONDITION_WARN:
        warnings.warn(f"condition number of A is {A.condition:.2e}", ConditioningWarning,
                      stacklevel=3)
    ra = np.sqrt(A.eigenvalues)
    # A^(-1/2) B A^(-1/2) in A's eigenbasis equals G G^T with graded G
    G = (A.eigenvectors.T @ B.eigenvectors) * np.sqrt(B.eigenvalues) / ra[:, None]
    sg, U = jacobi_left_svd(G)
    # an exactly singular G can only come from underflow
    mu = np.maximum(sg * sg, np.finfo(float).tiny)
    # the mean in A's eigenbasis is K K^T
    K = (U * ra[:, None]) * np.sqrt(np.asarray(f(mu), dtype=float))
    sk, V = jacobi_left_svd(K)
    nu = sk * sk
    return PositiveMatrix.from_spectrum(nu, A.eigenvectors @ V)


def operator_mean(f: MeanFunction, A, B, eps: float = 0.0) -> PositiveMatrix:
    """``A sigma_f B`` with both arguments shifted by ``eps * I``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    A, B = _as_pd(A), _as_pd(B)
    if eps:
        A = A.apply(lambda w: w + eps)
        B = B.apply(lambda w: w + eps)
    return _mean(f, A, B)


def transformer_check(f: MeanFunction, A, B, T) -> float:
    """Min eigenvalue of ``(T'AT) sigma (T'BT) - T'(A sigma B)T``.

    Zero up to rounding for invertible ``T``.
    """
    T = np.asarray(T, dtype=float)
    if abs(np.linalg.det(T)) < 1e-14 * max(1.0, np.linalg.norm(T)) ** T.shape[0]:
        raise ValueError("T must be invertible")
    A, B = _as_pd(A), _as_pd(B)
    lhs = operator_mean(f, T.T @ A.entries @ T, T.T @ B.entries @ T).entries
    rhs = T.T @ operator_mean(f, A, B).entries @ T
    return _min_eig(lhs - rhs)


def random_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    Z = rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(Z)
    return Q * np.sign(np.diag(R))


def random_positive(rng: np.random.Generator, dim: int, low=1e-4, high=1e4) -> PositiveMatrix:
    """``Q diag(lam) Q^T`` with log-uniform eigenvalues in ``[low, high]``."""
    lam = np.exp(rng.uniform(math.log(low), math.log(high), size=dim))
    return PositiveMatrix.from_spectrum(lam, random_orthogonal(rng, dim))


@dataclass
class AndoHiaiWitness:
    """A pair with ``A sigma B >= I`` but ``A^p sigma B^p`` not ``>= I``."""

    A: PositiveMatrix
    B: PositiveMatrix
    p: float
    min_eig_before: float
    min_eig_after: float
    seed: Optional[int] = None
    trial: int = -1
    phase: str = "random"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "seed": self.seed,
            "trial": self.trial,
            "phase": self.phase,
            "min_eig_before": self.min_eig_before,
            "min_eig_after": self.min_eig_after,
            "A": self.A.entries.tolist(),
            "B": self.B.entries.tolist(),
        }


# relative margin above 1 for min eig(A sigma B) after rescaling; covers the
# ~1e-9 rounding in recomputing the mean of a rescaled pair
_NORMALIZE_MARGIN = 1e-8


def _normalize_pair(f, A, B):
    """Scale ``A, B`` by a common ``c`` so that ``min eig(A sigma B)`` is 1."""
    for _ in range(5):
        lam = float(_mean(f, A, B).eigenvalues[0])
        if 1.0 <= lam <= 1.0 + 2 * _NORMALIZE_MARGIN:
            break
        c = (1.0 + _NORMALIZE_MARGIN) / lam
        A, B = A.scaled(c), B.scaled(c)
    return A, B


def _implication_gap(f, A, B, p):
    """``min eig(A s B) - 1``, ``min eig(A^p s B^p) - 1`` and ``||A^p s B^p||``."""
    before = float(_mean(f, A, B).eigenvalues[0]) - 1.0
    M = _mean(f, matrix_power(A, p), matrix_power(B, p))
    return before, float(M.eigenvalues[0]) - 1.0, float(M.eigenvalues[-1])


def _scalar_probe(f: MeanFunction, p: float, t_min, t_max, n_points):
    """Minimise ``log f(t^p) - p log f(t)`` over a log grid of ``t``."""
    xs = np.linspace(math.log(t_min), math.log(t_max), n_points)
    vals = f.logf(p * xs) - p * f.logf(xs)
    i = int(np.argmin(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n_points - 1)]
    x, v = golden_section_min(lambda z: float(f.logf(p * z) - p * f.logf(z)), lo, hi)
    if vals[i] < v:
        x, v = xs[i], float(vals[i])
    return x, v


def ando_hiai_search(f: MeanFunction, p: float, trials: int = 10_000, dim: int = 3,
                     seed: Optional[int] = 0, tol: float = 1e-8,
                     t_min: float = 1e-4, t_max: float = 1e4, n_points: int = 241,
                     low: float = 1e-4, high: float = 1e4) -> Optional[AndoHiaiWitness]:
    """Look for a counterexample to ``A sigma B >= I  =>  A^p sigma B^p >= I``.

    First a scalar probe: for ``A = a I``, ``B = a t I`` scaled so that
    ``A sigma B = I`` the implication reduces to ``f(t^p) >= f(t)^p``.  Then
    ``trials`` random pairs are drawn, normalized so ``A sigma B`` has minimum
    eigenvalue 1, and tested.  A random trial counts as a witness when the
    minimum eigenvalue of ``A^p sigma B^p - I`` is below
    ``-tol * max(1, ||A^p sigma B^p||)``.

    Returns the first witness (scalar probe, then lowest trial index), or
    ``None``.
    """
    if p <= 1:
        raise ValueError("p must exceed 1")
    if trials < 0 or dim < 1:
        raise ValueError("trials must be >= 0 and dim >= 1")

    x, v = _scalar_probe(f, p, t_min, t_max, n_points)
    if v < -tol:
        t = math.exp(x)
        a = math.exp(-float(f.logf(np.array(x))))
        A = PositiveMatrix(a * np.eye(dim))
        B = PositiveMatrix(a * t * np.eye(dim))
        A, B = _normalize_pair(f, A, B)
        before, after, _ = _implication_gap(f, A, B, p)
        if before >= 0.0 and after < -tol:
            return AndoHiaiWitness(A, B, p, before, after, seed=seed, trial=-1,
                                   phase="scalar_probe")

    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditioningWarning)
        for trial in range(trials):
            A = random_positive(rng, dim, low, high)
            B = random_positive(rng, dim, low, high)
            A, B = _normalize_pair(f, A, B)
            before, after, scale = _implication_gap(f, A, B, p)
            if before >= 0.0 and after < -tol * max(1.0, scale):
                return AndoHiaiWitness(A, B, p, before, after, seed=seed, trial=trial)
    return None


# ---------------------------------------------------------------------------
# matrix I/O


def write_matrix(A, fmt: str = "text") -> str:
    """Serialise a matrix as ``dim`` followed by row-major entries, or JSON."""
    M = np.asarray(A.entries if isinstance(A, PositiveMatrix) else A, dtype=float)
    if fmt == "json":
        return json.dumps({"dim": M.shape[0], "entries": M.tolist()})
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    rows = [" ".join(repr(float(v)) for v in row) for row in M]
    return "\n".join([str(M.shape[0])] + rows) + "\n"


def read_matrix(text: str, fmt: str = "text") -> PositiveMatrix:
    if fmt == "json":
        data = json.loads(text)
        M = np.asarray(data["entries"], dtype=float)
        if M.shape != (data["dim"], data["dim"]):
            raise ValueError("entries do not match dim")
        return PositiveMatrix(M)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    tokens = text.split()
    if not tokens:
        raise ValueError("empty matrix text")
    n = int(tokens[0])
    vals = [float(v) for v in tokens[1:]]
    if len(vals) != n * n:
        raise ValueError(f"expected {n * n} entries, got {len(vals)}")
    return PositiveMatrix(np.array(vals).reshape(n, n))


# default geometric mean, handy for callers
GEOMETRIC = Power(0.5)
