"""Acceptance suite.

Each ``test_criterion_<n><part>_...`` function checks one acceptance
criterion at its stated tolerance; the conftest prints a PASS/FAIL line per
criterion after the run.
"""

import math
import time
import warnings

import mpmath as mp
import numpy as np
import pytest

from corpus import named_means, random_density, random_geodesic
from meanscope import (Binomial, Geodesic, GridSpec, HansenDensity, HansenMean, Power,
                       Section5Example, Stolarsky, UAB, adjoint, ando_hiai_search, check_gcc,
                       check_gcv, check_pmd, check_pmi, check_pmi_inf, check_pmi_r,
                       gcv_integrand, hansen_eval, harmonic, log_convexity, operator_mean,
                       phi_eval, pmi_integrand, region_scan, theorem_counterexample,
                       transformer_check)
from meanscope.matmean import ConditioningWarning, random_orthogonal
from meanscope.means_core import PowerOf, Sum

GRID = GridSpec()
TS = GRID.ts()
CORPUS = named_means()


# -----------------------------------------------------------------------
# 1. the separating weight: pmi criterion nonnegative, gcv criterion negative


def test_criterion_1_theorem_weight():
    start = time.perf_counter()
    h = theorem_counterexample()
    worst = min(float(np.min(pmi_integrand(h, TS, r))) for r in (1.1, 1.5, 2, 3, 5, 10))
    phi_one = max(abs(phi_eval(9 / 5, r, 1.0)) for r in (1.1, 1.5, 2, 3, 5, 10))
    gcv_small = gcv_integrand(h, 1e-3)
    elapsed = time.perf_counter() - start
    print(f"min pmi criterion {worst:.3e}, max |phi(1)| {phi_one:.1e}, "
          f"gcv(1e-3) {gcv_small:.6f}, {elapsed:.3f}s")
    assert len(TS) == 241 and TS[0] == pytest.approx(1e-4) and TS[-1] == pytest.approx(1e4)
    assert worst >= -1e-10
    assert phi_one <= 1e-12
    assert gcv_small <= -0.03
    assert gcv_integrand(h, 1e-12) == pytest.approx(-1 / 28, abs=1e-9)
    assert elapsed < 5.0


# -----------------------------------------------------------------------
# 2. a mean dominating t^{f'(1)} that is in no single-exponent class


def test_criterion_2a_pmi_inf():
    rep = check_pmi_inf(Section5Example())
    d = rep.details["derivative_at_one"]
    print(f"f'(1) = {d!r}")
    assert rep.holds
    assert abs(d - 1 / 3) <= 1e-6


def test_criterion_2b_ratio_limit():
    f = Section5Example()
    t = 1e-10
    errors = {}
    for r in (2.0, 3.0):
        ratio = f(t**r) / f(t) ** r
        errors[r] = abs(ratio / 2 ** (1 - r) - 1)
    print(f"relative errors at t=1e-10: {errors}")
    # same ratio at 50 digits: the gap to the limit is real, not rounding
    mp.mp.dps = 50
    tt = mp.mpf("1e-10")

    def g(s):
        c = mp.cbrt(s)
        return (s / 3 + 2 * c / 3) / (mp.mpf(1) / 3 + 2 * c / 3)

    exact = {r: float(abs(g(tt**int(r)) / g(tt) ** int(r) / mp.mpf(2) ** (1 - int(r)) - 1))
             for r in (2.0, 3.0)}
    print(f"high-precision relative errors: {exact}")
    assert all(e <= 1e-3 for e in errors.values())


def test_criterion_2c_pmi_r2_violated():
    rep = check_pmi_r(Section5Example(), 2.0)
    print(f"witness {rep.witness}")
    assert not rep.holds and rep.witness is not None


# -----------------------------------------------------------------------
# 3. indicator weights reproduce their closed forms


def test_criterion_3a_closed_forms():
    worst = 0.0
    for a in (0.5, 1.0, 2.0, 10.0):
        for h, form in [(HansenDensity.indicator(-math.inf, -a), (a + TS) / (a + 1)),
                        (HansenDensity.indicator(-a, 0.0), (a + 1) * TS / (a + TS))]:
            worst = max(worst, float(np.max(np.abs(hansen_eval(h, TS) / form - 1))))
    for alpha in (0.0, 0.3, 0.5, 1.0):
        h = HansenDensity(((-math.inf, 0.0, alpha),)) if alpha else HansenDensity(())
        worst = max(worst, float(np.max(np.abs(hansen_eval(h, TS) / TS**alpha - 1))))
    print(f"max relative deviation {worst:.2e}")
    assert worst <= 1e-10


def test_criterion_3b_quadrature():
    worst = 0.0
    dens = [HansenDensity.indicator(-math.inf, -a) for a in (0.5, 1.0, 2.0, 10.0)]
    dens += [HansenDensity.indicator(-a, 0.0) for a in (0.5, 1.0, 2.0, 10.0)]
    dens += [HansenDensity(((-math.inf, 0.0, al),)) for al in (0.3, 0.5, 1.0)]
    for h in dens:
        closed = hansen_eval(h, TS)
        quad = hansen_eval(h, TS, method="quadrature")
        worst = max(worst, float(np.max(np.abs(closed - quad) / (1 + np.abs(closed)))))
    print(f"max scaled closed/quadrature gap {worst:.2e}")
    assert worst <= 1e-7


# -----------------------------------------------------------------------
# 4. parameter regions


def test_criterion_4a_uab_region():
    vals = np.round(np.arange(-2.0, 2.01, 0.25), 12)
    pts = [(a, b) for a in vals for b in vals]
    for prop in ("gcv", "gcc"):
        scan = region_scan("uab", pts, prop)
        interior = [m for m in scan.mismatches if abs(m[0][0]) != abs(m[0][1])]
        print(f"uab {prop}: {len(scan.rows)} admissible, {len(interior)} interior mismatches")
        assert not interior


def test_criterion_4b_stolarsky_region():
    alphas = np.round(np.arange(-2.0, 2.01, 0.25), 12)
    for prop in ("gcv", "gcc"):
        scan = region_scan("stolarsky", alphas, prop)
        print(f"stolarsky {prop}: {len(scan.mismatches)} mismatches")
        assert not scan.mismatches


# -----------------------------------------------------------------------
# 5. chain of inclusions


def test_criterion_5a_geodesic_gcv():
    rng = np.random.default_rng(2024)
    assert all(check_gcv(Geodesic(random_geodesic(rng))).holds for _ in range(50))


def test_criterion_5b_gcv_implies_pmi():
    convex = [n for n, f in CORPUS.items() if check_gcv(f).holds]
    print(f"{len(convex)} convex members")
    assert convex
    assert all(check_pmi(CORPUS[n]).holds for n in convex)


def test_criterion_5c_pmi_r_implies_pmi_inf():
    members = [n for n, f in CORPUS.items() if check_pmi_r(f, 2.0).holds]
    assert members
    assert all(check_pmi_inf(CORPUS[n]).holds for n in members)


# -----------------------------------------------------------------------
# 6. duality and the sum counterexample


def test_criterion_6a_duality():
    for name, f in CORPUS.items():
        assert check_gcv(f).holds == check_gcc(adjoint(f)).holds, name


def test_criterion_6b_gcc_sum():
    square = PowerOf(Power(1.0), 2.0)
    assert check_gcc(harmonic()).holds and check_gcc(square).holds
    assert not check_gcc(Sum(harmonic(), square)).holds


# -----------------------------------------------------------------------
# 7. matrix layer


MATRIX_MEANS = [Power(0.5), Binomial(0.5), Binomial(-1.0), Stolarsky(-1.5), UAB(1.0, -0.5),
                HansenMean(theorem_counterexample()), Section5Example()]


def _instance(rng, dim):
    def pd():
        Q = random_orthogonal(rng, dim)
        return (Q * np.exp(rng.uniform(-2, 2, size=dim))) @ Q.T
    return pd(), pd()


def test_criterion_7a_invariants():
    rng = np.random.default_rng(77)
    dims = (1, 2, 3, 5)
    for i in range(100):
        f = MATRIX_MEANS[i % len(MATRIX_MEANS)]
        dim = dims[i % len(dims)]
        # scalar reduction
        a, b = np.exp(rng.uniform(-3, 3, size=2))
        got = operator_mean(f, [[a]], [[b]]).entries[0, 0]
        assert abs(got / (a * f(b / a)) - 1) <= 1e-12
        # commuting case
        Q = random_orthogonal(rng, dim)
        av, bv = np.exp(rng.uniform(-2, 2, size=(2, dim)))
        M = operator_mean(f, (Q * av) @ Q.T, (Q * bv) @ Q.T).entries
        expect = (Q * (av * f(bv / av))) @ Q.T
        assert np.max(np.abs(M - expect)) <= 1e-9
        # transformer equality
        A, B = _instance(rng, dim)
        T = np.eye(dim) + 0.3 * rng.standard_normal((dim, dim))
        assert abs(transformer_check(f, A, B, T)) <= 1e-8


def test_criterion_7b_fuzzing():
    start = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditioningWarning)
        none = ando_hiai_search(Power(0.5), 2.0, trials=10_000, dim=3, seed=7)
    found = ando_hiai_search(Section5Example(), 2.0, trials=10_000, dim=3, seed=7)
    elapsed = time.perf_counter() - start
    print(f"fuzzing {elapsed:.1f}s; section example witness {found and found.to_dict()['phase']}")
    assert none is None
    assert found is not None and found.phase == "scalar_probe"
    assert elapsed < 60.0


# -----------------------------------------------------------------------
# 8. criteria agree with the definitions


def test_criterion_8_consistency():
    rng = np.random.default_rng(8)
    step = 1e-4
    worst_pmi = worst_gcv = 0.0
    for _ in range(10):
        h = random_density(rng)
        f = HansenMean(h)
        x = np.log(TS)
        for r in (1.1, 2.0, 5.0):
            direct = f.logf(r * x) - r * f.logf(x)
            worst_pmi = max(worst_pmi, float(np.max(np.abs(pmi_integrand(h, TS, r) - direct))))
        d2 = (f.logf(x + step) - 2 * f.logf(x) + f.logf(x - step)) / step**2
        # the raw criterion integral equals the log-convexity divided by t
        worst_gcv = max(worst_gcv, float(np.max(np.abs(log_convexity(h, TS) - d2))))
        assert np.all(np.sign(gcv_integrand(h, TS)) == np.sign(log_convexity(h, TS)))
    print(f"max pmi gap {worst_pmi:.2e}, max gcv gap {worst_gcv:.2e}")
    assert worst_pmi <= 1e-5
    assert worst_gcv <= 1e-5
