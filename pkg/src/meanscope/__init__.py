"""Numerical toolkit for Kubo-Ando operator means.

Evaluate representation functions, test geometric convexity and power
monotonicity on grids, work with Hansen's integral representation, and
fuzz Ando-Hiai type matrix inequalities.
"""

from .classify import (ClassificationReport, GridSpec, ToleranceConfig, check_gcc, check_gcv,
                       check_om, check_pmd, check_pmi, check_pmi_inf, check_pmi_r, classify,
                       loewner_test, region_scan)
from .hansen import (HansenDensity, HansenMean, gcv_integrand, hansen_eval, log_convexity,
                     phi_eval, pmi_integrand, psi_eval, theorem_counterexample)
from .matmean import (AndoHiaiWitness, PositiveMatrix, ando_hiai_search, apply_function,
                      operator_mean, transformer_check)
from .means_core import (UAB, Adjoint, Binomial, GeodesicMeasure, Geodesic, InverseOf,
                         MeanFunction, PolynomialU, Power, Section5Example, Stolarsky, adjoint,
                         arithmetic, compose_sigma, evaluate, gamma_contains, geodesic_eval,
                         harmonic, numeric_inverse)

__version__ = "0.1.0"
