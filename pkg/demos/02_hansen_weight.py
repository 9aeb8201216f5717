# coding: utf-8

# # A Hansen weight that separates two classes
#
# Operator monotone means can be written as integrals against a weight
# h on (-inf, 0) with values in [0, 1]. For piecewise constant weights
# everything has a closed form, so the criteria can be evaluated to
# near machine precision.

# %%

import numpy as np

from meanscope import (GridSpec, HansenDensity, HansenMean, check_gcv, check_pmi,
                       gcv_integrand, hansen_eval, phi_eval, pmi_integrand, theorem_counterexample)

h = theorem_counterexample()
print(h.to_json())

# %%
# Closed form against adaptive quadrature.

t = np.logspace(-4, 4, 9)
closed = hansen_eval(h, t)
quad = hansen_eval(h, t, method="quadrature")
print(np.max(np.abs(closed - quad)))

# %%
# The power criterion stays nonnegative for every exponent tried ...

ts = GridSpec().ts()
for r in (1.1, 2.0, 5.0, 10.0):
    print(r, pmi_integrand(h, ts, r).min())

# %%
# ... while the convexity criterion turns negative near t = 0, so this mean
# has the power property without being geometrically convex.

for s in (1e-1, 1e-3, 1e-6, 1e-12):
    print(s, gcv_integrand(h, s))          # tends to -1/28

f = HansenMean(h)
print(check_pmi(f).verdict, check_gcv(f).verdict)

# %%
# The auxiliary function behind the nonnegativity: phi(beta, r, t) with
# beta = 9/5 vanishes at t = 1 and is positive elsewhere on the grid.

for r in (1.5, 3.0):
    vals = phi_eval(9 / 5, r, ts)
    print(r, vals.min(), phi_eval(9 / 5, r, 1.0))

# %%
# Weights can also be read from JSON records.

custom = HansenDensity.from_json('[{"from": "-inf", "to": -2, "value": 1}]')
print(hansen_eval(custom, [1.0, 4.0]))     # (2 + t)/3
