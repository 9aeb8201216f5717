# coding: utf-8

# # Scalar representation functions
#
# Every mean in meanscope is a function f on (0, inf) with f(1) = 1,
# stored through its log profile F(x) = log f(e^x). Convexity questions
# about f in the geometric sense become ordinary questions about F.

# %%

import numpy as np

from meanscope import (UAB, Binomial, Power, Stolarsky, adjoint, check_gcc, check_gcv,
                       check_pmi, classify, gamma_contains)

t = np.logspace(-3, 3, 7)
print(Power(0.5)(t))          # geometric mean, sqrt(t)
print(Binomial(0.5)(t))       # ((1 + sqrt t)/2)^2

# %%
# The two-parameter family u_{a,b} is defined on a region of the (a, b)
# plane. Points outside it raise a ParameterError.

for a, b in [(1.0, 0.5), (2.0, 1.0), (0.5, 1.0), (-1.0, -0.5)]:
    print((a, b), gamma_contains(a, b))

u = UAB(1.0, 0.5)
print(u(np.array([1e-8, 1.0, 1e8])))   # stays finite far from t = 1

# %%
# Geometric convexity is checked on a log-spaced grid. A failed check
# carries a witness point; a passed one is only "holds on grid".

for f in (Power(0.3), Binomial(0.5), Binomial(-0.5), Stolarsky(-1.5)):
    print(f.describe(), check_gcv(f).verdict, check_gcc(f).verdict)

# %%
# Duality: f is convex in this sense exactly when its adjoint
# t -> 1/f(1/t) is concave.

f = Binomial(0.5)
print(check_gcv(f).holds, check_gcc(adjoint(f)).holds)

# %%
# Several checks at once, serialised the same way the CLI prints them.

for rep in classify(UAB(1.0, 0.5), ["gcv", "pmi", "pmi_inf"]):
    print(rep.property, rep.verdict)
print(check_pmi(Binomial(-0.5)).to_json(indent=1)[:300])
