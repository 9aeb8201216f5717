# coding: utf-8

# # Dominating t^{f'(1)} without a fixed exponent
#
# The mean f(t) = (t/3 + 2 t^{1/3}/3) / (1/3 + 2 t^{1/3}/3) satisfies
# f(t) >= t^{f'(1)}, yet fails the power inequality for r = 2.

# %%

from meanscope import Section5Example, check_pmi_inf, check_pmi_r

f = Section5Example()
rep = check_pmi_inf(f)
print(rep.verdict, rep.details["derivative_at_one"])   # f'(1) = 1/3

# %%

rep2 = check_pmi_r(f, 2.0)
print(rep2.verdict, rep2.witness)

# %%
# f(t^r)/f(t)^r tends to 2^(1-r) as t -> 0, but slowly: the correction
# decays like t^(1/3), so at t = 1e-10 the relative gap is still ~2e-3.

for t in (1e-6, 1e-10, 1e-14, 1e-20):
    print(t, [f(t**r) / f(t) ** r / 2 ** (1 - r) - 1 for r in (2.0, 3.0)])
