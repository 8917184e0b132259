# %% [markdown]
# # The inequality chain behind the small-support barrier
#
# For a witness with g supported on a ball of radius r, the Fourier weight
# of f defines a probability vector lambda, and P(s) = g^(s) is a
# nonnegative combination of K_0..K_r.  Property 3 says
# sum_i lambda_i P(i) >= P(d); the chain then bounds the left side by the
# tail mass of lambda and two Krawtchouk ratio estimates.

# %%
from fractions import Fraction

from delsarte.constructions import example1
from delsarte.proplab import chain_eval, ratio_bounds

# %% [markdown]
# The ratio estimates at n = 200, delta = 0.1, beta = 0.2.

# %%
for m in (1, 4, 10):
    rb = ratio_bounds(200, m, 20, Fraction(1, 5))
    print(f"m={m:2d}  K_m(d)/K_m(0) = {float(rb.lower_ratio):.4g} >= {float(rb.lb):.4g};"
          f"  max |K_m(i)|/K_m(d) = {float(rb.upper_ratio):.4g} <= {float(rb.ub):.4g}")

# %% [markdown]
# Example 1 at n = 500, delta = 0.2: here r = 1.  The report records every
# step and the least r for which the final inequality could hold.

# %%
n, d = 500, 100
w = example1(n, d)
rep = chain_eval(w.f, w.g, d, Fraction(3, 10), 1)
print("property 3 margin:", float(rep.property3_lhs - rep.property3_rhs))
print("tail mass:", float(rep.tail_mass))
print("verdicts:", rep.verdicts)
print("precondition (beta n < x_1(r) - 1):", rep.precondition)
print("implied minimal r:", rep.implied_min_r)
