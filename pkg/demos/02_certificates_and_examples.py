# %% [markdown]
# # Feasible solutions, pair witnesses and the three examples
#
# A pair witness (f, g, tau, rho) with f, g >= 0, g * f >= tau f and
# g^(s) <= rho < tau for s >= d produces a feasible solution
# Lambda = g * f * f - rho f * f of the linear program.

# %%
import math

from delsarte.certificates import delsarte_bound, dh_construct, dumps_certificate, verify_witness
from delsarte.constructions import ball_spectrum, example1, example2, example3, witness_bounds
from delsarte.lp import optimal_certificate
from delsarte.scalar import jpl1_rate

# %% [markdown]
# Example 1: g is the indicator of the unit sphere (scaled), f lives on a
# Hamming ball whose adjacency operator has top eigenvalue at least
# n - 2d + 1.  The radius is decided exactly from Sturm minors.

# %%
n, d = 200, 40
w = example1(n, d)
print(w.label, "verifies:", bool(verify_witness(w)))
D = int(w.label.split("=")[1].rstrip(")"))
spec = ball_spectrum(n, D)
print(f"lambda_max(T_{D}) in [{float(spec.lo):.6f}, {float(spec.hi):.6f}], tau = {w.tau}")
for name, rep in sorted(witness_bounds(w).items()):
    print(f"{name:10s} rate {rep.rate:.4f}")
print(f"first LP bound  rate {jpl1_rate(d / n):.4f}")

# %% [markdown]
# Example 2: g is an m-fold convolution of the unit sphere, so
# g^(s) = (n - 2s)^m.  Odd m keeps the transform below rho on s >= d.
# The construction is asymptotic: at n = 64 its witness bounds are still
# above the trivial 2^n (rate > 1), while the LP value of the
# certificate it produces is below it.

# %%
w2 = example2(64, 16, 3)
print(w2.label, "verifies:", bool(verify_witness(w2)))
print({k: round(v.rate, 4) for k, v in witness_bounds(w2).items()})

# %% [markdown]
# Example 3 recovers any feasible Lambda0 with Lambda0(0) > 0: take
# g = Lambda0 and f the point mass at 0.

# %%
cert0, _ = optimal_certificate(6, 3)
w3 = example3(cert0)
cert = dh_construct(w3)
print("recovered:", cert.lam == cert0.lam, " bound", delsarte_bound(cert).bound)
text = dumps_certificate(cert, method="example3")
print(f"certificate JSON: {len(text)} bytes, rationals stored as p/q strings")
