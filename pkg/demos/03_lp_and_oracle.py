# %% [markdown]
# # Exact LP bounds against exact code sizes
#
# The optimal feasible solution is found by an exact rational simplex over
# the n + 1 Fourier coefficients.  For n <= 8 the true A(n, d) is found by
# exhaustive search, and every bound must be at least that large.

# %%
from delsarte.certificates import delsarte_bound
from delsarte.lp import optimal_certificate
from delsarte.oracle import exact_A, validate_bound

# %%
print(" n  d   A(n,d)  LP bound")
for n in range(4, 9):
    for d in range(2, n + 1):
        cert, sol = optimal_certificate(n, d)
        rep = delsarte_bound(cert)
        v = validate_bound(rep)
        print(f"{n:2d} {d:2d} {v.exact:6d}   {str(rep.bound):8s} {v.status} ({sol.pivot_count} pivots)")

# %% [markdown]
# A witness code for A(7, 3) = 16, the Hamming code up to equivalence.

# %%
r = exact_A(7, 3)
print(r.max_size, r.witness_hex())
