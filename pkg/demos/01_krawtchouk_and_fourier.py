# %% [markdown]
# # Krawtchouk polynomials and Fourier analysis on symmetric functions
#
# Functions on {0,1}^n that depend only on the Hamming weight are stored as
# profiles of n + 1 exact rationals.  Their Walsh-Fourier transform is again
# symmetric and is computed with the Krawtchouk table.

# %%
from fractions import Fraction

from delsarte.fourier import (
    DenseCubeFunction,
    FOURIER,
    convolve,
    dense_fourier,
    fourier,
    inner,
    fourier_inner,
    point_profile,
    sphere_profile,
    symmetrize_dense,
)
from delsarte.krawtchouk import kraw_roots, krawtchouk_table, first_root_lower_bound

# %% [markdown]
# The table for n = 4.  Row s holds K_s(0), ..., K_s(4); row 0 is all ones
# and the first column is the binomial row.

# %%
table = krawtchouk_table(4)
for s, row in enumerate(table.values):
    print(s, row)
print("invariants hold:", table.check_invariants())

# %% [markdown]
# The indicator of the sphere of radius 1 at n = 3 and its transform.

# %%
f = sphere_profile(3, 1)
fh = fourier(f)
print("f   =", [str(v) for v in f.values])
print("f^  =", [str(v) for v in fh.values])
print("<f,f> =", inner(f, f), " sum_S f^(S)^2 =", fourier_inner(fh, fh))

# %% [markdown]
# Convolution becomes multiplication after the transform, and the profile
# engine agrees with the dense engine that works on all 2^n points.

# %%
g = point_profile(6, [Fraction(k, k + 1) for k in range(7)])
h = point_profile(6, [1, -2, 0, 3, 0, 0, 1])
print(fourier(convolve(g, h)) == fourier(g) * fourier(h))
G = DenseCubeFunction.from_profile(g)
print(symmetrize_dense(dense_fourier(G), side=FOURIER) == fourier(g))

# %% [markdown]
# Zeros of K_m.  The square-root lower bound on the first zero holds for
# m <= n/2; for m close to n the first zero sits almost at 0.

# %%
for n, m in ((40, 5), (40, 20), (40, 35)):
    r = kraw_roots(n, m)
    print(f"n={n} m={m}: x_1 = {r[0]:.6g}, bound = {first_root_lower_bound(n, m):.4f}")
