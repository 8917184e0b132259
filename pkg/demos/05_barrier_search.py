# %% [markdown]
# # Searching small-support g for a bound below the first LP bound
#
# g = 2^n (a_1 1_{S(n,1)} + a_2 1_{S(n,2)}), f ranges over Perron vectors of
# the operator restricted to Hamming balls.  Candidates near the first LP
# bound are rebuilt in exact arithmetic and verified before they count.

# %%
from delsarte.proplab import GridSpec, barrier_search

# %%
res = barrier_search(200, 40, 2, GridSpec(values=tuple(range(12))))
print(f"{len(res.rows)} grid points with a witness, first LP bound rate {res.jpl1:.4f}")
b = res.best
print(f"best verified: a = {b.coeffs}, ball radius {b.param}, rate {b.rate:.4f}, margin {b.margin:+.4f}")

# %% [markdown]
# In this sweep the best rows all sit at a_2 = 0, that is, at the first
# example up to scaling.

# %%
for row in sorted(res.rows, key=lambda r: r.rate)[:5]:
    print(row.coeffs, f"{row.rate:.4f}", "verified" if row.verified else "")
