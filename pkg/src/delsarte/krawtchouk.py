"""Krawtchouk polynomials for the binary Hamming scheme.

``K_s(x) = sum_k (-1)^k C(x, k) C(n - x, s - k)``.  Integer values are
exact Python ints; real-argument values come from the three-term recurrence

    (k + 1) K_{k+1}(x) = (n - 2x) K_k(x) - (n - k + 1) K_{k-1}(x)

run in exact arithmetic at the (dyadic) value of the float argument.  The
plain float64 recurrence is unstable for s > n/2, where K_s is the recessive
solution.

Zeros of K_m are the eigenvalues of the m x m Jacobi matrix with diagonal
n/2 and off-diagonal sqrt((k + 1)(n - k)) / 2; ``kraw_roots`` brackets them
on the integer grid (exactly) and refines by Sturm-count bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .scalar import binomial

__all__ = [
    "KrawtchoukTable",
    "KrawtchoukRootError",
    "RootList",
    "kraw_eval_int",
    "kraw_eval_real",
    "kraw_eval_rational",
    "kraw_column",
    "kraw_row",
    "krawtchouk_table",
    "reciprocity_holds",
    "kraw_roots",
    "first_root_lower_bound",
]


def _check_dim(n, *idx):
    if n < 0:
        raise ValueError(f"dimension must be >= 0, got {n}")
    for name, v in idx:
        if not 0 <= v <= n:
            raise ValueError(f"{name}={v} outside [0, {n}]")


def kraw_eval_int(n: int, s: int, i: int) -> int:
    """K_s(i) from the explicit alternating sum."""
    _check_dim(n, ("s", s), ("i", i))
    return sum((-1) ** k * binomial(i, k) * binomial(n - i, s - k) for k in range(s + 1))


@lru_cache(maxsize=4096)
def kraw_column(n: int, i: int) -> tuple[int, ...]:
    """(K_0(i), ..., K_n(i)) via the recurrence in the degree (exact division)."""
    _check_dim(n, ("i", i))
    col = [1]
    if n == 0:
        return tuple(col)
    col.append(n - 2 * i)
    for k in range(1, n):
        num = (n - 2 * i) * col[k] - (n - k + 1) * col[k - 1]
        col.append(num // (k + 1))
    return tuple(col)


@lru_cache(maxsize=4096)
def kraw_row(n: int, s: int) -> tuple[int, ...]:
    """(K_s(0), ..., K_s(n)), using C(n, x) K_s(x) = C(n, s) K_x(s)."""
    _check_dim(n, ("s", s))
    col = kraw_column(n, s)
    row = _binomial_row(n)
    cs = row[s]
    return tuple(cs * col[x] // row[x] for x in range(n + 1))


@lru_cache(maxsize=256)
def _binomial_row(n: int) -> tuple[int, ...]:
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    return tuple(row)


@dataclass(frozen=True)
class KrawtchoukTable:
    """Exact values ``values[s][i] = K_s(i)`` for 0 <= s, i <= n."""

    n: int
    values: tuple[tuple[int, ...], ...]

    def __getitem__(self, key):
        s, i = key
        return self.values[s][i]

    def row(self, s: int) -> tuple[int, ...]:
        return self.values[s]

    def check_invariants(self) -> bool:
        n, K = self.n, self.values
        if any(K[0][i] != 1 for i in range(n + 1)):
            return False
        if any(K[s][0] != binomial(n, s) for s in range(n + 1)):
            return False
        return all(
            binomial(n, i) * K[s][i] == binomial(n, s) * K[i][s]
            for s in range(n + 1)
            for i in range(s + 1)
        )


@lru_cache(maxsize=64)
def krawtchouk_table(n: int) -> KrawtchoukTable:
    cols = [kraw_column(n, i) for i in range(n + 1)]
    values = tuple(tuple(cols[i][s] for i in range(n + 1)) for s in range(n + 1))
    return KrawtchoukTable(n, values)


def reciprocity_holds(n: int, i: int, j: int) -> bool:
    """C(n, j) K_i(j) == C(n, i) K_j(i), both sides from the explicit sum."""
    _check_dim(n, ("i", i), ("j", j))
    return binomial(n, j) * kraw_eval_int(n, i, j) == binomial(n, i) * kraw_eval_int(n, j, i)


def _scaled_recurrence(n, m, p, q):
    # A_j = j! q^j K_j(p/q) satisfies an all-integer recurrence
    a0, a1 = 1, q * n - 2 * p
    if m == 0:
        return a0
    c = q * n - 2 * p
    qq = q * q
    for j in range(1, m):
        a0, a1 = a1, c * a1 - j * (n - j + 1) * qq * a0
    return a1


def kraw_eval_rational(n: int, m: int, x) -> Fraction:
    """Exact K_m(x) at a rational point."""
    _check_dim(n, ("m", m))
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    return Fraction(_scaled_recurrence(n, m, p, q), math.factorial(m) * q**m)


def kraw_eval_real(n: int, m: int, x):
    """K_m(x) for real x (scalar or array), correctly rounded to float64."""
    _check_dim(n, ("m", m))
    if np.ndim(x) == 0:
        return float(kraw_eval_rational(n, m, Fraction(float(x))))
    arr = np.asarray(x, dtype=float)
    out = [float(kraw_eval_rational(n, m, Fraction(v))) for v in arr.ravel()]
    return np.array(out).reshape(arr.shape)


class KrawtchoukRootError(RuntimeError):
    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


@dataclass(frozen=True)
class RootList:
    n: int
    m: int
    roots: tuple[float, ...]
    tolerance: float

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, k):
        return self.roots[k]


def _count_below(n, m, x):
    """Number of zeros of K_m below each entry of x (Sturm count, vectorized)."""
    x = np.asarray(x, dtype=float)
    k = np.arange(m - 1)
    b2 = (k + 1.0) * (n - k) / 4.0
    tiny = np.finfo(float).tiny * max(n, 1)
    count = np.zeros(x.shape, dtype=int)
    q = n / 2.0 - x
    for j in range(m):
        if j > 0:
            q = (n / 2.0 - x) - b2[j - 1] / q
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0
    return count


def kraw_roots(n: int, m: int, tol: float | None = None) -> RootList:
    """The m distinct zeros x_1 < ... < x_m of K_m, all inside (0, n).

    Each open interval (k, k+1) holds at most one zero (orthogonality on the
    integer points), so the exact integer values K_m(0..n) bracket every
    zero; bisection then runs to absolute width ``tol`` (default 1e-10 n).
    """
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    if tol is None:
        tol = 1e-10 * n
    vals = kraw_row(n, m)
    exact, brackets = [], []
    for k in range(n):
        if vals[k] == 0:
            exact.append(k)
        elif vals[k + 1] != 0 and (vals[k] > 0) != (vals[k + 1] > 0):
            brackets.append(k)
    if len(exact) + len(brackets) != m:
        raise KrawtchoukRootError(
            f"found {len(exact) + len(brackets)} sign changes for K_{m} at n={n}, expected {m}",
            bracket=(0, n),
        )
    roots = {float(k): k for k in exact}
    if brackets:
        lo = np.array(brackets, dtype=float)
        hi = lo + 1.0
        # target: root index = number of zeros strictly below lo + 1
        want = _count_below(n, m, lo) + 1
        while np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            below = _count_below(n, m, mid) >= want
            hi = np.where(below, mid, hi)
            lo = np.where(below, lo, mid)
        for k, a, b in zip(brackets, lo, hi):
            r = float(0.5 * (a + b))
            if not k < r < k + 1:
                raise KrawtchoukRootError(
                    f"bisection for K_{m} (n={n}) left its bracket", bracket=(k, k + 1)
                )
            roots[r] = k
    out = sorted(roots)
    if 0 < out[0] < _TINY:
        # absolute bisection cannot separate zeros this close to 0, so the
        # first zero is refined to relative precision (its mirror n - x_1
        # is not representable apart from n and keeps the bisection value)
        out[0] = _refine_small_root(n, m, out[0] + tol)
    return RootList(n, m, tuple(out), tol)


_TINY = 1e-3


def _refine_small_root(n, m, upper):
    """Zero of K_m in (0, upper) to relative width 1e-13, by exact signs."""
    def negative(x):
        return kraw_eval_rational(n, m, x) < 0

    hi = Fraction(upper)
    if not negative(hi):
        hi = Fraction(1)
    while negative(hi / 2):
        hi /= 2
    lo = hi / 2
    while hi - lo > Fraction(1, 10**13) * hi:
        mid = (lo + hi) / 2
        if negative(mid):
            hi = mid
        else:
            lo = mid
    return float((lo + hi) / 2)


def first_root_lower_bound(n: int, m: int) -> float:
    """Lower bound n/2 - sqrt(m (n - m + 2)) on the smallest zero of K_m."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    return n / 2 - math.sqrt(m * (n - m + 2))
