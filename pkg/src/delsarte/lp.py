"""Exact optimal feasible solutions by rational simplex.

The variables are the Fourier profile x_s = Lambda^_s, s = 0..n.  The
point values are Lambda(i) = sum_s x_s K_s(i), and the program is

    minimize 2^n x_0
    subject to  Lambda(0) = 1,  Lambda(i) >= 0 (i >= 1),  x_s <= 0 (s >= d).

With Lambda(0) = 1 the objective is the bound 2^n Lambda^(0) / Lambda(0).
The solver is a dense two-phase tableau over Fractions with Bland's rule,
so it cannot cycle and every run on the same instance makes the same pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .certificates import Certificate, delsarte_bound, verify_feasible
from .fourier import SymmetricProfile, fourier_profile, inverse_fourier
from .krawtchouk import KrawtchoukTable, krawtchouk_table

__all__ = [
    "MAX_LP_N",
    "LPInstance",
    "LPSolution",
    "IterationLimitError",
    "build_lp",
    "simplex_solve",
    "solve_standard_form",
    "extract_certificate",
    "optimal_certificate",
]

MAX_LP_N = 32

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


class IterationLimitError(RuntimeError):
    def __init__(self, message, basis=None):
        super().__init__(message)
        self.basis = basis


@dataclass(frozen=True)
class LPInstance:
    n: int
    d: int
    kraw: KrawtchoukTable = field(repr=False)

    @property
    def num_variables(self) -> int:
        return self.n + 1

    def point_row(self, i: int) -> list[int]:
        """Coefficients of Lambda(i) in the Fourier variables."""
        return [self.kraw[s, i] for s in range(self.n + 1)]

    def sign(self, s: int) -> str:
        return "nonpos" if s >= self.d else "free"

    @property
    def constraints(self) -> list[tuple]:
        """(kind, index) for the n+1 point rows and the n+1 sign rows."""
        rows = [("normalize", 0)] + [("nonneg", i) for i in range(1, self.n + 1)]
        return rows + [(self.sign(s), s) for s in range(self.n + 1)]

    @property
    def objective(self) -> list[int]:
        return [2**self.n] + [0] * self.n


@dataclass(frozen=True)
class LPSolution:
    status: str
    hat_profile: Optional[SymmetricProfile]
    objective: Optional[Fraction]
    pivot_count: int
    pivots: tuple = field(default=(), repr=False)


def build_lp(n: int, d: int, max_n: int = MAX_LP_N) -> LPInstance:
    if not 1 <= n <= max_n:
        raise ValueError(f"n={n} outside [1, {max_n}]")
    if not 1 <= d <= n:
        raise ValueError(f"d={d} outside [1, {n}]")
    return LPInstance(n, d, krawtchouk_table(n))


def _pivot(T, r, j):
    row = T[r]
    p = row[j]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for k, other in enumerate(T):
        if k != r:
            a = other[j]
            if a:
                T[k] = [x - a * y for x, y in zip(other, row)]


def _run(T, basis, obj, allowed, log, phase, max_iter):
    """Bland-rule iterations on tableau T (last column is the RHS)."""
    m = len(T)
    rhs = len(obj) - 1
    while True:
        if len(log) >= max_iter:
            raise IterationLimitError(f"simplex exceeded {max_iter} pivots", basis=list(basis))
        enter = next((j for j in range(rhs) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for r in range(m):
            a = T[r][enter]
            if a > 0:
                ratio = T[r][rhs] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            return UNBOUNDED
        r = best[1]
        log.append((phase, enter, basis[r]))
        T.append(obj)
        _pivot(T, r, enter)
        obj[:] = T.pop()
        basis[r] = enter


def solve_standard_form(A, b, c, max_iter: int = 10_000):
    """minimize c.x subject to A x = b, x >= 0, exactly.

    Returns ``(status, x, pivots)`` where ``pivots`` lists
    (phase, entering, leaving) in order.
    """
    m, N = len(A), len(c)
    T = []
    for row, bi in zip(A, b):
        row = [Fraction(v) for v in row]
        bi = Fraction(bi)
        if bi < 0:
            row, bi = [-v for v in row], -bi
        T.append(row + [Fraction(0)] * m + [bi])
    for r in range(m):
        T[r][N + r] = Fraction(1)
    basis = [N + r for r in range(m)]
    width = N + m
    log: list = []

    # phase 1: minimize the sum of artificials
    obj = [Fraction(0)] * N + [Fraction(1)] * m + [Fraction(0)]
    for r in range(m):
        obj = [o - t for o, t in zip(obj, T[r])]
    _run(T, basis, obj, [True] * width, log, 1, max_iter)
    if -obj[width] != 0:
        return INFEASIBLE, None, tuple(log)

    # drive zero-level artificials out of the basis; drop redundant rows
    r = 0
    while r < len(T):
        if basis[r] >= N:
            j = next((j for j in range(N) if T[r][j] != 0), None)
            if j is None:
                del T[r]
                del basis[r]
                continue
            log.append((1, j, basis[r]))
            _pivot(T, r, j)
            basis[r] = j
        r += 1

    # phase 2
    obj = [Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    for r, j in enumerate(basis):
        if obj[j]:
            a = obj[j]
            obj = [o - a * t for o, t in zip(obj, T[r])]
    allowed = [True] * N + [False] * m
    status = _run(T, basis, obj, allowed, log, 2, max_iter)
    if status != OPTIMAL:
        return status, None, tuple(log)
    x = [Fraction(0)] * N
    for r, j in enumerate(basis):
        x[j] = T[r][width]
    return OPTIMAL, x, tuple(log)


def simplex_solve(lp: LPInstance, max_iter: int = 10_000) -> LPSolution:
    """Solve the instance exactly.

    Free variables x_s (s < d) are split as u_s - v_s; the others enter as
    x_s = -z_s with z_s >= 0; rows i >= 1 get a surplus column.
    """
    n, d = lp.n, lp.d
    cols = []  # (variable s, sign) per structural column
    for s in range(n + 1):
        if lp.sign(s) == "free":
            cols += [(s, 1), (s, -1)]
        else:
            cols.append((s, -1))
    ncols = len(cols) + n
    A, b = [], []
    for i in range(n + 1):
        K = lp.point_row(i)
        row = [sgn * K[s] for s, sgn in cols] + [0] * n
        if i >= 1:
            row[len(cols) + i - 1] = -1
        A.append(row)
        b.append(1 if i == 0 else 0)
    obj = lp.objective
    c = [sgn * obj[s] for s, sgn in cols] + [0] * n
    assert len(c) == ncols
    status, x, pivots = solve_standard_form(A, b, c, max_iter)
    if status != OPTIMAL:
        return LPSolution(status, None, None, len(pivots), pivots)
    hat = [Fraction(0)] * (n + 1)
    for (s, sgn), v in zip(cols, x):
        hat[s] += sgn * v
    return LPSolution(OPTIMAL, fourier_profile(n, hat), 2**n * hat[0], len(pivots), pivots)


def extract_certificate(sol: LPSolution, n: int, d: int) -> Certificate:
    """Certificate from an optimal solution; its bound equals the objective."""
    if sol.status != OPTIMAL:
        raise ValueError(f"no certificate from a {sol.status} solution")
    if sol.hat_profile.n != n:
        raise ValueError("solution dimension does not match n")
    cert = verify_feasible(inverse_fourier(sol.hat_profile), d)
    if not cert.feasible:
        raise AssertionError(f"simplex optimum failed exact verification: {cert.verdict}")
    if delsarte_bound(cert).bound != sol.objective:
        raise AssertionError("certificate bound differs from the LP objective")
    return cert


def optimal_certificate(n: int, d: int) -> tuple[Certificate, LPSolution]:
    sol = simplex_solve(build_lp(n, d))
    return extract_certificate(sol, n, d), sol
