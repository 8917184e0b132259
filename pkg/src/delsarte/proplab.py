"""Finite-n version of the barrier argument for small-support g.

For a witness (f, g, tau, rho) the Fourier weight of f defines a probability
vector lambda_i = C(n, i) f^_i^2 / sum_j C(n, j) f^_j^2, and P(s) = g^_s is
the nonnegative Krawtchouk combination 2^-n sum_i a_i K_i(s) when g has
profile (a_0, ..., a_r).  The chain

    P(d) <= rho < tau <= <g*f, f> / <f, f> = sum_i lambda_i P(i)

together with the Krawtchouk ratio estimates forces r to be large unless
lambda puts almost all of its mass in [beta n, (1 - beta) n].  Everything
here is measured per instance: the tail mass is computed, not assumed.

``barrier_search`` sweeps integer coefficient grids for g and, for each g,
a family of f, and reports the best verified rate it finds.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eig_banded
from scipy.special import gammaln

from .certificates import PairWitness, corollary_bound, verify_witness
from .fourier import POINT, SymmetricProfile, convolve_direct, fourier, point_profile
from .krawtchouk import kraw_eval_int, kraw_roots
from .scalar import binomial, jpl1_rate

__all__ = [
    "LambdaDistribution",
    "PPolynomial",
    "Property3Result",
    "RatioBounds",
    "ChainReport",
    "GridSpec",
    "BarrierRow",
    "BarrierResult",
    "lambda_distribution",
    "tail_mass",
    "p_polynomial",
    "property3_check",
    "ratio_bounds",
    "chain_eval",
    "default_beta",
    "barrier_search",
    "write_barrier_csv",
]


@dataclass(frozen=True)
class LambdaDistribution:
    n: int
    weights: tuple

    def __post_init__(self):
        if len(self.weights) != self.n + 1:
            raise ValueError("need n + 1 weights")
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")

    def mean(self) -> Fraction:
        return sum((i * w for i, w in enumerate(self.weights)), Fraction(0))


def lambda_distribution(f: SymmetricProfile) -> LambdaDistribution:
    """Normalized Fourier weight of f per level."""
    if f.side != POINT:
        raise ValueError("f must be a point profile")
    if f.is_zero():
        raise ValueError("f is identically zero")
    fh = fourier(f).values
    n = f.n
    raw = [binomial(n, i) * fh[i] * fh[i] for i in range(n + 1)]
    total = sum(raw)
    return LambdaDistribution(n, tuple(Fraction(v) / total for v in raw))


def _in_middle(i, n, beta):
    return beta * n <= i <= (1 - beta) * n


def tail_mass(lam: LambdaDistribution, beta) -> Fraction:
    """Mass of lambda outside [beta n, (1 - beta) n], exactly."""
    beta = Fraction(beta)
    if not 0 <= beta < Fraction(1, 2):
        raise ValueError("beta must lie in [0, 1/2)")
    return sum(
        (w for i, w in enumerate(lam.weights) if not _in_middle(i, lam.n, beta)),
        Fraction(0),
    )


@dataclass(frozen=True)
class PPolynomial:
    n: int
    r: int
    coeffs: tuple
    values: tuple

    def __call__(self, s: int) -> Fraction:
        return self.values[s]

    def at(self, x) -> Fraction:
        """Evaluate the polynomial 2^-n sum_i a_i K_i at any rational x."""
        from .krawtchouk import kraw_eval_rational

        return sum(
            (a * kraw_eval_rational(self.n, i, x) for i, a in enumerate(self.coeffs) if a),
            Fraction(0),
        ) / 2**self.n


def p_polynomial(g: SymmetricProfile, r: int) -> PPolynomial:
    """P(s) = g^_s, checked against 2^-n sum_{i <= r} a_i K_i(s) at every s."""
    if g.side != POINT:
        raise ValueError("g must be a point profile")
    n = g.n
    if not 0 <= r <= n:
        raise ValueError(f"r={r} outside [0, {n}]")
    if not g.is_nonnegative():
        raise ValueError("g has negative entries")
    if g.radius() > r:
        raise ValueError(f"g is supported beyond radius {r}")
    a = g.values[: r + 1]
    values = fourier(g).values
    for s in range(n + 1):
        direct = sum((a[i] * kraw_eval_int(n, i, s) for i in range(r + 1) if a[i]), Fraction(0))
        if direct / 2**n != values[s]:
            raise AssertionError(f"Krawtchouk expansion disagrees with the transform at s={s}")
    return PPolynomial(n, r, tuple(a), tuple(values))


@dataclass(frozen=True)
class Property3Result:
    lhs: Fraction
    rhs: Fraction
    weak: bool
    strict: bool

    @property
    def margin(self) -> Fraction:
        return self.lhs - self.rhs

    def __bool__(self):
        return self.weak


def property3_check(lam: LambdaDistribution, P: PPolynomial, d: int) -> Property3Result:
    """Compare sum_i lambda_i P(i) with P(d)."""
    if lam.n != P.n:
        raise ValueError("dimension mismatch")
    if not 0 <= d <= P.n:
        raise ValueError(f"d={d} outside [0, {P.n}]")
    lhs = sum((w * p for w, p in zip(lam.weights, P.values)), Fraction(0))
    rhs = P.values[d]
    return Property3Result(lhs, rhs, lhs >= rhs, lhs > rhs)


@dataclass(frozen=True)
class RatioBounds:
    n: int
    m: int
    d: int
    beta: Fraction
    lb: Fraction
    ub: Fraction
    precondition: bool
    reason: str = ""
    lower_ratio: Optional[Fraction] = None  # K_m(d) / K_m(0)
    upper_ratio: Optional[Fraction] = None  # max |K_m(i)| / K_m(d) over the middle range
    lb_holds: Optional[bool] = None
    ub_holds: Optional[bool] = None

    def as_floats(self) -> tuple[float, float]:
        return float(self.lb), float(self.ub)


def _first_root(n, m):
    return math.inf if m == 0 else kraw_roots(n, m)[0]


def ratio_bounds(n: int, m: int, d: int, beta) -> RatioBounds:
    """The two Krawtchouk ratio estimates and their actual values.

    lb = (2 beta - 2 delta)^m bounds K_m(d) / K_m(0) from below, and
    ub = (1 - 2 beta) / (2 beta - 2 delta) bounds |K_m(i)| / K_m(d) on
    beta n <= i <= (1 - beta) n, provided d < beta n < x_1(m) - 1.  When the
    precondition fails the report says so and no ratios are checked.
    """
    beta = Fraction(beta)
    if not 0 <= m <= n:
        raise ValueError(f"m={m} outside [0, {n}]")
    if not 0 < beta < Fraction(1, 2):
        raise ValueError("beta must lie in (0, 1/2)")
    delta = Fraction(d, n)
    gap = 2 * beta - 2 * delta
    lb = gap**m if gap > 0 else Fraction(0)
    ub = (1 - 2 * beta) / gap if gap > 0 else Fraction(0)
    if not d < beta * n:
        return RatioBounds(n, m, d, beta, lb, ub, False, "d >= beta n")
    x1 = _first_root(n, m)
    if not beta * n < x1 - 1:
        return RatioBounds(n, m, d, beta, lb, ub, False, f"beta n >= x_1({m}) - 1 = {x1 - 1:.6g}")
    if m == 0:
        one = Fraction(1)
        return RatioBounds(n, m, d, beta, lb, ub, True, "", one, one, True, ub >= 1)
    kd, k0 = kraw_eval_int(n, m, d), binomial(n, m)
    lower = Fraction(kd, k0)
    mids = [i for i in range(n + 1) if _in_middle(i, n, beta)]
    upper = max(Fraction(abs(kraw_eval_int(n, m, i)), kd) for i in mids)
    return RatioBounds(n, m, d, beta, lb, ub, True, "", lower, upper, lower >= lb, upper <= ub)


@dataclass(frozen=True)
class ChainReport:
    n: int
    d: int
    beta: Fraction
    r: int
    tail_mass: Fraction
    property3_lhs: Fraction
    property3_rhs: Fraction
    low_sum: Fraction
    mid_sum: Fraction
    high_sum: Fraction
    display_rhs: Fraction  # (1 - middle mass) P(0) + max_middle |P(i)|
    final_lhs: Fraction  # P(d)
    final_rhs: Optional[Fraction]
    precondition: bool
    implied_min_r: Optional[float]
    verdicts: dict = field(default_factory=dict)

    def recompute_final_rhs(self) -> Optional[Fraction]:
        gap = 2 * self.beta - Fraction(2 * self.d, self.n)
        if gap <= 0:
            return None
        return (self.tail_mass * (1 / gap) ** self.r + (1 - 2 * self.beta) / gap) * self.final_lhs

    @property
    def resum(self) -> Fraction:
        return self.low_sum + self.mid_sum + self.high_sum


def chain_eval(f: SymmetricProfile, g: SymmetricProfile, d: int, beta, r: int) -> ChainReport:
    """Evaluate every step of the final display for one (f, g).

    The tail mass plays the role of 2^(-eps_1 n).  ``verdicts`` maps each
    inequality of the chain to whether it holds for this instance; the last
    two are implied by the proof only when ``precondition`` holds.  When
    d >= beta n the ratio bound has no meaning: the three gap-dependent
    verdicts, ``final_rhs`` and ``implied_min_r`` are then None.
    """
    beta = Fraction(beta)
    n = f.n
    if not 0 < beta < Fraction(1, 2):
        raise ValueError("beta must lie in (0, 1/2)")
    if not 1 <= d <= n:
        raise ValueError(f"d={d} outside [1, {n}]")
    lam = lambda_distribution(f)
    P = p_polynomial(g, r)
    p3 = property3_check(lam, P, d)
    tail = tail_mass(lam, beta)
    low = high = mid = Fraction(0)
    for i, (w, p) in enumerate(zip(lam.weights, P.values)):
        if i < beta * n:
            low += w * p
        elif i > (1 - beta) * n:
            high += w * p
        else:
            mid += w * p
    middle = [abs(P.values[i]) for i in range(n + 1) if _in_middle(i, n, beta)]
    mid_max = max(middle) if middle else Fraction(0)
    display = tail * P.values[0] + mid_max
    gap = 2 * beta - Fraction(2 * d, n)
    Pd = P.values[d]
    verdicts = {
        "property3": p3.weak,
        "resum": low + mid + high == p3.lhs,
        "display": p3.lhs <= display,
    }
    if gap > 0:
        final_rhs = (tail * (1 / gap) ** r + (1 - 2 * beta) / gap) * Pd
        verdicts["tail_term"] = tail * P.values[0] <= tail * (1 / gap) ** r * Pd
        verdicts["middle_term"] = mid_max <= (1 - 2 * beta) / gap * Pd
        verdicts["final"] = Pd <= final_rhs
        implied = _implied_min_r(tail, beta, gap)
        precondition = beta * n < _first_root(n, r) - 1
    else:
        final_rhs = implied = None
        verdicts.update(tail_term=None, middle_term=None, final=None)
        precondition = False
    return ChainReport(n, d, beta, r, tail, p3.lhs, p3.rhs, low, mid, high, display, Pd,
                       final_rhs, precondition, implied, verdicts)


def _implied_min_r(tail, beta, gap) -> Optional[float]:
    """Smallest r for which tail (1/gap)^r + (1 - 2 beta)/gap >= 1 can hold."""
    c = (1 - 2 * beta) / gap
    if c >= 1:
        return 0.0
    if tail == 0:
        return math.inf
    if gap >= 1:
        return math.inf if tail < 1 - c else 0.0
    need = math.log2(float(1 - c)) - math.log2(float(tail)) if tail > 0 else math.inf
    return max(0.0, need / -math.log2(float(gap)))


def default_beta(delta, rate: Optional[float] = None, max_denominator: int = 10**6) -> Optional[Fraction]:
    """beta = (delta + alpha) / 2 where jpl1_rate(alpha) = rate.

    Without a rate, or when the rate is not below jpl1_rate(delta) (so that
    alpha <= delta), returns None.
    """
    from scipy.optimize import brentq

    delta = float(delta)
    if rate is None or rate >= jpl1_rate(delta):
        return None
    if rate <= 0:
        alpha = 0.5
    else:
        alpha = brentq(lambda a: jpl1_rate(a) - rate, delta, 0.5 - 1e-15, xtol=1e-14)
    return Fraction((delta + alpha) / 2).limit_denominator(max_denominator)


# ---------------------------------------------------------------------------
# barrier search


@dataclass(frozen=True)
class GridSpec:
    """Integer coefficients a_1..a_r each ranging over ``values``.

    g = 2^n sum_j a_j 1_{S(n, j)}.  a_0 is fixed to 0: it shifts g^, rho
    and tau by the same amount and leaves every bound unchanged.
    """

    values: tuple = tuple(range(50))
    families: tuple = ("ball",)
    near: float = 0.05

    def points(self, r: int):
        import itertools

        for coeffs in itertools.product(self.values, repeat=r):
            if any(coeffs):
                yield (0,) + tuple(coeffs)


@dataclass(frozen=True)
class BarrierRow:
    n: int
    d: int
    r: int
    coeffs: tuple
    family: str
    param: int
    rho: int
    tau: float
    bound: float
    rate: float
    margin: float
    verified: bool
    exact_bound: Optional[Fraction] = field(default=None, compare=False)


@dataclass(frozen=True)
class BarrierResult:
    n: int
    d: int
    r: int
    rows: tuple
    best: Optional[BarrierRow]
    jpl1: float

    @property
    def margin(self) -> Optional[float]:
        return None if self.best is None else self.best.margin


def _distance_operators(n, r):
    """Profile matrices of the distance-j adjacency A_j, j = 0..r (float)."""
    A1 = np.zeros((n + 1, n + 1))
    i = np.arange(n + 1)
    A1[i[1:], i[1:] - 1] = i[1:]
    A1[i[:-1], i[:-1] + 1] = n - i[:-1]
    mats = [np.eye(n + 1), A1]
    for j in range(1, r):
        # A1 A_j = (j + 1) A_{j+1} + (n - j + 1) A_{j-1}
        mats.append((A1 @ mats[j] - (n - j + 1) * mats[j - 1]) / (j + 1))
    return mats[: r + 1]


def _g_hat(n, coeffs):
    """g^_s = sum_j a_j K_j(s), exact integers."""
    return [sum(a * kraw_eval_int(n, j, s) for j, a in enumerate(coeffs) if a) for s in range(n + 1)]


class _Evaluator:
    def __init__(self, n, d, r, families, near):
        self.n, self.d, self.r = n, d, r
        self.families, self.near = families, near
        self.ops = _distance_operators(n, r)
        k = np.arange(n + 1)
        self.logC = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
        self.log2C = self.logC / math.log(2)
        self.jpl1 = jpl1_rate(d / n)
        self.kvals = [[kraw_eval_int(n, j, s) for s in range(n + 1)] for j in range(r + 1)]

    def g_hat(self, coeffs):
        return [sum(a * self.kvals[j][s] for j, a in enumerate(coeffs) if a) for s in range(self.n + 1)]

    # f families, each yields (param, log f on weights 0..D) with D = len - 1
    def _ball(self, T, rho):
        n, r = self.n, self.r
        D_max = n // 2
        # symmetric form: J = S T S^-1, S = diag(sqrt(C(n, i)))
        half = 0.5 * self.logC
        best_D = None
        for D in range(1, D_max + 1):
            lam, logf = self._ball_eigen(T, half, D)
            if lam > rho:
                best_D = D
                break
        if best_D is None:
            return
        for D in range(best_D, D_max + 1):
            lam, logf = self._ball_eigen(T, half, D)
            yield D, logf

    def _ball_eigen(self, T, half, D):
        r = self.r
        idx = np.arange(D + 1)
        bands = np.zeros((r + 1, D + 1))
        for k in range(r + 1):
            if k > D:
                break
            rows = idx[: D + 1 - k]
            # upper band k: J[i, i+k] = T[i, i+k] sqrt(C(n,i)/C(n,i+k))
            vals = T[rows, rows + k] * np.exp(half[rows] - half[rows + k])
            bands[r - k, k:] = vals
        w, u = eig_banded(bands, lower=False, select="i", select_range=(D, D))
        v = np.abs(u[:, 0])
        with np.errstate(divide="ignore"):
            logf = np.log(v) - half[: D + 1]
        return float(w[0]), logf

    def _two_sphere(self, T, rho):
        for dp in range(1, self.n + 1):
            logf = np.full(dp + 1, -np.inf)
            logf[dp - 1] = logf[dp] = 0.0
            yield dp, logf

    def _float_eval(self, T, gh, rho, logf):
        """(tau, log2 corollary bound) in float, from log f on 0..D."""
        n = self.n
        D = len(logf) - 1
        supp = np.isfinite(logf)
        top = min(n, D + self.r)
        ext = np.full(top + 1, -np.inf)
        ext[: D + 1] = logf
        m = np.max(logf[supp])
        f = np.exp(ext - m)
        Tf = T[: top + 1, : top + 1] @ f
        ratios = Tf[: D + 1][supp] / f[: D + 1][supp]
        tau = float(np.min(ratios))
        if not tau > rho:
            return tau, math.inf
        lsum1 = np.logaddexp.reduce(self.logC[: D + 1][supp] + logf[supp] - m)
        lsum2 = np.logaddexp.reduce(self.logC[: D + 1][supp] + 2 * (logf[supp] - m))
        log2_shape = (2 * lsum1 - lsum2) / math.log(2)
        log2_bound = math.log2((gh[0] - rho) / (tau - rho)) + log2_shape
        return tau, log2_bound

    def _exact(self, coeffs, rho, logf):
        n = self.n
        m = np.max(logf[np.isfinite(logf)])
        vals = [Fraction(float(math.exp(v - m))) if np.isfinite(v) else Fraction(0) for v in logf]
        f = point_profile(n, vals + [0] * (n + 1 - len(vals)))
        g = point_profile(n, [a * 2**n for a in coeffs] + [0] * (n - self.r))
        gf = convolve_direct(g, f)
        tau = min(gf.values[i] / f.values[i] for i in range(n + 1) if f.values[i] > 0)
        w = PairWitness(f, g, tau, rho, self.d, label=f"barrier{coeffs}")
        if tau <= rho or not verify_witness(w):
            return None
        return corollary_bound(w, check=False)

    def point(self, coeffs, exact: bool = False):
        n, d = self.n, self.d
        gh = self.g_hat(coeffs)
        rho = max(gh[d:])
        if gh[0] <= rho:
            return None
        T = sum(a * self.ops[j] for j, a in enumerate(coeffs) if a)
        best = None
        for fam in self.families:
            gen = self._ball(T, rho) if fam == "ball" else self._two_sphere(T, rho)
            stall = 0
            for param, logf in gen:
                tau, lb = self._float_eval(T, gh, rho, logf)
                if not math.isfinite(lb):
                    continue
                key = (lb, fam, param)
                if best is None or key < best[0]:
                    best, stall = (key, fam, param, tau, logf), 0
                else:
                    stall += 1
                    if fam == "ball" and stall >= 8:
                        break
        if best is None:
            return None
        (lb, fam, param), _, _, tau, logf = best
        rate = float(lb / n)
        row = dict(n=n, d=d, r=self.r, coeffs=tuple(coeffs), family=fam, param=int(param),
                   rho=rho, tau=float(tau), bound=float(2.0**lb) if lb < 1000 else math.inf,
                   rate=rate, margin=rate - self.jpl1, verified=False)
        if exact or rate < self.jpl1 + self.near:
            rep = self._exact(coeffs, rho, logf)
            if rep is None:
                return BarrierRow(**{**row, "rate": math.inf, "margin": math.inf})
            rate = rep.rate
            row.update(bound=float(rep.bound), rate=rate, margin=rate - self.jpl1,
                       verified=True, exact_bound=rep.bound)
        return BarrierRow(**row)


_WORKER: dict = {}


def _init_worker(args):
    _WORKER["ev"] = _Evaluator(*args)


def _eval_point(coeffs):
    return _WORKER["ev"].point(coeffs)


def barrier_search(
    n: int,
    d: int,
    r: int,
    grid: Optional[GridSpec] = None,
    jobs: int = 1,
) -> BarrierResult:
    """Sweep g over the grid and f over the chosen families.

    Each grid point keeps its f with the smallest float corollary bound;
    points whose float rate lies within ``grid.near`` of the first linear
    programming bound are rebuilt in exact arithmetic and verified, and only
    verified rows can be reported as ``best``.  Equal rates are broken by
    the grid coordinates.
    """
    grid = grid or GridSpec()
    if not 1 <= d <= n // 2:
        raise ValueError(f"need 1 <= d <= n/2, got d={d}")
    if not 1 <= r <= 4:
        raise ValueError("r must lie in [1, 4]")
    points = list(grid.points(r))
    if not points:
        raise ValueError("empty grid")
    args = (n, d, r, tuple(grid.families), grid.near)
    if jobs <= 1:
        _init_worker(args)
        rows = [_eval_point(p) for p in points]
    else:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(args,)) as pool:
            rows = list(pool.map(_eval_point, points, chunksize=16))
    rows = [row for row in rows if row is not None]
    if rows and not any(row.verified for row in rows):
        # nothing near the threshold: verify the best float rows exactly
        ev = _Evaluator(*args)
        for k in sorted(range(len(rows)), key=lambda k: (rows[k].rate, rows[k].coeffs)):
            row = ev.point(rows[k].coeffs, exact=True)
            rows[k] = row
            if row.verified:
                break
    rows = tuple(rows)
    verified = [row for row in rows if row.verified]
    best = min(verified, key=lambda row: (row.rate, row.coeffs)) if verified else None
    return BarrierResult(n, d, r, rows, best, jpl1_rate(d / n))


_BASE_FIELDS = ["n", "d", "r"]


def write_barrier_csv(result: BarrierResult, path_or_file) -> None:
    if isinstance(path_or_file, (str, os.PathLike)):
        with open(path_or_file, "w", newline="") as fh:
            write_barrier_csv(result, fh)
        return
    out = csv.writer(path_or_file, lineterminator="\n")
    coeff_names = [f"a{j}" for j in range(result.r + 1)]
    out.writerow(_BASE_FIELDS + coeff_names
                 + ["rho", "tau", "bound", "rate", "margin", "verified", "family", "f_param"])
    for row in result.rows:
        out.writerow([row.n, row.d, row.r, *row.coeffs, row.rho, repr(row.tau), repr(row.bound),
                      repr(row.rate), repr(row.margin), int(row.verified), row.family, row.param])
