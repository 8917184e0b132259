"""The three example pair witnesses, and the Hamming-ball spectrum.

On symmetric profiles, convolving with g0 = 2^n 1_{S(n,1)} sums a function
over neighbours: (g0 * f)_i = i f_{i-1} + (n - i) f_{i+1}.  Restricted to
the ball of radius D this is the (D+1) x (D+1) tridiagonal operator
``T_D`` with sub-diagonal i and super-diagonal n - i.  Its leading minors
p_k(t) = det(t I - T_{k-1}) obey

    p_0 = 1,  p_1 = t,  p_{k+1} = t p_k - k (n - k + 1) p_{k-1},

and, T_D being similar to a symmetric matrix, lambda_max(T_D) >= t exactly
when some p_k(t) <= 0 for k <= D + 1 (Sylvester).  The same minors give the
vector v_k = p_k(t) / (n (n-1) ... (n-k+1)), which satisfies the eigen
equation at t on weights < D; at the first k with p_k(t) <= 0 it is
positive on the ball and g0 * v >= t v holds exactly.  Example 1 uses that
vector as f, so the whole pipeline stays rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .certificates import (
    Certificate,
    PairWitness,
    corollary_bound,
    delsarte_bound,
    dh_construct,
    support_bound,
    verify_witness,
)
from .fourier import convolve_direct, delta_profile, point_profile, sphere_profile

__all__ = [
    "BallSpectrum",
    "ConstructionError",
    "ball_spectrum",
    "ball_minors",
    "lambda_max_at_least",
    "sturm_radius",
    "sturm_vector",
    "ball_eigen_profile",
    "example1",
    "example2",
    "example2_g",
    "example3",
    "witness_bounds",
]


class ConstructionError(RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def _minors(n, tau, kmax):
    """Yield (k, P_k) with P_k = q^k p_k(tau) as integers, k = 1..kmax."""
    tau = Fraction(tau)
    p, q = tau.numerator, tau.denominator
    qq = q * q
    prev, cur = 1, p
    yield 1, cur
    for k in range(1, kmax):
        prev, cur = cur, p * cur - k * (n - k + 1) * qq * prev
        yield k + 1, cur


def ball_minors(n: int, D: int, tau) -> list[int]:
    """Scaled leading minors q^k det(tau I - T_{k-1}) for k = 1..D+1."""
    return [v for _, v in _minors(n, tau, D + 1)]


def lambda_max_at_least(n: int, D: int, tau) -> bool:
    """Exact decision of lambda_max(T_D) >= tau for rational tau."""
    if not 0 <= D <= n:
        raise ValueError(f"radius {D} outside [0, {n}]")
    return any(v <= 0 for _, v in _minors(n, tau, D + 1))


def sturm_radius(n: int, tau) -> Optional[int]:
    """Smallest D with lambda_max(T_D) >= tau, or None if there is none."""
    for k, v in _minors(n, tau, n + 1):
        if v <= 0:
            return k - 1
    return None


def sturm_vector(n: int, tau, D: int):
    """Profile v on weights 0..D (zero beyond) with (T v)_i = tau v_i, i < D.

    Scaled by n (n-1) ... (n-D+1) so that it is integral for integral tau.
    """
    tau = Fraction(tau)
    p = [Fraction(1), tau]
    for k in range(1, D):
        p.append(tau * p[k] - k * (n - k + 1) * p[k - 1])
    vals = []
    for k in range(D + 1):
        scale = 1
        for j in range(k, D):
            scale *= n - j
        vals.append(p[k] * scale)
    return point_profile(n, vals + [0] * (n - D))


@dataclass(frozen=True)
class BallSpectrum:
    n: int
    D: int
    lambda_max: float
    lo: Fraction
    hi: Fraction
    eigen_profile: tuple

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def ball_eigen_profile(n: int, D: int):
    """(lambda_max, Perron vector on weights 0..D) of T_D in float64."""
    if D == 0:
        return 0.0, np.ones(1)
    k = np.arange(D)
    off = np.sqrt((k + 1.0) * (n - k))
    w, u = eigh_tridiagonal(np.zeros(D + 1), off, select="i", select_range=(D, D))
    # T = S^-1 J S with S = diag(sqrt(C(n, i)))
    i = np.arange(D + 1)
    log_binom = gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1)
    with np.errstate(divide="ignore"):
        logf = np.log(np.abs(u[:, 0])) - 0.5 * log_binom
    f = np.exp(logf - np.max(logf))
    return float(w[0]), f


def ball_spectrum(n: int, D: int) -> BallSpectrum:
    """Largest eigenvalue of T_D with a rational enclosure checked by Sturm."""
    if not 0 <= D <= n:
        raise ValueError(f"radius {D} outside [0, {n}]")
    lam, f = ball_eigen_profile(n, D)
    limit = Fraction(1, 10**9) * n
    centre = Fraction(lam)
    eps = Fraction(max(abs(lam), 1.0) * 2.0**-46)
    while 2 * eps <= limit:
        lo, hi = centre - eps, centre + eps
        if lambda_max_at_least(n, D, lo) and not lambda_max_at_least(n, D, hi):
            break
        eps *= 4
    else:
        lo, hi = _bisect_enclosure(n, D, limit)
    if D == 0:
        lo = hi = Fraction(0)
    return BallSpectrum(n, D, lam, lo, hi, tuple(float(v) for v in f))


def _bisect_enclosure(n, D, width):
    # exact fallback: lambda_max lies in [0, n]
    lo, hi = Fraction(0), Fraction(n) + 1
    while hi - lo > width:
        mid = (lo + hi) / 2
        if lambda_max_at_least(n, D, mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _g0(n):
    return sphere_profile(n, 1, 2**n)


def example1(n: int, d: int, f_kind: str = "sturm") -> PairWitness:
    """g = 2^n 1_{S(n,1)}, rho = n - 2d, tau = n - 2d + 1, f on the ball B(n, D).

    D is the smallest radius whose ball has lambda_max >= tau (decided
    exactly).  ``f_kind="sturm"`` takes the exact vector from the minors;
    ``"eigen"`` takes the float Perron vector converted to rationals, which
    need not pass the exact check when lambda_max is close to tau.
    """
    if not 1 <= d <= n / 2:
        raise ValueError(f"example 1 needs 1 <= d <= n/2, got n={n}, d={d}")
    tau, rho = n - 2 * d + 1, n - 2 * d
    D = sturm_radius(n, tau)
    if D is None:
        raise ConstructionError(f"no ball radius reaches lambda_max >= {tau}")
    if f_kind == "sturm":
        f = sturm_vector(n, tau, D)
    elif f_kind == "eigen":
        _, vec = ball_eigen_profile(n, D)
        f = point_profile(n, [Fraction(float(v)) for v in vec] + [0] * (n - D))
    else:
        raise ValueError(f"unknown f_kind {f_kind!r}")
    return PairWitness(f, _g0(n), tau, rho, d, label=f"example1(D={D})")


def example2_g(n: int, m: int):
    """m-fold self-convolution of g0; equals 2^n times the m-step walk counts."""
    if m < 1:
        raise ValueError("m must be >= 1")
    g0 = _g0(n)
    g = g0
    for _ in range(m - 1):
        g = convolve_direct(g0, g)
    return g


def example2(n: int, d: int, m: int, strict: bool = True) -> PairWitness:
    """g = g0^{*m}, f = 1_{S(n,d')} + 1_{S(n,d'-1)}, rho = (n-2d)^m, tau = rho + 1.

    d' is the smallest radius in [1, n] for which g * f >= tau f holds
    exactly.  With ``strict`` the full witness must verify, otherwise a
    ConstructionError carries the verdict.
    """
    if not 1 <= d <= n / 2:
        raise ValueError(f"example 2 needs 1 <= d <= n/2, got n={n}, d={d}")
    rho = (n - 2 * d) ** m
    tau = rho + 1
    g = example2_g(n, m)
    for dp in range(1, n + 1):
        f = point_profile(n, [1 if i in (dp - 1, dp) else 0 for i in range(n + 1)])
        gf = convolve_direct(g, f)
        if all(gf.values[i] >= tau for i in (dp - 1, dp)):
            break
    else:
        raise ConstructionError(
            f"no d' in [1, {n}] satisfies g * f >= tau f",
            {"n": n, "d": d, "m": m, "tau": tau},
        )
    w = PairWitness(f, g, tau, rho, d, label=f"example2(m={m}, d'={dp})")
    if strict:
        v = verify_witness(w)
        if not v:
            raise ConstructionError(
                f"example 2 witness fails verification: {v}",
                {"n": n, "d": d, "m": m, "d_prime": dp, "verdict": v},
            )
    return w


def example3(lambda0: Certificate) -> PairWitness:
    """g = Lambda0, f = 2^n 1_{0}, tau = Lambda0(0) / 2^n, rho = 0."""
    if not lambda0.feasible:
        raise ConstructionError(f"Lambda0 is not feasible: {lambda0.verdict}")
    lam0 = lambda0.lam
    if lam0.values[0] <= 0:
        raise ConstructionError("Lambda0(0) must be positive (tau = rho = 0 otherwise)")
    n = lam0.n
    return PairWitness(delta_profile(n), lam0, lam0.values[0] / 2**n, 0, lambda0.d, label="example3")


def witness_bounds(w: PairWitness, check: bool = True) -> dict:
    """Corollary, support and LP (dh_construct) bounds of one witness."""
    if check:
        v = verify_witness(w)
        if not v:
            raise ConstructionError(f"invalid witness: {v}", {"verdict": v})
    out = {
        "corollary": corollary_bound(w, check=False),
        "support": support_bound(w, check=False),
    }
    cert = dh_construct(w, check=False)
    out["delsarte"] = delsarte_bound(cert, method=f"dh:{w.label}")
    return out
