"""Feasible solutions of the dual LP, their bounds, and pair witnesses.

A feasible solution is a nonzero symmetric Lambda >= 0 whose Fourier
coefficients vanish or are negative at every weight >= d; any code of
minimum distance d then has at most ``2^n Lambda^(0) / Lambda(0)`` words.

A pair witness ``(f, g, tau, rho)`` with f >= 0, g * f >= tau f,
g^_s <= rho for s >= d and tau > rho yields the feasible solution
``Lambda = g * f * f - rho (f * f)``.

All verdicts are decided in exact arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .fourier import (
    FOURIER,
    POINT,
    SymmetricProfile,
    convolve,
    convolve_direct,
    fourier,
    inner,
    profile_from_json,
    profile_to_json,
)
from .scalar import format_exact, parse_exact, rate_of

__all__ = [
    "MAX_VIOLATIONS",
    "Violation",
    "Verdict",
    "Certificate",
    "PairWitness",
    "BoundReport",
    "InvalidWitnessError",
    "InfeasibleCertificateError",
    "UndefinedBoundError",
    "verify_feasible",
    "delsarte_bound",
    "verify_witness",
    "dh_construct",
    "corollary_bound",
    "support_bound",
    "witness_convolution",
    "certificate_to_json",
    "certificate_from_json",
    "dumps_certificate",
    "loads_certificate",
]

MAX_VIOLATIONS = 32
# g with support radius up to this is convolved in the point domain
_DIRECT_RADIUS = 8


class InvalidWitnessError(ValueError):
    pass


class InfeasibleCertificateError(ValueError):
    pass


class UndefinedBoundError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class Violation:
    condition: str
    weight: Optional[int] = None
    value: Optional[Fraction] = None

    def __str__(self):
        if self.weight is None:
            return self.condition
        return f"{self.condition} at weight {self.weight} (value {format_exact(self.value)})"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: tuple = ()
    truncated: bool = False

    def __bool__(self):
        return self.ok

    @property
    def reason(self) -> Optional[str]:
        return str(self.violations[0]) if self.violations else None

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


class _Collector:
    def __init__(self, cap=MAX_VIOLATIONS):
        self.items, self.cap, self.truncated = [], cap, False

    def add(self, *args):
        if len(self.items) < self.cap:
            self.items.append(Violation(*args))
        else:
            self.truncated = True

    def verdict(self):
        return Verdict(not self.items, tuple(self.items), self.truncated)


@dataclass(frozen=True)
class Certificate:
    n: int
    d: int
    lam: SymmetricProfile
    lam_hat: SymmetricProfile
    verdict: Verdict

    @property
    def feasible(self) -> bool:
        return self.verdict.ok


@dataclass(frozen=True)
class PairWitness:
    f: SymmetricProfile
    g: SymmetricProfile
    tau: Fraction
    rho: Fraction
    d: int
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "tau", Fraction(self.tau))
        object.__setattr__(self, "rho", Fraction(self.rho))

    @property
    def n(self) -> int:
        return self.f.n


@dataclass(frozen=True)
class BoundReport:
    n: int
    d: int
    bound: Fraction
    rate: float
    method: str
    feasible: bool
    witness: Optional[PairWitness] = field(default=None, repr=False, compare=False)


def _report(n, d, bound, method, feasible=True, witness=None):
    bound = Fraction(bound)
    rate = rate_of(bound, n) if bound > 0 else float("-inf")
    return BoundReport(n, d, bound, rate, method, feasible, witness)


def _check_distance(n, d):
    if not 1 <= d <= n:
        raise ValueError(f"distance d={d} outside [1, {n}]")


def verify_feasible(lam: SymmetricProfile, d: int) -> Certificate:
    """Check Lambda >= 0, Lambda^_s <= 0 for s >= d, Lambda != 0.

    Every violation is listed (up to ``MAX_VIOLATIONS``), the first one
    being the lowest offending weight of the first failed condition.
    """
    if lam.side != POINT:
        raise ValueError("a certificate is given by its point profile")
    _check_distance(lam.n, d)
    lam_hat = fourier(lam)
    bad = _Collector()
    if lam.is_zero():
        bad.add("zero")
    for i, v in enumerate(lam.values):
        if v < 0:
            bad.add("lambda<0", i, v)
    for s in range(d, lam.n + 1):
        if lam_hat.values[s] > 0:
            bad.add("lambda_hat>0", s, lam_hat.values[s])
    return Certificate(lam.n, d, lam, lam_hat, bad.verdict())


def delsarte_bound(cert: Certificate, method: str = "delsarte") -> BoundReport:
    """Exact 2^n Lambda^(0) / Lambda(0) for a feasible certificate."""
    if not cert.feasible:
        raise InfeasibleCertificateError(f"certificate is infeasible: {cert.verdict}")
    lam0 = cert.lam.values[0]
    if lam0 == 0:
        raise UndefinedBoundError("Lambda(0) = 0: the bound is undefined")
    bound = 2**cert.n * cert.lam_hat.values[0] / lam0
    return _report(cert.n, cert.d, bound, method)


def witness_convolution(g: SymmetricProfile, f: SymmetricProfile) -> SymmetricProfile:
    """g * f, in the point domain when g has small support."""
    if g.radius() <= _DIRECT_RADIUS:
        return convolve_direct(g, f)
    return convolve(g, f)


def verify_witness(w: PairWitness) -> Verdict:
    """Exact check of f >= 0, tau > rho, g * f >= tau f and g^_s <= rho (s >= d)."""
    f, g = w.f, w.g
    bad = _Collector()
    if f.side != POINT or g.side != POINT:
        raise ValueError("witness functions are point profiles")
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    _check_distance(f.n, w.d)
    if w.tau <= w.rho:
        bad.add("tau<=rho")
    for i, v in enumerate(f.values):
        if v < 0:
            bad.add("f<0", i, v)
    gf = witness_convolution(g, f)
    for i, (a, b) in enumerate(zip(gf.values, f.values)):
        if a < w.tau * b:
            bad.add("g*f<tau*f", i, a - w.tau * b)
    gh = fourier(g)
    for s in range(w.d, f.n + 1):
        if gh.values[s] > w.rho:
            bad.add("g_hat>rho", s, gh.values[s] - w.rho)
    return bad.verdict()


def dh_construct(w: PairWitness, check: bool = True) -> Certificate:
    """Lambda = g * f * f - rho (f * f), verified as a feasible solution."""
    if check:
        v = verify_witness(w)
        if not v:
            raise InvalidWitnessError(f"invalid witness: {v}")
    f = w.f
    ff = convolve(f, f)
    gff = convolve(witness_convolution(w.g, f), f)
    return verify_feasible(gff - w.rho * ff, w.d)


def _ratio_factor(w):
    if w.tau == w.rho:
        raise UndefinedBoundError("tau = rho")
    return (w.g.mean() - w.rho) / (w.tau - w.rho)


def corollary_bound(w: PairWitness, check: bool = True) -> BoundReport:
    """(g^(0) - rho) / (tau - rho) * 2^n f^(0)^2 / <f, f>."""
    if check:
        v = verify_witness(w)
        if not v:
            raise InvalidWitnessError(f"invalid witness: {v}")
    f = w.f
    fh0 = f.mean()
    if fh0 <= 0:
        raise UndefinedBoundError("f^(0) must be positive")
    bound = _ratio_factor(w) * 2**f.n * fh0 * fh0 / inner(f, f)
    return _report(f.n, w.d, bound, "corollary", witness=w)


def support_bound(w: PairWitness, support_size=None, check: bool = True) -> BoundReport:
    """(g^(0) - rho) / (tau - rho) * |supp f|, the Cauchy-Schwarz weakening."""
    if check:
        v = verify_witness(w)
        if not v:
            raise InvalidWitnessError(f"invalid witness: {v}")
    size = w.f.support_size()
    if support_size is not None and Fraction(support_size) != size:
        raise ValueError(f"support size {support_size} does not match |supp f| = {size}")
    return _report(w.n, w.d, _ratio_factor(w) * size, "support", witness=w)


def _verdict_to_json(v: Verdict):
    return {
        "status": "feasible" if v.ok else "infeasible",
        "violations": [
            {"condition": x.condition, "weight": x.weight,
             "value": None if x.value is None else format_exact(x.value)}
            for x in v.violations
        ],
    }


def certificate_to_json(cert: Certificate, method: str = "delsarte") -> dict:
    bound = rate = None
    if cert.feasible and cert.lam.values[0] != 0:
        rep = delsarte_bound(cert, method)
        bound, rate = format_exact(rep.bound), rep.rate
    return {
        "n": cert.n,
        "d": cert.d,
        "lambda": profile_to_json(cert.lam),
        "lambda_hat": profile_to_json(cert.lam_hat),
        "verdict": _verdict_to_json(cert.verdict),
        "bound": bound,
        "rate": rate,
        "method": method,
    }


def certificate_from_json(obj: dict) -> Certificate:
    """Rebuild a certificate and re-verify it from its point profile.

    The stored Fourier profile and bound must match the recomputed ones
    exactly; otherwise the verdict records a ``stored-*-mismatch``.
    """
    lam = profile_from_json(obj["lambda"])
    if lam.side != POINT:
        raise ValueError("'lambda' must be a point profile")
    n, d = int(obj["n"]), int(obj["d"])
    if lam.n != n:
        raise ValueError("'lambda' dimension does not match n")
    cert = verify_feasible(lam, d)
    extra = []
    if "lambda_hat" in obj and obj["lambda_hat"] is not None:
        stored = profile_from_json(obj["lambda_hat"])
        if stored.side != FOURIER or stored != cert.lam_hat:
            extra.append(Violation("stored-lambda_hat-mismatch"))
    if obj.get("bound") is not None:
        if not cert.feasible or cert.lam.values[0] == 0:
            extra.append(Violation("stored-bound-for-infeasible"))
        elif parse_exact(obj["bound"]) != delsarte_bound(cert).bound:
            extra.append(Violation("stored-bound-mismatch"))
    if extra:
        v = cert.verdict
        cert = Certificate(n, d, lam, cert.lam_hat,
                           Verdict(False, v.violations + tuple(extra), v.truncated))
    return cert


def dumps_certificate(cert: Certificate, method: str = "delsarte") -> str:
    return json.dumps(certificate_to_json(cert, method), indent=2, sort_keys=True) + "\n"


def loads_certificate(text: str) -> Certificate:
    return certificate_from_json(json.loads(text))
