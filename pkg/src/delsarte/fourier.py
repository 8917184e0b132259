"""Fourier analysis of symmetric functions on the Hamming cube.

A symmetric function is stored as its weight profile (n + 1 values).  With
the normalizations

    <f, g> = 2^-n sum_x f(x) g(x),        f^(S) = <f, W_S>,
    (f * g)(x) = 2^-n sum_y f(y) g(x + y),

and the identity ``sum_{|x| = i} W_S(x) = K_i(|S|)``, the profile transforms
are

    f^_s = 2^-n sum_i f_i K_i(s),          f_i = sum_s f^_s K_s(i).

Profiles carry a side tag ("point" or "fourier") and every operation checks
it.  :class:`DenseCubeFunction` keeps all 2^n values and is used as an
independent oracle for small n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

from .krawtchouk import kraw_row
from .scalar import binomial, format_exact, parse_exact

try:  # exact integer matrix products for batched transforms
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

__all__ = [
    "POINT",
    "FOURIER",
    "SideError",
    "SymmetricProfile",
    "DenseCubeFunction",
    "point_profile",
    "fourier_profile",
    "sphere_profile",
    "ball_profile",
    "delta_profile",
    "constant_profile",
    "fourier",
    "inverse_fourier",
    "fourier_many",
    "inverse_fourier_many",
    "convolve",
    "convolve_direct",
    "inner",
    "fourier_inner",
    "symmetrize_dense",
    "dense_fourier",
    "dense_inverse_fourier",
    "dense_convolve",
    "dense_inner",
    "profile_to_json",
    "profile_from_json",
    "DENSE_MAX_N",
]

POINT = "point"
FOURIER = "fourier"
DENSE_MAX_N = 16


class SideError(ValueError):
    """A profile was used on the wrong side of the transform."""


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("profiles are exact; convert floats with Fraction(x) explicitly")
    return Fraction(v)


@dataclass(frozen=True)
class SymmetricProfile:
    """Values of a symmetric function on weight levels 0..n."""

    n: int
    side: str
    values: tuple

    def __post_init__(self):
        if self.side not in (POINT, FOURIER):
            raise ValueError(f"unknown side {self.side!r}")
        vals = tuple(_frac(v) for v in self.values)
        if len(vals) != self.n + 1:
            raise ValueError(f"profile for n={self.n} needs {self.n + 1} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.n + 1

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def _same(self, other):
        if not isinstance(other, SymmetricProfile):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        if other.side != self.side:
            raise SideError(f"cannot combine {self.side} and {other.side} profiles")
        return other

    def __add__(self, other):
        other = self._same(other)
        return SymmetricProfile(self.n, self.side, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        other = self._same(other)
        return SymmetricProfile(self.n, self.side, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return SymmetricProfile(self.n, self.side, [-a for a in self.values])

    def __mul__(self, other):
        """Entrywise product with a same-side profile, or scaling by a rational."""
        if isinstance(other, SymmetricProfile):
            other = self._same(other)
            return SymmetricProfile(self.n, self.side, [a * b for a, b in zip(self.values, other.values)])
        c = _frac(other)
        return SymmetricProfile(self.n, self.side, [c * a for a in self.values])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.values)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v != 0]

    def radius(self) -> int:
        """Largest weight carrying a nonzero value (-1 for the zero profile)."""
        supp = self.support()
        return supp[-1] if supp else -1

    def support_size(self) -> int:
        """Number of cube points where the function is nonzero."""
        if self.side != POINT:
            raise SideError("support size is defined for point profiles")
        return sum(binomial(self.n, i) for i in self.support())

    def mean(self) -> Fraction:
        """Average over the cube, i.e. the zeroth Fourier coefficient."""
        if self.side != POINT:
            raise SideError("mean is defined for point profiles")
        n = self.n
        return Fraction(sum(binomial(n, i) * v for i, v in enumerate(self.values)), 2**n)


def point_profile(n: int, values: Iterable) -> SymmetricProfile:
    return SymmetricProfile(n, POINT, tuple(values))


def fourier_profile(n: int, values: Iterable) -> SymmetricProfile:
    return SymmetricProfile(n, FOURIER, tuple(values))


def _indicator(n, weights, scale=1):
    w = set(weights)
    return point_profile(n, [scale if i in w else 0 for i in range(n + 1)])


def sphere_profile(n: int, r: int, scale=1) -> SymmetricProfile:
    """``scale`` times the indicator of the sphere S(n, r) around 0."""
    if not 0 <= r <= n:
        raise ValueError(f"radius {r} outside [0, {n}]")
    return _indicator(n, [r], scale)


def ball_profile(n: int, r: int, scale=1) -> SymmetricProfile:
    """``scale`` times the indicator of the ball B(n, r) around 0."""
    if not 0 <= r <= n:
        raise ValueError(f"radius {r} outside [0, {n}]")
    return _indicator(n, range(r + 1), scale)


def delta_profile(n: int) -> SymmetricProfile:
    """2^n times the indicator of {0}: the unit of convolution."""
    return sphere_profile(n, 0, 2**n)


def constant_profile(n: int, c=1) -> SymmetricProfile:
    return point_profile(n, [c] * (n + 1))


def _common_denominator(values):
    den = math.lcm(*(v.denominator for v in values))
    return [v.numerator * (den // v.denominator) for v in values], den


def _row_transform(n, values):
    """sum_i values[i] * K_i(.) as exact integers over a common denominator."""
    nums, den = _common_denominator(values)
    acc = [0] * (n + 1)
    for i, a in enumerate(nums):
        if a:
            row = kraw_row(n, i)
            for s in range(n + 1):
                acc[s] += a * row[s]
    return acc, den


def fourier(f: SymmetricProfile) -> SymmetricProfile:
    """Point profile -> Fourier profile, f^_s = 2^-n sum_i f_i K_i(s)."""
    if f.side != POINT:
        raise SideError("fourier expects a point profile")
    acc, den = _row_transform(f.n, f.values)
    d = den << f.n
    return fourier_profile(f.n, [Fraction(a, d) for a in acc])


def inverse_fourier(fh: SymmetricProfile) -> SymmetricProfile:
    """Fourier profile -> point profile, f_i = sum_s f^_s K_s(i)."""
    if fh.side != FOURIER:
        raise SideError("inverse_fourier expects a Fourier profile")
    acc, den = _row_transform(fh.n, fh.values)
    return point_profile(fh.n, [Fraction(a, den) for a in acc])


def _batch(profiles: Sequence[SymmetricProfile], side_in, side_out, shift):
    if not profiles:
        return []
    n = profiles[0].n
    for p in profiles:
        if p.n != n:
            raise ValueError("batched transforms need a common dimension")
        if p.side != side_in:
            raise SideError(f"expected {side_in} profiles")
    if flint is None:
        fn = fourier if side_in == POINT else inverse_fourier
        return [fn(p) for p in profiles]
    cols = [_common_denominator(p.values) for p in profiles]
    # rows of the matrix are K_i(.) so that (V @ K)[k, s] = sum_i v_ki K_i(s)
    kmat = _kraw_fmpz(n)
    vmat = flint.fmpz_mat([nums for nums, _ in cols])
    prod = (vmat * kmat).entries()
    out = []
    for k, (_, den) in enumerate(cols):
        d = den << shift
        row = prod[k * (n + 1):(k + 1) * (n + 1)]
        out.append(SymmetricProfile(n, side_out, [Fraction(int(a), d) for a in row]))
    return out


@lru_cache(maxsize=64)
def _kraw_fmpz(n):
    return flint.fmpz_mat([list(kraw_row(n, i)) for i in range(n + 1)])


def fourier_many(profiles: Sequence[SymmetricProfile]) -> list[SymmetricProfile]:
    """``fourier`` over many same-n profiles with one exact matrix product."""
    n = profiles[0].n if profiles else 0
    return _batch(profiles, POINT, FOURIER, n)


def inverse_fourier_many(profiles: Sequence[SymmetricProfile]) -> list[SymmetricProfile]:
    return _batch(profiles, FOURIER, POINT, 0)


def convolve(f: SymmetricProfile, g: SymmetricProfile) -> SymmetricProfile:
    """f * g through the transform: inverse_fourier(f^ . g^)."""
    if f.side != POINT or g.side != POINT:
        raise SideError("convolve expects point profiles")
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    return inverse_fourier(fourier(f) * fourier(g))


def convolve_direct(g: SymmetricProfile, f: SymmetricProfile) -> SymmetricProfile:
    """g * f in the point domain, summing over the support of g.

    For |x| = i, the points y with |y| = j and |x + y| = i + j - 2a number
    C(i, a) C(n - i, j - a).  Cost is O(n |supp g| min(i, j)), so this is the
    route for small-support g at large n.
    """
    if f.side != POINT or g.side != POINT:
        raise SideError("convolve_direct expects point profiles")
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    n = f.n
    fv = f.values
    fsupp = set(f.support())
    out = []
    for i in range(n + 1):
        total = Fraction(0)
        for j in g.support():
            acc = 0
            for a in range(max(0, j - (n - i)), min(i, j) + 1):
                k = i + j - 2 * a
                if k in fsupp:
                    acc += binomial(i, a) * binomial(n - i, j - a) * fv[k]
            total += g.values[j] * acc
        out.append(total / 2**n)
    return point_profile(n, out)


def inner(f: SymmetricProfile, g: SymmetricProfile) -> Fraction:
    """<f, g> = 2^-n sum_i C(n, i) f_i g_i."""
    if f.side != POINT or g.side != POINT:
        raise SideError("inner expects point profiles")
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    return _weighted_dot(f.n, f.values, g.values) / 2**f.n


def fourier_inner(fh: SymmetricProfile, gh: SymmetricProfile) -> Fraction:
    """Unnormalized Fourier-side inner product sum_s C(n, s) f^_s g^_s."""
    if fh.side != FOURIER or gh.side != FOURIER:
        raise SideError("fourier_inner expects Fourier profiles")
    if fh.n != gh.n:
        raise ValueError(f"dimension mismatch: {fh.n} vs {gh.n}")
    return _weighted_dot(fh.n, fh.values, gh.values)


def _weighted_dot(n, xs, ys) -> Fraction:
    """sum_i C(n, i) x_i y_i over a common denominator, in integers."""
    dx = math.lcm(*(x.denominator for x in xs))
    dy = math.lcm(*(y.denominator for y in ys))
    total, c = 0, 1
    for i, (x, y) in enumerate(zip(xs, ys)):
        if x and y:
            total += c * (x.numerator * (dx // x.denominator)) * (y.numerator * (dy // y.denominator))
        c = c * (n - i) // (i + 1)
    return Fraction(total, dx * dy)


def profile_to_json(p: SymmetricProfile) -> dict:
    return {"n": p.n, "side": p.side, "values": [format_exact(v) for v in p.values]}


def profile_from_json(obj: dict) -> SymmetricProfile:
    return SymmetricProfile(int(obj["n"]), obj["side"], [parse_exact(v) for v in obj["values"]])


# --------------------------------------------------------------------------
# dense engine (oracle)


@dataclass(frozen=True)
class DenseCubeFunction:
    """All 2^n values of a function on the cube, indexed by bitmask."""

    n: int
    values: tuple

    def __post_init__(self):
        if not 0 <= self.n <= DENSE_MAX_N:
            raise ValueError(f"dense engine supports n <= {DENSE_MAX_N}, got {self.n}")
        vals = tuple(_frac(v) for v in self.values)
        if len(vals) != 1 << self.n:
            raise ValueError(f"need {1 << self.n} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_profile(cls, p: SymmetricProfile) -> "DenseCubeFunction":
        return cls(p.n, [p.values[x.bit_count()] for x in range(1 << p.n)])

    @classmethod
    def character(cls, n: int, S: int) -> "DenseCubeFunction":
        return cls(n, [(-1) ** (S & x).bit_count() for x in range(1 << n)])

    def is_symmetric(self) -> bool:
        first = {}
        for x, v in enumerate(self.values):
            w = x.bit_count()
            if first.setdefault(w, v) != v:
                return False
        return True


def _walsh_hadamard(nums, n):
    # in-place butterfly: out[S] = sum_x nums[x] (-1)^{<S, x>}
    a = list(nums)
    h = 1
    while h < len(a):
        for start in range(0, len(a), 2 * h):
            for x in range(start, start + h):
                u, v = a[x], a[x + h]
                a[x], a[x + h] = u + v, u - v
        h *= 2
    return a


def dense_fourier(F: DenseCubeFunction, method: str = "butterfly") -> DenseCubeFunction:
    """Walsh coefficients f^(S) = 2^-n sum_x f(x) W_S(x), exactly.

    ``method="direct"`` evaluates every character sum literally (O(4^n));
    the default butterfly computes the same sums one coordinate at a time.
    """
    n = F.n
    nums, den = _common_denominator(F.values)
    if method == "direct":
        sums = [sum(a if (S & x).bit_count() % 2 == 0 else -a for x, a in enumerate(nums))
                for S in range(1 << n)]
    elif method == "butterfly":
        sums = _walsh_hadamard(nums, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    d = den << n
    return DenseCubeFunction(n, [Fraction(s, d) for s in sums])


def dense_inverse_fourier(Fh: DenseCubeFunction) -> DenseCubeFunction:
    """f(x) = sum_S f^(S) W_S(x)."""
    nums, den = _common_denominator(Fh.values)
    return DenseCubeFunction(Fh.n, [Fraction(s, den) for s in _walsh_hadamard(nums, Fh.n)])


def dense_convolve(F: DenseCubeFunction, G: DenseCubeFunction) -> DenseCubeFunction:
    """(F * G)(x) = 2^-n sum_y F(y) G(x + y); literal double sum for n <= 8."""
    if F.n != G.n:
        raise ValueError("dimension mismatch")
    n, N = F.n, 1 << F.n
    if n <= 8:
        fv, gv = F.values, G.values
        out = [sum((fv[y] * gv[x ^ y] for y in range(N) if fv[y]), Fraction(0)) / N for x in range(N)]
        return DenseCubeFunction(n, out)
    fh, gh = dense_fourier(F), dense_fourier(G)
    return dense_inverse_fourier(DenseCubeFunction(n, [a * b for a, b in zip(fh.values, gh.values)]))


def dense_inner(F: DenseCubeFunction, G: DenseCubeFunction) -> Fraction:
    if F.n != G.n:
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(F.values, G.values)), Fraction(0)) / (1 << F.n)


def symmetrize_dense(F: DenseCubeFunction, side: str = POINT) -> SymmetricProfile:
    """Profile of the level averages of F (tagged with ``side``)."""
    n = F.n
    sums = [Fraction(0)] * (n + 1)
    for x, v in enumerate(F.values):
        sums[x.bit_count()] += v
    return SymmetricProfile(n, side, [s / binomial(n, i) for i, s in enumerate(sums)])
