import math
from fractions import Fraction

import numpy as np
import pytest

from delsarte.certificates import delsarte_bound, dh_construct, verify_feasible, verify_witness
from delsarte.constructions import (
    ConstructionError,
    ball_eigen_profile,
    ball_minors,
    ball_spectrum,
    example1,
    example2,
    example2_g,
    example3,
    lambda_max_at_least,
    sturm_radius,
    sturm_vector,
    witness_bounds,
)
from delsarte.fourier import (
    DenseCubeFunction,
    constant_profile,
    convolve,
    convolve_direct,
    fourier,
    point_profile,
    sphere_profile,
    symmetrize_dense,
)
from delsarte.lp import optimal_certificate


def test_ball_spectrum_special_cases():
    for n in (3, 10, 25):
        full = ball_spectrum(n, n)
        assert full.lo <= n <= full.hi
        one = ball_spectrum(n, 1)
        assert one.lo <= Fraction(math.sqrt(n)) + Fraction(1, 10**6)
        assert float(one.lo) == pytest.approx(math.sqrt(n), abs=1e-9 * n)
        zero = ball_spectrum(n, 0)
        assert zero.lo == zero.hi == 0


def test_ball_spectrum_enclosure_width_and_perron():
    for n in (20, 77, 150):
        for D in (1, n // 4, n // 2):
            sp = ball_spectrum(n, D)
            assert sp.lo <= Fraction(sp.lambda_max) <= sp.hi
            assert sp.width <= Fraction(n, 10**9)
            assert all(v > 0 for v in sp.eigen_profile)
            assert lambda_max_at_least(n, D, sp.lo)
            assert not lambda_max_at_least(n, D, sp.hi) or sp.hi == sp.lo


def test_lambda_max_decisions():
    assert lambda_max_at_least(7, 7, 7)
    assert lambda_max_at_least(4, 1, 2)
    assert not lambda_max_at_least(4, 1, Fraction(5, 2))
    with pytest.raises(ValueError):
        lambda_max_at_least(4, 5, 1)


def test_lambda_max_monotone_and_envelope():
    for n in (10, 60, 200):
        lams = [ball_eigen_profile(n, D)[0] for D in range(n + 1)]
        assert all(b >= a - 1e-9 * n for a, b in zip(lams, lams[1:]))
        for D in range(1, n // 2 + 1):
            s = math.sqrt(D * (n - D))
            assert s - 1e-9 <= lams[D] <= 2 * s + 2


def test_ball_operator_matches_dense_engine():
    for n in range(2, 13):
        for D in (1, n // 2):
            f = point_profile(n, [k + 1 if k <= D else 0 for k in range(n + 1)])
            g0 = sphere_profile(n, 1, 2**n)
            dense = symmetrize_dense(
                __import__("delsarte.fourier", fromlist=["dense_convolve"]).dense_convolve(
                    DenseCubeFunction.from_profile(g0), DenseCubeFunction.from_profile(f)
                )
            ) if n <= 9 else convolve(g0, f)
            for i in range(D + 1):
                expect = (i * f.values[i - 1] if i else 0) + (n - i) * f.values[i + 1]
                assert dense.values[i] == expect


def test_sturm_vector_is_positive_and_satisfies_condition():
    for n, tau in ((20, 9), (50, 21), (101, 40)):
        D = sturm_radius(n, tau)
        v = sturm_vector(n, tau, D)
        assert all(x > 0 for x in v.values[: D + 1])
        gf = convolve_direct(sphere_profile(n, 1, 2**n), v)
        assert all(gf.values[i] >= tau * v.values[i] for i in range(n + 1))
        assert min(ball_minors(n, D, tau)) <= 0
        assert min(ball_minors(n, D - 1, tau)) > 0 if D > 0 else True


def test_example1_properties():
    for n, d in ((30, 6), (64, 20), (100, 10)):
        w = example1(n, d)
        assert w.tau == n - 2 * d + 1 and w.rho == n - 2 * d
        assert verify_witness(w)
        gh = fourier(w.g).values
        assert all(gh[s] == n - 2 * s <= n - 2 * d for s in range(d, n + 1))
        b = witness_bounds(w)
        assert b["support"].bound >= b["corollary"].bound >= b["delsarte"].bound


def test_example1_eigen_option():
    w = example1(40, 8, f_kind="eigen")
    assert w.f.values[0] > 0
    with pytest.raises(ValueError):
        example1(40, 8, f_kind="bogus")
    with pytest.raises(ValueError):
        example1(40, 21)


def test_example1_radius_follows_asymptotics():
    n = 1000
    for delta in (0.1, 0.2, 0.3):
        d = round(delta * n)
        D = sturm_radius(n, n - 2 * d + 1)
        assert abs(D / n - (0.5 - math.sqrt(delta * (1 - delta)))) <= 0.02


def test_example2_g_transform_is_power():
    for n, m in ((10, 3), (16, 4), (9, 1)):
        g = example2_g(n, m)
        assert fourier(g).values == tuple((n - 2 * s) ** m for s in range(n + 1))
    g0 = sphere_profile(12, 1, 2**12)
    assert example2_g(12, 1) == g0
    assert example2_g(12, 2) == convolve(g0, g0)


def test_example2_verifies_exactly_at_64_16_3():
    w = example2(64, 16, 3)
    assert verify_witness(w)
    assert dh_construct(w).feasible


def test_example2_even_m_fails_condition_two():
    with pytest.raises(ConstructionError) as exc:
        example2(64, 16, 2)
    verdict = exc.value.diagnostics["verdict"]
    assert {v.condition for v in verdict.violations} == {"g_hat>rho"}
    w = example2(64, 16, 2, strict=False)
    assert not verify_witness(w)


def test_example3_round_trips():
    for lam0 in (constant_profile(7), optimal_certificate(6, 3)[0].lam):
        cert0 = verify_feasible(lam0, 3)
        w = example3(cert0)
        assert w.tau - w.rho == lam0.values[0] / 2**lam0.n > 0
        assert dh_construct(w).lam == lam0


def test_example3_rejects_degenerate():
    with pytest.raises(ConstructionError):
        example3(verify_feasible(point_profile(1, [0, 1]), 1))
    with pytest.raises(ConstructionError):
        example3(verify_feasible(point_profile(2, [4, 0, 0]), 1))
