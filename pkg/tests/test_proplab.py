import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from delsarte.certificates import PairWitness, delsarte_bound, verify_feasible, verify_witness
from delsarte.constructions import example1
from delsarte.fourier import constant_profile, delta_profile, fourier, point_profile, sphere_profile
from delsarte.krawtchouk import kraw_eval_int
from delsarte.proplab import (
    GridSpec,
    LambdaDistribution,
    barrier_search,
    chain_eval,
    default_beta,
    lambda_distribution,
    p_polynomial,
    property3_check,
    ratio_bounds,
    tail_mass,
    write_barrier_csv,
)
from delsarte.scalar import binomial, jpl1_rate

from test_certificates import valid_witnesses


def test_lambda_distribution_examples():
    n = 9
    lam = lambda_distribution(delta_profile(n))
    assert lam.weights == tuple(Fraction(binomial(n, i), 2**n) for i in range(n + 1))
    assert lambda_distribution(constant_profile(n)).weights == (1,) + (0,) * n
    with pytest.raises(ValueError):
        lambda_distribution(point_profile(3, [0] * 4))
    with pytest.raises(ValueError):
        LambdaDistribution(1, (Fraction(1, 2), Fraction(1, 3)))


def test_lambda_sums_to_one():
    rng = random.Random(1)
    for n in (1, 10, 40):
        f = point_profile(n, [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n + 1)])
        if not f.is_zero():
            assert sum(lambda_distribution(f).weights) == 1


def test_tail_mass_examples():
    lam = lambda_distribution(delta_profile(20))
    expected = Fraction(sum(binomial(20, i) for i in range(21) if i < 5 or i > 15), 2**20)
    assert expected == Fraction(1549, 131072)
    assert tail_mass(lam, Fraction(1, 4)) == expected
    assert tail_mass(lam, 0) == 0
    assert tail_mass(lambda_distribution(constant_profile(20)), Fraction(1, 4)) == 1
    with pytest.raises(ValueError):
        tail_mass(lam, Fraction(1, 2))


def test_p_polynomial_examples():
    n = 12
    P = p_polynomial(sphere_profile(n, 1, 2**n), 1)
    assert P.values == tuple(n - 2 * s for s in range(n + 1))
    assert P.at(Fraction(1, 2)) == n - 1
    assert p_polynomial(delta_profile(n), 0).values == (1,) * (n + 1)
    g = point_profile(n, [0, 3 * 2**n, 5 * 2**n] + [0] * (n - 2))
    P2 = p_polynomial(g, 2)
    assert P2.values == tuple(3 * kraw_eval_int(n, 1, s) + 5 * kraw_eval_int(n, 2, s) for s in range(n + 1))
    assert P2.values == fourier(g).values
    with pytest.raises(ValueError):
        p_polynomial(g, 1)
    with pytest.raises(ValueError):
        p_polynomial(point_profile(n, [1, -1] + [0] * (n - 1)), 1)


def test_property3_examples():
    rng = random.Random(2)
    n = 10
    g = delta_profile(n)
    for _ in range(5):
        f = point_profile(n, [rng.randint(0, 5) for _ in range(n + 1)])
        if f.is_zero():
            continue
        res = property3_check(lambda_distribution(f), p_polynomial(g, 0), 3)
        assert res.weak and not res.strict and res.margin == 0
    P = p_polynomial(sphere_profile(n, 1, 2**n), 1)
    for _ in range(20):
        f = point_profile(n, [rng.randint(-5, 5) for _ in range(n + 1)])
        if f.is_zero():
            continue
        lam = lambda_distribution(f)
        d = rng.randint(0, n)
        assert bool(property3_check(lam, P, d)) == (lam.mean() <= d)


@settings(max_examples=40)
@given(valid_witnesses(max_n=10))
def test_property3_strict_for_witnesses(w):
    if not w.g.is_nonnegative():
        return
    res = property3_check(lambda_distribution(w.f), p_polynomial(w.g, max(w.g.radius(), 0)), w.d)
    assert res.strict


def test_ratio_bounds_grid():
    beta = Fraction(1, 5)
    for m in range(0, 11):
        rb = ratio_bounds(200, m, 20, beta)
        assert rb.precondition
        assert rb.lb_holds and rb.ub_holds
        assert rb.lower_ratio >= rb.lb
        assert rb.upper_ratio <= rb.ub
    zero = ratio_bounds(200, 0, 20, beta)
    assert zero.lower_ratio == zero.upper_ratio == 1
    assert ratio_bounds(200, 10, 20, beta).as_floats() == pytest.approx((0.2**10, 3.0))


def test_ratio_bounds_preconditions_reported():
    rb = ratio_bounds(200, 3, 50, Fraction(1, 5))
    assert not rb.precondition and "d >= beta n" in rb.reason
    rb = ratio_bounds(40, 30, 2, Fraction(1, 5))
    assert not rb.precondition and "x_1" in rb.reason
    with pytest.raises(ValueError):
        ratio_bounds(10, 11, 1, Fraction(1, 5))


def test_chain_eval_consistency():
    n, d = 60, 12
    w = example1(n, d)
    g = sphere_profile(n, 1, 2**n)
    rep = chain_eval(w.f, g, d, Fraction(1, 4), 1)
    assert rep.resum == rep.property3_lhs
    assert rep.verdicts["property3"] and rep.verdicts["resum"]
    assert rep.recompute_final_rhs() == rep.final_rhs
    assert rep.verdicts["final"] == (rep.final_lhs <= rep.final_rhs)
    assert rep.verdicts["display"]
    if rep.precondition:
        assert rep.verdicts["tail_term"] and rep.verdicts["middle_term"]


def test_chain_eval_unconstrained_r():
    n = 8
    f = point_profile(n, [3, 2, 1, 0, 0, 0, 0, 0, 0])
    g = constant_profile(n) * 2**n
    rep = chain_eval(f, g, 1, Fraction(1, 4), n)
    assert not rep.precondition
    assert rep.resum == rep.property3_lhs


def test_chain_eval_without_gap():
    f = point_profile(6, [2, 1, 0, 0, 0, 0, 0])
    rep = chain_eval(f, sphere_profile(6, 1, 64), 4, Fraction(1, 4), 1)
    assert rep.final_rhs is None and rep.verdicts["final"] is None
    assert rep.resum == rep.property3_lhs


def test_default_beta():
    assert default_beta(0.2) is None
    assert default_beta(0.2, jpl1_rate(0.2) + 0.01) is None
    beta = default_beta(0.2, jpl1_rate(0.3))
    assert float(beta) == pytest.approx(0.25, abs=1e-6)
    assert default_beta(0.2, 0.0) == Fraction(7, 20)


def test_grid_points():
    grid = GridSpec(values=(0, 1, 2))
    pts = list(grid.points(2))
    assert len(pts) == 8 and pts[0] == (0, 0, 1)
    assert all(p[0] == 0 for p in pts)


def test_barrier_r1_reproduces_example1():
    res = barrier_search(400, 80, 1, GridSpec(values=(0, 1)))
    assert res.best is not None and res.best.verified
    assert res.best.coeffs == (0, 1)
    assert res.best.margin >= -0.05
    # the verified bound is the corollary bound of an exactly valid witness
    assert res.best.exact_bound > 0


def test_barrier_rejects_bad_input():
    with pytest.raises(ValueError):
        barrier_search(40, 8, 1, GridSpec(values=(0,)))
    with pytest.raises(ValueError):
        barrier_search(40, 30, 1)
    with pytest.raises(ValueError):
        barrier_search(40, 8, 5)


def test_delta_g_gives_no_witness():
    n = 10
    g = delta_profile(n)
    assert fourier(g).values == (1,) * (n + 1)
    w = PairWitness(delta_profile(n), g, 1, 1, 3)
    assert {v.condition for v in verify_witness(w).violations} == {"tau<=rho"}
    # the only certificate left is the trivial one
    assert delsarte_bound(verify_feasible(constant_profile(n), 3)).bound == 2**n


def test_barrier_rows_are_verified_or_screened(tmp_path):
    res = barrier_search(120, 24, 2, GridSpec(values=tuple(range(6))), jobs=2)
    for row in res.rows:
        if row.verified:
            assert row.exact_bound is not None
            assert math.isclose(row.rate, math.log2(row.exact_bound) / 120, rel_tol=1e-9)
    assert res.best.verified
    path = tmp_path / "b.csv"
    write_barrier_csv(res, path)
    header = path.read_text().splitlines()[0].split(",")
    assert header[:6] == ["n", "d", "r", "a0", "a1", "a2"]
    assert {"rho", "tau", "bound", "rate", "margin", "verified"} <= set(header)
    again = barrier_search(120, 24, 2, GridSpec(values=tuple(range(6))), jobs=1)
    assert again.rows == res.rows
