import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import eigvalsh_tridiagonal

from delsarte.krawtchouk import (
    KrawtchoukRootError,
    first_root_lower_bound,
    kraw_eval_int,
    kraw_eval_rational,
    kraw_eval_real,
    kraw_roots,
    krawtchouk_table,
    reciprocity_holds,
)
from delsarte.scalar import binomial


@pytest.mark.parametrize("n,s,i,expected", [(5, 2, 1, 2), (4, 1, 2, 0), (6, 2, 0, 15), (9, 0, 4, 1)])
def test_eval_int_values(n, s, i, expected):
    assert kraw_eval_int(n, s, i) == expected


def test_eval_int_range_errors():
    with pytest.raises(ValueError):
        kraw_eval_int(4, 5, 0)
    with pytest.raises(ValueError):
        kraw_eval_int(4, 1, -1)


def test_table_invariants_and_matches_explicit_sum():
    for n in range(0, 25):
        t = krawtchouk_table(n)
        assert t.check_invariants()
        for s in range(n + 1):
            for i in range(n + 1):
                assert t[s, i] == kraw_eval_int(n, s, i)


def test_reciprocity_examples():
    assert reciprocity_holds(5, 2, 1)
    assert 5 * kraw_eval_int(5, 2, 1) == 10 == 10 * kraw_eval_int(5, 1, 2)
    assert reciprocity_holds(4, 1, 2)
    assert all(reciprocity_holds(7, i, i) for i in range(8))


def test_maximum_at_zero_up_to_40():
    for n in range(1, 41):
        t = krawtchouk_table(n)
        for m in range(n + 1):
            assert max(t.row(m)) == t[m, 0] == binomial(n, m)


def test_eval_real_examples():
    assert kraw_eval_real(4, 1, 1.0) == 2.0
    assert kraw_eval_real(10, 1, 5.0) == 0.0
    assert kraw_eval_real(6, 2, 0.0) == 15.0
    arr = kraw_eval_real(6, 2, np.array([0.0, 1.0]))
    assert arr.tolist() == [15.0, 5.0]


def test_eval_real_matches_integers_high_degree():
    for n in (20, 41, 60):
        t = krawtchouk_table(n)
        for m in range(n + 1):
            for i in range(n + 1):
                exact = t[m, i]
                got = kraw_eval_real(n, m, float(i))
                assert abs(got - exact) <= 1e-10 * max(1, abs(exact))


def test_eval_rational_satisfies_recurrence():
    n, x = 17, Fraction(13, 7)
    K = [kraw_eval_rational(n, k, x) for k in range(n + 1)]
    for k in range(1, n):
        assert (k + 1) * K[k + 1] == (n - 2 * x) * K[k] - (n - k + 1) * K[k - 1]


def test_roots_degree_one_and_two():
    for n in (1, 7, 30):
        r = kraw_roots(n, 1)
        assert len(r) == 1 and r[0] == pytest.approx(n / 2, abs=1e-9)
    r = kraw_roots(6, 2)
    # K_2(x) = 2x^2 - 12x + 15 at n = 6
    expected = sorted([(12 - math.sqrt(24)) / 4, (12 + math.sqrt(24)) / 4])
    assert list(r) == pytest.approx(expected, abs=1e-9)
    assert r[0] + r[1] == pytest.approx(6, abs=1e-9)


def test_roots_match_jacobi_eigenvalues():
    for n in (10, 33, 50):
        for m in range(1, n + 1):
            k = np.arange(m - 1)
            ev = eigvalsh_tridiagonal(np.full(m, n / 2), np.sqrt((k + 1.0) * (n - k)) / 2)
            assert np.max(np.abs(np.array(kraw_roots(n, m).roots) - ev)) < 1e-7 * n


def test_roots_errors():
    with pytest.raises(ValueError):
        kraw_roots(5, 0)
    with pytest.raises(ValueError):
        kraw_roots(5, 6)
    assert issubclass(KrawtchoukRootError, RuntimeError)


def test_first_root_lower_bound_values():
    assert first_root_lower_bound(100, 10) == pytest.approx(50 - math.sqrt(920))
    assert first_root_lower_bound(100, 10) == pytest.approx(19.67, abs=0.01)
    for n in (5, 40):
        assert first_root_lower_bound(n, 1) == pytest.approx(n / 2 - math.sqrt(n + 1))
        vals = [first_root_lower_bound(n, m) for m in range(1, n // 2 + 1)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_random_roots_above_lower_bound():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 80)
        m = rng.randint(1, max(1, n // 2))
        r = kraw_roots(n, m)
        assert r[0] >= first_root_lower_bound(n, m) - r.tolerance


def test_root_lower_bound_fails_for_large_degree():
    # the sqrt bound is not valid once m is a large fraction of n
    r = kraw_roots(48, 39)
    assert r[0] < 1e-3 < first_root_lower_bound(48, 39)
    assert kraw_eval_rational(48, 39, Fraction(1, 10**5)) > 0 > kraw_eval_rational(48, 39, Fraction(1, 10**4))
