import io

import pytest

from delsarte.certificates import (
    InfeasibleCertificateError,
    certificate_from_json,
    certificate_to_json,
    delsarte_bound,
    verify_feasible,
)
from delsarte.fourier import constant_profile, fourier_profile, inverse_fourier
from delsarte.scalar import format_exact
from delsarte.lp import optimal_certificate
from delsarte.oracle import (
    CapExceededError,
    exact_A,
    lexicode,
    min_distance,
    read_table_csv,
    validate_bound,
    write_table_csv,
)

A_VALUES = {
    1: [2],
    2: [4, 2],
    3: [8, 4, 2],
    4: [16, 8, 2, 2],
    5: [32, 16, 4, 2, 2],
    6: [64, 32, 8, 4, 2, 2],
    7: [128, 64, 16, 8, 2, 2, 2],
    8: [256, 128, 20, 16, 4, 2, 2, 2],
}


def test_examples():
    for n in range(1, 9):
        assert exact_A(n, 1).max_size == 2**n
        assert exact_A(n, n).max_size == 2
    assert exact_A(5, 3).max_size == 4


def test_table_n_le_7():
    for n in range(1, 8):
        assert [exact_A(n, d).max_size for d in range(1, n + 1)] == A_VALUES[n]


@pytest.mark.slow
def test_table_n_8():
    got = [exact_A(8, d).max_size for d in range(1, 9)]
    assert got == A_VALUES[8]
    assert exact_A(8, 3).engine == "milp"


def test_parity_codes():
    for n in range(2, 9):
        assert exact_A(n, 2).max_size == 2 ** (n - 1)


def test_fixing_zero_is_harmless():
    for n in range(2, 7):
        for d in range(2, n + 1):
            assert exact_A(n, d, fix_zero=False).max_size == exact_A(n, d).max_size


def test_witness_codes_are_valid():
    for n in range(2, 8):
        for d in range(2, n + 1):
            r = exact_A(n, d)
            assert len(set(r.witness_code)) == r.max_size
            assert min_distance(r.witness_code) >= d


def test_lexicode():
    assert lexicode(3, 3) == [0, 7]
    assert len(lexicode(7, 3)) == 16
    assert min_distance([5]) is None


def test_caps_and_ranges():
    with pytest.raises(CapExceededError):
        exact_A(9, 3)
    with pytest.raises(CapExceededError):
        exact_A(4, 2, cap=11)
    with pytest.raises(ValueError):
        exact_A(4, 5)
    with pytest.raises(ValueError):
        exact_A(4, 2, engine="other")


def test_csv_round_trip(tmp_path):
    results = [exact_A(n, d) for n in range(1, 6) for d in range(1, n + 1)]
    buf = io.StringIO()
    write_table_csv(results, buf)
    assert buf.getvalue().splitlines()[0] == "n,d,A,witness_hex,engine"
    path = tmp_path / "table.csv"
    write_table_csv(results, path)
    table = read_table_csv(path)
    assert {k: v.max_size for k, v in table.items()} == {(r.n, r.d): r.max_size for r in results}
    assert table[(5, 3)].witness_code == exact_A(5, 3).witness_code
    path.write_text(path.read_text().replace("5,3,4,", "5,3,5,"))
    with pytest.raises(ValueError):
        read_table_csv(path)


def test_cache_file_is_used(tmp_path):
    path = tmp_path / "cache.csv"
    r = exact_A(6, 3, cache_path=str(path))
    assert read_table_csv(path)[(6, 3)].max_size == r.max_size


def test_validate_bound():
    for n in range(1, 7):
        for d in range(1, n + 1):
            trivial = delsarte_bound(verify_feasible(constant_profile(n), d))
            assert validate_bound(trivial).status == "pass"
            assert validate_bound(delsarte_bound(optimal_certificate(n, d)[0])).status == "pass"
    big = delsarte_bound(verify_feasible(constant_profile(12), 3))
    v = validate_bound(big)
    assert v.status == "skipped" and bool(v)


def test_sign_flip_is_rejected_before_validation():
    cert, _ = optimal_certificate(6, 3)
    hat = list(cert.lam_hat.values)
    s = next(k for k in range(3, 7) if hat[k] != 0)
    hat[s] = -hat[s]
    flipped = verify_feasible(inverse_fourier(fourier_profile(6, hat)), 3)
    assert not flipped.feasible
    assert {v.condition for v in flipped.verdict.violations} & {"lambda<0", "lambda_hat>0"}
    with pytest.raises(InfeasibleCertificateError):
        validate_bound(delsarte_bound(flipped))
    # a tampered file is caught on load as well
    obj = certificate_to_json(cert, "lp")
    obj["lambda_hat"]["values"][s] = format_exact(hat[s])
    assert not certificate_from_json(obj).feasible
