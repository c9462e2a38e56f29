import math
import random
from fractions import Fraction as Q

import pytest

from holokit.exactmath import Poly
from holokit.linalg import bareiss_rref, integer_rows, nullspace
from holokit.precur import (
    GuessReport,
    PRecurrence,
    Sequence,
    SingularRecurrenceError,
    catalog,
    check,
    guess,
    unroll,
)

from oracles import harmonic, random_recurrence

X = Poly.x()
FACTORIAL = PRecurrence.make([-(X + 1), Poly.const(1)])
FIBONACCI = PRecurrence.make([Poly.const(-1), Poly.const(-1), Poly.const(1)])
HARMONIC = PRecurrence.make([X + 1, -(2 * X + 3), X + 2])


def assert_report_sound(report: GuessReport, seq: Sequence):
    if report.result is not None:
        assert check(report.result, seq)


def test_normalization():
    rec = PRecurrence.make([[Q(-1, 2), Q(-1, 2)], [Q(-1, 2)]])
    assert rec.coeffs == (Poly([1, 1]), Poly([1]))
    assert PRecurrence.make([[2], [4], [0]]).order == 1
    with pytest.raises(ValueError):
        PRecurrence.make([[0], []])


def test_recurrence_json_round_trip():
    rec = PRecurrence.make([[1, Q(1, 3)], [0], [-2, 0, 5]])
    assert PRecurrence.from_json(rec.to_json()) == rec
    assert rec.to_json()["coeffs"][0] == ["3", "1"]


def test_unroll_examples():
    assert unroll(FACTORIAL, [1], 5).terms == (1, 2, 6, 24, 120)
    assert unroll(FIBONACCI, [1, 1], 7).terms == (1, 1, 2, 3, 5, 8, 13)


def test_unroll_singular():
    rec = PRecurrence.make([Poly.const(1), X - 3])
    with pytest.raises(SingularRecurrenceError, match="n = 3"):
        unroll(rec, [1], 5)
    assert len(unroll(rec, [1], 3)) == 3


def test_unroll_wrong_initial_count():
    with pytest.raises(ValueError):
        unroll(FIBONACCI, [1], 5)


def test_harmonic_identity_oracle():
    H = harmonic(50)
    for n in range(1, 49):
        # (n+2)(H_{n+2} - H_{n+1}) = 1 = (n+1)(H_{n+1} - H_n)
        assert (n + 2) * (H[n + 1] - H[n]) == 1 == (n + 1) * (H[n] - H[n - 1])
        assert (n + 2) * H[n + 1] - (2 * n + 3) * H[n] + (n + 1) * H[n - 1] == 0


def test_check_examples():
    H = Sequence.of(harmonic(20))
    assert check(HARMONIC, H)
    bad = list(H.terms)
    bad[10] += 1
    assert not check(HARMONIC, Sequence.of(bad))
    assert check(FACTORIAL, catalog("factorial", 12))
    with pytest.raises(ValueError):
        check(HARMONIC, Sequence.of([1, 2]))


def test_check_survives_truncation():
    H = Sequence.of(harmonic(30))
    for k in range(0, 28):
        assert check(HARMONIC, Sequence(H.terms[:30 - k]))


def test_catalog_examples():
    assert catalog("harmonic", 3).terms == (1, Q(3, 2), Q(11, 6))
    assert catalog("catalan", 4).terms == (1, 2, 5, 14)
    assert catalog("log", 1, 7).terms == (0,)
    assert catalog("fibonacci", 5).terms == (1, 1, 2, 3, 5)
    assert catalog("factorial", 4).terms == (1, 2, 6, 24)
    with pytest.raises(ValueError):
        catalog("primes", 3)
    with pytest.raises(ValueError):
        catalog("log", 3)


def test_catalog_log_accuracy():
    seq = catalog("log", 40, 100)
    for n, t in enumerate(seq.terms, 1):
        assert abs(float(t) - math.log(n)) < 1e-15
    # adjacent precisions agree to within both error budgets
    coarse = catalog("log", 40, 60)
    for a, b in zip(seq.terms, coarse.terms):
        assert abs(a - b) <= Q(1, 2**60) + Q(1, 2**100)


def test_bareiss_pivots():
    rows = [[Q(2), Q(4), Q(1)], [Q(1), Q(2), Q(3)], [Q(3), Q(6), Q(4)]]
    red, piv, d = bareiss_rref(integer_rows(rows))
    assert piv == [0, 2]
    basis, rank = nullspace(rows, 3)
    assert rank == 2
    assert basis == [[-2, 1, 0]]


def test_nullspace_random():
    rng = random.Random(1)
    for _ in range(40):
        m, n = rng.randint(1, 6), rng.randint(1, 7)
        rows = [[Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(m)]
        if rng.random() < 0.5 and m > 1:
            rows[-1] = [a + b for a, b in zip(rows[0], rows[1 % m])]
        basis, rank = nullspace(rows, n)
        assert len(basis) == n - rank
        for v in basis:
            assert any(v)
            for r in rows:
                assert sum(a * b for a, b in zip(r, v)) == 0


def test_guess_factorial():
    seq = catalog("factorial", 15)
    report = guess(seq, 1, 1)
    assert report.result == FACTORIAL
    assert_report_sound(report, seq)


def test_guess_fibonacci():
    seq = catalog("fibonacci", 20)
    report = guess(seq, 2, 0)
    assert report.result == FIBONACCI
    assert report.tried[-1] == (2, 0)


def test_guess_harmonic():
    seq = catalog("harmonic", 30)
    report = guess(seq, 2, 1)
    assert report.result == HARMONIC
    assert (report.system_rows, report.system_cols) == (30 - 5 - 2, 6)
    assert report.rank == 5


def test_guess_skips_short_systems():
    seq = catalog("fibonacci", 10)
    report = guess(seq, 2, 2)
    # order 2, degree 2 needs 9 + 2 rows but only 10 - 5 - 2 = 3 are available
    assert (2, 2) in report.skipped
    assert report.result is None or check(report.result, seq)


def test_guess_nothing_for_log():
    seq = catalog("log", 40, 200)
    report = guess(seq, 2, 2)
    assert report.result is None
    assert report.tried and report.rank == report.system_cols


def test_guess_scaling_invariance():
    for name, d, D in (("harmonic", 2, 1), ("catalan", 1, 1), ("factorial", 1, 1)):
        seq = catalog(name, 25)
        base = guess(seq, d, D).result
        for c in (Q(-3, 7), Q(5), Q(1, 1000)):
            scaled = Sequence.of(c * t for t in seq.terms)
            assert guess(scaled, d, D).result == base


def test_round_trip_random_recurrences():
    rng = random.Random(2)
    N = 40
    for _ in range(100):
        rec = random_recurrence(rng, N)
        init = [Q(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(rec.order)]
        seq = unroll(rec, init, N)
        report = guess(seq, rec.order, rec.degree)
        assert report.result is not None, rec
        assert check(report.result, seq)


def test_guess_report_json():
    rep = guess(catalog("fibonacci", 20), 2, 0).to_json()
    assert rep["status"] == "found"
    assert rep["result"]["order"] == 2
    assert guess(catalog("log", 20, 64), 1, 1).to_json()["status"] == "no recurrence"
