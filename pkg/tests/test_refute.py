import dataclasses
import json
import math
import random
from fractions import Fraction as Q

import pytest

from holokit.exactmath import Poly, is_prime
from holokit.refute import (
    LogCandidate,
    PrimeWitness,
    SearchExhaustedError,
    clear_denominators,
    find_witness,
    refute,
    verify_witness,
)

from oracles import random_candidate

X = Poly.x()
SECOND_DIFF = LogCandidate.make([[1], [-2], [1]])  # claims n(n+2) = (n+1)^2


def test_clear_denominators_examples():
    c = clear_denominators(LogCandidate.make([[Q(1, 2)], [Q(-1, 3)]]))
    assert c.mu == 6 and c.q == {0: Poly.const(3), 1: Poly.const(2)}
    assert (c.I, c.J) == ((0,), (1,))
    c = clear_denominators(LogCandidate.make([[-1, Q(1, 2)], [], []]))
    assert c.mu == 2 and c.q == {0: X - 2} and c.I == (0,) and c.J == ()
    with pytest.raises(ValueError):
        clear_denominators(LogCandidate.make([[], [0]]))


def test_second_difference_witness():
    # by hand: n = 3 gives 3*5 = 15 vs 4^2 = 16, and 5 | 15
    assert 3 * 5 == 15 and 4**2 == 16
    w = find_witness(clear_denominators(SECOND_DIFF), 10)
    assert (w.a, w.n, w.p, w.v_num, w.v_den) == (2, 3, 5, 1, 0)
    assert verify_witness(w)


def test_constant_candidate_witness():
    # log n = 0 holds at n = 1, so the witness must start above the order
    w = find_witness(clear_denominators(LogCandidate.make([[1]])), 10)
    assert (w.a, w.n, w.p, w.v_num, w.v_den) == (0, 2, 2, 1, 0)


def test_search_exhausted():
    # a = 0 and n0 = 8 (q = x - 7 has Cauchy bound 8): 9 is composite
    cleared = clear_denominators(LogCandidate.make([X - 7]))
    assert cleared.n0() == 9
    assert not is_prime(9)
    with pytest.raises(SearchExhaustedError, match="search exhausted"):
        find_witness(cleared, 1)
    assert find_witness(cleared, 3).n == 11


def test_tampering_detected():
    w = find_witness(clear_denominators(SECOND_DIFF), 10)
    assert not verify_witness(dataclasses.replace(w, p=w.p + 1))
    assert not verify_witness(dataclasses.replace(w, n=1, p=3))
    assert not verify_witness(dataclasses.replace(w, v_den=1))
    assert not verify_witness(dataclasses.replace(w, a=1))
    bad_q = dict(w.cleared.q)
    bad_q[2] = Poly([2])  # valuation at p becomes 2, record says 1
    assert not verify_witness(dataclasses.replace(w, cleared=dataclasses.replace(w.cleared, q=bad_q)))


def test_below_positivity_bound_rejected():
    w = find_witness(clear_denominators(LogCandidate.make([X * X - 20 * X, [1]])), 100)
    assert w.n >= 21
    low = dataclasses.replace(w, n=2, p=3)
    assert not verify_witness(low)


def test_witness_file_round_trip(tmp_path):
    w = find_witness(clear_denominators(SECOND_DIFF), 10)
    path = tmp_path / "w.json"
    w.save(path)
    obj = json.loads(path.read_text())
    assert obj["mu"] == "1" and obj["q"] == {"0": ["1"], "1": ["2"], "2": ["1"]}
    assert obj["I"] == [0, 2] and obj["J"] == [1]
    w2 = PrimeWitness.load(path)
    assert w2 == w and verify_witness(w2)


def test_refute_examples():
    w, (lo, hi) = refute(SECOND_DIFF, 100)
    assert (w.n, w.p) == (3, 5)
    assert hi < 0 and abs(float(lo) - math.log(15 / 16)) < 1e-12
    w, (lo, hi) = refute(LogCandidate.make([[1]]), 100)
    assert (w.n, w.p) == (2, 2)
    assert lo > 0 and abs(float(lo) - math.log(2)) < 1e-12
    with pytest.raises(ValueError):
        refute(LogCandidate.make([[0], [0]]), 100)


def test_scaling_invariance():
    rng = random.Random(12)
    for _ in range(30):
        c = random_candidate(rng)
        s = Q(rng.randint(1, 9), rng.randint(1, 9))
        scaled = LogCandidate.make([p.scale(s) for p in c.coeffs])
        a, b = clear_denominators(c), clear_denominators(scaled)
        assert (a.I, a.J) == (b.I, b.J)
        wa, wb = find_witness(a, 10**5), find_witness(b, 10**5)
        assert (wa.a, wa.n, wa.p) == (wb.a, wb.n, wb.p)


def test_random_refutations_valuation_split():
    rng = random.Random(13)
    for _ in range(30):
        c = random_candidate(rng)
        w, iv = refute(c, 10**5)
        qa = w.cleared.q[w.a](w.n)
        assert min(w.v_num, w.v_den) == 0 and max(w.v_num, w.v_den) == qa >= 1
        assert not (iv[0] <= 0 <= iv[1])
