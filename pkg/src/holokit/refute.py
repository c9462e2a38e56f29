"""Prime-divisibility certificates against rational recurrences for log n.

Exponentiating ``sum_i p_i(n) log(n+i) = 0`` after clearing denominators
gives ``prod_{i in I} (n+i)^{q_i(n)} = prod_{j in J} (n+j)^{q_j(n)}``.  With
``a = max(I | J)`` and ``n + a = p`` prime, p divides exactly one side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence as Seq

import gmpy2

from .exactmath import (
    Poly,
    Scalar,
    format_rational,
    is_prime,
    lcm_all,
    padic_valuation,
    parse_rational,
    positivity_bound,
)
from .logcalc import Interval, LogPolyExpr, TheoremViolation, contains_zero, eval_enclosure

DEFAULT_SEARCH_LIMIT = 10**6


class SearchExhaustedError(RuntimeError):
    pass


@dataclass(frozen=True)
class LogCandidate:
    """Claimed relation sum_i p_i(n) log(n+i) = 0 for all n >= 1."""

    coeffs: tuple[Poly, ...]

    @classmethod
    def make(cls, coeffs: Seq[Poly | Seq[Scalar]]) -> "LogCandidate":
        return cls(tuple(c if isinstance(c, Poly) else Poly(c) for c in coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def as_expr(self) -> LogPolyExpr:
        return LogPolyExpr.make([(i, p) for i, p in enumerate(self.coeffs)])

    def to_json(self) -> dict:
        return {"order": self.order,
                "coeffs": [[format_rational(c) for c in p.coeffs] for p in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "LogCandidate":
        return cls.make([[parse_rational(str(c)) for c in cs] for cs in obj["coeffs"]])


@dataclass(frozen=True)
class ClearedCandidate:
    mu: int
    q: dict[int, Poly]
    I: tuple[int, ...]
    J: tuple[int, ...]
    d: int

    def n0(self) -> int:
        """Smallest admissible witness: beyond every positivity bound and > d."""
        return max(max(positivity_bound(p) for p in self.q.values()) + 1, self.d + 1)


def clear_denominators(c: LogCandidate) -> ClearedCandidate:
    if all(p.is_zero() for p in c.coeffs):
        raise ValueError("candidate has all coefficients zero")
    mu = lcm_all([x.denominator for p in c.coeffs for x in p.coeffs])
    q: dict[int, Poly] = {}
    I, J = [], []
    for i, p in enumerate(c.coeffs):
        if p.is_zero():
            continue
        scaled = p.scale(mu)
        if scaled.lc > 0:
            I.append(i)
            q[i] = scaled
        else:
            J.append(i)
            q[i] = -scaled
    return ClearedCandidate(mu, q, tuple(I), tuple(J), c.order)


def side_product(q: dict[int, Poly], idx: Seq[int], n: int):
    """prod_{i in idx} (n+i)^{q_i(n)} as an exact GMP integer."""
    out = gmpy2.mpz(1)
    for i in idx:
        out *= gmpy2.mpz(n + i) ** int(q[i](n))
    return out


@dataclass(frozen=True)
class PrimeWitness:
    cleared: ClearedCandidate
    a: int
    n: int
    p: int
    v_num: int
    v_den: int

    def to_json(self) -> dict:
        c = self.cleared
        return {
            "mu": str(c.mu),
            "q": {str(i): [str(int(x)) for x in c.q[i].coeffs] for i in sorted(c.q)},
            "I": list(c.I),
            "J": list(c.J),
            "d": c.d,
            "a": self.a,
            "n": self.n,
            "p": self.p,
            "v_num": self.v_num,
            "v_den": self.v_den,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PrimeWitness":
        q = {int(k): Poly(int(x) for x in v) for k, v in obj["q"].items()}
        I = tuple(int(i) for i in obj["I"])
        J = tuple(int(j) for j in obj["J"])
        d = int(obj["d"]) if "d" in obj else max(I + J)
        cleared = ClearedCandidate(int(obj["mu"]), q, I, J, d)
        return cls(cleared, int(obj["a"]), int(obj["n"]), int(obj["p"]),
                   int(obj["v_num"]), int(obj["v_den"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "PrimeWitness":
        return cls.from_json(json.loads(Path(path).read_text()))


def find_witness(cleared: ClearedCandidate, search_limit: int = DEFAULT_SEARCH_LIMIT) -> PrimeWitness:
    if search_limit < 1:
        raise ValueError("search_limit must be at least 1")
    a = max(cleared.I + cleared.J)
    n0 = cleared.n0()
    for n in range(n0, n0 + search_limit):
        if is_prime(n + a):
            p = n + a
            num = side_product(cleared.q, cleared.I, n)
            den = side_product(cleared.q, cleared.J, n)
            return PrimeWitness(cleared, a, n, p, padic_valuation(num, p), padic_valuation(den, p))
    raise SearchExhaustedError(f"search exhausted: no prime n + {a} for n in [{n0}, {n0 + search_limit - 1}]")


def verify_witness(w: PrimeWitness) -> bool:
    """Recheck the certificate from its fields alone, with integer arithmetic."""
    try:
        c = w.cleared
        I, J = set(c.I), set(c.J)
        if not (I or J) or I & J or set(c.q) != I | J:
            return False
        if any(i < 0 or i > c.d for i in I | J):
            return False
        if any(p.is_zero() or p.lc <= 0 or any(x.denominator != 1 for x in p.coeffs)
               for p in c.q.values()):
            return False
        if w.a != max(I | J) or w.p != w.n + w.a or not is_prime(w.p):
            return False
        if w.n < c.n0():
            return False
        if any(p(w.n) <= 0 for p in c.q.values()):
            return False
        v_num = padic_valuation(side_product(c.q, c.I, w.n), w.p)
        v_den = padic_valuation(side_product(c.q, c.J, w.n), w.p)
        if (v_num, v_den) != (w.v_num, w.v_den):
            return False
        return min(v_num, v_den) == 0 and max(v_num, v_den) > 0
    except (ValueError, ArithmeticError):
        return False


def refute(c: LogCandidate, search_limit: int = DEFAULT_SEARCH_LIMIT) -> tuple[PrimeWitness, Interval]:
    """Certificate plus a numeric enclosure of the candidate's value at the
    witness, refined until it excludes zero."""
    w = find_witness(clear_denominators(c), search_limit)
    if not verify_witness(w):
        raise TheoremViolation(f"theorem violation: fresh witness failed verification at n = {w.n}")
    F = c.as_expr()
    precision = 64
    while True:
        iv = eval_enclosure(F, w.n, precision)
        if not contains_zero(iv):
            return w, iv
        precision *= 2
