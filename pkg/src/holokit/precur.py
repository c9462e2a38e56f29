"""P-recursive sequences: representation, unrolling, checking, guessing.

A recurrence of order d is ``sum_i p_i(n) a_{n+i} = 0`` for n >= 1, with
sequences indexed from 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence as Seq

from .exactmath import Poly, Scalar, format_poly, format_rational, lcm_all, parse_rational
from .linalg import nullspace
from .logcalc import LogPolyExpr, eval_enclosure, midpoint

HOLDOUT = 5


class SingularRecurrenceError(ValueError):
    pass


@dataclass(frozen=True)
class PRecurrence:
    """Normalized recurrence: integer primitive coefficients, p_d with positive
    leading coefficient.  Use :meth:`make`."""

    coeffs: tuple[Poly, ...]

    @classmethod
    def make(cls, coeffs: Seq[Poly | Seq[Scalar]]) -> "PRecurrence":
        polys = [c if isinstance(c, Poly) else Poly(c) for c in coeffs]
        while polys and polys[-1].is_zero():
            polys.pop()
        if not polys:
            raise ValueError("all recurrence coefficients are zero")
        num = 0
        den = 1
        for p in polys:
            c = p.content()
            if c:
                num = math.gcd(num, c.numerator)
                den = lcm_all([den, c.denominator])
        scale = Fraction(den, num)
        if polys[-1].lc < 0:
            scale = -scale
        return cls(tuple(p.scale(scale) for p in polys))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max((p.degree for p in self.coeffs if not p.is_zero()), default=0)

    def residual(self, terms: Seq[Fraction], n: int) -> Fraction:
        """sum_i p_i(n) a_{n+i} with 1-based n."""
        return sum((p(n) * terms[n - 1 + i] for i, p in enumerate(self.coeffs)), Fraction(0))

    def __str__(self) -> str:
        parts = []
        for i, p in enumerate(self.coeffs):
            if p.is_zero():
                continue
            idx = "a(n)" if i == 0 else f"a(n+{i})"
            parts.append(f"({format_poly(p, 'n')})*{idx}")
        return " + ".join(parts) + " = 0"

    def to_json(self) -> dict:
        return {"order": self.order,
                "coeffs": [[format_rational(c) for c in p.coeffs] for p in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "PRecurrence":
        coeffs = [Poly(parse_rational(str(c)) for c in cs) for cs in obj["coeffs"]]
        rec = cls.make(coeffs)
        if "order" in obj and int(obj["order"]) != len(obj["coeffs"]) - 1:
            raise ValueError("order does not match the number of coefficient lists")
        return rec


@dataclass(frozen=True)
class Sequence:
    terms: tuple[Fraction, ...]
    start_index: int = 1

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty sequence")
        if self.start_index != 1:
            raise ValueError("sequences start at index 1")

    @classmethod
    def of(cls, terms) -> "Sequence":
        return cls(tuple(Fraction(t) for t in terms))

    def __len__(self):
        return len(self.terms)

    def to_json(self) -> dict:
        return {"start_index": 1, "terms": [format_rational(t) for t in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "Sequence":
        if int(obj.get("start_index", 1)) != 1:
            raise ValueError("sequences start at index 1")
        return cls.of(parse_rational(str(t)) for t in obj["terms"])


def unroll(rec: PRecurrence, initial: Seq[Scalar], N: int) -> Sequence:
    d = rec.order
    if len(initial) != d:
        raise ValueError(f"need exactly {d} initial values, got {len(initial)}")
    if N < d:
        raise ValueError("N must be at least the order")
    terms = [Fraction(t) for t in initial]
    lead = rec.coeffs[-1]
    for n in range(1, N - d + 1):
        ld = lead(n)
        if ld == 0:
            raise SingularRecurrenceError(f"singular leading coefficient at n = {n}")
        s = sum((rec.coeffs[i](n) * terms[n - 1 + i] for i in range(d)), Fraction(0))
        terms.append(-s / ld)
    return Sequence(tuple(terms))


def check(rec: PRecurrence, seq: Sequence) -> bool:
    d = rec.order
    if len(seq) <= d:
        raise ValueError(f"need more than {d} terms to check an order-{d} recurrence")
    return all(rec.residual(seq.terms, n) == 0 for n in range(1, len(seq) - d + 1))


@dataclass
class GuessReport:
    result: PRecurrence | None
    tried: list[tuple[int, int]] = field(default_factory=list)
    skipped: list[tuple[int, int]] = field(default_factory=list)
    system_rows: int = 0
    system_cols: int = 0
    rank: int = 0

    def to_json(self) -> dict:
        return {
            "status": "found" if self.result else "no recurrence",
            "result": self.result.to_json() if self.result else None,
            "tried": [list(t) for t in self.tried],
            "skipped": [list(t) for t in self.skipped],
            "system_rows": self.system_rows,
            "system_cols": self.system_cols,
            "rank": self.rank,
        }


def _system(terms: Seq[Fraction], d: int, D: int, nrows: int) -> list[list[Fraction]]:
    # unknown c_{i,j} sits at column i*(D+1) + j
    rows = []
    for n in range(1, nrows + 1):
        row = []
        for i in range(d + 1):
            a = terms[n - 1 + i]
            pw = Fraction(1)
            for _ in range(D + 1):
                row.append(pw * a)
                pw *= n
        rows.append(row)
    return rows


def guess(seq: Sequence, d_max: int, D_max: int) -> GuessReport:
    """Search (d, D) in lexicographic order for a recurrence verified on all terms."""
    terms = seq.terms
    report = GuessReport(None)
    for d in range(d_max + 1):
        for D in range(D_max + 1):
            cols = (d + 1) * (D + 1)
            # training equations never touch the last HOLDOUT terms
            nrows = len(terms) - HOLDOUT - d
            if nrows < cols + 2:
                report.skipped.append((d, D))
                continue
            report.tried.append((d, D))
            basis, rank = nullspace(_system(terms, d, D, nrows), cols)
            report.system_rows, report.system_cols, report.rank = nrows, cols, rank
            for v in basis:
                polys = [Poly(v[i * (D + 1):(i + 1) * (D + 1)]) for i in range(d + 1)]
                if all(p.is_zero() for p in polys):
                    continue
                rec = PRecurrence.make(polys)
                if len(seq) > rec.order and check(rec, seq):
                    report.result = rec
                    return report
    return report


# -- catalog -----------------------------------------------------------------

CATALOG = ("factorial", "fibonacci", "catalan", "harmonic", "log")


def catalog(name: str, N: int, precision: int | None = None) -> Sequence:
    if name not in CATALOG:
        raise ValueError(f"unknown sequence {name!r}; known: {', '.join(CATALOG)}")
    if (name == "log") != (precision is not None):
        raise ValueError("precision is required for 'log' and only for 'log'")
    if N < 1:
        raise ValueError("N must be positive")
    ns = range(1, N + 1)
    if name == "factorial":
        terms = [math.factorial(n) for n in ns]
    elif name == "fibonacci":
        terms, a, b = [], 1, 1
        for _ in ns:
            terms.append(a)
            a, b = b, a + b
    elif name == "catalan":
        terms = [math.comb(2 * n, n) // (n + 1) for n in ns]
    elif name == "harmonic":
        terms, h = [], Fraction(0)
        for n in ns:
            h += Fraction(1, n)
            terms.append(h)
    else:
        # midpoints of rigorous enclosures, NOT exact values of log n
        F = LogPolyExpr.log(0)
        terms = [midpoint(eval_enclosure(F, n, precision)) for n in ns]
    return Sequence.of(terms)
