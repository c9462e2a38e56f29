"""Calculus on log-polynomial expressions F(x) = sum p_i(x) log(x + b_i) + r(x).

Differentiating F turns each ``p log(x+b)`` into ``p' log(x+b) + p/(x+b)``,
so after ``M + 1`` derivatives (M the largest log coefficient degree) the
log part is gone and only a rational function remains.  Counting the
positive zeros of that rational function and adding back one zero per
derivative (Rolle) bounds the positive zeros of F itself.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import gmpy2

from .exactmath import (
    Poly,
    RatFunc,
    Scalar,
    format_poly,
    format_rational,
    poly_derivative,
    ratfunc_derivative,
    sturm_count_positive,
)


class UndefinedExpressionError(ValueError):
    pass


class TheoremViolation(AssertionError):
    pass


@dataclass(frozen=True)
class LogPolyExpr:
    """Canonical log-polynomial expression.

    ``log_terms`` is a tuple of ``(shift, coeff)`` pairs, shifts strictly
    increasing and nonnegative, coefficients nonzero.  Build instances with
    :meth:`make`, which canonicalizes.
    """

    log_terms: tuple[tuple[Fraction, Poly], ...] = ()
    rat_part: RatFunc = RatFunc()

    @classmethod
    def make(cls, log_terms: Mapping[Scalar, Poly] | Iterable[tuple[Scalar, Poly]] = (),
             rat_part: RatFunc | Poly | Scalar = 0) -> "LogPolyExpr":
        items = log_terms.items() if isinstance(log_terms, Mapping) else log_terms
        acc: dict[Fraction, Poly] = {}
        for b, p in items:
            b = Fraction(b)
            if b < 0:
                raise ValueError(f"negative shift {format_rational(b)}: log(x + b) undefined near 0")
            if not isinstance(p, Poly):
                p = Poly.const(p)
            acc[b] = acc.get(b, Poly()) + p
        terms = tuple((b, acc[b]) for b in sorted(acc) if not acc[b].is_zero())
        if not isinstance(rat_part, RatFunc):
            rat_part = RatFunc(rat_part)
        return cls(terms, rat_part)

    @classmethod
    def log(cls, shift: Scalar = 0, coeff: Poly | Scalar = 1) -> "LogPolyExpr":
        return cls.make([(shift, coeff)])

    @property
    def max_log_degree(self) -> int:
        """M, the largest coefficient degree; -1 when there is no log part."""
        return max((p.degree for _, p in self.log_terms), default=-1)

    def is_zero(self) -> bool:
        return not self.log_terms and self.rat_part.is_zero()

    def __add__(self, other: "LogPolyExpr") -> "LogPolyExpr":
        return LogPolyExpr.make(self.log_terms + other.log_terms, self.rat_part + other.rat_part)

    def __neg__(self) -> "LogPolyExpr":
        return LogPolyExpr(tuple((b, -p) for b, p in self.log_terms), -self.rat_part)

    def __sub__(self, other: "LogPolyExpr") -> "LogPolyExpr":
        return self + (-other)

    def scale(self, c: Scalar) -> "LogPolyExpr":
        return LogPolyExpr.make([(b, p.scale(c)) for b, p in self.log_terms], self.rat_part * Fraction(c))

    def __str__(self) -> str:
        return format_expr(self)


_ATOMIC = re.compile(r"-?\d+|x|x\^\d+|\(-?\d+/\d+\)")


def _group(p: Poly) -> str:
    s = format_poly(p)
    return s if _ATOMIC.fullmatch(s) else f"({s})"


def format_expr(F: LogPolyExpr) -> str:
    """Render F in the parser's grammar, e.g. ``(x - 2)*log(x) + (1/2)/(x + 1)``."""
    parts = []
    for b, p in F.log_terms:
        atom = "log(x)" if b == 0 else f"log(x + {format_rational(b)})"
        parts.append(atom if p == 1 else f"{_group(p)}*{atom}")
    r = F.rat_part
    if not r.is_zero():
        if r.is_poly():
            parts.append(format_poly(r.num))
        else:
            parts.append(f"{_group(r.num)}/{_group(r.den)}")
    if not parts:
        return "0"
    out = parts[0]
    for part in parts[1:]:
        out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return out


def differentiate(F: LogPolyExpr) -> LogPolyExpr:
    logs = []
    rat = ratfunc_derivative(F.rat_part)
    for b, p in F.log_terms:
        logs.append((b, poly_derivative(p)))
        rat = rat + RatFunc(p, Poly.linear(b))
    return LogPolyExpr.make(logs, rat)


def differentiate_n(F: LogPolyExpr, times: int) -> LogPolyExpr:
    for _ in range(times):
        F = differentiate(F)
    return F


def rolle_collapse(F: LogPolyExpr) -> RatFunc:
    """The rational function F^(M+1), M the largest log coefficient degree."""
    G = differentiate_n(F, F.max_log_degree + 1)
    if G.log_terms:
        raise TheoremViolation("log terms survived M+1 derivatives")
    return G.rat_part


def is_identically_zero(F: LogPolyExpr) -> bool:
    # A nonzero canonical form never vanishes on all of (0, inf): the log part
    # blows up at the smallest shift while the rational remainder cannot
    # cancel it.  Canonical emptiness is therefore the exact test.
    return F.is_zero()


@dataclass(frozen=True)
class ZeroBound:
    """Either ``Finite(bound)`` or ``AllZero`` (``bound is None``)."""

    bound: int | None

    @property
    def kind(self) -> str:
        return "AllZero" if self.bound is None else "Finite"

    def __str__(self) -> str:
        return "AllZero" if self.bound is None else f"Finite({self.bound})"

    def to_json(self) -> dict:
        if self.bound is None:
            return {"kind": "AllZero"}
        return {"kind": "Finite", "bound": self.bound}


ALL_ZERO = ZeroBound(None)


def has_positive_pole(r: RatFunc) -> bool:
    return r.den.degree > 0 and sturm_count_positive(r.den) > 0


def bound_positive_zeros(F: LogPolyExpr) -> ZeroBound:
    """Upper bound on the number of distinct zeros of F in (0, inf)."""
    if has_positive_pole(F.rat_part):
        raise UndefinedExpressionError("expression undefined on (0,inf): rational part has a positive pole")
    if is_identically_zero(F):
        return ALL_ZERO
    if not F.log_terms:
        return ZeroBound(sturm_count_positive(F.rat_part.num))
    R = rolle_collapse(F)
    if R.is_zero():
        raise TheoremViolation(f"theorem violation: F^(M+1) vanishes for nonzero F = {F}")
    return ZeroBound(sturm_count_positive(R.num) + F.max_log_degree + 1)


# -- numeric enclosures ------------------------------------------------------

Interval = tuple[Fraction, Fraction]

MAX_DOUBLINGS = 16


def _mpfr_to_fraction(v) -> Fraction:
    n, d = v.as_integer_ratio()
    return Fraction(int(n), int(d))


def log_enclosure(t: Fraction, bits: int) -> Interval:
    """Rational interval containing log(t) for rational t > 0.

    MPFR rounds correctly, so rounding the argument and the logarithm
    outward yields a rigorous enclosure.
    """
    if t <= 0:
        raise ValueError("log of a nonpositive number")
    if t == 1:
        return Fraction(0), Fraction(0)
    q = gmpy2.mpq(t.numerator, t.denominator)
    with gmpy2.context(precision=bits, round=gmpy2.RoundDown):
        lo = gmpy2.log(gmpy2.mpfr(q))
    with gmpy2.context(precision=bits, round=gmpy2.RoundUp):
        hi = gmpy2.log(gmpy2.mpfr(q))
    return _mpfr_to_fraction(lo), _mpfr_to_fraction(hi)


def _enclose_at(F: LogPolyExpr, x: Fraction, bits: int) -> Interval:
    lo = hi = F.rat_part(x)
    for b, p in F.log_terms:
        c = p(x)
        if c == 0:
            continue
        l_lo, l_hi = log_enclosure(x + b, bits)
        a, z = c * l_lo, c * l_hi
        if a > z:
            a, z = z, a
        lo += a
        hi += z
    return lo, hi


def _magnitude_bits(F: LogPolyExpr, x: Fraction) -> int:
    # Extra bits so the first attempt already meets the width target; keeps
    # the working precision a monotone function of the requested precision.
    scale = Fraction(0)
    for b, p in F.log_terms:
        t = x + b
        # |log t| <= |t - 1| + |1/t - 1| covers both t < 1 and t > 1
        scale += abs(p(x)) * (abs(t - 1) + abs(1 / t - 1) + 2)
    return max(0, int(scale).bit_length())


def eval_enclosure(F: LogPolyExpr, x: Scalar, precision: int) -> Interval:
    """Interval [lo, hi] containing F(x), of width at most 2^-precision when
    the working precision cap allows it."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("evaluation point must be positive")
    if precision < 1:
        raise ValueError("precision must be positive")
    if F.rat_part.den(x) == 0:
        raise ZeroDivisionError(f"x = {format_rational(x)} is a pole of the rational part")
    target = Fraction(1, 1 << precision)
    bits = precision + 32 + _magnitude_bits(F, x)
    lo, hi = _enclose_at(F, x, bits)
    for _ in range(MAX_DOUBLINGS):
        if hi - lo <= target:
            break
        bits *= 2
        lo, hi = _enclose_at(F, x, bits)
    return lo, hi


def midpoint(iv: Interval) -> Fraction:
    return (iv[0] + iv[1]) / 2


def contains_zero(iv: Interval) -> bool:
    return iv[0] <= 0 <= iv[1]
