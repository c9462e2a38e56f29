"""Exact arithmetic: rationals, dense polynomials, rational functions.

Rationals are :class:`fractions.Fraction`, which already keeps the
canonical reduced form with a positive denominator.  Polynomials are
immutable tuples of Fractions, lowest degree first, with trailing zeros
stripped, so structural equality is value equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

import gmpy2

Rational = Fraction
Scalar = Union[int, Fraction]


class InfiniteRootsError(ValueError):
    pass


class OutOfRangeError(ValueError):
    pass


# -- rationals ---------------------------------------------------------------

def format_rational(q: Scalar) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"``; whitespace and decimal points are rejected."""
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None
    if d == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(n, d)


# -- polynomials -------------------------------------------------------------

class Poly:
    """Dense univariate polynomial over Q.  Immutable and hashable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def linear(cls, b: Scalar) -> "Poly":
        """The polynomial x + b."""
        return cls([b, 1])

    @property
    def degree(self) -> int | None:
        """Degree, or ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        return format_poly(self)

    @staticmethod
    def _lift(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        return Poly(c * a for a in self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        lc = other.lc
        if len(rem) - 1 < db:
            return Poly(), self
        quo = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] / lc
            if c:
                quo[k - db] = c
                for j, ob in enumerate(other.coeffs):
                    rem[k - db + j] -= c * ob
        return Poly(quo), Poly(rem[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive over Z (0 for zero)."""
        if self.is_zero():
            return Fraction(0)
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)


def poly_derivative(p: Poly) -> Poly:
    return Poly(i * c for i, c in enumerate(p.coeffs) if i)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def format_poly(p: Poly, var: str = "x") -> str:
    """Human/CLI rendering, highest degree first, e.g. ``(1/2)*x^2 - 3*x + 2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        neg = c < 0
        mag = -c if neg else c
        if k == 0:
            body = format_rational(mag) if mag.denominator == 1 else f"({format_rational(mag)})"
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag.numerator}*{mono}"
            else:
                body = f"({format_rational(mag)})*{mono}"
        if not parts:
            if neg:
                # leading minus must attach to an integer literal
                if body.startswith("("):
                    body = f"(-{body[1:]}"
                elif mag == 1 and k > 0:
                    body = f"-1*{body}"
                else:
                    body = f"-{body}"
            parts.append(body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# -- rational functions ------------------------------------------------------

class RatFunc:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Scalar = 0, den: Poly | Scalar = 1, *, _canonical=False):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _canonical:
            if num.is_zero():
                den = Poly.const(1)
            else:
                g = poly_gcd(num, den)
                if g.degree:
                    num, den = num // g, den // g
                lc = den.lc
                num, den = num.scale(1 / lc), den.scale(1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p, Poly.const(1), _canonical=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.is_poly():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    @staticmethod
    def _lift(other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        a, b = self.den // g, other.den // g
        return RatFunc(self.num * b + other.num * a, self.den * b)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFunc()
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(1) / (self ** -k)
        return RatFunc(self.num ** k, self.den ** k, _canonical=True)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at x = {x}")
        return self.num(x) / d


def ratfunc_add(f: RatFunc, g: RatFunc) -> RatFunc:
    return f + g


def ratfunc_derivative(f: RatFunc) -> RatFunc:
    if f.is_poly():
        return RatFunc(poly_derivative(f.num))
    n, d = f.num, f.den
    return RatFunc(poly_derivative(n) * d - n * poly_derivative(d), d * d)


# -- real roots --------------------------------------------------------------

def _sign(c) -> int:
    return (c > 0) - (c < 0)


def _sign_at_zero_plus(p: Poly) -> int:
    for c in p.coeffs:
        if c:
            return _sign(c)
    return 0


def _variations(signs: Iterable[int]) -> int:
    v, last = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, poly_derivative(p)]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def sturm_count_positive(p: Poly) -> int:
    """Number of distinct real roots of ``p`` in the open interval (0, inf)."""
    if p.is_zero():
        raise InfiniteRootsError("infinitely many roots")
    if p.degree == 0:
        return 0
    squarefree = p // poly_gcd(p, poly_derivative(p))
    seq = sturm_sequence(squarefree)
    v0 = _variations(_sign_at_zero_plus(s) for s in seq)
    vinf = _variations(_sign(s.lc) for s in seq)
    return v0 - vinf


def positivity_bound(p: Poly) -> int:
    """Integer B with sign(p(n)) = sign(lc(p)) for all integers n > B.

    Uses the Cauchy bound 1 + max|a_j / a_deg|, rounded up.
    """
    if p.is_zero():
        raise ValueError("positivity bound of the zero polynomial")
    if p.degree == 0:
        return 0
    lc = abs(p.lc)
    m = max(abs(c) for c in p.coeffs[:-1]) / lc
    return math.ceil(1 + m)


# -- number theory -----------------------------------------------------------

# The first 12 primes form a deterministic Miller-Rabin witness set for every
# n < 3.3e24, which covers the whole 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
PRIME_LIMIT = 1 << 64


def is_prime(n: int) -> bool:
    if n >= PRIME_LIMIT:
        raise OutOfRangeError(f"{n} is out of deterministic range (>= 2^64)")
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def padic_valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n (n >= 1, p prime)."""
    if n < 1:
        raise ValueError("valuation needs a positive integer")
    if p < 2:
        raise ValueError("valuation needs a prime")
    # GMP's remove() strips p^(2^k) blocks; witness products run to millions of bits
    return int(gmpy2.remove(gmpy2.mpz(n), p)[1])


def lcm_all(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
