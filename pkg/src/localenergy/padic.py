"""p-adic valuations, finite-precision p-adic numbers, Newton polygons and
exact root counting in Z_p and P^1(Q_p).

Root counting and lifting work on exact integer polynomials, never on
truncated p-adic floats, so a count is a certificate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .polynomial import IntPolynomial

INF = math.inf


class PrecisionError(ArithmeticError):
    """A p-adic valuation could not be certified at the working precision."""


class RootCountDepthError(RuntimeError):
    """Root-counting recursion went deeper than the discriminant allows."""


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _check_prime(p) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def _int_ord(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ord_p(x, p: int):
    """p-adic valuation of an exact rational; ``math.inf`` for zero."""
    _check_prime(p)
    if isinstance(x, float):
        raise TypeError("ord_p needs an exact rational, not a float")
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_ord(x.numerator, p) - _int_ord(x.denominator, p)


@dataclass(frozen=True)
class PadicNumber:
    """Element of Q_p stored as unit * p^valuation.

    ``unit`` is known modulo p^precision (relative precision).  Zero is exact
    and carries ``valuation = inf``; a difference that vanishes to working
    precision raises :class:`PrecisionError` instead of becoming zero.
    """

    p: int
    valuation: float | int
    unit: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        if self.valuation == INF:
            if self.unit != 0:
                raise ValueError("zero must have unit 0")
            return
        m = self.p ** self.precision
        if not 0 <= self.unit < m or self.unit % self.p == 0:
            raise ValueError("unit must be reduced mod p^N and prime to p")

    @classmethod
    def from_rational(cls, x, p: int, precision: int = 32) -> "PadicNumber":
        _check_prime(p)
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, precision)
        v = ord_p(x, p)
        num, den = x.numerator, x.denominator
        if v >= 0:
            num //= p ** v
        else:
            den //= p ** (-v)
        m = p ** precision
        return cls(p, v, num * pow(den, -1, m) % m, precision)

    @classmethod
    def zero(cls, p: int, precision: int = 32) -> "PadicNumber":
        return cls(p, INF, 0, precision)

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def absolute_precision(self):
        return INF if self.is_zero else self.valuation + self.precision

    def __abs__(self) -> Fraction:
        return padic_abs(self)

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, (int, Rational)):
            return PadicNumber.from_rational(other, self.p, self.precision)
        return NotImplemented

    def __neg__(self):
        if self.is_zero:
            return self
        m = self.p ** self.precision
        return PadicNumber(self.p, self.valuation, (-self.unit) % m, self.precision)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        p = self.p
        lo = min(self.valuation, other.valuation)
        A = min(self.absolute_precision, other.absolute_precision)
        m = p ** (A - lo)
        s = (self.unit * p ** (self.valuation - lo) + other.unit * p ** (other.valuation - lo)) % m
        if s == 0:
            raise PrecisionError(f"sum vanishes modulo p^{A}; valuation not certifiable")
        k = _int_ord(s, p)
        v = lo + k
        N = A - v
        return PadicNumber(p, v, (s // p ** k) % p ** N, N)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = min(self.precision, other.precision)
        if self.is_zero or other.is_zero:
            return PadicNumber.zero(self.p, N)
        return PadicNumber(self.p, self.valuation + other.valuation,
                           self.unit * other.unit % self.p ** N, N)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("p-adic division by zero")
        N = min(self.precision, other.precision)
        if self.is_zero:
            return PadicNumber.zero(self.p, N)
        m = self.p ** N
        return PadicNumber(self.p, self.valuation - other.valuation,
                           self.unit * pow(other.unit, -1, m) % m, N)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def to_integer_mod(self, k: int) -> int:
        """Residue of an integral element modulo p^k (needs absolute precision >= k)."""
        if self.is_zero:
            return 0
        if self.valuation < 0:
            raise ValueError("element is not integral")
        if k > self.absolute_precision:
            raise PrecisionError(f"only known modulo p^{self.absolute_precision}")
        return self.unit * self.p ** self.valuation % self.p ** k

    def __str__(self):
        if self.is_zero:
            return "0"
        return f"{self.unit}*{self.p}^{self.valuation}"

    @classmethod
    def parse(cls, text: str, p: int, precision: int) -> "PadicNumber":
        """Inverse of ``str``: ``"u*p^v"`` or ``"0"``."""
        text = text.strip()
        if text == "0":
            return cls.zero(p, precision)
        u, rest = text.split("*")
        base, v = rest.split("^")
        if int(base) != p:
            raise ValueError(f"expected prime {p}, got {base}")
        return cls(p, int(v), int(u) % p ** precision, precision)


def padic_abs(x: PadicNumber) -> Fraction:
    """|x|_p = p^(-v), normalized so that |p|_p = 1/p."""
    if x.is_zero:
        return Fraction(0)
    return Fraction(x.p) ** (-x.valuation)


# --- Newton polygons --------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points (i, ord_p(a_i)).

    ``segments`` holds (slope, horizontal length) with strictly increasing
    slopes.  The roots of f with valuation -slope number exactly ``length``.
    ``zero_roots`` counts the root 0 (valuation +inf) with multiplicity.
    """

    p: int
    segments: tuple[tuple[Fraction, int], ...]
    zero_roots: int = 0

    def root_valuations(self) -> list[Fraction]:
        out = []
        for slope, length in self.segments:
            out.extend([-slope] * length)
        return out

    def log_plus_coefficient(self) -> Fraction:
        """Sum over roots of max(0, -ord(root)), i.e. sum log+|root|_p in units of log p."""
        return sum((s * n for s, n in self.segments if s > 0), Fraction(0))


def newton_polygon(f: IntPolynomial, p: int) -> NewtonPolygon:
    _check_prime(p)
    pts = [(i, _int_ord(c, p)) for i, c in enumerate(f.coeffs) if c != 0]
    zero_roots = pts[0][0]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        # pop while the last hull point is on or above the chord to pt
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = tuple(
        (Fraction(y2 - y1, x2 - x1), x2 - x1)
        for (x1, y1), (x2, y2) in zip(hull, hull[1:])
    )
    return NewtonPolygon(p, segs, zero_roots)


# --- roots in Z_p ------------------------------------------------------------

def _strip_p(coeffs: list[int], p: int) -> list[int]:
    m = min(_int_ord(c, p) for c in coeffs if c)
    if m:
        q = p ** m
        coeffs = [c // q for c in coeffs]
    return coeffs


def _shift(coeffs: list[int], r: int, p: int) -> list[int]:
    """Coefficients of g(r + p X), with the common power of p removed."""
    return _strip_p(list(IntPolynomial(coeffs).compose_linear(r, p).coeffs), p)


def _eval_mod(coeffs, x, m):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % m
    return acc


def _deriv(coeffs):
    return [i * c for i, c in enumerate(coeffs) if i]


def _max_depth(f: IntPolynomial, p: int) -> int:
    if f.degree < 2:
        return 1
    return _int_ord(f.discriminant, p) + 1


def count_roots_Zp(f: IntPolynomial, p: int) -> int:
    """Exact number of roots of a squarefree ``f`` in Z_p."""
    _check_prime(p)
    f.require_squarefree()
    if f.degree == 0:
        return 0
    limit = _max_depth(f, p)

    def count(g: list[int], depth: int) -> int:
        if depth > limit:
            raise RootCountDepthError(f"depth {depth} exceeds bound {limit}")
        g = _strip_p(g, p)
        if len(g) == 1:
            return 0
        dg = _deriv(g)
        total = 0
        for r in range(p):
            if _eval_mod(g, r, p):
                continue
            if _eval_mod(dg, r, p):
                total += 1
            else:
                total += count(_shift(g, r, p), depth + 1)
        return total

    return count(list(f.coeffs), 0)


def _infinite_part(f: IntPolynomial, p: int) -> IntPolynomial | None:
    """rev(f)(pX): its Z_p-roots X correspond to roots of f with negative valuation."""
    rev = f.reversed()
    if rev.degree == 0:
        return None
    return IntPolynomial(_strip_p(list(rev.compose_linear(0, p).coeffs), p))


def count_roots_P1(f: IntPolynomial, p: int) -> int:
    """Number of roots of ``f`` in Q_p (equivalently in P^1(Q_p) minus infinity)."""
    f.require_squarefree()
    n = count_roots_Zp(f, p)
    tail = _infinite_part(f, p)
    if tail is not None:
        n += count_roots_Zp(tail, p)
    return n


def is_totally_split(f: IntPolynomial, p: int) -> bool:
    """True iff the squarefree ``f`` has deg(f) distinct roots in Q_p."""
    if f.degree < 1:
        raise ValueError("need degree >= 1")
    return count_roots_P1(f, p) == f.degree


def _hensel_lift(g: list[int], r: int, p: int, k: int) -> int:
    """Lift a simple root r of g mod p to a root mod p^k, doubling precision each step."""
    dg = _deriv(g)
    prec = 1
    x = r % p
    while prec < k:
        prec = min(2 * prec, k)
        m = p ** prec
        fx = _eval_mod(g, x, m)
        dfx = _eval_mod(dg, x, m)
        x = (x - fx * pow(dfx, -1, m)) % m
    return x


def roots_Zp(f: IntPolynomial, p: int, precision: int) -> list[int]:
    """Roots of a squarefree ``f`` in Z_p, each modulo p^precision, sorted."""
    _check_prime(p)
    f.require_squarefree()
    if f.degree == 0:
        return []
    limit = _max_depth(f, p)
    out: list[int] = []

    def walk(g: list[int], base: int, k: int):
        # roots of f here are x = base + p^k X with g(X) = 0
        if k >= precision:
            raise PrecisionError("root cluster not separated within working precision")
        if k > limit:
            raise RootCountDepthError(f"depth {k} exceeds bound {limit}")
        g = _strip_p(g, p)
        if len(g) == 1:
            return
        dg = _deriv(g)
        for r in range(p):
            if _eval_mod(g, r, p):
                continue
            if _eval_mod(dg, r, p):
                X = _hensel_lift(g, r, p, precision - k)
                out.append((base + p ** k * X) % p ** precision)
            else:
                walk(_shift(g, r, p), base + p ** k * r, k + 1)

    walk(list(f.coeffs), 0, 0)
    return sorted(out)


def roots_P1(f: IntPolynomial, p: int, precision: int) -> list[tuple[int, int]]:
    """Roots of ``f`` in P^1(Q_p) as normalized (chart, value) pairs.

    Chart 0 is (z:1) with z in Z_p; chart 1 is (1:w) with w in pZ_p, the
    inverse of a root of negative valuation.
    """
    pts = [(0, z) for z in roots_Zp(f, p, precision)]
    tail = _infinite_part(f, p)
    if tail is not None:
        # tail(X) = rev(pX): w = pX
        m = p ** precision
        pts += [(1, p * X % m) for X in roots_Zp(tail, p, precision - 1)]
    return pts
