"""Projective points, the metric delta, Mobius maps and discrete energies
on P^1 over R/C and over Q_p.

Points are stored normalized in one of two affine charts:

* chart 0: (z : 1) with |z| <= 1
* chart 1: (1 : w) with |w| < 1   (p-adically: w in pZ_p)

so max(|x0|, |x1|) = 1 always holds and delta reduces to the cross term.
p-adic chart values are integers modulo p^N, where N is the precision of
the field context.
"""
from __future__ import annotations

import cmath
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .padic import INF, PadicNumber, PrecisionError, _check_prime, _int_ord

POINTSET_SCHEMA = "localenergy.pointset/1"


@dataclass(frozen=True)
class FieldContext:
    """Ground field: archimedean (``p is None``) or Q_p at a fixed digit precision."""

    p: int | None = None
    precision: int = 32

    def __post_init__(self):
        if self.p is not None:
            _check_prime(self.p)
            if self.precision < 1:
                raise ValueError("precision must be >= 1")

    @classmethod
    def archimedean(cls) -> "FieldContext":
        return cls(None)

    @classmethod
    def padic(cls, p: int, precision: int = 32) -> "FieldContext":
        return cls(p, precision)

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    def to_dict(self) -> dict:
        if self.is_archimedean:
            return {"kind": "archimedean"}
        return {"kind": "padic", "p": self.p, "precision": self.precision}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldContext":
        if d["kind"] == "archimedean":
            return cls.archimedean()
        return cls.padic(int(d["p"]), int(d["precision"]))


ARCHIMEDEAN = FieldContext.archimedean()


def _check_same(x: "ProjectivePoint", y: "ProjectivePoint"):
    if x.context != y.context:
        raise ValueError(f"points live in different fields: {x.context} vs {y.context}")


@dataclass(frozen=True)
class ProjectivePoint:
    context: FieldContext
    chart: int
    value: complex | int

    # -- constructors --------------------------------------------------------
    @classmethod
    def arch(cls, x0, x1) -> "ProjectivePoint":
        x0, x1 = complex(x0), complex(x1)
        if x0 == 0 and x1 == 0:
            raise ValueError("(0:0) is not a point")
        if abs(x1) >= abs(x0):
            return cls(ARCHIMEDEAN, 0, x0 / x1)
        return cls(ARCHIMEDEAN, 1, x1 / x0)

    @classmethod
    def padic(cls, x0, x1, context: FieldContext) -> "ProjectivePoint":
        """Point (x0:x1) of P^1(Q_p) from exact rationals or PadicNumbers."""
        p, N = context.p, context.precision
        a = x0 if isinstance(x0, PadicNumber) else PadicNumber.from_rational(x0, p, N)
        b = x1 if isinstance(x1, PadicNumber) else PadicNumber.from_rational(x1, p, N)
        if a.is_zero and b.is_zero:
            raise ValueError("(0:0) is not a point")
        if a.is_zero:
            return cls(context, 0, 0)
        if b.is_zero:
            return cls(context, 1, 0)
        if b.valuation <= a.valuation:
            chart, r = 0, a / b
        else:
            chart, r = 1, b / a
        if r.absolute_precision < N:
            raise PrecisionError(f"coordinate ratio known only modulo p^{r.absolute_precision}")
        return cls(context, chart, r.to_integer_mod(N))

    @classmethod
    def from_value(cls, x, context: FieldContext = ARCHIMEDEAN) -> "ProjectivePoint":
        """Affine point x, or infinity for ``math.inf``/``None``."""
        if x is None or (isinstance(x, float) and math.isinf(x)):
            return cls.infinity(context)
        if context.is_archimedean:
            return cls.arch(x, 1)
        return cls.padic(x, 1, context)

    @classmethod
    def infinity(cls, context: FieldContext = ARCHIMEDEAN) -> "ProjectivePoint":
        return cls(context, 1, 0j if context.is_archimedean else 0)

    # -- coordinates ---------------------------------------------------------
    @property
    def coords(self) -> tuple:
        """Normalized homogeneous pair (x0, x1)."""
        if self.context.is_archimedean:
            return (self.value, 1 + 0j) if self.chart == 0 else (1 + 0j, self.value)
        ctx = self.context
        one = PadicNumber.from_rational(1, ctx.p, ctx.precision)
        v = self._padic_value()
        return (v, one) if self.chart == 0 else (one, v)

    def _padic_value(self) -> PadicNumber:
        ctx = self.context
        if self.value == 0:
            return PadicNumber.zero(ctx.p, ctx.precision)
        k = _int_ord(self.value, ctx.p)
        N = ctx.precision - k
        return PadicNumber(ctx.p, k, (self.value // ctx.p ** k) % ctx.p ** N, N)

    @property
    def affine(self):
        """Affine coordinate x0/x1 (``math.inf`` at infinity)."""
        if self.context.is_archimedean:
            if self.chart == 0:
                return self.value
            return math.inf if self.value == 0 else 1 / self.value
        v = self._padic_value()
        if self.chart == 0:
            return v
        return math.inf if v.is_zero else 1 / v

    def __str__(self):
        x0, x1 = self.coords
        return f"({x0}:{x1})"


# --- the metric ---------------------------------------------------------------

def _cross(x: ProjectivePoint, y: ProjectivePoint) -> complex:
    x0, x1 = x.coords
    y0, y1 = y.coords
    return x0 * y1 - y0 * x1


def delta_valuation(x: ProjectivePoint, y: ProjectivePoint) -> float | int:
    """p-adic: the integer k with delta(x, y) = p^-k (``inf`` when x == y)."""
    _check_same(x, y)
    ctx = x.context
    if ctx.is_archimedean:
        raise ValueError("delta_valuation is only defined over Q_p")
    if x == y:
        return INF
    if x.chart != y.chart:
        # (z:1) against (1:w): |z w - 1| = 1 since w is in pZ_p
        return 0
    d = (x.value - y.value) % ctx.modulus
    if d == 0:
        raise PrecisionError(f"points agree modulo p^{ctx.precision}")
    return _int_ord(d, ctx.p)


def delta(x: ProjectivePoint, y: ProjectivePoint) -> float:
    """|x0 y1 - y0 x1| / (max(|x0|,|x1|) max(|y0|,|y1|))."""
    _check_same(x, y)
    if x.context.is_archimedean:
        return abs(_cross(x, y))
    k = delta_valuation(x, y)
    return 0.0 if k == INF else float(Fraction(x.context.p) ** (-k))


def neg_log_delta(x: ProjectivePoint, y: ProjectivePoint) -> float:
    """-log delta(x, y); ``inf`` on the diagonal.  p-adic values are k log p exactly."""
    _check_same(x, y)
    if x.context.is_archimedean:
        d = abs(_cross(x, y))
        return math.inf if d == 0 else -math.log(d)
    k = delta_valuation(x, y)
    return math.inf if k == INF else k * math.log(x.context.p)


# --- Mobius maps ----------------------------------------------------------------

@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b) / (c x + d), acting on columns (x0, x1)."""

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("singular matrix")

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def is_integral_unimodular(self, p: int) -> bool:
        """True if the entries lie in Z_(p) and det is a p-adic unit (an element of PGL2(Z_p))."""
        entries = [Fraction(e) for e in (self.a, self.b, self.c, self.d)]
        if any(e.denominator % p == 0 for e in entries):
            return False
        return Fraction(self.det).numerator % p != 0

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(
            self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d,
        )


def _padic_integer_matrix(m: MobiusMap, p: int) -> tuple[int, int, int, int]:
    entries = [Fraction(e) for e in (m.a, m.b, m.c, m.d)]
    for e in entries:
        if not isinstance(e, Rational):
            raise TypeError("p-adic Mobius maps need exact rational entries")
    den = math.lcm(*(e.denominator for e in entries))
    ints = [int(e * den) for e in entries]
    g = math.gcd(*ints)
    return tuple(i // g for i in ints)


def apply_mobius(m: MobiusMap, x: ProjectivePoint) -> ProjectivePoint:
    ctx = x.context
    if ctx.is_archimedean:
        x0, x1 = x.coords
        return ProjectivePoint.arch(m.a * x0 + m.b * x1, m.c * x0 + m.d * x1)
    p, N, M = ctx.p, ctx.precision, ctx.modulus
    a, b, c, d = _padic_integer_matrix(m, p)
    x0, x1 = (x.value, 1) if x.chart == 0 else (1, x.value)
    y0 = (a * x0 + b * x1) % M
    y1 = (c * x0 + d * x1) % M
    k = min(_int_ord(y0, p) if y0 else N, _int_ord(y1, p) if y1 else N)
    if k >= N:
        raise PrecisionError("image point lost all precision")
    if k:
        # non-unimodular map: dividing out p^k loses k digits
        raise PrecisionError(f"map is not in PGL2(Z_{p}); renormalization needs {k} more digits")
    if y1 % p:
        return ProjectivePoint(ctx, 0, y0 * pow(y1, -1, M) % M)
    return ProjectivePoint(ctx, 1, y1 * pow(y0, -1, M) % M)


# --- point sets -------------------------------------------------------------------

class RepeatedPointError(ValueError):
    """A point set contains the same point twice, so its discrepancy is infinite."""


class PointSet:
    """Finite set of pairwise distinct points sharing one field context.

    Stored as arrays: ``charts`` (int8) and ``values`` (complex128 over R/C,
    Python ints modulo p^N over Q_p).
    """

    def __init__(self, context: FieldContext, charts, values, *, check: bool = True):
        self.context = context
        self.charts = np.asarray(charts, dtype=np.int8)
        if context.is_archimedean:
            self.values = np.asarray(values, dtype=np.complex128)
        else:
            self.values = [int(v) for v in values]
        if len(self.values) != len(self.charts):
            raise ValueError("charts and values differ in length")
        if check:
            self._check_distinct()

    @classmethod
    def from_points(cls, points: Iterable[ProjectivePoint]) -> "PointSet":
        points = list(points)
        if not points:
            raise ValueError("empty point set")
        ctx = points[0].context
        for q in points:
            if q.context != ctx:
                raise ValueError("all points must share one field context")
        return cls(ctx, [q.chart for q in points], [q.value for q in points])

    def _check_distinct(self):
        if self.context.is_archimedean:
            keys = zip(self.charts.tolist(), self.values.tolist())
        else:
            keys = zip(self.charts.tolist(), self.values)
        counts = Counter(keys)
        if len(counts) != len(self):
            dup = next(k for k, c in counts.items() if c > 1)
            raise RepeatedPointError(f"repeated point {dup}")

    def __len__(self):
        return len(self.charts)

    def __iter__(self) -> Iterator[ProjectivePoint]:
        for c, v in zip(self.charts.tolist(), self.values):
            yield ProjectivePoint(self.context, c, v)

    def __getitem__(self, i) -> ProjectivePoint:
        return ProjectivePoint(self.context, int(self.charts[i]), self.values[i])

    def homogeneous_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Archimedean (x0, x1) as complex arrays."""
        if not self.context.is_archimedean:
            raise ValueError("only for archimedean point sets")
        one = np.ones(len(self), dtype=np.complex128)
        ch = self.charts.astype(bool)
        x0 = np.where(ch, one, self.values)
        x1 = np.where(ch, self.values, one)
        return x0, x1

    def map(self, m: MobiusMap) -> "PointSet":
        return PointSet.from_points(apply_mobius(m, q) for q in self)

    # -- serialization -------------------------------------------------------
    def to_json(self) -> str:
        if self.context.is_archimedean:
            x0, x1 = self.homogeneous_arrays()
            pts = [[[a.real, a.imag], [b.real, b.imag]] for a, b in zip(x0.tolist(), x1.tolist())]
        else:
            pts = [[str(c0), str(c1)] for c0, c1 in (q.coords for q in self)]
        return json.dumps({"schema": POINTSET_SCHEMA, "context": self.context.to_dict(), "points": pts})

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        d = json.loads(text)
        if d.get("schema") != POINTSET_SCHEMA:
            raise ValueError(f"unknown schema {d.get('schema')!r}")
        ctx = FieldContext.from_dict(d["context"])
        if ctx.is_archimedean:
            pts = [ProjectivePoint.arch(complex(*a), complex(*b)) for a, b in d["points"]]
        else:
            pts = [
                ProjectivePoint.padic(PadicNumber.parse(a, ctx.p, ctx.precision),
                                      PadicNumber.parse(b, ctx.p, ctx.precision), ctx)
                for a, b in d["points"]
            ]
        return cls.from_points(pts)


def _arch_arrays(Z: PointSet):
    x0, x1 = Z.homogeneous_arrays()
    return (np.ascontiguousarray(x0.real), np.ascontiguousarray(x0.imag),
            np.ascontiguousarray(x1.real), np.ascontiguousarray(x1.imag))


def padic_pair_valuation_sum(Z: PointSet) -> int:
    """Sum over unordered pairs of k where delta = p^-k.

    Counts, for every level j >= 1, the pairs in the same chart that agree
    modulo p^j: sum_j #{pairs congruent mod p^j} = sum over pairs of ord(difference).
    """
    ctx = Z.context
    p, N = ctx.p, ctx.precision
    total = 0
    for chart in (0, 1):
        vals = [v for c, v in zip(Z.charts.tolist(), Z.values) if c == chart]
        m = 1
        for j in range(1, N + 1):
            m *= p
            counts = Counter(v % m for v in vals)
            pairs = sum(c * (c - 1) // 2 for c in counts.values())
            if pairs == 0:
                break
            if j == N:
                raise PrecisionError(f"{pairs} pair(s) agree modulo p^{N}; increase precision")
            total += pairs
            # only the classes that still hold two or more points can contribute further
            keep = {r for r, c in counts.items() if c > 1}
            vals = [v for v in vals if v % m in keep]
    return total


def discrepancy_exact(Z: PointSet) -> Fraction:
    """p-adic discrepancy as an exact rational multiple of log p."""
    if Z.context.is_archimedean:
        raise ValueError("exact discrepancy only exists over Q_p")
    N = len(Z)
    if N < 2:
        raise ValueError("need at least two points")
    return Fraction(2 * padic_pair_valuation_sum(Z), N * (N - 1))


def discrepancy(Z: PointSet) -> float:
    """(1/(N(N-1))) * sum over ordered pairs alpha != beta of -log delta(alpha, beta)."""
    N = len(Z)
    if N < 2:
        raise ValueError("need at least two points")
    if not Z.context.is_archimedean:
        return float(discrepancy_exact(Z)) * math.log(Z.context.p)
    total, zeros = kernels.arch_pair_sum(*_arch_arrays(Z))
    if zeros:
        raise RepeatedPointError(f"{zeros} pair(s) at distance zero")
    return 2.0 * total / (N * (N - 1))


def discrete_potential(Z: PointSet, x: ProjectivePoint) -> float:
    """(1/N) sum over alpha in Z of -log delta(x, alpha); ``inf`` if x is in Z."""
    if Z.context != x.context:
        raise ValueError("point and set live in different fields")
    N = len(Z)
    if Z.context.is_archimedean:
        x0, x1 = x.coords
        total, zeros = kernels.arch_row_sums(*_arch_arrays(Z), x0.real, x0.imag, x1.real, x1.imag)
        return math.inf if zeros else total / N
    ctx = x.context
    k_sum = 0
    for c, v in zip(Z.charts.tolist(), Z.values):
        if c != x.chart:
            continue
        d = (v - x.value) % ctx.modulus
        if d == 0:
            if v == x.value:
                return math.inf
            raise PrecisionError("point agrees with a set member to full precision")
        k_sum += _int_ord(d, ctx.p)
    return k_sum * math.log(ctx.p) / N


def mc_energy_estimate(sampler, N: int, seed=None) -> float:
    """Discrepancy of ``N`` independent draws from ``sampler``; estimates its energy."""
    if N < 2:
        raise ValueError("need N >= 2")
    rng = sampler.make_rng(seed) if hasattr(sampler, "make_rng") else np.random.default_rng(seed)
    return discrepancy(sampler.sample(N, rng))


def brute_force_discrepancy(points: Sequence[ProjectivePoint]) -> float:
    """Direct ordered-pair sum; O(N^2) Python, for testing."""
    N = len(points)
    s = 0.0
    for i in range(N):
        for j in range(N):
            if i != j:
                s += neg_log_delta(points[i], points[j])
    return s / (N * (N - 1))
