"""Algebraic numbers as root sets of squarefree integer polynomials: Weil
heights, local discrepancies at every place, and the product-formula
identity h = (1/2) sum_v D_v.

Archimedean quantities come from certified complex roots.  Finite places
are exact: the pair term is ord_p(disc / a^(2n-2)) log p and the log+
term is read off the Newton polygon, so every D_p is a rational multiple
of log p.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .bounds import PlaceSpec, general_bound
from .metric import FieldContext, PointSet, discrepancy_exact
from .padic import _check_prime, _int_ord, is_totally_split, newton_polygon, roots_P1
from .polynomial import IntPolynomial, discriminant, is_totally_real, sturm_real_roots

__all__ = [
    "IntPolynomial", "CertificationError", "FactorizationError", "LocalDiscrepancyReport",
    "complex_roots", "sturm_real_roots", "is_totally_real", "discriminant", "weil_height",
    "local_discrepancy_arch", "local_discrepancy_padic", "local_discrepancies", "bad_primes",
    "verify_product_formula", "padic_root_pointset", "search_L_S", "SearchReport", "SearchHit",
]

MP_DPS = 50


class CertificationError(ArithmeticError):
    """Root approximations could not be certified to the requested accuracy."""


class FactorizationError(ArithmeticError):
    """Trial division could not fully factor a number."""


# --- complex roots --------------------------------------------------------------

def _aberth(coeffs: Sequence[int], maxiter: int = 500) -> np.ndarray:
    """Aberth-Ehrlich simultaneous iteration in double precision."""
    c = np.array(coeffs[::-1], dtype=complex)
    c = c / c[0]
    n = len(c) - 1
    dc = c[:-1] * np.arange(n, 0, -1)
    # Fujiwara-type radius, starting points spread on a slightly rotated circle
    r = 2 * max(abs(c[k]) ** (1.0 / k) for k in range(1, n + 1))
    z = -c[1] / n + r / 2 * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(maxiter):
        w = np.polyval(c, z) / np.polyval(dc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = (1 / diff).sum(axis=1) - 1.0
        step = w / (1 - w * s)
        z = z - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1, np.abs(z))):
            break
    return z


def _roots_mp(f: IntPolynomial, tol: float = 1e-12) -> list:
    """Roots of squarefree ``f`` refined and certified in multiprecision."""
    f.require_squarefree()
    n = f.degree
    if n == 0:
        return []
    with mpmath.workdps(MP_DPS):
        if n == 1:
            return [mpmath.mpf(-f.coeffs[0]) / f.coeffs[1]]
        coeffs = [mpmath.mpf(c) for c in f.coeffs[::-1]]
        dcoeffs = [mpmath.mpf(c) for c in f.derivative().coeffs[::-1]]
        z = [mpmath.mpc(complex(v)) for v in _aberth(f.coeffs)]
        for _ in range(8):
            new = []
            for i in range(n):
                w = mpmath.polyval(coeffs, z[i]) / mpmath.polyval(dcoeffs, z[i])
                s = mpmath.fsum(1 / (z[i] - z[j]) for j in range(n) if j != i)
                new.append(z[i] - w / (1 - w * s))
            moved = max(abs(a - b) for a, b in zip(new, z))
            z = new
            if moved < mpmath.mpf(10) ** (-MP_DPS + 8):
                break
        # inclusion disks D(z_i, n |f(z_i)| / |a prod (z_i - z_j)|): disjoint disks hold one root each
        a = coeffs[0]
        radii = []
        for i in range(n):
            den = abs(a) * mpmath.fprod(abs(z[i] - z[j]) for j in range(n) if j != i)
            radii.append(n * abs(mpmath.polyval(coeffs, z[i])) / den)
        for i in range(n):
            if radii[i] > tol * max(1, abs(z[i])):
                raise CertificationError(f"root {i} of {f} not certified (radius {float(radii[i]):.2e})")
            for j in range(i + 1, n):
                if radii[i] + radii[j] >= abs(z[i] - z[j]):
                    raise CertificationError(f"inclusion disks of {f} overlap")
        # snap numerically real roots of real polynomials onto the axis
        out = []
        for zi, ri in zip(z, radii):
            if abs(zi.imag) <= ri:
                zi = mpmath.mpc(zi.real, 0)
            out.append(zi)
        return out


def complex_roots(f: IntPolynomial) -> list[complex]:
    """All roots of squarefree ``f``, each certified to 1e-12 relative accuracy."""
    return [complex(z) for z in _roots_mp(f)]


# --- heights and discrepancies -----------------------------------------------------

def _log_plus(z) -> "mpmath.mpf":
    a = abs(z)
    return mpmath.log(a) if a > 1 else mpmath.mpf(0)


def weil_height(f: IntPolynomial) -> float:
    """(1/n)(log|a| + sum log+|alpha_i|) for the primitive part of ``f``."""
    g = f.primitive()
    with mpmath.workdps(MP_DPS):
        roots = _roots_mp(g)
        return float((mpmath.log(abs(g.leading)) + mpmath.fsum(_log_plus(z) for z in roots)) / g.degree)


@dataclass(frozen=True)
class LocalDiscrepancyReport:
    """D_v of a root set.  For finite places ``value == float(coefficient) * log(p)``."""

    place: str | int
    value: float
    coefficient: Fraction | None = None

    @property
    def exact(self) -> str:
        if self.coefficient is None:
            return f"{self.value!r}"
        return f"{self.coefficient} * log({self.place})"


def _require_pairs(f: IntPolynomial):
    if f.degree < 2:
        raise ValueError("local discrepancy needs degree >= 2 (no pairs of conjugates)")
    f.require_squarefree()


def local_discrepancy_arch(f: IntPolynomial) -> LocalDiscrepancyReport:
    """(1/(n(n-1))) sum_{i != j} [-log|a_i - a_j| + log+|a_i| + log+|a_j|] over complex roots."""
    _require_pairs(f)
    n = f.degree
    with mpmath.workdps(MP_DPS):
        z = _roots_mp(f)
        lp = [_log_plus(v) for v in z]
        terms = [-mpmath.log(abs(z[i] - z[j])) + lp[i] + lp[j]
                 for i in range(n) for j in range(n) if i != j]
        return LocalDiscrepancyReport("inf", float(mpmath.fsum(terms) / (n * (n - 1))))


def local_discrepancy_arch_from_disc(f: IntPolynomial) -> float:
    """Same quantity with the pair term replaced by -log|disc / a^(2n-2)|."""
    _require_pairs(f)
    n = f.degree
    with mpmath.workdps(MP_DPS):
        lp = mpmath.fsum(_log_plus(v) for v in _roots_mp(f))
        pair = -(mpmath.log(abs(f.discriminant)) - (2 * n - 2) * mpmath.log(abs(f.leading)))
        return float(pair / (n * (n - 1)) + 2 * lp / n)


def local_discrepancy_padic(f: IntPolynomial, p: int) -> LocalDiscrepancyReport:
    """D_p aggregated over all places above p, exactly.

    The pair term is -log prod_{i != j} |a_i - a_j|_p = (ord_p disc - (2n-2) ord_p a) log p,
    and sum_i log+|a_i|_p comes from the positive-slope segments of the Newton polygon.
    """
    _check_prime(p)
    _require_pairs(f)
    n = f.degree
    pair = _int_ord(f.discriminant, p) - (2 * n - 2) * _int_ord(f.leading, p)
    s = newton_polygon(f, p).log_plus_coefficient()
    coeff = (pair + (2 * n - 2) * s) / Fraction(n * (n - 1))
    return LocalDiscrepancyReport(p, float(coeff) * math.log(p), coeff)


def factor_integer(m: int, trial_bound: int = 10 ** 6) -> dict[int, int]:
    """Prime factorization by trial division up to ``trial_bound``."""
    m = abs(m)
    if m == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= m and d <= trial_bound:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        if m > trial_bound ** 2 and d * d <= m:
            raise FactorizationError(f"cofactor {m} not factored with trial bound {trial_bound}")
        out[m] = out.get(m, 0) + 1
    return out


def bad_primes(f: IntPolynomial, trial_bound: int = 10 ** 6) -> list[int]:
    """Primes dividing a * disc(f); D_p vanishes at every other prime."""
    return sorted(factor_integer(f.leading * f.discriminant, trial_bound))


def local_discrepancies(f: IntPolynomial, trial_bound: int = 10 ** 6) -> list[LocalDiscrepancyReport]:
    """D_v at infinity and at every prime where it can be nonzero."""
    return [local_discrepancy_arch(f)] + [local_discrepancy_padic(f, p) for p in bad_primes(f, trial_bound)]


def verify_product_formula(f: IntPolynomial, trial_bound: int = 10 ** 6) -> float:
    """2 h(f) - sum_v D_v(f); zero up to archimedean rounding."""
    _require_pairs(f)
    parts = local_discrepancies(f, trial_bound)
    return 2 * weil_height(f) - math.fsum(r.value for r in parts)


def padic_root_pointset(f: IntPolynomial, p: int, precision: int = 32) -> PointSet:
    """Hensel-lifted roots of a totally split ``f`` as a point set in P^1(Q_p)."""
    pts = roots_P1(f, p, precision)
    if len(pts) != f.degree:
        raise ValueError(f"{f} has only {len(pts)} of {f.degree} roots in Q_{p}")
    return PointSet(FieldContext.padic(p, precision), [c for c, _ in pts], [v for _, v in pts])


# --- search over L_S ----------------------------------------------------------------

@dataclass
class SearchHit:
    coeffs: tuple[int, ...]
    degree: int
    height: float
    local: dict[str, float] = field(default_factory=dict)
    padic_discrepancy: dict[int, Fraction] = field(default_factory=dict)

    @property
    def poly(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)


@dataclass
class SearchReport:
    places: list[PlaceSpec]
    degree_max: int
    coeff_max: int
    bound: float
    hits: list[SearchHit]
    examined: int

    @property
    def min_height(self) -> float | None:
        return min((h.height for h in self.hits), default=None)

    def below_bound(self, slack: float = 1e-9) -> list[SearchHit]:
        return [h for h in self.hits if h.height < self.bound - slack]


def _canonical(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    """Representative of f up to sign and reversal x^n f(1/x)."""
    def signed(c):
        return c if c[-1] > 0 else tuple(-x for x in c)
    cands = [signed(coeffs)]
    if coeffs[0] != 0:
        cands.append(signed(tuple(reversed(coeffs))))
    return min(cands)


def _is_irreducible(f: IntPolynomial) -> bool:
    if f.degree == 1:
        return True
    import sympy
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(f.coeffs)), x, domain="ZZ").is_irreducible


def search_L_S(S: Iterable, degree_max: int, coeff_max: int, *, irreducible: bool = True,
               emit_pointsets: bool = False, precision: int = 32) -> SearchReport:
    """Enumerate primitive squarefree integer polynomials of degree <= ``degree_max`` with
    coefficients in [-coeff_max, coeff_max] whose roots satisfy the splitting conditions of S.

    With ``irreducible=True`` (default) each hit is the minimal polynomial of one
    algebraic number in L_S, listed once per class under sign and reversal.
    """
    places = [PlaceSpec.coerce(s) for s in S]
    if not places:
        raise ValueError("S must be nonempty")
    for pl in places:
        if pl.N != 1 or pl.e != 1 or pl.f != 1 or (pl.p is not None and pl.q != pl.p):
            raise ValueError("search works over Q with trivial local extensions")
    primes = sorted({pl.p for pl in places if pl.p is not None})
    real = any(pl.is_archimedean for pl in places)
    bound = general_bound(places).total
    hits: list[SearchHit] = []
    examined = 0
    rng = range(-coeff_max, coeff_max + 1)
    for d in range(1, degree_max + 1):
        for lead in range(1, coeff_max + 1):
            for rest in itertools.product(rng, repeat=d):
                coeffs = rest + (lead,)
                if d >= 2 and irreducible and coeffs[0] == 0:
                    continue
                if math.gcd(*coeffs) != 1 or _canonical(coeffs) != coeffs:
                    continue
                examined += 1
                f = IntPolynomial(coeffs)
                if not f.is_squarefree:
                    continue
                if not all(is_totally_split(f, p) for p in primes):
                    continue
                if real and sturm_real_roots(f) != d:
                    continue
                if irreducible and not _is_irreducible(f):
                    continue
                hit = SearchHit(coeffs, d, weil_height(f))
                if d >= 2:
                    for r in local_discrepancies(f):
                        hit.local[str(r.place)] = r.value
                    if emit_pointsets:
                        for p in primes:
                            hit.padic_discrepancy[p] = discrepancy_exact(padic_root_pointset(f, p, precision))
                hits.append(hit)
    hits.sort(key=lambda h: (h.height, h.degree, h.coeffs))
    return SearchReport(places, degree_max, coeff_max, bound, hits, examined)
