"""Closed-form lower and upper bounds for heights under splitting conditions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .equilibrium import PI2, zeta3
from .padic import _check_prime, _int_ord, is_prime

ARCH_CONSTANT = 7 * zeta3() / (4 * PI2)  # 7 zeta(3) / (4 pi^2) = 0.213139...


@dataclass(frozen=True)
class PlaceSpec:
    """A place v of K with local degree weight N_v and the local extension L_v/K_v.

    For finite places: ``p`` is the rational prime below v, ``q`` the residue
    field size of K_v (a power of p), and ``e``, ``f`` the ramification and
    inertial degrees of L_v/K_v.  Archimedean places take L_v = R and carry
    none of these.  The bound assumes L_v/K_v is Galois; this is not checked.
    """

    p: int | None = None
    N: Fraction = Fraction(1)
    q: int | None = None
    e: int = 1
    f: int = 1

    def __post_init__(self):
        object.__setattr__(self, "N", Fraction(self.N))
        if not 0 < self.N <= 1:
            raise ValueError("N_v must lie in (0, 1]")
        if self.p is None:
            if self.q is not None or self.e != 1 or self.f != 1:
                raise ValueError("archimedean places carry no (q, e, f)")
            return
        _check_prime(self.p)
        if self.q is None:
            object.__setattr__(self, "q", self.p)
        q = self.q
        if q < self.p or self.p ** _int_ord(q, self.p) != q:
            raise ValueError(f"q = {q} is not a power of p = {self.p}")
        if self.e < 1 or self.f < 1:
            raise ValueError("e and f must be positive")

    @classmethod
    def arch(cls, N=1) -> "PlaceSpec":
        return cls(None, N)

    @classmethod
    def finite(cls, p: int, N=1, q: int | None = None, e: int = 1, f: int = 1) -> "PlaceSpec":
        return cls(p, N, q, e, f)

    @classmethod
    def coerce(cls, x) -> "PlaceSpec":
        """Accept a PlaceSpec, a prime, or 'inf'/'oo'/None for the real place."""
        if isinstance(x, PlaceSpec):
            return x
        if x is None or (isinstance(x, str) and x.strip().lower() in ("inf", "oo", "infinity", "∞")):
            return cls.arch()
        return cls.finite(int(x))

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    @property
    def label(self) -> str:
        return "inf" if self.p is None else str(self.p)

    def contribution(self) -> float:
        if self.is_archimedean:
            return float(self.N) * ARCH_CONSTANT
        return float(self.exact_coefficient()) * math.log(self.p)

    def exact_coefficient(self) -> Fraction:
        """Finite places: the rational r with contribution r * log p.
        Archimedean places: the rational r with contribution r * 7 zeta(3)/(4 pi^2)."""
        if self.is_archimedean:
            return self.N
        Q = self.q ** self.f  # exact big integer before any division
        return self.N * Fraction(Q, 2 * self.e * (Q * Q - 1))

    def symbolic(self) -> str:
        r = self.exact_coefficient()
        if self.is_archimedean:
            return f"{r} * 7*zeta(3)/(4*pi^2)"
        return f"{r} * log({self.p})"


@dataclass
class BoundReport:
    contributions: list[tuple[PlaceSpec, float]]
    total: float
    symbolic: list[str] = field(default_factory=list)
    comparisons: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "places": [
                {"place": pl.label, "N": str(pl.N), "q": pl.q, "e": pl.e if pl.p else None,
                 "f": pl.f if pl.p else None, "value": round(v, 12), "exact": s}
                for (pl, v), s in zip(self.contributions, self.symbolic)
            ],
            "total": round(self.total, 12),
            "comparisons": {k: round(v, 12) for k, v in self.comparisons.items()},
        }


def general_bound(places: Sequence) -> BoundReport:
    """Lower bound for liminf h on L_S: sum of per-place contributions.

    Finite v: (N_v/2) q_v^f_v log p_v / (e_v (q_v^(2 f_v) - 1)).
    Archimedean v: N_v 7 zeta(3) / (4 pi^2).
    """
    specs = [PlaceSpec.coerce(x) for x in places]
    if not specs:
        raise ValueError("the place set S must be nonempty")
    contribs = [(s, s.contribution()) for s in specs]
    total = math.fsum(v for _, v in contribs)
    report = BoundReport(contribs, total, [s.symbolic() for s in specs])
    finite = [s.p for s in specs if not s.is_archimedean]
    trivial_over_Q = all(s.N == 1 and s.e == 1 and s.f == 1 and (s.p is None or s.q == s.p) for s in specs)
    if finite and trivial_over_Q:
        report.comparisons["bombieri_zannier"] = bombieri_zannier_bound(finite)
        report.comparisons["integer_bound"] = integer_bound(finite)
        if len(finite) == len(specs):
            report.comparisons["upper_bound"] = totp_upper_bound(finite)
    if any(s.is_archimedean for s in specs) and trivial_over_Q:
        report.comparisons["schinzel"] = schinzel_bound()
    return report


def _primes(S: Iterable) -> list[int]:
    out = []
    for p in S:
        if isinstance(p, PlaceSpec):
            p = p.p
        if p is None or isinstance(p, str):
            raise ValueError("only finite primes are allowed here")
        if not is_prime(int(p)):
            raise ValueError(f"{p} is not prime")
        out.append(int(p))
    if not out:
        raise ValueError("S must be nonempty")
    return out


def bombieri_zannier_bound(S: Iterable) -> float:
    """(1/2) sum log p / (p + 1)."""
    return 0.5 * math.fsum(math.log(p) / (p + 1) for p in _primes(S))


def schinzel_bound() -> float:
    """(1/2) log((1 + sqrt 5)/2), the totally real bound away from 0 and +-1."""
    return 0.5 * math.log((1 + math.sqrt(5)) / 2)


def totp_upper_bound(S: Iterable) -> float:
    """sum log p / (p - 1), an upper bound for the liminf when infinity is not in S."""
    return math.fsum(math.log(p) / (p - 1) for p in _primes(S))


def integer_bound(S: Iterable) -> float:
    """(1/2) sum log p / (p - 1), the bound for totally p-adic algebraic integers."""
    return 0.5 * totp_upper_bound(S)
