"""Exact integer polynomials.

Coefficients are Python ints stored constant term first, so
``IntPolynomial([-1, -1, 1])`` is x^2 - x - 1.  Everything here is exact:
gcds and Sturm chains run over ``Fraction``, resultants use the
fraction-free subresultant algorithm.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence


class NotSquarefreeError(ValueError):
    """Raised when a polynomial with a repeated root is used where distinct roots are required."""


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class IntPolynomial:
    """Polynomial with exact integer coefficients, constant term first."""

    def __init__(self, coeffs: Iterable[int]):
        cs = []
        for c in coeffs:
            if isinstance(c, bool) or int(c) != c:
                raise TypeError(f"coefficients must be integers, got {c!r}")
            cs.append(int(c))
        cs = _trim(cs)
        if not cs:
            raise ValueError("the zero polynomial is not allowed")
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """Parse a comma-separated coefficient list, constant term first."""
        parts = [s.strip() for s in text.replace("[", "").replace("]", "").split(",")]
        return cls(int(s) for s in parts if s)

    @classmethod
    def from_roots(cls, roots: Sequence, lead: int = 1) -> "IntPolynomial":
        """lead * prod (d x - n) over rational roots n/d."""
        out = [lead]
        for r in roots:
            r = Fraction(r)
            n, d = r.numerator, r.denominator
            new = [0] * (len(out) + 1)
            for i, c in enumerate(out):
                new[i] -= n * c
                new[i + 1] += d * c
            out = new
        return cls(out)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("-" if c < 0 else "+") + " " + s)
        text = " ".join(terms)
        return text[2:] if text.startswith("+") else "-" + text[2:]

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, m: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % m
        return acc

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            raise ValueError("derivative of a constant is the zero polynomial")
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> int:
        return math.gcd(*self.coeffs)

    def primitive(self) -> "IntPolynomial":
        """Divide by the content; the sign of the leading coefficient is kept."""
        g = self.content()
        return IntPolynomial(c // g for c in self.coeffs)

    def reversed(self) -> "IntPolynomial":
        """x^n f(1/x).  Roots are inverted; a root at 0 goes to infinity and is dropped."""
        return IntPolynomial(reversed(self.coeffs))

    def compose_linear(self, a: int, b: int) -> "IntPolynomial":
        """Coefficients of f(a + b X)."""
        out = [0]
        for c in reversed(self.coeffs):
            # out <- out * (a + bX) + c
            new = [0] * (len(out) + 1)
            for i, v in enumerate(out):
                new[i] += v * a
                new[i + 1] += v * b
            new[0] += c
            out = new
        return IntPolynomial(_trim(out) or [0])

    @cached_property
    def discriminant(self) -> int:
        return discriminant(self)

    @cached_property
    def is_squarefree(self) -> bool:
        # gcd(f, f') is constant exactly when disc(f) != 0
        return self.degree <= 1 or self.discriminant != 0

    def require_squarefree(self) -> "IntPolynomial":
        if not self.is_squarefree:
            raise NotSquarefreeError(f"{self} has a repeated root")
        return self


# --- dense polynomials over Q (lists of Fraction, constant first) ---------

def _to_q(coeffs) -> list[Fraction]:
    return [Fraction(c) for c in coeffs]


def qpoly_degree(a: list) -> int:
    return len(a) - 1


def qpoly_divmod(a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lb = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / lb
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] -= c * bc
        a.pop()
        _trim(a)
    return _trim(q), a


def qpoly_gcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, qpoly_divmod(a, b)[1]
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


# --- resultant and discriminant -------------------------------------------

def _pseudo_remainder(a: list[int], b: list[int]) -> list[int]:
    """Remainder of lc(b)^(deg a - deg b + 1) * a divided by b, over Z."""
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    steps = len(a) - len(b) + 1
    for _ in range(steps):
        if len(r) - 1 < db:
            r = [c * lb for c in r]
            continue
        k = len(r) - 1 - db
        lr = r[-1]
        r = [c * lb for c in r]
        for i, bc in enumerate(b):
            r[i + k] -= lr * bc
        r.pop()
        _trim(r)
    return r


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) via the subresultant PRS (Cohen, Algorithm 3.3.7)."""
    a, b = list(f.coeffs), list(g.coeffs)
    ca, cb = math.gcd(*a), math.gcd(*b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    da, db = len(a) - 1, len(b) - 1
    t = ca ** db * cb ** da
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 == 1 and db % 2 == 1:
            s = -1
    if db == 0:
        return s * t * b[0] ** da
    g_, h = 1, 1
    while True:
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        r = _pseudo_remainder(a, b)
        if not r:
            return 0
        divisor = g_ * h ** delta
        a = b
        b = [_exact_div(c, divisor) for c in r]
        g_ = a[-1]
        # h <- g^delta / h^(delta - 1), an exact integer division
        h = _exact_div(g_ ** delta * h, h ** delta) if delta else h
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            h = _exact_div(b[-1] ** da * h, h ** da) if da else h
            return s * t * h


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("subresultant division was not exact")
    return q


def discriminant(f: IntPolynomial) -> int:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    n = f.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    res = resultant(f, f.derivative())
    q, r = divmod(res, f.leading)
    if r:
        raise ArithmeticError("resultant not divisible by the leading coefficient")
    return -q if (n * (n - 1) // 2) % 2 else q


# --- Sturm chains -----------------------------------------------------------

def sturm_chain(f: IntPolynomial) -> list[list[Fraction]]:
    chain = [_to_q(f.coeffs)]
    if f.degree == 0:
        return chain
    chain.append(_to_q(f.derivative().coeffs))
    while True:
        _, r = qpoly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(signs: list[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def sturm_real_roots(f: IntPolynomial) -> int:
    """Number of distinct real roots of ``f``."""
    f.require_squarefree()
    chain = sturm_chain(f)
    at_pos = [1 if p[-1] > 0 else -1 for p in chain]
    at_neg = [(1 if p[-1] > 0 else -1) * (-1) ** (len(p) - 1) for p in chain]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def is_totally_real(f: IntPolynomial) -> bool:
    return sturm_real_roots(f) == f.degree
