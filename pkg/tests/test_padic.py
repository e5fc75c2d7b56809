import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from localenergy.padic import (
    INF, PadicNumber, PrecisionError, count_roots_P1, count_roots_Zp, is_totally_split,
    newton_polygon, ord_p, padic_abs, roots_P1, roots_Zp,
)
from localenergy.polynomial import IntPolynomial, NotSquarefreeError

P = IntPolynomial
primes = st.sampled_from([2, 3, 5, 7])


def test_ord_examples():
    assert ord_p(12, 2) == 2
    assert ord_p(0, 5) == INF
    assert ord_p(Fraction(5, 8), 2) == -3
    with pytest.raises(ValueError):
        ord_p(3, 4)
    with pytest.raises(TypeError):
        ord_p(0.5, 2)


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(-10**6, 10**6).filter(bool), primes)
def test_ord_multiplicative_and_ultrametric(a, b, p):
    assert ord_p(a * b, p) == ord_p(a, p) + ord_p(b, p)
    if a + b:
        assert ord_p(a + b, p) >= min(ord_p(a, p), ord_p(b, p))
        if ord_p(a, p) != ord_p(b, p):
            assert ord_p(a + b, p) == min(ord_p(a, p), ord_p(b, p))


def test_padic_abs_examples():
    assert padic_abs(PadicNumber.from_rational(2, 2)) == Fraction(1, 2)
    assert padic_abs(PadicNumber.from_rational(Fraction(1, 3), 3)) == 3
    assert padic_abs(PadicNumber.from_rational(7, 5)) == 1
    assert padic_abs(PadicNumber.zero(5)) == 0


rationals = st.fractions(max_denominator=500).filter(lambda x: abs(x.numerator) < 10**6)


@given(rationals, rationals, primes)
def test_padic_field_operations_match_rationals(x, y, p):
    N = 20
    X, Y = PadicNumber.from_rational(x, p, N), PadicNumber.from_rational(y, p, N)
    assert (X * Y) == PadicNumber.from_rational(x * y, p, N) or x * y == 0
    if x + y != 0 and ord_p(x + y, p) < min(ord_p(x, p), ord_p(y, p)) + N - 1:
        s = X + Y
        assert s.valuation == ord_p(x + y, p)
        want = PadicNumber.from_rational(x + y, p, N)
        k = s.precision
        assert s.unit % p ** k == want.unit % p ** k
    if y:
        q = X / Y
        if x:
            assert q.valuation == ord_p(x / y, p)


def test_padic_cancellation_raises():
    x = PadicNumber.from_rational(1, 5, 4)
    y = PadicNumber.from_rational(1 + 5 ** 6, 5, 4)
    with pytest.raises(PrecisionError):
        x - y


def test_padic_string_round_trip():
    x = PadicNumber.from_rational(Fraction(75, 7), 5, 10)
    assert PadicNumber.parse(str(x), 5, 10) == x
    assert str(PadicNumber.zero(3)) == "0"


def test_newton_polygon_examples():
    np_ = newton_polygon(P([-2, 0, 1]), 2)
    assert np_.segments == ((Fraction(-1, 2), 2),)
    assert np_.root_valuations() == [Fraction(1, 2)] * 2
    assert newton_polygon(P([-1, -1, 1]), 5).segments == ((Fraction(0), 2),)
    np3 = newton_polygon(P([-1, 2]), 2)
    assert np3.segments == ((Fraction(1), 1),)
    assert np3.root_valuations() == [-1]


small_polys = st.lists(st.integers(-20, 20), min_size=2, max_size=5).filter(lambda c: c[-1] != 0)


@given(small_polys, small_polys, primes)
def test_newton_polygon_of_product_merges(a, b, p):
    f, g = P(a), P(b)
    assume(a[0] != 0 and b[0] != 0)
    merged = sorted(newton_polygon(f, p).root_valuations() + newton_polygon(g, p).root_valuations())
    assert sorted(newton_polygon(f * g, p).root_valuations()) == merged


def test_root_count_examples():
    assert count_roots_Zp(P([0, -1, 1]), 7) == 2
    assert count_roots_Zp(P([1, 0, 1]), 5) == 2
    assert count_roots_Zp(P([-1, -1, 1]), 5) == 0
    assert is_totally_split(P([-1, -1, 1]), 11)
    assert not is_totally_split(P([-1, -1, 1]), 5)
    assert not is_totally_split(P([1, 0, 1]), 3)
    with pytest.raises(NotSquarefreeError):
        count_roots_Zp(P([1, 2, 1]), 3)


def _vp(n, p):
    return math.inf if n == 0 else ord_p(n, p)


def brute_count_Zp(f: IntPolynomial, p: int) -> int:
    """Root classes found by scanning all residues mod p^K with the strong Hensel test.

    A residue r with v(f(r)) > 2 v(f'(r)) = 2k sits within p^-(k+1) of exactly one root,
    and every root of a polynomial with unit leading coefficient shows up this way once
    K > 2 max v(f'(alpha)).
    """
    K = 2 * ord_p(f.discriminant, p) + 2
    df = f.derivative()
    classes = set()
    for r in range(p ** K):
        k = _vp(df(r), p)
        if _vp(f(r), p) > 2 * k:
            classes.add(r % p ** (k + 1))
    return len(classes)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-12, 12), min_size=2, max_size=4), st.sampled_from([2, 3, 5, 7]))
def test_root_count_matches_residue_scan(low, p):
    f = P(low + [1])
    assume(f.is_squarefree)
    K = 2 * ord_p(f.discriminant, p) + 2
    assume(p ** K <= 60_000)
    assert count_roots_Zp(f, p) == brute_count_Zp(f, p)


def _is_square_Qp(d: int, p: int) -> bool:
    k = ord_p(d, p)
    if k % 2:
        return False
    u = d // p ** k
    if p == 2:
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1


@given(st.integers(-5000, 5000).filter(lambda d: d != 0), primes)
def test_quadratic_splitting_matches_square_classes(d, p):
    f = P([-d, 0, 1])
    assume(f.is_squarefree)
    assert is_totally_split(f, p) == _is_square_Qp(d, p)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=5), st.sampled_from([3, 5, 7, 11]))
def test_distinct_simple_roots_mod_p_imply_split(low, p):
    f = P(low + [1])
    n = f.degree
    roots = [r for r in range(p) if f.eval_mod(r, p) == 0]
    if len(roots) == n:
        assert is_totally_split(f, p)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=5).filter(lambda c: c[-1] != 0), primes)
def test_lifted_roots_are_roots(c, p):
    f = P(c)
    assume(f.is_squarefree)
    N = 24
    M = p ** N
    rs = roots_Zp(f, p, N)
    assert len(rs) == count_roots_Zp(f, p)
    for r in rs:
        assert f(r) % M == 0
    pts = roots_P1(f, p, N)
    assert len(pts) == count_roots_P1(f, p)
    rev = f.reversed()
    for chart, w in pts:
        if chart == 1:
            assert w % p == 0
            assert rev(w) % p ** (N - 2) == 0


def test_roots_P1_example():
    assert roots_P1(P([-4, 0, 1]), 2, 10) == [(0, 2), (0, 1022)]
    # 1/2 is a root of 2x - 1: chart 1 holds w = 1/x = 2
    assert roots_P1(P([-1, 2]), 2, 10) == [(1, 2)]
