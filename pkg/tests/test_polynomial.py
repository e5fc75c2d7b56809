import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st
from sympy.polys.subresultants_qq_zz import sylvester

from localenergy.polynomial import IntPolynomial, is_totally_real, resultant, sturm_real_roots

P = IntPolynomial
x = sympy.Symbol("x")
polys = st.lists(st.integers(-9, 9), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


def test_parse_and_print():
    f = P.parse("-1,-1,1")
    assert f.coeffs == (-1, -1, 1)
    assert str(f) == "x^2 - x - 1"
    assert P.parse("3, 0, 0") == P([3])
    with pytest.raises(ValueError):
        P.parse("")


def test_discriminant_examples():
    assert P([-1, -1, 1]).discriminant == 5
    assert P([1, 0, 1]).discriminant == -4
    assert P([-2, 0, 0, 1]).discriminant == -108


def _expr(c):
    return sympy.Poly(list(reversed(c)), x).as_expr()


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_resultant_matches_sylvester_determinant(a, b):
    want = sympy.Matrix(sylvester(_expr(a), _expr(b), x)).det(method="bareiss")
    assert resultant(P(a), P(b)) == want


@settings(max_examples=150, deadline=None)
@given(polys)
def test_discriminant_matches_sympy(c):
    f = P(c)
    assume(f.degree >= 2)
    assert f.discriminant == int(sympy.discriminant(_expr(c), x))
    assert f.is_squarefree == (sympy.gcd(_expr(c), sympy.diff(_expr(c), x)).as_poly(x).degree() == 0)


def test_sturm_examples():
    assert sturm_real_roots(P([-1, -1, 1])) == 2
    assert sturm_real_roots(P([1, 0, 1])) == 0
    assert sturm_real_roots(P([1, -3, 0, 1])) == 3
    assert is_totally_real(P([1, -3, 0, 1]))


@settings(max_examples=150, deadline=None)
@given(polys)
def test_sturm_matches_sympy_real_roots(c):
    f = P(c)
    assume(f.is_squarefree)
    assert sturm_real_roots(f) == len(sympy.Poly(list(reversed(c)), x).real_roots())


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=5, unique=True))
def test_from_roots_is_totally_real(roots):
    f = P.from_roots(roots)
    assert f.degree == len(roots)
    assert sturm_real_roots(f) == len(roots)
    for r in roots:
        assert f(r) == 0


def test_reversal_and_shift():
    f = P([1, 2, 3])
    assert f.reversed() == P([3, 2, 1])
    g = f.compose_linear(1, 2)  # f(1 + 2X)
    for t in range(-3, 4):
        assert g(t) == f(1 + 2 * t)
    assert P([4, 6, 8]).primitive() == P([2, 3, 4])
    assert P([-4, -6]).content() == 2
    assert np.isclose(float(f(0.5)), 1 + 1 + 0.75)
