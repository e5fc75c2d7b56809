import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from localenergy.equilibrium import PadicEquilibrium, RealEquilibrium
from localenergy.metric import (
    ARCHIMEDEAN, FieldContext, MobiusMap, PointSet, ProjectivePoint, RepeatedPointError,
    apply_mobius, brute_force_discrepancy, delta, delta_valuation, discrepancy, discrepancy_exact,
    discrete_potential, neg_log_delta,
)
from localenergy.padic import PrecisionError

A = ProjectivePoint.arch
ZERO, INF_PT = A(0, 1), A(1, 0)


def padic_pt(x, p, N=32):
    return ProjectivePoint.from_value(x, FieldContext.padic(p, N))


def test_delta_examples():
    assert delta(ZERO, INF_PT) == 1
    assert delta(A(1, 1), A(-1, 1)) == 2
    assert delta(padic_pt(2, 2), padic_pt(4, 2)) == 0.5
    assert delta(A(0.3, 1), A(0.3, 1)) == 0
    assert delta(padic_pt(5, 3), padic_pt(5, 3)) == 0


def test_neg_log_delta_examples():
    assert neg_log_delta(A(1, 1), A(-1, 1)) == -math.log(2)
    # |3 - 12|_3 = 1/9
    assert neg_log_delta(padic_pt(3, 3), padic_pt(12, 3)) == 2 * math.log(3)
    assert neg_log_delta(ZERO, INF_PT) == 0
    assert neg_log_delta(ZERO, ZERO) == math.inf


def test_context_mismatch_rejected():
    with pytest.raises(ValueError):
        delta(ZERO, padic_pt(0, 2))


def test_padic_precision_exhaustion():
    ctx = FieldContext.padic(2, 8)
    x = ProjectivePoint(ctx, 0, 3)
    # rationals agreeing to all N digits reduce to the same point of the precision-N model
    same = ProjectivePoint.padic(Fraction(3 + 2 ** 10), Fraction(1), ctx)
    assert same == x and delta_valuation(x, same) == math.inf
    # distinct representatives of one residue cannot be separated
    with pytest.raises(PrecisionError):
        delta_valuation(x, ProjectivePoint(ctx, 0, 3 + 2 ** 8))


def test_mobius_examples():
    I = MobiusMap(1, 0, 0, 1)
    x = A(0.25 + 0.5j, 1)
    assert apply_mobius(I, x).coords == x.coords
    ctx = FieldContext.padic(5, 16)
    y = apply_mobius(MobiusMap(1, 1, 0, 1), ProjectivePoint.from_value(0, ctx))
    assert (y.chart, y.value) == (0, 1)
    z = apply_mobius(MobiusMap(0, 1, 1, 0), ProjectivePoint.from_value(5, ctx))
    assert (z.chart, z.value) == (1, 5)
    with pytest.raises(PrecisionError):
        # x -> 5x sends infinity to (5:0), which needs a division by p
        apply_mobius(MobiusMap(5, 0, 0, 1), ProjectivePoint.infinity(ctx))


def _rand_arch(rnd):
    return A(complex(rnd.gauss(0, 2), rnd.gauss(0, 2)), complex(rnd.gauss(0, 2), rnd.gauss(0, 2)))


def test_archimedean_metric_properties():
    rnd = random.Random(3)
    for _ in range(1000):
        x, y = _rand_arch(rnd), _rand_arch(rnd)
        d = delta(x, y)
        assert d == pytest.approx(delta(y, x), rel=1e-14)
        assert 0 < d <= 2 + 1e-15
        c = complex(rnd.gauss(0, 3), rnd.gauss(0, 3))
        x0, x1 = x.coords
        assert delta(A(c * x0, c * x1), y) == pytest.approx(d, rel=1e-12)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_padic_metric_properties(p):
    s = PadicEquilibrium(p, 32)
    pts = list(s.sample(300, s.make_rng(11)))
    for i in range(0, 297, 3):
        x, y, z = pts[i:i + 3]
        assert delta(x, y) == delta(y, x)
        assert delta(x, y) in {p ** -k for k in range(33)}
        assert delta(x, z) <= max(delta(x, y), delta(y, z))


def test_discrepancy_examples():
    assert discrepancy(PointSet.from_points([ZERO, INF_PT])) == 0
    assert discrepancy(PointSet.from_points([A(1, 1), A(-1, 1)])) == pytest.approx(-math.log(2))
    for p in (2, 3, 7):
        Z = PointSet.from_points([padic_pt(0, p), padic_pt(1, p), padic_pt(None, p)])
        assert discrepancy_exact(Z) == 0


def test_repeated_points_rejected():
    with pytest.raises(RepeatedPointError):
        PointSet.from_points([A(0.5, 1), A(1, 2)])
    with pytest.raises(RepeatedPointError):
        PointSet.from_points([padic_pt(3, 2), padic_pt(3, 2)])


def test_discrepancy_matches_brute_force():
    rnd = random.Random(5)
    pts = [_rand_arch(rnd) for _ in range(40)]
    assert discrepancy(PointSet.from_points(pts)) == pytest.approx(brute_force_discrepancy(pts), abs=1e-12)
    s = PadicEquilibrium(3, 24)
    Z = s.sample(60, s.make_rng(1))
    assert discrepancy(Z) == pytest.approx(brute_force_discrepancy(list(Z)), abs=1e-12)


def test_discrepancy_lower_bounds():
    eq = RealEquilibrium()
    for seed in range(5):
        assert discrepancy(eq.sample(200, eq.make_rng(seed))) >= -math.log(2)
    rnd = random.Random(0)
    pts = [A(complex(rnd.random(), rnd.random()), 1) for _ in range(100)]
    assert discrepancy(PointSet.from_points(pts)) >= -math.log(2)


def test_discrete_potential_examples():
    assert discrete_potential(PointSet.from_points([INF_PT]), ZERO) == 0
    Z = PointSet.from_points([A(1, 1), A(-1, 1)])
    assert discrete_potential(Z, ZERO) == pytest.approx(0, abs=1e-15)
    assert discrete_potential(Z, A(1, 1)) == math.inf
    for p in (2, 5):
        assert discrete_potential(PointSet.from_points([padic_pt(0, p)]), padic_pt(p, p)) == math.log(p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_padic_discrepancy_invariant_under_integral_maps(p):
    rnd = random.Random(p)
    s = PadicEquilibrium(p, 40)
    Z = s.sample(80, s.make_rng(2))
    base = discrepancy_exact(Z)
    for _ in range(20):
        while True:
            m = MobiusMap(*(rnd.randint(-30, 30) for _ in range(4)))
            if m.is_integral_unimodular(p):
                break
        assert discrepancy_exact(Z.map(m)) == base


def test_json_round_trip():
    s = PadicEquilibrium(7, 12)
    Z = s.sample(20, s.make_rng(0))
    W = PointSet.from_json(Z.to_json())
    assert list(W.charts) == list(Z.charts) and W.values == Z.values
    eq = RealEquilibrium()
    R = eq.sample(10, eq.make_rng(0))
    R2 = PointSet.from_json(R.to_json())
    assert discrepancy(R2) == pytest.approx(discrepancy(R), rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=12, unique=True), st.sampled_from([2, 3, 5]))
def test_integer_pointsets_exact_discrepancy(vals, p):
    ctx = FieldContext.padic(p, 40)
    Z = PointSet.from_points([ProjectivePoint.from_value(Fraction(v), ctx) for v in vals])
    n = len(vals)
    want = Fraction(sum(_ord(a - b, p) for a in vals for b in vals if a != b), n * (n - 1))
    assert discrepancy_exact(Z) == want


def _ord(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def test_arch_values_stored_as_complex():
    Z = PointSet.from_points([A(0.5, 1), A(1, 0.5)])
    assert Z.values.dtype == np.complex128
    assert Z.context == ARCHIMEDEAN
