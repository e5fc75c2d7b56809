import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy.special import spence

from localenergy import equilibrium as eq
from localenergy.metric import MobiusMap, discrete_potential, FieldContext, ProjectivePoint


def dilog_cdf(x):
    """Mass of (0, x) for 0 < x <= 1: (1/pi^2)(Li2(x) - Li2(-x))."""
    li2 = lambda t: spence(1 - t)
    return (li2(x) - li2(-x)) / math.pi ** 2


def test_density_examples():
    assert eq.density_real(0.0) == pytest.approx(2 / math.pi ** 2, rel=1e-14)
    assert eq.density_real(3.0) == pytest.approx(math.log(2) / (3 * math.pi ** 2), rel=1e-14)
    assert eq.density_real(3.0) == pytest.approx(0.023410, abs=5e-7)
    xs = np.linspace(-5, 5, 41) + 0.013
    assert np.allclose(eq.density_real(xs), eq.density_real(-xs), rtol=0, atol=0)
    with pytest.raises(ValueError):
        eq.density_real(1.0)


def test_masses():
    assert eq.real_mass(-math.inf, math.inf) == pytest.approx(1, abs=1e-10)
    assert eq.real_mass(0, 1) == pytest.approx(0.25, abs=1e-10)
    assert eq.real_mass(-1, 1) == pytest.approx(0.5, abs=1e-10)
    for a, b in [(0.1, 0.7), (0.3, 0.999), (0.0, 0.5)]:
        assert eq.real_mass(a, b) == pytest.approx(dilog_cdf(b) - dilog_cdf(a) if a else dilog_cdf(b), abs=1e-10)
    # inversion symmetry: (2, 10) has the mass of (1/10, 1/2)
    assert eq.real_mass(2, 10) == pytest.approx(eq.real_mass(0.1, 0.5), abs=1e-10)


def test_cdf_and_quantile_against_dilog():
    r = eq.RealEquilibrium()
    xs = np.linspace(0.001, 0.9999, 200)
    assert np.max(np.abs(r.cdf(xs) - dilog_cdf(xs))) < 1e-12
    u = np.linspace(1e-6, 0.25 - 1e-9, 500)
    assert np.max(np.abs(dilog_cdf(r.quantile(u)) - u)) < 1e-9


def test_constants():
    with mpmath.workdps(30):
        z3 = float(mpmath.zeta(3))
    assert eq.zeta3() == pytest.approx(z3, rel=1e-15)
    assert eq.minimal_energy_real() == pytest.approx(0.426278, abs=5e-7)
    assert abs(eq.minimal_energy_real() - eq.minimal_energy_real_series()) < 1e-14
    assert eq.minimal_energy_real() / 2 == pytest.approx(0.213139, abs=5e-7)
    assert eq.minimal_energy_padic(2) == pytest.approx(0.462098, abs=5e-7)
    # 3 log 3 / 8 and 5 log 5 / 24
    assert eq.minimal_energy_padic(3) == pytest.approx(0.411980, abs=5e-7)
    assert eq.minimal_energy_padic(5) == pytest.approx(0.335300, abs=5e-7)
    for q in (2, 3, 4, 5, 7, 8, 9, 25):
        assert abs(eq.minimal_energy_padic(q) - eq.minimal_energy_padic_series(q)) < 1e-14


def test_potential_constant():
    target = eq.minimal_energy_real()
    for x in (0.0, 0.5, 2.0):
        assert eq.potential_real(x) == pytest.approx(target, abs=1e-6)
    grid = np.linspace(-10, 10, 50)
    vals = [eq.potential_real(float(x)) for x in grid]
    assert max(vals) - min(vals) < 1e-5


def test_ball_masses():
    assert eq.ball_mass_padic(2, 1) == Fraction(1, 3)
    assert eq.ball_mass_padic(3, 2) == Fraction(1, 12)
    assert eq.sphere_mass_padic(2, 1) == Fraction(1, 6)


def _sigma(m, n):
    return math.sqrt(m * (1 - m) / n)


def test_real_sampler_statistics():
    r = eq.RealEquilibrium()
    n = 100_000
    x0, x1 = r.sample(n, r.make_rng(42)).homogeneous_arrays()
    # affine coordinate, with points at infinity sent to a large number
    x = np.where(np.abs(x1) > 0, (x0 / np.where(x1 == 0, 1, x1)).real, np.inf)
    inside = (x > 0) & (x < 1)
    assert abs(inside.mean() - 0.25) < 3 * _sigma(0.25, n)
    sign = np.sign(x[np.isfinite(x)])
    assert abs(sign.mean()) < 3 / math.sqrt(n)
    u = np.sort(np.abs(x[(np.abs(x) < 1)]))
    m = len(u)
    ecdf = np.arange(1, m + 1) / m
    ks = np.max(np.abs(ecdf - 4 * dilog_cdf(u)))
    assert ks < 1.63 / math.sqrt(m)


@pytest.mark.parametrize("p", [2, 3])
def test_padic_sampler_ball_frequencies(p):
    s = eq.PadicEquilibrium(p, 64)
    n = 100_000
    Z = s.sample(n, s.make_rng(9))
    for k in (1, 2):
        m = float(eq.ball_mass_padic(p, k))
        assert abs(eq.ball_frequency(Z, k) - m) < 3 * _sigma(m, n)
    inf_freq = eq.residue_class_counts(Z)[p] / n
    assert abs(inf_freq - 1 / (p + 1)) < 3 * _sigma(1 / (p + 1), n)
    # the same frequencies after an integral unimodular map
    W = Z.map(MobiusMap(2, 3, 1, 2))
    for k in (1, 2):
        m = float(eq.ball_mass_padic(p, k))
        assert abs(eq.ball_frequency(W, k) - m) < 3 * _sigma(m, n)


def test_padic_sampler_normalized():
    s = eq.PadicEquilibrium(5, 16)
    Z = s.sample(500, s.make_rng(0))
    for c, v in zip(Z.charts.tolist(), Z.values):
        assert 0 <= v < 5 ** 16
        if c == 1:
            assert v % 5 == 0


@pytest.mark.parametrize("p", [2, 5])
def test_padic_discrete_potential_at_zero(p):
    s = eq.PadicEquilibrium(p, 48)
    Z = s.sample(20_000, s.make_rng(3))
    x = ProjectivePoint.from_value(0, FieldContext.padic(p, 48))
    assert discrete_potential(Z, x) == pytest.approx(eq.minimal_energy_padic(p), abs=0.02)


def test_sampler_determinism():
    s = eq.PadicEquilibrium(3, 20)
    assert s.sample(50, s.make_rng(5)).values == s.sample(50, s.make_rng(5)).values
    r = eq.RealEquilibrium()
    a = r.sample(50, r.make_rng(5)).values
    b = r.sample(50, r.make_rng(5)).values
    assert np.array_equal(a, b)


def test_single_point_samplers():
    rng = eq.make_rng(1)
    assert eq.sample_real(rng).context.is_archimedean
    pt = eq.sample_padic(7, 10, rng)
    assert pt.context.p == 7
