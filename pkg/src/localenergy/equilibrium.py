"""Minimal-energy measures on P^1(R) and P^1(Q_p).

The real measure has density (1/(pi^2 x)) log|(x+1)/(x-1)|.  Integrals on
[0, 1] are done in the variable t = -log(1 - x), which turns the
logarithmic singularity at x = 1 into a smoothly decaying tail; other
intervals are carried to [0, 1] by x -> -x and x -> 1/x.

The p-adic measure is the pushforward of Haar measure on unimodular pairs
in Z_p^2, sampled digit by digit.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .metric import ARCHIMEDEAN, FieldContext, PointSet, ProjectivePoint
from .padic import _check_prime

PI2 = math.pi ** 2


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


def make_rng(seed=None, *stream: int) -> np.random.Generator:
    """Counter-based generator; ``stream`` indexes independent substreams of one seed."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(stream))
    return np.random.Generator(np.random.Philox(ss))


# --- zeta(3) and closed forms --------------------------------------------------

def zeta3(terms: int = 1000) -> float:
    """zeta(3) by direct summation plus an Euler-Maclaurin tail (error far below 1e-16)."""
    M = terms
    head = math.fsum(n ** -3.0 for n in range(1, M))
    # sum_{n >= M} n^-3 = int_M^inf x^-3 dx + M^-3/2 + Bernoulli corrections
    tail = math.fsum([1 / (2 * M ** 2), 1 / (2 * M ** 3), 1 / (4 * M ** 4),
                      -1 / (12 * M ** 6), 1 / (12 * M ** 8)])
    return head + tail


def odd_cube_sum(terms: int = 1000) -> float:
    """sum_{n >= 0} (2n+1)^-3, summed directly with an Euler-Maclaurin tail."""
    K = terms
    head = math.fsum((2 * n + 1) ** -3.0 for n in range(K))
    u = 2 * K + 1
    tail = math.fsum([1 / (4 * u ** 2), 1 / (2 * u ** 3), 1 / (2 * u ** 4),
                      -2 / (3 * u ** 6), 8 / (3 * u ** 8)])
    return head + tail


def minimal_energy_real() -> float:
    """7 zeta(3) / (2 pi^2) = 0.426278..."""
    return 7 * zeta3() / (2 * PI2)


def minimal_energy_real_series() -> float:
    """The same constant as (4/pi^2) sum (2n+1)^-3, the value of the potential at 0."""
    return 4 * odd_cube_sum() / PI2


def minimal_energy_padic(q: int) -> float:
    """q log q / (q^2 - 1)."""
    if q < 2:
        raise ValueError("q must be >= 2")
    return q * math.log(q) / (q * q - 1)


def minimal_energy_padic_series(q: int) -> float:
    """((q-1) log q / (q+1)) * sum n/q^n, the sphere-by-sphere potential at 0."""
    terms = []
    n = 1
    while True:
        t = n / q ** n
        terms.append(t)
        if t < 1e-20:
            break
        n += 1
    return (q - 1) * math.log(q) / (q + 1) * math.fsum(terms)


# --- real density and masses ----------------------------------------------------

def density_real(x):
    """(1/(pi^2 x)) log|(x+1)/(x-1)|, equal to 2/pi^2 at 0.  Vectorized."""
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    if np.any(a == 1.0):
        raise ValueError("density is singular at x = +-1")
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(a < 1, a, 1 / np.where(a == 0, 1, a))
        small = r < 1e-6
        # 2 atanh(r)/r, with its series near 0
        ratio = np.where(small, 2 * (1 + r * r / 3), 2 * np.arctanh(r) / np.where(small, 1, r))
        out = np.where(a < 1, ratio, ratio * r * r) / PI2
    return out if out.ndim else float(out)


def _density_t(t):
    """density(x) dx/dt at x = 1 - e^-t, written without cancellation near x = 1."""
    t = np.asarray(t, dtype=float)
    e = np.exp(-t)
    x = -np.expm1(-t)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (np.log(2 - e) + t) * e / (PI2 * x)
    return np.where(t < 1e-6, (2 / PI2) * (1 - t / 2) * np.ones_like(t), val)


def _t_of(x: float) -> float:
    return math.inf if x >= 1 else -math.log1p(-x)


def _quad(f, a, b, tol, points=None):
    val, err, *rest = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=500,
                                     points=points, full_output=1)
    if len(rest) >= 2 and rest[1] and err > 100 * tol * max(1.0, abs(val)):
        raise QuadratureError(f"quad failed on [{a}, {b}]: {rest[1]} (err {err:.2e})")
    return val


def _mass_unit(c: float, d: float, tol: float) -> float:
    """Measure of [c, d] with 0 <= c <= d <= 1."""
    if d <= c:
        return 0.0
    return _quad(lambda t: float(_density_t(t)), _t_of(c), _t_of(d), tol)


def _mass_from_zero(x: float, tol: float) -> float:
    """Measure of [0, x] for x >= 0 (x may be inf)."""
    if x <= 1:
        return _mass_unit(0.0, x, tol)
    # [1, x] is carried onto [1/x, 1] by y -> 1/y, which preserves the density form
    return _mass_unit(0.0, 1.0, tol) + _mass_unit(0.0 if math.isinf(x) else 1 / x, 1.0, tol)


def real_mass(a: float, b: float, tol: float = 1e-10) -> float:
    """mu_R([a, b]); endpoints may be infinite."""
    if b < a:
        raise ValueError("need a <= b")

    def signed(x):
        return math.copysign(_mass_from_zero(abs(x), tol), x)

    return signed(b) - signed(a)


# --- real potential ----------------------------------------------------------------

def _potential_kernel(x: float, s):
    """Sum of -log delta(x, y) over y in {s, -s, 1/s, -1/s}, for s in (0, 1]."""
    s = np.asarray(s, dtype=float)
    if math.isinf(x):
        return -2 * np.log(s)
    M = max(1.0, abs(x))
    with np.errstate(divide="ignore"):
        return 4 * math.log(M) - np.log(np.abs(x * x - s * s)) - np.log(np.abs(x * x * s * s - 1))


def potential_real(x: float, tol: float = 1e-10) -> float:
    """Integral of -log delta(x, y) against mu_R(y), for real x outside {-1, 1} (or inf)."""
    if not math.isinf(x) and abs(x) == 1:
        raise ValueError("potential is evaluated off x = +-1")
    singular = []
    if not math.isinf(x):
        a = abs(x)
        if 0 < a < 1:
            singular.append(a)
        elif a > 1:
            singular.append(1 / a)
    cuts = [0.0] + sorted(singular)
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        total += _quad(lambda s: float(density_real(s) * _potential_kernel(x, s)), lo, hi, tol)

    # last piece [cuts[-1], 1] in the t variable
    def g(t):
        s = -math.expm1(-t)
        return float(_density_t(t) * _potential_kernel(x, s)) if s > 0 else 0.0

    total += _quad(g, _t_of(cuts[-1]), math.inf, tol)
    return total


# --- samplers -------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _gl_integral(a, b):
    """Vectorized 12-point Gauss-Legendre integral of the t-density over [a, b]."""
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    mid, half = (a + b) / 2, (b - a) / 2
    return (half * _density_t(mid + half * _GL_NODES) * _GL_WEIGHTS).sum(axis=-1)


class RealEquilibrium:
    """mu_R with a CDF table on (0, 1) and a symmetry-reduced sampler.

    The table holds F(x) = mu_R([0, x]) on a grid uniform in t = -log(1 - x);
    F rises to 1/4 at x = 1.  Inversion is monotone cubic (PCHIP) on the table
    followed by one Newton step against the density.
    """

    # cells past t ~ 33 carry less mass than one ulp of 1/4; the truncated tail is ~4e-14
    T_MAX = 32.0

    def __init__(self, table_size: int = 4096, tol: float = 1e-10):
        if table_size < 16:
            raise ValueError("table too small")
        self.tol = tol
        self.context = ARCHIMEDEAN
        self.t_grid = np.linspace(0.0, self.T_MAX, table_size)
        cells = _gl_integral(self.t_grid[:-1], self.t_grid[1:])
        self.F_grid = np.concatenate([[0.0], np.cumsum(cells)])
        if np.any(np.diff(self.F_grid) <= 0):
            raise ArithmeticError("CDF table is not strictly increasing")
        self._inverse = PchipInterpolator(self.F_grid, self.t_grid)

    @property
    def x_grid(self) -> np.ndarray:
        return -np.expm1(-self.t_grid)

    def cdf_t(self, t):
        """F at x = 1 - e^-t, from the table plus a Gauss-Legendre partial cell."""
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.T_MAX)
        k = np.clip(np.searchsorted(self.t_grid, t, side="right") - 1, 0, len(self.t_grid) - 2)
        return self.F_grid[k] + _gl_integral(self.t_grid[k], t)

    def cdf(self, x):
        """mu_R([0, x]) for 0 <= x <= 1."""
        x = np.asarray(x, dtype=float)
        if np.any((x < 0) | (x > 1)):
            raise ValueError("cdf table covers [0, 1]")
        with np.errstate(divide="ignore"):
            t = -np.log1p(-x)
        return self.cdf_t(t)

    def quantile(self, u):
        """Inverse of ``cdf`` for 0 <= u < F(1) = 1/4; returns x in [0, 1)."""
        u = np.clip(np.asarray(u, dtype=float), 0.0, self.F_grid[-1])
        t = self._inverse(u)
        dens = _density_t(t)
        t = np.clip(t - (self.cdf_t(t) - u) / dens, 0.0, self.T_MAX)
        return -np.expm1(-t)

    def make_rng(self, seed=None):
        return make_rng(seed)

    def sample_affine(self, count: int, rng: np.random.Generator) -> tuple:
        """(chart, value) arrays: |x| drawn on (0,1), then random sign and inversion."""
        r = self.quantile(rng.random(count) / 4.0)
        sign = np.where(rng.integers(0, 2, count) == 1, -1.0, 1.0)
        invert = rng.integers(0, 2, count).astype(np.int8)
        # inverting x gives (1 : x), i.e. chart 1 with the same value
        return invert, sign * r

    def sample(self, count: int, rng: np.random.Generator) -> PointSet:
        charts, vals = self.sample_affine(count, rng)
        return PointSet(ARCHIMEDEAN, charts, vals.astype(np.complex128))

    def minimal_energy(self) -> float:
        return minimal_energy_real()


def sample_real(rng: np.random.Generator, eq: RealEquilibrium | None = None) -> ProjectivePoint:
    eq = eq or _default_real()
    charts, vals = eq.sample_affine(1, rng)
    return ProjectivePoint(ARCHIMEDEAN, int(charts[0]), complex(vals[0]))


_REAL_CACHE: dict = {}


def _default_real() -> RealEquilibrium:
    if "eq" not in _REAL_CACHE:
        _REAL_CACHE["eq"] = RealEquilibrium()
    return _REAL_CACHE["eq"]


def ball_mass_padic(p: int, n: int) -> Fraction:
    """mu(B(0, p^-n)) = 1/(q^(n-1) (q+1)) with q = p."""
    _check_prime(p)
    if n < 1:
        raise ValueError("n >= 1")
    return Fraction(1, p ** (n - 1) * (p + 1))


def sphere_mass_padic(p: int, n: int) -> Fraction:
    """mu({delta(0, y) = p^-n}) = (q-1)/(q^n (q+1))."""
    return ball_mass_padic(p, n) - ball_mass_padic(p, n + 1)


class PadicEquilibrium:
    """The PGL2(Z_p)-invariant probability measure on P^1(Q_p)."""

    def __init__(self, p: int, precision: int = 32):
        self.p = _check_prime(p)
        self.precision = precision
        self.context = FieldContext.padic(p, precision)
        # digits per 62-bit chunk
        self._chunk = max(1, int(62 / math.log2(p)))

    def make_rng(self, seed=None):
        return make_rng(seed)

    def _uniform(self, count: int, rng: np.random.Generator) -> list[int]:
        """Uniform residues mod p^N: N independent uniform base-p digits each."""
        p, N, K = self.p, self.precision, self._chunk
        out = [0] * count
        shift = 1
        done = 0
        while done < N:
            k = min(K, N - done)
            chunk = rng.integers(0, p ** k, size=count, dtype=np.int64).tolist()
            out = [o + c * shift for o, c in zip(out, chunk)]
            shift *= p ** k
            done += k
        return out

    def sample_pairs(self, count: int, rng: np.random.Generator) -> tuple[list[int], list[int]]:
        """Unimodular pairs (u, v) mod p^N, redrawing those with p | u and p | v."""
        p = self.p
        u = self._uniform(count, rng)
        v = self._uniform(count, rng)
        bad = [i for i in range(count) if u[i] % p == 0 and v[i] % p == 0]
        while bad:
            nu = self._uniform(len(bad), rng)
            nv = self._uniform(len(bad), rng)
            for i, a, b in zip(bad, nu, nv):
                u[i], v[i] = a, b
            bad = [i for i in bad if u[i] % p == 0 and v[i] % p == 0]
        return u, v

    def sample(self, count: int, rng: np.random.Generator) -> PointSet:
        p, M = self.p, self.context.modulus
        u, v = self.sample_pairs(count, rng)
        charts, vals = [], []
        for a, b in zip(u, v):
            if b % p:
                charts.append(0)
                vals.append(a * pow(b, -1, M) % M)
            else:
                charts.append(1)
                vals.append(b * pow(a, -1, M) % M)
        return PointSet(self.context, charts, vals)

    def ball_mass(self, n: int) -> Fraction:
        return ball_mass_padic(self.p, n)

    def minimal_energy(self) -> float:
        return minimal_energy_padic(self.p)


def sample_padic(p: int, precision: int, rng: np.random.Generator) -> ProjectivePoint:
    return next(iter(PadicEquilibrium(p, precision).sample(1, rng)))


def ball_frequency(Z: PointSet, n: int) -> float:
    """Fraction of points of a p-adic set in B(0, p^-n)."""
    m = Z.context.p ** n
    hits = sum(1 for c, v in zip(Z.charts.tolist(), Z.values) if c == 0 and v % m == 0)
    return hits / len(Z)


def residue_class_counts(Z: PointSet) -> list[int]:
    """Counts of points reducing to 0, 1, ..., p-1, infinity in P^1(F_p)."""
    p = Z.context.p
    counts = [0] * (p + 1)
    for c, v in zip(Z.charts.tolist(), Z.values):
        counts[p if c == 1 else v % p] += 1
    return counts
