"""The acceptance suite: eleven numbered checks, each timed and self-describing.

Used by ``localenergy all-checks`` and by tests/test_acceptance.py.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import bounds, equilibrium as eq, heights, metric
from .padic import is_totally_split, roots_P1
from .polynomial import IntPolynomial

TARGET_REAL = 0.426278
CORPUS_SEED = 20240607
MC_SEED = 7


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    time_limit: float | None = None
    data: dict = field(default_factory=dict)

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.time_limit:g}s)" if self.time_limit else ""
        return f"[{status}] {self.number:2d}. {self.name}: {self.detail}; {self.elapsed:.2f}s{limit}"


def _timed(number, name, limit):
    def wrap(fn):
        def run(**kw) -> CheckResult:
            t0 = time.perf_counter()
            ok, detail, data = fn(**kw)
            dt = time.perf_counter() - t0
            if limit is not None and dt > limit:
                ok = False
                detail += f"; too slow ({dt:.1f}s > {limit}s)"
            return CheckResult(number, name, ok, detail, dt, limit, data)
        run.number = number
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def random_squarefree_corpus(count: int = 500, seed: int = CORPUS_SEED) -> list[IntPolynomial]:
    """Squarefree integer polynomials, degree 2..6, coefficients in [-5, 5]."""
    rnd = random.Random(seed)
    out: list[IntPolynomial] = []
    while len(out) < count:
        d = rnd.randint(2, 6)
        coeffs = [rnd.randint(-5, 5) for _ in range(d)] + [rnd.choice([c for c in range(-5, 6) if c])]
        f = IntPolynomial(coeffs)
        if f.is_squarefree:
            out.append(f)
    return out


@_timed(1, "minimal energy over R", 1.0)
def check_constants(quick=False):
    with mpmath.workdps(30):
        oracle = float(7 * mpmath.zeta(3) / (2 * mpmath.pi ** 2))
    v = eq.minimal_energy_real()
    s = eq.minimal_energy_real_series()
    err = max(abs(v - oracle), abs(s - oracle), abs(v - s))
    ok = err <= 1e-12 and abs(v - TARGET_REAL) < 1e-6
    return ok, f"I = {v:.12f}, series {s:.12f}, max err {err:.1e}", {"value": v, "series": s}


@_timed(2, "total mass of the real density", 5.0)
def check_mass(quick=False):
    m_all = eq.real_mass(-math.inf, math.inf)
    m_01 = eq.real_mass(0.0, 1.0)
    ok = abs(m_all - 1) <= 1e-8 and abs(m_01 - 0.25) <= 1e-8
    return ok, f"mass(R) = {m_all:.12f}, mass(0,1) = {m_01:.12f}", {"R": m_all, "unit": m_01}


@_timed(3, "constant potential", 30.0)
def check_potential(quick=False):
    xs = (0.0, 0.3, 0.5, 2.0, 5.0, -7.0)
    vals = {x: eq.potential_real(x) for x in xs}
    worst = max(abs(v - eq.minimal_energy_real()) for v in vals.values())
    ok = max(abs(v - TARGET_REAL) for v in vals.values()) <= 1e-5
    return ok, f"max |p(x) - I| = {worst:.1e} over {len(xs)} points", {"values": vals}


@_timed(4, "p-adic ball masses", 30.0)
def check_ball_masses(quick=False, count=None):
    count = count or (20_000 if quick else 100_000)
    worst = 0.0
    rows = []
    for p in (2, 3, 5):
        sampler = eq.PadicEquilibrium(p, 64)
        Z = sampler.sample(count, sampler.make_rng(MC_SEED + p))
        for n in (1, 2, 3):
            m = float(eq.ball_mass_padic(p, n))
            freq = eq.ball_frequency(Z, n)
            z = (freq - m) / math.sqrt(m * (1 - m) / count)
            rows.append((p, f"B(0,{p}^-{n})", freq, m, z))
            worst = max(worst, abs(z))
        # the p + 1 residue classes are the balls of radius 1/p
        m = 1 / (p + 1)
        for r, c in enumerate(eq.residue_class_counts(Z)):
            z = (c / count - m) / math.sqrt(m * (1 - m) / count)
            rows.append((p, f"class {r if r < p else 'inf'}", c / count, m, z))
            worst = max(worst, abs(z))
    return worst <= 3, f"{len(rows)} balls, N = {count}, max |z| = {worst:.2f} (limit 3)", {"rows": rows}


@_timed(5, "Monte Carlo energies", 300.0)
def check_mc_energies(quick=False, count=None):
    count = count or (4_000 if quick else 20_000)
    tol = 0.03 if quick else 0.01
    parts = []
    ok = True
    data = {}
    real = eq.RealEquilibrium()
    est = metric.mc_energy_estimate(real, count, MC_SEED)
    parts.append(f"R {est:.5f}/{TARGET_REAL}")
    ok &= abs(est - TARGET_REAL) <= tol
    data["inf"] = est
    for p in (2, 3, 5):
        target = eq.minimal_energy_padic(p)
        est = metric.mc_energy_estimate(eq.PadicEquilibrium(p, 64), count, MC_SEED)
        parts.append(f"Q{p} {est:.5f}/{target:.6f}")
        ok &= abs(est - target) <= tol
        data[p] = est
    return ok, f"N = {count}: " + ", ".join(parts), data


def random_unimodular(p: int, rnd: random.Random, size: int = 50) -> metric.MobiusMap:
    while True:
        a, b, c, d = (rnd.randint(-size, size) for _ in range(4))
        if (a * d - b * c) % p:
            return metric.MobiusMap(a, b, c, d)


@_timed(6, "PGL2(Z_p) invariance", None)
def check_invariance(quick=False, maps=100, points=60):
    rnd = random.Random(CORPUS_SEED)
    bad = 0
    for p in (2, 3, 5):
        sampler = eq.PadicEquilibrium(p, 48)
        Z = sampler.sample(points, sampler.make_rng(p))
        base = metric.discrepancy(Z)
        pts = list(Z)
        for _ in range(maps):
            m = random_unimodular(p, rnd)
            W = Z.map(m)
            if metric.discrepancy(W) != base:
                bad += 1
            img = list(W)
            for i in range(0, points - 1, 3):
                if metric.delta_valuation(pts[i], pts[i + 1]) != metric.delta_valuation(img[i], img[i + 1]):
                    bad += 1
    return bad == 0, f"{3 * maps} maps on {points}-point sets, {bad} mismatches", {"mismatches": bad}


@_timed(7, "heights and product formula", 120.0)
def check_heights(quick=False, corpus=None):
    corpus = corpus or random_squarefree_corpus(100 if quick else 500)
    h = heights.weil_height(IntPolynomial([-1, -1, 1]))
    golden = bounds.schinzel_bound()
    worst = max(abs(heights.verify_product_formula(f)) for f in corpus)
    ok = abs(h - golden) <= 1e-10 and worst <= 1e-9
    return ok, f"h(x^2-x-1) = {h:.12f}, max residual {worst:.1e} over {len(corpus)}", {"worst": worst}


def split_pairs(count: int = 20, seed: int = CORPUS_SEED, separated: bool = True):
    """Deterministic (f, p) with f totally split over Q_p.

    ``separated=True`` asks for roots with pairwise distinct reductions in P^1(F_p);
    otherwise at least two roots must share a residue class.
    """
    rnd = random.Random(seed + (0 if separated else 1))
    out = []
    primes = (2, 3, 5, 7, 11)
    while len(out) < count:
        p = rnd.choice(primes)
        d = rnd.randint(2, min(p + 1, 5) if separated else 5)
        f = IntPolynomial([rnd.randint(-40, 40) for _ in range(d)] + [rnd.choice([1, 2, 3, 4, 5, 6, 9])])
        if not f.is_squarefree or not is_totally_split(f, p):
            continue
        red = [(c, v % p) for c, v in roots_P1(f, p, 8)]
        if (len(set(red)) == d) != separated:
            continue
        out.append((f, p))
    return out


@_timed(8, "Hensel-lifted roots vs exact local discrepancy", None)
def check_cross_path(quick=False):
    pairs = split_pairs(20) + split_pairs(20, separated=False)
    bad = []
    for f, p in pairs:
        lhs = metric.discrepancy_exact(heights.padic_root_pointset(f, p, 48))
        rhs = heights.local_discrepancy_padic(f, p).coefficient
        if lhs != rhs:
            bad.append((str(f), p, lhs, rhs))
    nonzero = sum(1 for f, p in pairs if heights.local_discrepancy_padic(f, p).coefficient)
    return not bad, f"{len(pairs)} pairs ({nonzero} with D_p != 0), {len(bad)} mismatches", {"bad": bad}


BOUND_TABLE = (
    ("general {2,inf}", lambda: bounds.general_bound([2, "inf"]).total, 0.444188),
    ("general {2}", lambda: bounds.general_bound([2]).total, 0.231049),
    ("general {inf}", lambda: bounds.general_bound(["inf"]).total, 0.213139),
    ("Bombieri-Zannier {2}", lambda: bounds.bombieri_zannier_bound([2]), 0.115525),
    ("Schinzel", bounds.schinzel_bound, 0.240605),
)


@_timed(9, "bounds table", 1.0)
def check_bounds(quick=False):
    # six significant digits: agreement within one unit of the sixth digit
    rows = [(name, fn(), want) for name, fn, want in BOUND_TABLE]
    bad = [r for r in rows if abs(r[1] - r[2]) > 1e-6]
    return not bad, ", ".join(f"{n} {v:.7f}" for n, v, _ in rows), {"rows": rows}


TORSION = {(-1, 1), (0, 1), (1, 1)}  # x - 1, x, x + 1: the points of height 0


@_timed(10, "search consistency S = {2, inf}", 600.0)
def check_search(quick=False):
    dmax, cmax = (3, 5) if quick else (4, 8)
    rep = heights.search_L_S([2, "inf"], dmax, cmax)
    below = rep.below_bound(1e-9)
    torsion = [h for h in below if h.coeffs in TORSION and h.height == 0]
    others = [h for h in below if h not in torsion]
    nontrivial = [h for h in rep.hits if h.coeffs not in TORSION]
    least = nontrivial[0] if nontrivial else None
    detail = (f"deg <= {dmax}, |c| <= {cmax}: {len(rep.hits)} numbers, bound {rep.bound:.6f}; "
              f"height-0 exceptions {sorted(str(h.poly) for h in torsion)}; ")
    detail += f"least other h = {least.height:.6f} ({least.poly})" if least else "no other members"
    if others:
        detail += f"; COUNTEREXAMPLES {[str(h.poly) for h in others]}"
    return not others, detail, {"report": rep, "min_nontrivial": least.height if least else None}


@_timed(11, "Mahler inequality at infinity", None)
def check_mahler(quick=False, corpus=None):
    corpus = corpus or random_squarefree_corpus(100 if quick else 500)
    worst = math.inf
    for f in corpus:
        n = f.degree
        gap = heights.local_discrepancy_arch(f).value + math.log(n) / (n - 1)
        worst = min(worst, gap)
    return worst >= -1e-12, f"min D_inf + log n/(n-1) = {worst:.3e} over {len(corpus)}", {"min_gap": worst}


ALL_CHECKS = (
    check_constants, check_mass, check_potential, check_ball_masses, check_mc_energies,
    check_invariance, check_heights, check_cross_path, check_bounds, check_search, check_mahler,
)


def run_all(quick: bool = False, only=None, echo=None) -> list[CheckResult]:
    results = []
    for chk in ALL_CHECKS:
        if only and chk.number not in only:
            continue
        r = chk(quick=quick)
        if echo:
            echo(r.line)
        results.append(r)
    return results
