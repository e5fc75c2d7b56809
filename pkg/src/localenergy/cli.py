"""localenergy command line.

Every subcommand writes CSV (with '#' metadata lines) or JSON.  Output is
a pure function of the arguments and --seed; nothing time-dependent is
written to the data stream.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import __version__, bounds, checks, equilibrium as eq, heights, metric
from .padic import count_roots_P1, roots_P1
from .polynomial import IntPolynomial, sturm_real_roots

SCHEMA = "localenergy.cli/1"
UNITS = {None: ("nats", 1.0), "log2": ("bits", 1 / math.log(2)), "log10": ("decimal digits", 1 / math.log(10))}


class Output:
    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.meta: dict = {"schema": SCHEMA, "command": command}
        if hasattr(args, "seed"):
            self.meta["seed"] = args.seed
        self.unit, self.scale = UNITS[args.log_base]
        self.meta["units"] = self.unit
        self.columns: list[str] = []
        self.rows: list[list] = []

    def log(self, x):
        """Convert a value measured in nats to the display unit."""
        if x is None or isinstance(x, str):
            return x
        return x * self.scale

    def emit(self):
        if self.args.format == "json":
            doc = dict(self.meta)
            doc["rows"] = [dict(zip(self.columns, r)) for r in self.rows]
            text = json.dumps(doc, indent=2, default=_json_default) + "\n"
        else:
            buf = io.StringIO()
            for k, v in self.meta.items():
                buf.write(f"# {k}: {v if not isinstance(v, (dict, list)) else json.dumps(v, default=_json_default)}\n")
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.columns)
            for r in self.rows:
                w.writerow([_fmt(x) for x in r])
            text = buf.getvalue()
        if self.args.out:
            with open(self.args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _fmt(x):
    if isinstance(x, float):
        return repr(round(x, 12)) if math.isfinite(x) else str(x)
    return str(x)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(type(x).__name__)


def _poly(text: str) -> IntPolynomial:
    return IntPolynomial.parse(text)


def _places(text: str) -> list:
    return [s.strip() for s in text.split(",") if s.strip()]


# --- subcommands --------------------------------------------------------------------

def cmd_energy(args, out: Output):
    out.columns = ["field", "energy", "exact"]
    if args.p is None:
        out.meta["formula"] = "I(mu_R) = 7*zeta(3)/(2*pi^2) = (4/pi^2) * sum_n (2n+1)^-3"
        out.rows.append(["R", out.log(eq.minimal_energy_real()), "7*zeta(3)/(2*pi^2)"])
    else:
        q = args.p
        out.meta["formula"] = "I(mu_Qp) = q*log(q)/(q^2-1)"
        out.rows.append([f"Q_{q}", out.log(eq.minimal_energy_padic(q)), f"{q}*log({q})/{q * q - 1}"])


def _sampler(args):
    if args.p is None:
        return eq.RealEquilibrium(tol=args.tol)
    return eq.PadicEquilibrium(args.p, args.precision)


def cmd_sample(args, out: Output):
    s = _sampler(args)
    Z = s.sample(args.count, s.make_rng(args.seed))
    out.meta["context"] = Z.context.to_dict()
    if args.format == "json":
        out.meta["pointset"] = json.loads(Z.to_json())
        return
    out.columns = ["index", "chart", "value"]
    for i, (c, v) in enumerate(zip(Z.charts.tolist(), Z.values)):
        if Z.context.is_archimedean:
            v = float(v.real)
        out.rows.append([i, c, v])


def cmd_potential(args, out: Output):
    out.meta["formula"] = "p(x) = int -log delta(x, s) dmu_R(s); constant = 7*zeta(3)/(2*pi^2) off {-1, 1, inf}"
    out.columns = ["x", "potential", "target"]
    target = eq.minimal_energy_real()
    for x in args.x:
        out.rows.append([x, out.log(eq.potential_real(x, tol=args.tol)), out.log(target)])


def _ladder(nmin: int, nmax: int, steps: int) -> list[int]:
    out = []
    for k in range(steps):
        n = round(nmin * (nmax / nmin) ** (k / max(1, steps - 1)))
        if not out or n > out[-1]:
            out.append(n)
    return out


def cmd_converge(args, out: Output):
    s = _sampler(args)
    target = s.minimal_energy()
    out.meta["formula"] = "D(Z) = (1/(N(N-1))) sum_{a != b} -log delta(a, b)"
    out.meta["field"] = "R" if args.p is None else f"Q_{args.p}"
    out.columns = ["N", "discrepancy", "target", "difference"]
    for k, n in enumerate(_ladder(args.nmin, args.nmax, args.steps)):
        # one independent stream per rung
        Z = s.sample(n, eq.make_rng(args.seed, k))
        d = metric.discrepancy(Z)
        out.rows.append([n, out.log(d), out.log(target), out.log(d - target)])


def cmd_equidist(args, out: Output):
    p = args.p
    rep = heights.search_L_S([p], args.degree_max, args.coeff_max, irreducible=not args.reducible)
    hits = [h for h in rep.hits if h.degree >= args.degree_min]
    counts = [0] * (p + 1)
    for h in hits:
        for chart, v in roots_P1(h.poly, p, 32):
            counts[p if chart == 1 else v % p] += 1
    total = sum(counts)
    out.columns = ["class", "count", "frequency", "target"]
    target = 1 / (p + 1)
    chi2 = sum((c - total * target) ** 2 / (total * target) for c in counts) if total else float("nan")
    out.meta.update(field=f"Q_{p}", polynomials=len(hits), conjugates=total,
                    chi2=round(chi2, 9), dof=p, formula="mu(residue ball) = 1/(q+1)")
    for r, c in enumerate(counts):
        out.rows.append(["inf" if r == p else r, c, c / total if total else float("nan"), target])


def _height_row(f: IntPolynomial, out: Output):
    h = heights.weil_height(f)
    row = {"coeffs": ",".join(map(str, f.coeffs)), "degree": f.degree, "h": out.log(h)}
    if f.degree >= 2:
        for r in heights.local_discrepancies(f):
            row[f"D_{r.place}"] = out.log(r.value)
    return row


def cmd_height(args, out: Output):
    f = _poly(args.poly).require_squarefree()
    out.meta["formula"] = "h = (1/n)(log|a| + sum log+|alpha_i|), primitive part"
    row = _height_row(f, out)
    if f.degree >= 2:
        out.meta["discriminant"] = f.discriminant
    out.columns = list(row)
    out.rows.append(list(row.values()))


def cmd_split_check(args, out: Output):
    f = _poly(args.poly).require_squarefree()
    out.columns = ["place", "roots", "degree", "totally_split"]
    if args.arch:
        n = sturm_real_roots(f)
        out.rows.append(["inf", n, f.degree, n == f.degree])
    for p in args.primes or []:
        n = count_roots_P1(f, p)
        out.rows.append([p, n, f.degree, n == f.degree])


def cmd_discrepancy_local(args, out: Output):
    f = _poly(args.poly).require_squarefree()
    places = _places(args.place) if args.place else ["inf"] + heights.bad_primes(f)
    out.columns = ["place", "D_v", "exact"]
    for pl in places:
        if str(pl).lower() in ("inf", "oo"):
            r = heights.local_discrepancy_arch(f)
        else:
            r = heights.local_discrepancy_padic(f, int(pl))
        out.rows.append([r.place, out.log(r.value), r.exact])


def _field_degrees(text: str | None, count: int):
    if not text:
        return [(1, 1, Fraction(1))] * count
    items = [s.strip() for s in text.split(";") if s.strip()]
    if len(items) != count:
        raise SystemExit(f"--field-degrees needs {count} 'e,f,N' entries, got {len(items)}")
    out = []
    for it in items:
        e, f, N = it.split(",")
        out.append((int(e), int(f), Fraction(N)))
    return out


def cmd_bound(args, out: Output):
    primes = args.primes or []
    qs = args.q or primes
    if len(qs) != len(primes):
        raise SystemExit("--q needs one residue field size per prime")
    degs = _field_degrees(args.field_degrees, len(primes))
    places = [bounds.PlaceSpec.finite(p, N, q, e, f) for p, q, (e, f, N) in zip(primes, qs, degs)]
    if args.arch:
        places.append(bounds.PlaceSpec.arch(Fraction(args.arch_weight)))
    rep = bounds.general_bound(places)
    out.meta["formula"] = ("finite v: (N_v/2) q^f log p / (e (q^(2f) - 1)); "
                           "infinite v: N_v 7 zeta(3)/(4 pi^2)")
    out.meta["total"] = round(out.log(rep.total), 12)
    out.meta["galois_hypothesis"] = "L_v/K_v assumed Galois"
    out.columns = ["place", "N", "q", "e", "f", "contribution", "exact"]
    for d in rep.as_dict()["places"]:
        out.rows.append([d["place"], d["N"], d["q"], d["e"], d["f"], out.log(d["value"]), d["exact"]])
    out.rows.append(["total", "", "", "", "", out.log(rep.total), ""])
    for k, v in rep.comparisons.items():
        out.rows.append([k, "", "", "", "", out.log(v), ""])


def cmd_verify_identity(args, out: Output):
    f = _poly(args.poly).require_squarefree()
    out.meta["formula"] = "2 h(f) = D_inf + sum_{p | a disc} D_p"
    out.columns = ["coeffs", "two_h", "sum_D_v", "residual", "passed"]
    h2 = 2 * heights.weil_height(f)
    s = math.fsum(r.value for r in heights.local_discrepancies(f))
    res = h2 - s
    out.rows.append([",".join(map(str, f.coeffs)), out.log(h2), out.log(s), out.log(res), abs(res) <= args.tol])


def cmd_search(args, out: Output):
    S = _places(args.S)
    rep = heights.search_L_S(S, args.degree_max, args.coeff_max, irreducible=not args.reducible,
                             emit_pointsets=args.pointsets, precision=args.precision)
    out.meta.update(S=",".join(S), degree_max=args.degree_max, coeff_max=args.coeff_max,
                    examined=rep.examined, members=len(rep.hits),
                    min_height=None if rep.min_height is None else round(out.log(rep.min_height), 12),
                    bound=round(out.log(rep.bound), 12))
    places = sorted({k for h in rep.hits for k in h.local}, key=lambda s: (s != "inf", int(s) if s != "inf" else 0))
    out.columns = ["coeffs", "degree", "h", "bound"] + [f"D_{p}" for p in places]
    if args.pointsets:
        out.columns += [f"pointset_D_{p}" for p in S if p.lower() not in ("inf", "oo")]
    for h in rep.hits:
        row = [",".join(map(str, h.coeffs)), h.degree, out.log(h.height), out.log(rep.bound)]
        row += [out.log(h.local[p]) if p in h.local else 0.0 for p in places]
        if args.pointsets:
            row += [str(h.padic_discrepancy.get(int(p), "")) for p in S if p.lower() not in ("inf", "oo")]
        out.rows.append(row)


def cmd_all_checks(args, out: Output):
    results = checks.run_all(quick=args.quick, only=set(args.only) if args.only else None,
                             echo=lambda s: print(s, file=sys.stderr))
    out.columns = ["criterion", "name", "passed", "detail"]
    for r in results:
        out.rows.append([r.number, r.name, r.passed, r.detail.split("; ")[0] if args.quick else r.detail])
    out.meta["quick"] = args.quick
    return 0 if all(r.passed for r in results) else 1


# --- argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance")
    g = common.add_mutually_exclusive_group()
    g.add_argument("--log2", dest="log_base", action="store_const", const="log2",
                   help="display logarithmic quantities in bits")
    g.add_argument("--log10", dest="log_base", action="store_const", const="log10",
                   help="display logarithmic quantities in base-10 units")
    common.set_defaults(log_base=None)

    ap = argparse.ArgumentParser(prog="localenergy", parents=[common],
                                 description="Equilibrium energies on P^1 and height bounds.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    def field_args(sp, precision=64):
        sp.add_argument("--p", type=int, help="prime p; omit for the real field")
        sp.add_argument("--precision", type=int, default=precision, help="p-adic digits")

    sp = add("energy", cmd_energy, "minimal energy of P^1 over R or Q_p")
    sp.add_argument("--p", type=int)

    sp = add("sample", cmd_sample, "draw points from the equilibrium measure")
    field_args(sp)
    sp.add_argument("--count", type=int, default=100)

    sp = add("potential", cmd_potential, "equilibrium potential over R")
    sp.add_argument("--x", type=float, nargs="+", default=[0.0, 0.3, 0.5, 2.0, 5.0, -7.0])

    sp = add("converge", cmd_converge, "discrepancy of samples along a ladder of N")
    field_args(sp)
    sp.add_argument("--nmin", type=int, default=2)
    sp.add_argument("--nmax", type=int, default=20000)
    sp.add_argument("--steps", type=int, default=12)

    sp = add("equidist", cmd_equidist, "residue classes of conjugates of totally p-adic numbers")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--degree-min", type=int, default=2)
    sp.add_argument("--degree-max", type=int, default=3)
    sp.add_argument("--coeff-max", type=int, default=8)
    sp.add_argument("--reducible", action="store_true", help="allow reducible squarefree polynomials")

    for name, fn, help_ in (("height", cmd_height, "Weil height and local discrepancies"),
                            ("verify-identity", cmd_verify_identity, "check 2h = sum of D_v")):
        sp = add(name, fn, help_)
        sp.add_argument("--poly", required=True, help="coefficients, constant first: -1,-1,1")

    sp = add("split-check", cmd_split_check, "count roots over R and Q_p")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--primes", type=lambda s: [int(x) for x in s.split(",")])
    sp.add_argument("--arch", action="store_true")

    sp = add("discrepancy-local", cmd_discrepancy_local, "local discrepancy D_v")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--place", help="comma list of primes and/or inf (default: all nonzero places)")

    sp = add("bound", cmd_bound, "lower bound for liminf h on L_S")
    sp.add_argument("--primes", type=lambda s: [int(x) for x in s.split(",")])
    sp.add_argument("--q", type=lambda s: [int(x) for x in s.split(",")], help="residue field sizes")
    sp.add_argument("--arch", action="store_true")
    sp.add_argument("--arch-weight", default="1", help="N_v at the real place")
    sp.add_argument("--field-degrees", help="per prime 'e,f,N' separated by ';'")

    sp = add("search", cmd_search, "enumerate members of L_S")
    sp.add_argument("--S", default="2,inf", help="places, e.g. 2,inf")
    sp.add_argument("--degree-max", type=int, default=3)
    sp.add_argument("--coeff-max", type=int, default=5)
    sp.add_argument("--reducible", action="store_true")
    sp.add_argument("--pointsets", action="store_true", help="also report exact p-adic discrepancies")
    sp.add_argument("--precision", type=int, default=32)

    sp = add("all-checks", cmd_all_checks, "run the acceptance suite")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--only", type=int, nargs="+")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "bound" and not (args.primes or args.arch):
        raise SystemExit("bound: give --primes and/or --arch")
    out = Output(args, args.command)
    try:
        code = args.func(args, out)
    except (ValueError, ArithmeticError) as exc:
        print(f"localenergy {args.command}: error: {exc}", file=sys.stderr)
        return 2
    out.emit()
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
