import csv
import io
import json
import math
import subprocess
import sys

import pytest

from localenergy.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO("".join(l + "\n" for l in text.splitlines() if not l.startswith("#")))))


def test_energy(capsys):
    code, out, _ = run(capsys, "energy")
    assert code == 0
    assert "# units: nats" in out and "7*zeta(3)/(2*pi^2)" in out
    assert float(rows(out)[0]["energy"]) == pytest.approx(0.426278, abs=1e-6)
    _, out, _ = run(capsys, "energy", "--p", "2")
    assert float(rows(out)[0]["energy"]) == pytest.approx(0.462098, abs=1e-6)
    _, out, _ = run(capsys, "energy", "--p", "2", "--log2")
    assert float(rows(out)[0]["energy"]) == pytest.approx(2 / 3, abs=1e-12)
    _, out, _ = run(capsys, "energy", "--p", "3", "--format", "json")
    assert json.loads(out)["rows"][0]["energy"] == pytest.approx(3 * math.log(3) / 8)


def test_sample_deterministic(capsys):
    _, a, _ = run(capsys, "sample", "--p", "3", "--count", "20", "--seed", "4")
    _, b, _ = run(capsys, "sample", "--p", "3", "--count", "20", "--seed", "4")
    _, c, _ = run(capsys, "sample", "--p", "3", "--count", "20", "--seed", "5")
    assert a == b and a != c
    _, js, _ = run(capsys, "sample", "--count", "5", "--format", "json")
    doc = json.loads(js)
    assert doc["pointset"]["schema"] == "localenergy.pointset/1" and len(doc["pointset"]["points"]) == 5


def test_converge_ladder(capsys, tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    for o in (out1, out2):
        main(["converge", "--p", "2", "--nmax", "500", "--steps", "5", "--seed", "1", "--out", str(o)])
    assert out1.read_bytes() == out2.read_bytes()
    r = rows(out1.read_text())
    ns = [int(x["N"]) for x in r]
    assert ns[0] == 2 and ns == sorted(ns) and len(set(ns)) == len(ns)
    assert all(math.isfinite(float(x["discrepancy"])) for x in r)


def test_potential(capsys):
    _, out, _ = run(capsys, "potential", "--x", "0", "2")
    for r in rows(out):
        assert float(r["potential"]) == pytest.approx(0.426278, abs=1e-6)


def test_height_and_identity(capsys):
    _, out, _ = run(capsys, "height", "--poly=-1,-1,1")
    r = rows(out)[0]
    assert float(r["h"]) == pytest.approx(0.2406059125, abs=1e-10)
    assert float(r["D_5"]) == pytest.approx(0.5 * math.log(5), abs=1e-11)
    _, out, _ = run(capsys, "verify-identity", "--poly=1,0,1")
    assert rows(out)[0]["passed"] == "True"
    code, _, err = run(capsys, "verify-identity", "--poly=-2,1")
    assert code == 2 and "degree" in err


def test_split_and_local(capsys):
    _, out, _ = run(capsys, "split-check", "--poly=-1,-1,1", "--primes", "5,11", "--arch")
    r = {x["place"]: x["totally_split"] for x in rows(out)}
    assert r == {"inf": "True", "5": "False", "11": "True"}
    _, out, _ = run(capsys, "discrepancy-local", "--poly=-4,0,1", "--place", "2")
    assert rows(out)[0]["exact"] == "2 * log(2)"


def test_bound(capsys):
    _, out, _ = run(capsys, "bound", "--primes", "2", "--arch")
    assert "# total: 0.444188259595" in out
    r = {x["place"]: x for x in rows(out)}
    assert float(r["bombieri_zannier"]["contribution"]) == pytest.approx(0.115525, abs=1e-6)
    _, out, _ = run(capsys, "bound", "--primes", "2", "--field-degrees", "1,2,1")
    assert float(rows(out)[0]["contribution"]) == pytest.approx(0.092420, abs=1e-6)
    with pytest.raises(SystemExit):
        main(["bound"])


def test_search_and_equidist(capsys):
    _, out, _ = run(capsys, "search", "--S", "inf", "--degree-max", "2", "--coeff-max", "1")
    assert '"-1,-1,1"' in out
    _, out, _ = run(capsys, "search", "--S", "3", "--degree-max", "2", "--coeff-max", "2", "--pointsets")
    assert "pointset_D_3" in out.splitlines()[[i for i, l in enumerate(out.splitlines()) if not l.startswith("#")][0]]
    _, out, _ = run(capsys, "equidist", "--p", "3", "--degree-max", "2", "--coeff-max", "4")
    r = rows(out)
    assert len(r) == 4
    assert sum(float(x["frequency"]) for x in r) == pytest.approx(1)
    assert "# chi2:" in out


def test_all_checks_subset(capsys):
    code, out, err = run(capsys, "all-checks", "--quick", "--only", "1", "9")
    assert code == 0
    assert "[PASS]  1." in err and "[PASS]  9." in err


def test_all_checks_detects_corruption(capsys, monkeypatch):
    from localenergy import checks
    monkeypatch.setattr(checks, "BOUND_TABLE", checks.BOUND_TABLE[:-1] + (("Schinzel", lambda: 0.25, 0.240605),))
    code, _, err = run(capsys, "all-checks", "--quick", "--only", "9")
    assert code == 1 and "[FAIL]" in err


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "localenergy.cli", "energy", "--log10"],
                         capture_output=True, text=True, check=True)
    assert "decimal digits" in res.stdout
