import json
import subprocess
import sys
from math import comb

import pytest

from diagkit.cli import FAILED, MISMATCH, OK, USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_diag(capsys):
    code, data = run_json(capsys, "diag", "--expr", "1/(1-z0-z1)", "--trunc", "8")
    assert code == OK
    assert [int(c) for c in data["coeffs"]] == [comb(2 * n, n) for n in range(9)]


def test_series_output_feeds_back(capsys, tmp_path):
    code, data = run_json(capsys, "diag", "--expr", "1/(1-z0-z1)", "--trunc", "30")
    path = tmp_path / "f.json"
    path.write_text(json.dumps(data))
    code, v = run_json(capsys, "intcheck", "--series", str(path))
    assert code == OK and v["kind"] == "GloballyBoundedWith" and v["N"] == 1
    code, _ = run_json(capsys, "intcheck", "--series", str(path), "--expect-n", "2")
    assert code == MISMATCH


def test_products(capsys):
    code, h = run_json(capsys, "prod", "hadamard", "--f", "1/(1-x)", "--g", "1/(1-2*x)", "--trunc", "5")
    assert code == OK and [int(c) for c in h["coeffs"]] == [2 ** n for n in range(6)]
    code, g = run_json(capsys, "prod", "general", "--f", "1/(1-x)", "--g", "1/(1-x)",
                       "--kernel", "1/(1-z0-z1)", "--trunc", "5")
    code2, w = run_json(capsys, "prod", "hurwitz", "--f", "1/(1-x)", "--g", "1/(1-x)", "--trunc", "5")
    assert code == code2 == OK and g["coeffs"] == w["coeffs"]


def test_binom_inline(capsys):
    spec = json.dumps({"factors": [{"top": [1, 0], "bot": [0, 1], "pow": 2}]})
    code, data = run_json(capsys, "binom", "--spec", spec, "--trunc", "6")
    assert code == OK and data["verified"]


def test_modp(capsys):
    code, data = run_json(capsys, "modp", "minpoly", "--expr", "(1-4*x)^(-1/2)", "--p", "5", "--dx", "2", "--dy", "2")
    assert code == OK and data["dy"] == 2
    code, out, _ = run(capsys, "modp", "hasse", "--p", "7")
    assert code == OK and out.strip()


def test_operator_json_roundtrip(capsys, tmp_path):
    code, data = run_json(capsys, "ode", "guess", "--expr", "(1-4*x)^(-1/2)", "--max-order", "2")
    assert code == OK
    path = tmp_path / "L.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "ode", "apply", "--op", str(path), "--expr", "(1-4*x)^(-1/2)", "--expect-zero")
    assert code == OK
    code, out, _ = run(capsys, "ode", "apply", "--op", str(path), "--expr", "(1-3*x)^(-1/2)", "--expect-zero")
    assert code == MISMATCH


def test_mum_yukawa(capsys):
    code, data = run_json(capsys, "mum", "yukawa", "--op", "B2", "--trunc", "6")
    assert code == OK
    assert [int(c) for c in data["coeffs"][:5]] == [1, 4, 164, 5800, 196772]


def test_verify_verdicts(capsys):
    code, _, _ = run(capsys, "verify", "schwarzian", "--p1", "27*x^3", "--p2", "1-((1-3*x)/(1+6*x))^3")
    assert code == OK
    code, _, _ = run(capsys, "verify", "curve", "--curve", "u-v", "--u", "x", "--v", "x^2")
    assert code == MISMATCH


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["diag"])
    assert exc.value.code == USAGE
    code, _, err = run(capsys, "intcheck")
    assert code == USAGE and "usage error" in err
    code, _, _ = run(capsys, "verify", "curve", "--u", "x")
    assert code == USAGE


def test_failures(capsys):
    code, _, err = run(capsys, "diag", "--expr", "1/(1-z0", "--nvars", "1")
    assert code == FAILED and "error" in err
    code, _, _ = run(capsys, "mum", "yukawa", "--op", "no-such-operator")
    assert code == FAILED


def test_corpus_filter(capsys):
    code, data = run_json(capsys, "corpus", "--filter", "yukawa_H4", "--no-timing")
    assert code == OK
    ids = [r["id"] for r in data["entries"]]
    assert ids and all("yukawa" in i for i in ids)
    assert all(r["kind"] == "modularity" for r in data["entries"])


def test_corpus_parallel_is_deterministic(capsys):
    argv = ["corpus", "--filter", "atkin", "--json", "--no-timing"]
    assert main(argv + ["--jobs", "1"]) == OK
    one = capsys.readouterr().out
    assert main(argv + ["--jobs", "4"]) == OK
    four = capsys.readouterr().out
    assert one == four


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "diagkit", "diag", "--expr", "1/(1-z0-z1)", "--trunc", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "6" in res.stdout
