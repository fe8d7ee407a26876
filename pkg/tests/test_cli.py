import json
import subprocess
import sys
from pathlib import Path

import pytest

from schurring.abelian import parse_element, parse_group
from schurring.cli import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, main, read_connection_set
from schurring.sring import SRing, parse_dump

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _write(tmp_path, name, lines):
    p = tmp_path / name
    p.write_text("\n".join(lines) + "\n")
    return str(p)


@pytest.fixture
def files(tmp_path):
    return {
        "pentagon": _write(tmp_path, "pentagon.txt", ["# 5-cycle", "1", "4"]),
        "all22": _write(tmp_path, "all.txt", ["(0,1)", "(1,0)", "(1,1)"]),
        "a": _write(tmp_path, "a.txt", ["(0,1)", "(0,7)", "(1,0)"]),
        "b": _write(tmp_path, "b.txt", ["(0,3)", "(0,5)", "(1,0)"]),
        "c": _write(tmp_path, "c.txt", ["(0,1)", "(0,7)", "(1,0)", "(1,4)"]),
        "bad": _write(tmp_path, "bad.txt", ["(0,9)"]),
    }


def test_read_connection_set(files):
    G = parse_group("C5")
    assert read_connection_set(files["pentagon"], G) == frozenset({1, 4})


def test_scheme_pentagon(capsys, files):
    code, out, _ = run(capsys, "scheme", "C5", files["pentagon"])
    assert code == EXIT_OK
    assert out.splitlines()[0] == "sring C5 rank=3"


def test_scheme_complete_graph_json(capsys, files):
    code, out, _ = run(capsys, "scheme", "C2xC2", files["all22"], "--format", "json")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["exit"] == 0 and rec["rank"] == 2


def test_scheme_k5_matches_golden(capsys):
    code, out, _ = run(capsys, "scheme", "C2xC16", str(GOLDEN / "k5-highest.txt"))
    assert code == EXIT_OK
    assert out == (GOLDEN / "cyc_p2_K5_k4.txt").read_text()


def test_json_matches_text(capsys, files):
    _, text, _ = run(capsys, "scheme", "C2xC8", files["c"])
    _, js, _ = run(capsys, "scheme", "C2xC8", files["c"], "--format", "json")
    rec = json.loads(js)
    G = parse_group(rec["group"])
    A = SRing(G, [[parse_element(x, G) for x in X] for X in rec["classes"]])
    assert A == parse_dump(text)


def test_iso_verdicts(capsys, files):
    code, out, _ = run(capsys, "iso", "C2xC8", files["a"], "C2xC8", files["b"])
    assert code == EXIT_OK and out.startswith("verdict iso")
    assert "pointmap C2xC8 -> C2xC8" in out
    code, out, _ = run(capsys, "iso", "C2xC8", files["a"], "C2xC8", files["a"], "--format", "json")
    rec = json.loads(out)
    assert rec["isomorphic"] and len(rec["point_map"]) == 16
    code, out, _ = run(capsys, "iso", "C2xC8", files["a"], "C2xC8", files["c"])
    assert code == EXIT_NEGATIVE and "reason=valency" in out


def test_errors_exit_2(capsys, files):
    assert run(capsys, "scheme", "C2xC8", files["bad"])[0] == EXIT_ERROR
    assert run(capsys, "scheme", "D4", files["bad"])[0] == EXIT_ERROR
    assert run(capsys, "enumerate", "C99")[0] == EXIT_ERROR
    assert run(capsys, "catalogue", "2", "5", "3")[0] == EXIT_ERROR
    assert run(capsys, "iso", "C5", files["pentagon"], "C5", files["pentagon"])[0] == EXIT_ERROR
    assert run(capsys, "nonsense")[0] == EXIT_ERROR
    code, out, _ = run(capsys, "enumerate", "C99", "--format", "json")
    assert json.loads(out)["error"]


def test_enumerate_and_aut(capsys, files):
    code, out, _ = run(capsys, "enumerate", "C3")
    assert code == EXIT_OK and out.splitlines()[0] == "enumerate C3 count=2"
    code, out, _ = run(capsys, "enumerate", "C2xC4", "--up-to", "aut", "--format", "json")
    assert json.loads(out)["count"] == 17
    code, out, _ = run(capsys, "aut", "C5", files["pentagon"])
    assert out.strip() == "aut C5 rank=3 order=10"


def test_catalogue_k6(capsys):
    code, out, _ = run(capsys, "catalogue", "3", "6", "3")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "catalogue p=3 K6 k=3 order=3 N={1,3} rad=1"


def test_separability(capsys):
    code, out, _ = run(capsys, "separability", "C2xC4")
    assert code == EXIT_OK
    assert out.splitlines()[-1].startswith("summary separable=true")
    code, out, _ = run(capsys, "separability", "C2xC8", "--sample", "3", "--seed", "5", "--format", "json")
    rec = json.loads(out)
    assert rec["separable"] and rec["errors"] == 0


def test_closure_with_two_seeds(capsys, files):
    code, out, _ = run(capsys, "closure", "C2xC8", files["a"], files["c"])
    assert code == EXIT_OK and out.startswith("sring C2xC8")


def test_output_is_deterministic(capsys, files):
    first = run(capsys, "separability", "C2xC4", "--sample", "4", "--seed", "11")
    second = run(capsys, "separability", "C2xC4", "--sample", "4", "--seed", "11")
    assert first == second


def test_module_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "schurring", "scheme", "C5", files["pentagon"]],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("sring C5 rank=3")
