import json
import subprocess
import sys

import pytest

from graphboot.cli import run
from graphboot.engine import close_kr
from graphboot.graph import graph_from_edge_list

K4E = "0 1\n0 2\n0 3\n1 2\n1 3\n"


@pytest.fixture
def k4e(tmp_path):
    f = tmp_path / "k4_minus_e.txt"
    f.write_text(K4E)
    return str(f)


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_percolates(capsys, k4e):
    assert _run(capsys, "percolates", "--graph", k4e, "--pattern", "K4")[:2] == (0, "true\n")
    assert _run(capsys, "percolates", "--graph", k4e, "--pattern", "K5")[:2] == (0, "false\n")


def test_wsat(capsys):
    code, out, _ = _run(capsys, "wsat", "--n", "6", "--r", "4")
    assert code == 0 and json.loads(out)["wsat_bound"] == 9
    code, out, _ = _run(capsys, "wsat", "--n", "6", "--r", "4", "--construct")
    doc = json.loads(out)["construction"]
    assert doc["m"] == 9 and len(doc["edges"]) == 9 and doc["percolates"] is True


def test_verify_2lminus3(capsys):
    code, out, _ = _run(capsys, "verify", "--lemma", "2lminus3", "--l", "6")
    doc = json.loads(out)
    assert code == 0
    assert doc["counterexample"] is None and doc["passed"] and doc["cases_checked"] == 22819


def test_verify_other_lemmas(capsys):
    for argv in (["--lemma", "wsat-lower", "--n", "5"],
                 ["--lemma", "double-cover", "--m", "3", "--r", "5"],
                 ["--lemma", "var-ext", "--pattern", "K4", "--depth", "1"],
                 ["--lemma", "dext", "--r-size", "7", "--s-size", "4", "--trials", "200"]):
        code, out, _ = _run(capsys, "verify", *argv)
        assert code == 0 and json.loads(out)["passed"]


def test_close_trace_and_fixed_point(capsys, k4e, tmp_path):
    out_file = tmp_path / "c.json"
    code, _, _ = _run(capsys, "close", "--graph", k4e, "--pattern", "K4", "--trace",
                      "--output", str(out_file))
    assert code == 0
    doc = json.loads(out_file.read_text())
    _, tr = close_kr(graph_from_edge_list(K4E), 4)
    assert doc["trace"] == tr.to_dict()
    assert doc["rounds"] == tr.num_rounds == 1 and doc["percolates"]
    code, out, _ = _run(capsys, "close", "--graph", str(out_file), "--pattern", "K4")
    again = json.loads(out)
    assert again["closure"] == doc["closure"] and again["rounds"] == 0


def test_close_generic_pattern(capsys, tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("0 1\n1 2\n2 3\n")
    code, out, _ = _run(capsys, "close", "--graph", str(f), "--pattern", "C4")
    doc = json.loads(out)
    assert code == 0 and doc["closure_edges"] == 4  # only 03 closes the 4-cycle


def test_witness(capsys, k4e):
    code, out, _ = _run(capsys, "witness", "--graph", k4e, "--pattern", "K4", "--edge", "2,3")
    doc = json.loads(out)
    assert code == 0 and doc["witness"]["edge_count"] == 5
    assert doc["trace"]["steps"][0]["ell"] == 1 and doc["extremal_bound_holds"]
    code, out, _ = _run(capsys, "witness", "--graph", k4e, "--pattern", "K4", "--edge", "0,1")
    assert code == 0 and json.loads(out)["trace"] is None
    assert _run(capsys, "witness", "--graph", k4e, "--pattern", "C4", "--edge", "2,3")[0] == 2


def test_gadget(capsys, tmp_path):
    code, out, _ = _run(capsys, "gadget", "--pattern", "K4", "--depth", "3")
    g = graph_from_edge_list(out)
    assert code == 0 and (g.n, g.m) == (8, 13)
    f = tmp_path / "g.txt"
    code, out, _ = _run(capsys, "gadget", "--pattern", "K5", "--depth", "2", "--out", str(f))
    assert json.loads(out)["e"] == 17 and graph_from_edge_list(f.read_text()).m == 17


def test_bounds(capsys):
    code, out, _ = _run(capsys, "bounds", "--n", "1000000", "--r", "4")
    doc = json.loads(out)
    assert code == 0 and doc["wsat_bound"] == 2 * 10**6 - 3
    assert doc["pc_window"][0] == pytest.approx(6.73e-5, rel=2e-3)


def test_exit_codes(capsys, tmp_path, k4e):
    assert _run(capsys, "percolates", "--graph", k4e, "--pattern", "K4", "--bogus")[0] == 1
    assert _run(capsys, "nosuchcommand")[0] == 1
    assert _run(capsys, "wsat", "--n", "0", "--r", "4")[0] == 1
    assert _run(capsys, "verify", "--lemma", "2lminus3")[0] == 1
    assert _run(capsys, "sweep", "--n-list", "10", "--p-grid", "1.5", "--pattern", "K3",
                "--trials", "5")[0] == 1
    assert _run(capsys, "percolates", "--graph", str(tmp_path / "missing"), "--pattern", "K4")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1 one\n")
    code, _, err = _run(capsys, "percolates", "--graph", str(bad), "--pattern", "K4")
    assert code == 2 and "line 2" in err
    assert _run(capsys, "percolates", "--graph", k4e, "--pattern", "Q9")[0] == 2
    assert _run(capsys, "verify", "--lemma", "wsat-lower", "--n", "7")[0] == 3
    assert _run(capsys, "wsat", "--n", "3", "--r", "4")[0] == 2


def test_seed_from_environment(capsys, monkeypatch):
    argv = ["er-limit", "--n", "300", "--c", "0", "--trials", "50"]
    monkeypatch.setenv("GRAPHBOOT_SEED", "17")
    env_out = _run(capsys, *argv)[1]
    assert json.loads(env_out)["master_seed"] == 17
    assert _run(capsys, *argv, "--seed", "17")[1] == env_out
    flag_out = _run(capsys, *argv, "--seed", "18")[1]
    assert json.loads(flag_out)["master_seed"] == 18
    monkeypatch.setenv("GRAPHBOOT_SEED", "junk")
    assert _run(capsys, *argv)[0] == 1


def test_outputs_are_byte_identical(capsys):
    sweep = ["sweep", "--n-list", "40,60", "--p-grid", "0.05,0.1", "--pattern", "K4",
             "--trials", "40", "--seed", "3"]
    a = _run(capsys, *sweep)[1]
    b = _run(capsys, *sweep, "--threads", "2")[1]
    assert a == b and a.startswith("n,p,trials,successes,point,ci_low,ci_high,master_seed\n")
    assert len(a.splitlines()) == 5
    pc = ["estimate-pc", "--n", "100", "--pattern", "K3", "--trials", "100", "--rtol", "0.1", "--seed", "4"]
    assert _run(capsys, *pc)[1] == _run(capsys, *pc, "--threads", "2")[1]


def test_module_entry_point(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text(K4E)
    proc = subprocess.run([sys.executable, "-m", "graphboot", "percolates", "--graph", str(f),
                           "--pattern", "K4"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "true\n"
