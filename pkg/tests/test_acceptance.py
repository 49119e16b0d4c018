"""Acceptance criteria 1-11, one test each.

The terminal summary prints one PASS/FAIL line per criterion.  Criteria 2,
8 and 9 run through the CLI with --threads 1; criterion 11 reruns the same
commands with --threads 4 and compares the bytes.
"""
import json
import math
import random
import time

import pytest

from graphboot.cli import run
from graphboot.cliques import al_scan, check_terminal, clique_process, k4_closure_via_cliques
from graphboot.engine import close_kr, infection_round, percolates
from graphboot.graph import SimpleGraph, erdos_renyi, is_connected
from graphboot.oracles import verify_2lminus3, verify_double_cover, verify_var_ext, verify_wsat_lower
from graphboot.patterns import build_gadget, complete_pattern, spanning_prob_bounds, wsat_construction
from graphboot.witness import Realization, check_extremal, check_tech, red_edge_trace

from conftest import random_graph

SEED = 1
_OUTPUTS: dict = {}


def _cli(tmp_path_factory, argv) -> str:
    out = tmp_path_factory.mktemp("cli") / "out"
    code = run(list(argv) + ["--output", str(out)])
    assert code == 0, f"{argv} exited with {code}"
    return out.read_text()


def _commands():
    cmds = {}
    for c in (0, 2):
        cmds[("er", c)] = ["er-limit", "--n", "5000", "--c", str(c), "--trials", "2000", "--seed", str(SEED)]
    cmds[("span", 3, 0.3)] = ["spanning-prob", "--l", "3", "--p", "0.3", "--trials", "100000", "--seed", str(SEED)]
    for l in (4, 5, 6):
        for p in (1 / (4 * l * l), 1 / (2 * l * l), 1 / (l * l)):
            cmds[("span", l, p)] = ["spanning-prob", "--l", str(l), "--p", repr(p),
                                    "--trials", "100000", "--seed", str(SEED)]
    for n in (1024, 2048, 4096):
        cmds[("pc", n)] = ["estimate-pc", "--n", str(n), "--pattern", "K4", "--trials", "400",
                           "--rtol", "0.05", "--seed", str(SEED)]
    return cmds


COMMANDS = _commands()


def _single_thread(tmp_path_factory, key) -> str:
    if key not in _OUTPUTS:
        _OUTPUTS[key] = _cli(tmp_path_factory, COMMANDS[key] + ["--threads", "1"])
    return _OUTPUTS[key]


@pytest.mark.criterion(1)
def test_criterion_1_k3_connectivity(record_property):
    t = time.perf_counter()
    rnd = random.Random(101)
    mismatches = 0
    for _ in range(500):
        n = rnd.randint(2, 64)
        g = erdos_renyi(n, min(1.0, rnd.uniform(0.2, 2.5) * math.log(n) / n), rnd.getrandbits(64))
        mismatches += percolates(g, 3) != is_connected(g)
    secs = time.perf_counter() - t
    record_property("detail", f"K_3 vs connectivity: {mismatches} mismatches in 500 graphs")
    assert mismatches == 0 and secs < 10


@pytest.mark.criterion(2)
def test_criterion_2_er_limit(tmp_path_factory, record_property):
    t = time.perf_counter()
    parts = []
    ok = True
    for c in (0, 2):
        doc = json.loads(_single_thread(tmp_path_factory, ("er", c)))
        target = math.exp(-math.exp(-c))
        parts.append(f"c={c}: {doc['point']:.4f} vs {target:.4f}")
        ok &= abs(doc["point"] - target) <= 0.05 and doc["limit"] == pytest.approx(target)
    secs = time.perf_counter() - t
    record_property("detail", "ER limit, n=5000, 2000 trials: " + "; ".join(parts))
    assert ok and secs < 300


@pytest.mark.criterion(3)
def test_criterion_3_weak_saturation(record_property):
    t = time.perf_counter()
    constructed = all(percolates(wsat_construction(n, 4), 4) for n in range(4, 21))
    reports = [verify_wsat_lower(n) for n in (4, 5, 6)]
    secs = time.perf_counter() - t
    counts = [r.cases_checked for r in reports]
    record_property("detail", f"constructions percolate for n=4..20: {constructed}; "
                              f"wsat-1 edge graphs checked {counts}, counterexamples: "
                              f"{sum(not r.passed for r in reports)}")
    assert constructed and all(r.passed for r in reports) and secs < 120


@pytest.mark.criterion(4)
def test_criterion_4_2lminus3(record_property):
    t = time.perf_counter()
    reports = [verify_2lminus3(l) for l in (4, 5, 6)]
    secs = time.perf_counter() - t
    record_property("detail", f"l=4,5,6 cases {[r.cases_checked for r in reports]}, "
                              f"counterexamples: {sum(not r.passed for r in reports)}")
    assert all(r.passed for r in reports) and secs < 300


@pytest.mark.criterion(5)
def test_criterion_5_witness_bounds(record_property):
    t = time.perf_counter()
    violations = 0
    witnesses = steps = 0
    for r in (4, 5):
        rnd = random.Random(500 + r)
        for _ in range(500):
            g = erdos_renyi(12, rnd.choice([0.25, 0.3, 0.35, 0.4, 0.5, 0.6]), rnd.getrandbits(64))
            real = Realization(g, r)
            for e in real.F:
                if e in real.trace.initial:
                    continue
                witnesses += 1
                violations += not check_extremal(real.witness(e), r)
                tr = red_edge_trace(g, r, e, realization=real)
                for k in range(1, tr.m + 1):
                    steps += 1
                    violations += not check_tech(tr, r, k)
                last = tr.component_stats[-1]
                violations += (last.components, last.excess) != (1, 0)
    secs = time.perf_counter() - t
    record_property("detail", f"{witnesses} witness sets, {steps} trace steps, {violations} violations")
    assert violations == 0 and witnesses > 0 and secs < 300


@pytest.mark.criterion(6)
def test_criterion_6_gadgets(record_property):
    t = time.perf_counter()
    bad = []
    for r in range(4, 8):
        h = complete_pattern(r)
        for d in range(1, 11):
            gad = build_gadget(h, d)
            if (gad.graph.n, gad.graph.m) != ((h.v - 2) * d + 2, (h.e - 2) * d + 1):
                bad.append(("counts", r, d))
            if infection_round(close_kr(gad.graph, r)[1], gad.root) != d:
                bad.append(("round", r, d))
    for d in range(1, 4):
        gad = build_gadget(complete_pattern(4), d)
        for e in gad.graph.edges():
            if close_kr(gad.graph.without_edges([e]), 4, trace=False)[0].has_edge(*gad.root):
                bad.append(("minimal", d, e))
    secs = time.perf_counter() - t
    record_property("detail", f"K_4..K_7, d<=10 and K_4 minimality d<=3: {len(bad)} failures")
    assert not bad and secs < 60


@pytest.mark.criterion(7)
def test_criterion_7_clique_process(record_property):
    t = time.perf_counter()
    rnd = random.Random(707)
    bad = percolating = 0
    for _ in range(1000):
        n = rnd.randint(1, 24)
        g = random_graph(rnd, n, rnd.choice([0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5]))
        coll = clique_process(g)
        ref = close_kr(g, 4, trace=False)[0]
        bad += k4_closure_via_cliques(g) != ref
        bad += bool(check_terminal(coll))
        if ref.is_complete() and n >= 2:
            percolating += 1
            for L in range(1, n + 1):
                hit = al_scan(coll, L)
                bad += hit is None or not L <= len(hit) <= 3 * L
    secs = time.perf_counter() - t
    record_property("detail", f"1000 graphs ({percolating} percolating): {bad} failures")
    assert bad == 0 and percolating > 0 and secs < 120


@pytest.mark.criterion(8)
def test_criterion_8_spanning_bracket(tmp_path_factory, record_property):
    t = time.perf_counter()
    cells = []
    ok = True
    for key in COMMANDS:
        if key[0] != "span":
            continue
        _, l, p = key
        doc = json.loads(_single_thread(tmp_path_factory, key))
        if l == 3:
            hit = doc["ci_low"] <= p**3 <= doc["ci_high"]
        else:
            lo, hi = spanning_prob_bounds(l, p)
            hit = doc["ci_low"] <= hi and doc["ci_high"] >= lo and "warning" not in doc
        ok &= hit
        cells.append(f"l={l} p={p:.4g} {doc['successes']}/{doc['trials']}{'' if hit else ' MISS'}")
    secs = time.perf_counter() - t
    record_property("detail", "; ".join(cells))
    assert ok and secs < 600


@pytest.mark.criterion(9)
def test_criterion_9_k4_threshold(tmp_path_factory, record_property):
    t = time.perf_counter()
    norm = []
    for n in (1024, 2048, 4096):
        doc = json.loads(_single_thread(tmp_path_factory, ("pc", n)))
        norm.append(doc["p_c_estimate"] * math.sqrt(n * math.log(n)))
    ratios = [b / a for a, b in zip(norm, norm[1:])]
    secs = time.perf_counter() - t
    record_property("detail", "p_c*sqrt(n ln n) at n=1024,2048,4096: "
                              + ", ".join(f"{x:.3f}" for x in norm)
                              + "; ratios " + ", ".join(f"{x:.3f}" for x in ratios))
    assert all(0.1 <= x <= 50 for x in norm)
    assert all(0.5 <= x <= 2 for x in ratios)
    assert secs < 1800


@pytest.mark.criterion(10)
def test_criterion_10_cover_and_var_ext(record_property):
    t = time.perf_counter()
    reports = [verify_double_cover(m, r) for m in (2, 3) for r in (4, 5, 6)]
    reports += [verify_var_ext(complete_pattern(4), d) for d in (1, 2)]
    reports.append(verify_var_ext(complete_pattern(5), 1))
    secs = time.perf_counter() - t
    record_property("detail", f"{len(reports)} oracle runs, {sum(r.cases_checked for r in reports)} cases, "
                              f"counterexamples: {sum(not r.passed for r in reports)}")
    assert all(r.passed for r in reports) and secs < 120


@pytest.mark.criterion(11)
def test_criterion_11_thread_determinism(tmp_path_factory, record_property):
    differ = []
    for key, argv in COMMANDS.items():
        one = _single_thread(tmp_path_factory, key)
        four = _cli(tmp_path_factory, argv + ["--threads", "4"])
        if one != four:
            differ.append(key)
    record_property("detail", f"{len(COMMANDS)} outputs of criteria 2, 8, 9 rerun with --threads 4: "
                              f"{len(differ)} differ")
    assert not differ
