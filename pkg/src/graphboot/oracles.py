"""Brute-force checks of the combinatorial lemmas at small sizes.

Every exhaustive oracle enumerates labelled objects without isomorphism
reduction, so ``cases_checked`` is an exact count.  The graph oracles close
with ``close_generic``, independently of the K_r fast path.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb

import numpy as np

from . import rng
from .engine import close_generic, percolates_edges
from .errors import DomainError, SizeLimitError, UnsupportedPatternError
from .graph import SimpleGraph, iter_bits
from .patterns import PatternGraph, build_gadget, complete_pattern, is_balanced, lambda_, lambda_r, wsat_bound


@dataclass
class OracleReport:
    lemma: str
    parameter_space: str
    cases_checked: int = 0
    counterexample: dict | None = None
    equality_cases: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def to_dict(self) -> dict:
        out = {
            "lemma": self.lemma,
            "parameter_space": self.parameter_space,
            "cases_checked": self.cases_checked,
            "counterexample": self.counterexample,
            "equality_cases": self.equality_cases,
            "passed": self.passed,
        }
        out.update(self.extra)
        return out


def _map(fn, tasks, threads):
    if threads <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, *zip(*tasks)))


def _percolating_subsets(n, r, sizes, first):
    """Scan edge subsets of K_n whose least edge index is ``first``.

    Returns (cases, first counterexample edge list or None).
    """
    all_edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rest = all_edges[first + 1 :]
    h = complete_pattern(r)
    cases = 0
    for k in sizes:
        if k == 0:
            continue
        for tail in combinations(rest, k - 1):
            es = (all_edges[first],) + tail
            cases += 1
            g = SimpleGraph.from_edges(n, es)
            if close_generic(g, h, trace=False)[0].is_complete():
                return cases, [list(e) for e in es]
    return cases, None


def _merge_scan(lemma, space, n, r, sizes, threads):
    report = OracleReport(lemma, space)
    total = comb(n, 2)
    if 0 in sizes:
        report.cases_checked += 1
        if n <= 1:
            report.counterexample = {"n": n, "edges": []}
    tasks = [(n, r, sizes, i) for i in range(total)]
    for cases, ce in _map(_percolating_subsets, tasks, threads):
        report.cases_checked += cases
        if ce is not None and report.counterexample is None:
            report.counterexample = {"n": n, "edges": ce}
    return report


def verify_wsat_lower(n: int, r: int = 4, threads: int = 1) -> OracleReport:
    """No graph with wsat_bound(n, r) - 1 edges percolates."""
    if n > 6 or r > 6:
        raise SizeLimitError("exhaustive weak-saturation check is capped at n <= 6")
    k = wsat_bound(n, r) - 1
    return _merge_scan(
        "wsat-lower",
        f"all graphs on {n} labelled vertices with {k} edges, K_{r} process",
        n, r, (k,), threads,
    )


def verify_2lminus3(l: int, threads: int = 1) -> OracleReport:
    """No graph on l vertices with at most 2l - 4 edges has K_4-closure K_l."""
    if l < 4:
        raise DomainError("l must be at least 4")
    if l > 7:
        raise SizeLimitError("exhaustive check is capped at l <= 7")
    return _merge_scan(
        "2lminus3",
        f"all graphs on {l} labelled vertices with at most {2 * l - 4} edges, K_4 process",
        l, 4, tuple(range(2 * l - 3)), threads,
    )


def double_cover_sides(family, m: int, r: int) -> tuple[int, Fraction]:
    """(number of intersecting pairs, lambda(r) (sum |A| - 2m) + m) for a family of bitmasks."""
    lhs = sum(1 for a, b in combinations(family, 2) if a & b)
    rhs = lambda_r(r) * (sum(a.bit_count() for a in family) - 2 * m) + m
    return lhs, rhs


def verify_double_cover(m: int, r: int) -> OracleReport:
    if not (2 <= m <= 4 and 4 <= r <= 7):
        raise SizeLimitError("double-cover oracle covers 2 <= m <= 4, 4 <= r <= 7")
    report = OracleReport(
        "double-cover",
        f"multi-families of at most {r} nonempty subsets of [{m}] covering each element twice",
    )
    subsets = range(1, 1 << m)
    for size in range(2, r + 1):
        for fam in combinations_with_replacement(subsets, size):
            cover = [0] * m
            for a in fam:
                for x in iter_bits(a):
                    cover[x] += 1
            if min(cover) < 2:
                continue
            report.cases_checked += 1
            lhs, rhs = double_cover_sides(fam, m, r)
            if lhs == rhs:
                report.equality_cases += 1
            if lhs > rhs and report.counterexample is None:
                report.counterexample = {
                    "family": [sorted(x + 1 for x in iter_bits(a)) for a in fam],
                    "lhs": lhs,
                    "rhs": str(rhs),
                }
    return report


def verify_var_ext(h: PatternGraph, d: int) -> OracleReport:
    """Every proper subgraph F of H_d containing the root endpoints has e(F) <= (v(F) - 2) lambda(H).

    The inequality depends on F only through v(F) and e(F), so for each
    vertex set S the edge subsets of the induced graph are covered class by
    class (one check per edge count, weighted by the number of subsets).
    """
    if h.v < 4 or not is_balanced(h):
        raise UnsupportedPatternError(f"{h} is not balanced")
    gad = build_gadget(h, d)
    hd = gad.graph
    if hd.n > 12:
        raise SizeLimitError(f"v(H_d) = {hd.n} exceeds the exhaustive cap of 12")
    lam = lambda_(h)
    a, b = gad.root
    report = OracleReport(
        "var-ext",
        f"subgraphs of H_d for {h}, d={d} (v={hd.n}, e={hd.m}) containing the root endpoints",
    )
    others = [v for v in range(hd.n) if v not in (a, b)]
    full = (1 << hd.n) - 1
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            s = (1 << a) | (1 << b)
            for v in extra:
                s |= 1 << v
            es = hd.induced(s).m
            bound = (s.bit_count() - 2) * lam
            for ef in range(es + 1):
                count = comb(es, ef)
                if s == full and ef == es:
                    count -= 1  # F = H_d itself is excluded
                if count == 0:
                    continue
                report.cases_checked += count
                if ef == bound:
                    report.equality_cases += count
                if ef > bound and report.counterexample is None:
                    report.counterexample = {
                        "vertices": sorted(iter_bits(s)),
                        "edge_count": ef,
                        "bound": str(bound),
                    }
    return report


DEXT_DENSITIES = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)


def verify_dext(r_size: int, s_size: int, trials: int, seed: int) -> OracleReport:
    """Randomised check: if R is spanned by G plus a complete S, then G has >= 2(v(R) - v(S)) edges outside S."""
    if not 3 <= s_size < r_size <= 12:
        raise DomainError("need 3 <= S_size < R_size <= 12")
    if trials < 1:
        raise DomainError("trials must be positive")
    report = OracleReport(
        "dext",
        f"{trials} random edge sets on R={r_size} vertices with a planted complete S of {s_size}",
    )
    pairs = [(a, b) for a in range(r_size) for b in range(a + 1, r_size)]
    outside = np.array([b >= s_size for a, b in pairs])
    us = np.array([a for a, _ in pairs], dtype=np.int64)
    vs = np.array([b for _, b in pairs], dtype=np.int64)
    need = 2 * (r_size - s_size)
    spanned = 0
    for i in range(trials):
        ts = rng.trial_seed(seed, i)
        u = rng.uniforms(ts, len(pairs) + 1)
        p = DEXT_DENSITIES[int(u[0] * len(DEXT_DENSITIES))]
        keep = (u[1:] < p) & outside
        count = int(keep.sum())
        mask = keep | ~outside
        report.cases_checked += 1
        if not percolates_edges(r_size, us[mask], vs[mask], 4):
            continue
        spanned += 1
        if count == need:
            report.equality_cases += 1
        if count < need and report.counterexample is None:
            report.counterexample = {
                "trial": i,
                "edges_outside_S": [list(pairs[j]) for j in np.nonzero(keep)[0].tolist()],
                "required": need,
            }
    report.extra["spanning_instances"] = spanned
    return report
