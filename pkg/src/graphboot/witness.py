"""Witness sets and red-edge traces for K_r closures.

The infection order and the completed clique of every infected edge are
taken from ``close_kr``: seed edges first, then round by round in
lexicographic order, each edge charged to the lexicographically least
clique that completed it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .engine import close_kr
from .errors import DomainError, NotInfectedError, TrivialWitnessError
from .graph import Edge, SimpleGraph, edge_vertex_count
from .patterns import lambda_r


@dataclass(frozen=True)
class WitnessSet:
    target: Edge
    edges: frozenset
    vertex_count: int
    edge_count: int

    def to_dict(self) -> dict:
        return {
            "target": list(self.target),
            "edges": [list(e) for e in sorted(self.edges)],
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
        }


def _clique_edges(vs) -> list[Edge]:
    return [Edge(a, b) for a, b in combinations(sorted(vs), 2)]


class Realization:
    """One run of the witness-set assignment over the whole closure."""

    def __init__(self, g: SimpleGraph, r: int):
        if r < 4:
            raise DomainError("witness sets are defined for r >= 4")
        self.g = g
        self.r = r
        self.closure, self.trace = close_kr(g, r)
        self.order = self.trace.order()
        self.position = {e: i for i, e in enumerate(self.order)}
        self.clique = {}
        self.F = {e: frozenset([e]) for e in self.trace.initial}
        for _, e, w in self.trace.events():
            self.clique[e] = w
            acc = set()
            for f in _clique_edges(w):
                if f != e:
                    acc |= self.F[f]
            self.F[e] = frozenset(acc)

    def _check(self, e) -> Edge:
        e = Edge.of(*e)
        if e not in self.F:
            raise NotInfectedError(f"edge {tuple(e)} is not in the closure")
        return e

    def witness(self, e) -> WitnessSet:
        e = self._check(e)
        F = self.F[e]
        return WitnessSet(e, F, edge_vertex_count(F), len(F))


def witness_set(g: SimpleGraph, r: int, e, realization: Realization | None = None) -> WitnessSet:
    real = realization or Realization(g, r)
    return real.witness(e)


@dataclass(frozen=True)
class StepStats:
    t: int
    b_vertices: int
    b_edges: int
    components: int  # ell_t
    excess: int  # k_t

    def to_dict(self) -> dict:
        return {"t": self.t, "v_B": self.b_vertices, "e_B": self.b_edges,
                "ell": self.components, "k": self.excess}


@dataclass(frozen=True)
class RedEdgeTrace:
    target: Edge
    r: int
    cliques: tuple[tuple[int, ...], ...]
    red: tuple[Edge, ...]
    b_graphs: tuple[frozenset, ...]
    component_stats: tuple[StepStats, ...]

    @property
    def m(self) -> int:
        return len(self.red)

    def to_dict(self) -> dict:
        return {
            "target": list(self.target),
            "r": self.r,
            "steps": [
                {
                    "clique": list(k),
                    "red": list(e),
                    "B": [list(f) for f in sorted(b)],
                    **s.to_dict(),
                }
                for k, e, b, s in zip(self.cliques, self.red, self.b_graphs, self.component_stats)
            ],
        }


def _components(cliques) -> list[set]:
    """Vertex sets of the components of the 'share two vertices' graph on cliques."""
    k = len(cliques)
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    sets = [set(c) for c in cliques]
    for i in range(k):
        for j in range(i):
            if len(sets[i] & sets[j]) >= 2:
                parent[find(i)] = find(j)
    comps: dict = {}
    for i in range(k):
        comps.setdefault(find(i), set()).update(sets[i])
    return list(comps.values())


def red_edge_trace(g: SimpleGraph, r: int, e, realization: Realization | None = None) -> RedEdgeTrace:
    real = realization or Realization(g, r)
    e = real._check(e)
    if e in real.trace.initial:
        raise TrivialWitnessError(f"edge {tuple(e)} is a seed edge")
    Fe = real.F[e]
    upto = real.order[: real.position[e] + 1]
    red = [f for f in upto if f not in real.trace.initial and real.F[f] <= Fe]
    cliques = [real.clique[f] for f in red]
    b_graphs = []
    stats = []
    union: set = set()
    for t in range(1, len(red) + 1):
        union.update(_clique_edges(cliques[t - 1]))
        b = frozenset(union.difference(red[:t]))
        comps = _components(cliques[:t])
        vb = set()
        for f in b:
            vb.update(f)
        k = sum(sum(1 for c in comps if v in c) - 1 for v in vb)
        b_graphs.append(b)
        stats.append(StepStats(t, len(vb), len(b), len(comps), k))
    return RedEdgeTrace(e, r, tuple(cliques), tuple(red), tuple(b_graphs), tuple(stats))


def check_extremal(w: WitnessSet, r: int) -> bool:
    """e(F) >= lambda(r) (v(F) - 2) + 1, exactly."""
    return w.edge_count >= lambda_r(r) * (w.vertex_count - 2) + 1


def tech_bound(r: int, v_b: int, k: int, ell: int) -> Fraction:
    return lambda_r(r) * (v_b + k - ell * r) + ell * (comb(r, 2) - 1)


def check_tech(trace: RedEdgeTrace, r: int, t: int) -> bool:
    if not 1 <= t <= trace.m:
        raise DomainError(f"step {t} outside 1..{trace.m}")
    s = trace.component_stats[t - 1]
    return s.b_edges >= tech_bound(r, s.b_vertices, s.excess, s.components)


def witness_scale_scan(g: SimpleGraph, r: int, e, L: int, realization: Realization | None = None,
                       strict: bool = True) -> Edge | None:
    """Edge f, earliest in the infection order, with F(f) inside F(e) and L <= e(F(f)) <= C(r,2) L.

    With ``strict`` the search only runs when e(F(e)) >= C(r,2) L; otherwise
    e(F(e)) >= L suffices.
    """
    if L < 1:
        raise DomainError("L must be at least 1")
    real = realization or Realization(g, r)
    e = real._check(e)
    Fe = real.F[e]
    cap = comb(r, 2) * L
    if len(Fe) < (cap if strict else L):
        return None
    for f in real.order[: real.position[e] + 1]:
        Ff = real.F[f]
        if L <= len(Ff) <= cap and Ff <= Fe:
            return f
    return None


def max_witness_growth(real: Realization) -> list[int]:
    """Running maximum of e(F(f)) after each infection, starting from the seeds."""
    cur = 1 if real.trace.initial else 0
    out = [cur]
    for _, e, _ in real.trace.events():
        cur = max(cur, len(real.F[e]))
        out.append(cur)
    return out
