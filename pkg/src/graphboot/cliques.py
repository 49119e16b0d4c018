"""K_4 clique merge process with full history.

Each item is a pair (R, A): a vertex set R and the seed edges A whose K_4
closure is the complete graph on R.  Items start as single seed edges.  Two
items sharing at least two vertices merge, as do three items forming a
triangle (pairwise meeting in three distinct single vertices); the merged
item spans the union of the vertex sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .graph import SimpleGraph, bits, iter_bits


@dataclass(frozen=True)
class MergeEvent:
    kind: str  # "pair" or "triple"
    parts: tuple[int, ...]  # clique ids merged
    result: int  # id of the new clique
    size: int


@dataclass
class CliqueCollection:
    """Terminal items plus every clique that ever existed.

    ``cliques[i]`` is ``(R, A)`` for clique id ``i``; ids below ``e(g)`` are
    the seed edges in lexicographic order.  ``items`` lists terminal ids.
    """

    n: int
    m: int = 0
    cliques: list = field(default_factory=list)
    items: list = field(default_factory=list)
    history: list = field(default_factory=list)

    def terminal(self) -> list[tuple[frozenset, frozenset]]:
        return [self.cliques[i] for i in self.items]


def clique_process(g: SimpleGraph) -> CliqueCollection:
    coll = CliqueCollection(g.n, g.m)
    verts = {}  # live id -> vertex bitset
    at = [set() for _ in range(g.n)]  # vertex -> live ids
    for i, e in enumerate(g.edges()):
        coll.cliques.append((frozenset(e), frozenset([e])))
        verts[i] = bits(e)
        at[e.u].add(i)
        at[e.v].add(i)

    def merge(kind, parts):
        r = 0
        a = frozenset()
        for i in parts:
            r |= verts.pop(i)
            a |= coll.cliques[i][1]
            for v in coll.cliques[i][0]:
                at[v].discard(i)
        new = len(coll.cliques)
        coll.cliques.append((frozenset(iter_bits(r)), a))
        verts[new] = r
        for v in iter_bits(r):
            at[v].add(new)
        coll.history.append(MergeEvent(kind, tuple(parts), new, r.bit_count()))

    def find_pair():
        for i in sorted(verts):
            ri = verts[i]
            seen = set()
            for v in iter_bits(ri):
                for j in at[v]:
                    if j != i and j not in seen:
                        seen.add(j)
                        if (ri & verts[j]).bit_count() >= 2:
                            return (i, j)
        return None

    def find_triple():
        for i in sorted(verts):
            ri = verts[i]
            for u in iter_bits(ri):
                for j in sorted(at[u]):
                    if j == i:
                        continue
                    rj = verts[j]
                    for v in iter_bits(rj & ~ri):
                        for k in sorted(at[v]):
                            if k == i or k == j:
                                continue
                            # k meets i at a vertex other than u
                            if verts[k] & ri & ~(1 << u):
                                return (i, j, k)
        return None

    while True:
        pair = find_pair()
        if pair is not None:
            merge("pair", pair)
            continue
        triple = find_triple()
        if triple is None:
            break
        merge("triple", triple)
    coll.items = sorted(verts)
    return coll


def k4_closure_via_cliques(g: SimpleGraph) -> SimpleGraph:
    """Union of the complete graphs on the terminal vertex sets."""
    coll = clique_process(g)
    adj = list(g.adj)
    for r, _ in coll.terminal():
        b = bits(r)
        for v in r:
            adj[v] |= b & ~(1 << v)
    return SimpleGraph(g.n, adj)


def internally_spanned_sizes(coll: CliqueCollection) -> list[int]:
    """v(R) for every clique ever present, seed edges included."""
    return [len(r) for r, _ in coll.cliques]


def al_scan(coll: CliqueCollection, L: int) -> frozenset | None:
    """First recorded clique with L <= v(R) <= 3L, or None."""
    if L > coll.n:
        return None
    for r, _ in coll.cliques:
        if L <= len(r) <= 3 * L:
            return r
    return None


def check_terminal(coll: CliqueCollection) -> list[str]:
    """Violations of the terminal-state properties (empty when all hold)."""
    problems = []
    items = coll.terminal()
    seen = set()
    total = 0
    for r, a in items:
        total += len(a)
        if seen & a:
            problems.append("seed sets overlap")
        seen |= a
    if total != coll.m:
        problems.append(f"seed sets cover {total} of {coll.m} edges")
    for (r1, _), (r2, _) in combinations(items, 2):
        if len(r1 & r2) >= 2:
            problems.append(f"cliques {sorted(r1)} and {sorted(r2)} share two vertices")
    for (r1, _), (r2, _), (r3, _) in combinations(items, 3):
        x, y, z = r1 & r2, r2 & r3, r3 & r1
        if x and y and z and len(x | y | z) == 3:
            problems.append(f"triangle {sorted(r1)} {sorted(r2)} {sorted(r3)}")
    return problems
