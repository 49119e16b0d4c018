"""Pattern graphs H: density parameters, the rooted gadget chain H_d,
weak-saturation constructions and threshold bound calculators."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import DomainError, ParseError, SizeLimitError, UnsupportedPatternError
from .graph import Edge, SimpleGraph, is_connected

EXHAUSTIVE_MAX_V = 16


@dataclass(frozen=True)
class Completion:
    """``H - e`` with the endpoints of ``e`` marked as anchors."""

    edge: Edge
    template: SimpleGraph


@dataclass(frozen=True)
class PatternGraph:
    base: SimpleGraph
    name: str = ""
    completions: tuple[Completion, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.base.m == 0:
            raise UnsupportedPatternError("pattern must have at least one edge")
        if self.base.n < 2 or not is_connected(self.base):
            raise UnsupportedPatternError("pattern must be connected with at least 2 vertices")
        comps = tuple(Completion(e, self.base.without_edges([e])) for e in self.base.edges())
        object.__setattr__(self, "completions", comps)

    @property
    def v(self) -> int:
        return self.base.n

    @property
    def e(self) -> int:
        return self.base.m

    @property
    def clique_order(self) -> int | None:
        """``r`` if the pattern is ``K_r``, else None."""
        return self.v if self.base.is_complete() else None

    def __str__(self):
        return self.name or f"H(v={self.v}, e={self.e})"


def complete_pattern(r: int) -> PatternGraph:
    return PatternGraph(SimpleGraph.complete(r), f"K{r}")


def cycle_pattern(k: int) -> PatternGraph:
    if k < 3:
        raise DomainError("cycle needs k >= 3")
    return PatternGraph(SimpleGraph.from_edges(k, [(i, (i + 1) % k) for i in range(k)]), f"C{k}")


def bipartite_pattern(s: int, t: int) -> PatternGraph:
    if s < 1 or t < 1:
        raise DomainError("parts must be nonempty")
    edges = [(i, s + j) for i in range(s) for j in range(t)]
    return PatternGraph(SimpleGraph.from_edges(s + t, edges), f"K{s},{t}")


def double_dumbbell(r: int) -> PatternGraph:
    """Two disjoint copies of K_r joined by two disjoint edges."""
    if r < 2:
        raise DomainError("double-dumbbell needs r >= 2")
    edges = [(a, b) for a in range(r) for b in range(a + 1, r)]
    edges += [(r + a, r + b) for a in range(r) for b in range(a + 1, r)]
    edges += [(0, r), (1, r + 1)]
    return PatternGraph(SimpleGraph.from_edges(2 * r, edges), f"DD{r}")


_NAMES = [
    (re.compile(r"^K(\d+),(\d+)$"), lambda m: bipartite_pattern(int(m[1]), int(m[2]))),
    (re.compile(r"^K(\d+)$"), lambda m: complete_pattern(int(m[1]))),
    (re.compile(r"^C(\d+)$"), lambda m: cycle_pattern(int(m[1]))),
    (re.compile(r"^DD(\d+)$"), lambda m: double_dumbbell(int(m[1]))),
]


def named_pattern(name: str) -> PatternGraph:
    """``"K<r>"``, ``"C<k>"``, ``"K<s>,<t>"`` or ``"DD<r>"``."""
    key = name.strip()
    for rx, build in _NAMES:
        m = rx.match(key)
        if m:
            if key.startswith("K") and "," not in key and int(m[1]) < 2:
                raise ParseError(f"pattern {name!r} has no edges")
            return build(m)
    raise ParseError(f"unknown pattern name {name!r}")


def lambda_(h: PatternGraph) -> Fraction:
    """(e(H) - 2) / (v(H) - 2)."""
    if h.v < 3:
        raise DomainError("lambda needs v(H) >= 3")
    return Fraction(h.e - 2, h.v - 2)


def lambda_r(r: int) -> Fraction:
    """lambda(K_r) = (binom(r, 2) - 2) / (r - 2)."""
    if r < 3:
        raise DomainError("lambda(r) needs r >= 3")
    return Fraction(comb(r, 2) - 2, r - 2)


def _subset_edge_counts(g: SimpleGraph) -> np.ndarray:
    """e(G[S]) for every vertex subset S, indexed by bitmask."""
    n = g.n
    counts = np.zeros(1 << n, dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    for v in range(n):
        hi = 1 << v
        sel = masks[hi : 2 * hi]
        rest = sel ^ hi
        nbr = np.int64(g.adj[v] & (hi - 1))
        counts[hi : 2 * hi] = counts[rest] + _popcount(rest & nbr)
    return counts


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    c = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        c += (a & np.uint64(1)).astype(np.int64)
        a >>= np.uint64(1)
    return c


def max_sparse_ratio(h: PatternGraph) -> Fraction:
    """max (e(F) - 1) / (v(F) - 2) over proper subgraphs F of H with v(F) >= 3.

    For a fixed vertex set the ratio only grows with e(F), so it suffices to
    look at induced subgraphs, plus H minus one edge on the full vertex set.
    """
    n = h.v
    if n > EXHAUSTIVE_MAX_V:
        raise SizeLimitError(f"exhaustive subgraph search capped at v(H) <= {EXHAUSTIVE_MAX_V}")
    counts = _subset_edge_counts(h.base)
    sizes = _popcount(np.arange(1 << n, dtype=np.int64))
    full = (1 << n) - 1
    best = Fraction(h.e - 2, n - 2)
    sel = np.nonzero((sizes >= 3) & (np.arange(1 << n) != full))[0]
    if len(sel):
        num = counts[sel] - 1
        den = sizes[sel] - 2
        i = int(np.argmax(num / den))
        best = max(best, Fraction(int(num[i]), int(den[i])))
    return best


def is_balanced(h: PatternGraph) -> bool:
    if h.v < 4:
        raise DomainError("balancedness is defined for v(H) >= 4")
    if h.e < 2 * h.v - 2:
        return False
    return max_sparse_ratio(h) <= lambda_(h)


def lambda_star(h: PatternGraph) -> Fraction:
    """min over edges e of the densest-subgraph value max e(F)/v(F), F within H - e."""
    n = h.v
    if n > EXHAUSTIVE_MAX_V:
        raise SizeLimitError(f"exhaustive subgraph search capped at v(H) <= {EXHAUSTIVE_MAX_V}")
    counts = _subset_edge_counts(h.base)
    masks = np.arange(1 << n, dtype=np.int64)
    sizes = _popcount(masks)
    nonempty = masks[1:]
    best = None
    for e in h.base.edges():
        emask = (1 << e.u) | (1 << e.v)
        ecount = counts[1:] - ((nonempty & emask) == emask)
        ratio = ecount / sizes[1:]
        i = int(np.argmax(ratio))
        val = Fraction(int(ecount[i]), int(sizes[1:][i]))
        if best is None or val < best:
            best = val
    return best


@dataclass(frozen=True)
class GadgetResult:
    graph: SimpleGraph
    root: Edge
    d: int
    # vertex sets V_1..V_d of the copies, in construction order
    copies: tuple[frozenset[int], ...] = ()


def gadget_edge_pair(h: PatternGraph) -> tuple[Edge, Edge]:
    """Lexicographically first pair of vertex-disjoint edges of H."""
    es = h.base.edges()
    for i, a in enumerate(es):
        for b in es[i + 1 :]:
            if len({a.u, a.v, b.u, b.v}) == 4:
                return a, b
    raise UnsupportedPatternError(f"{h} has no two disjoint edges")


def build_gadget(h: PatternGraph, d: int) -> GadgetResult:
    """Chain of d copies of H glued along the alternating edge sequence e, e', e, ...

    Copy j+1 shares the endpoints of e_{j+1} with copy j; e_1 is removed
    from copy 1 and becomes the root, and every glued edge is removed.
    """
    if d < 1:
        raise DomainError("gadget depth must be >= 1")
    first, second = gadget_edge_pair(h)
    seq = [first if j % 2 == 1 else second for j in range(1, d + 2)]  # seq[j-1] = e_j
    nxt = 0
    maps = []
    for j in range(1, d + 1):
        phi = {}
        if j > 1:
            shared = seq[j - 1]
            prev = maps[-1]
            phi[shared.u] = prev[shared.u]
            phi[shared.v] = prev[shared.v]
        for x in range(h.v):
            if x not in phi:
                phi[x] = nxt
                nxt += 1
        maps.append(phi)
    edges = set()
    for j, phi in enumerate(maps, start=1):
        drop = {seq[j - 1]}
        if j < d:
            drop.add(seq[j])
        for e in h.base.edges():
            if e not in drop:
                edges.add(Edge.of(phi[e.u], phi[e.v]))
    g = SimpleGraph.from_edges(nxt, edges)
    root = Edge.of(maps[0][first.u], maps[0][first.v])
    copies = tuple(frozenset(phi.values()) for phi in maps)
    return GadgetResult(g, root, d, copies)


def wsat_bound(n: int, r: int) -> int:
    """binom(n, 2) - binom(n - r + 2, 2)."""
    if r < 3 or n < r:
        raise DomainError("wsat_bound needs n >= r >= 3")
    return comb(n, 2) - comb(n - r + 2, 2)


def wsat_construction(n: int, r: int) -> SimpleGraph:
    """All edges meeting the first r - 2 vertices."""
    if r < 3 or n < r:
        raise DomainError("wsat_construction needs n >= r >= 3")
    core = r - 2
    return SimpleGraph.from_edges(n, [(a, b) for a in range(core) for b in range(a + 1, n)])


def kr_threshold_window(n: int, r: int) -> tuple[float, float]:
    """Window bracketing p_c(n, K_r) from the asymptotic theorems (natural log).

    r = 4 uses the explicit constants 1/4 and 24; r >= 5 uses the
    n^{-1/lambda(r)} window with the unspecified constant set to 1.
    """
    if r < 4:
        raise DomainError("threshold window is for r >= 4")
    if n < 3:
        raise DomainError("threshold window needs n >= 3")
    ln = math.log(n)
    if r == 4:
        s = 1.0 / math.sqrt(n * ln)
        return min(1.0, 0.25 * s), min(1.0, 24.0 * s)
    base = n ** (-1.0 / float(lambda_r(r)))
    return min(1.0, base / ln), min(1.0, base * ln)


def spanning_prob_bounds(l: int, p: float) -> tuple[float, float]:
    """Lower and upper bounds on P(K_l internally spanned by G(n, p)), valid when p*l^2 <= 1."""
    if l < 3:
        raise DomainError("bounds hold for l >= 3")
    lp = l * p
    lower = (1.0 / (2.0 * math.e**2)) ** l * lp ** (2 * l - 3)
    upper = 64.0 * (math.e / 4.0) ** (2 * l) * lp ** (2 * l - 3)
    return min(1.0, max(0.0, lower)), min(1.0, max(0.0, upper))


def k4_lower_condition(n: int) -> float:
    """Largest p with p^2 n log n <= 16/e^5 (below it, K_4 percolation fails whp)."""
    return math.sqrt(16.0 / math.e**5 / (n * math.log(n)))


def k4_upper_condition(n: int) -> float:
    """Smallest p with p^2 n log n >= 24^2 (above it, K_4 percolation holds whp)."""
    return 24.0 / math.sqrt(n * math.log(n))


def load_pattern(spec: str) -> PatternGraph:
    """Named pattern, or a path to an edge-list file."""
    try:
        return named_pattern(spec)
    except ParseError:
        pass
    from .graph import graph_from_edge_list

    try:
        with open(spec) as fh:
            text = fh.read()
    except OSError:
        raise ParseError(f"{spec!r} is neither a pattern name nor a readable file") from None
    return PatternGraph(graph_from_edge_list(text), spec)
