"""H-bootstrap closure: round-synchronous engines with infection traces.

``close_generic`` is the reference engine: every round it rescans all
uninfected pairs against every completion template of H.  ``close_kr`` is
the K_r fast path with a dirty-pair work queue; it produces the same rounds
and the same witnesses.  ``percolates`` picks the cheapest correct method.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from . import _kernels
from .errors import DomainError, SizeLimitError
from .graph import Edge, SimpleGraph, first_clique_adj, iter_bits
from .patterns import PatternGraph, complete_pattern

GENERIC_MAX_V = 8
GENERIC_MAX_N = 4096
KR_MAX_N = 4096

Event = tuple[Edge, tuple[int, ...]]


@dataclass(frozen=True)
class InfectionTrace:
    """Seed edges plus, per round, the edges infected and the copy of H completed.

    A witness is the tuple ``(phi(0), ..., phi(v(H)-1))`` of host vertices
    that the completed copy of H occupies.
    """

    n: int
    initial: frozenset
    rounds: tuple[tuple[Event, ...], ...]

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)

    def events(self) -> Iterator[tuple[int, Edge, tuple[int, ...]]]:
        for t, evs in enumerate(self.rounds, start=1):
            for e, w in evs:
                yield t, e, w

    def order(self) -> list[Edge]:
        """Canonical infection order: seed edges, then rounds, lexicographic within each."""
        out = sorted(self.initial)
        for evs in self.rounds:
            out.extend(e for e, _ in evs)
        return out

    def round_of(self) -> dict:
        out = {e: 0 for e in self.initial}
        for t, e, _ in self.events():
            out[e] = t
        return out

    def witness_of(self, e) -> tuple[int, ...] | None:
        e = Edge.of(*e)
        for _, f, w in self.events():
            if f == e:
                return w
        return None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "initial": [list(e) for e in sorted(self.initial)],
            "rounds": [
                [{"edge": list(e), "witness": list(w)} for e, w in evs] for evs in self.rounds
            ],
        }


def infection_round(trace: InfectionTrace, e) -> int | None:
    """0 for a seed edge, t if infected in round t, None if never infected."""
    e = Edge.of(*e)
    if e in trace.initial:
        return 0
    for t, f, _ in trace.events():
        if f == e:
            return t
    return None


def _first_embedding(adj, hv, tadj, a, b, x, y):
    """Least image tuple of the template with anchors a -> x, b -> y, or None.

    Pattern vertices are assigned in index order, host candidates in
    increasing order, so the first complete assignment is the least one.
    """
    phi = [-1] * hv
    phi[a] = x
    phi[b] = y
    used = (1 << x) | (1 << y)
    order = [i for i in range(hv) if i != a and i != b]
    full = (1 << len(adj)) - 1

    def extend(pos, used):
        if pos == len(order):
            return True
        i = order[pos]
        cand = full & ~used
        for j in iter_bits(tadj[i]):
            if phi[j] >= 0:
                cand &= adj[phi[j]]
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            phi[i] = w
            if extend(pos + 1, used | low):
                return True
        phi[i] = -1
        return False

    if extend(0, used):
        return tuple(phi)
    return None


def _completion_witness(adj, h: PatternGraph, u, v, first_only=False):
    best = None
    hv = h.v
    for comp in h.completions:
        a, b = comp.edge
        tadj = comp.template.adj
        for x, y in ((u, v), (v, u)):
            phi = _first_embedding(adj, hv, tadj, a, b, x, y)
            if phi is not None:
                if first_only:
                    return phi
                if best is None or phi < best:
                    best = phi
    return best


def _as_pattern(h) -> PatternGraph:
    if isinstance(h, PatternGraph):
        return h
    if isinstance(h, (int, np.integer)):
        return complete_pattern(int(h))
    raise DomainError(f"expected a pattern or a clique order, got {h!r}")


def close_generic(g: SimpleGraph, h, trace: bool = True):
    """Closure of ``g`` under pattern ``h`` by full rescans (the reference engine).

    Returns ``(closure, InfectionTrace)``; with ``trace=False`` the second
    item is None and witness minimisation is skipped.
    """
    h = _as_pattern(h)
    if h.v > GENERIC_MAX_V:
        raise SizeLimitError(f"generic engine supports v(H) <= {GENERIC_MAX_V}")
    if g.n > GENERIC_MAX_N:
        raise SizeLimitError(f"generic engine supports n <= {GENERIC_MAX_N}")
    n = g.n
    adj = list(g.adj)
    rounds = []
    if n >= h.v:
        while True:
            events = []
            for u in range(n):
                missing = ((1 << n) - 1) & ~adj[u] & ~((1 << (u + 1)) - 1)
                for v in iter_bits(missing):
                    w = _completion_witness(adj, h, u, v, first_only=not trace)
                    if w is not None:
                        events.append((Edge(u, v), w))
            if not events:
                break
            for e, _ in events:
                adj[e.u] |= 1 << e.v
                adj[e.v] |= 1 << e.u
            rounds.append(tuple(events))
    closure = SimpleGraph(n, adj)
    if not trace:
        return closure, None
    return closure, InfectionTrace(n, g.edge_set(), tuple(rounds))


def _dirty_pairs(adj, events, r) -> set:
    """Pairs that can gain a new copy of K_r minus that pair through the new edges."""
    out = set()
    for e, _ in events:
        a, b = e
        na, nb = adj[a], adj[b]
        for y in iter_bits(nb & ~na & ~(1 << a)):
            out.add((a, y) if a < y else (y, a))
        for y in iter_bits(na & ~nb & ~(1 << b)):
            out.add((b, y) if b < y else (y, b))
        if r >= 4:
            # the new edge may sit inside the common neighbourhood of the pair
            common = na & nb
            for x in iter_bits(common):
                for y in iter_bits(common & ~adj[x] & ~((1 << (x + 1)) - 1)):
                    out.add((x, y))
    return out


def close_kr(g: SimpleGraph, r: int, trace: bool = True):
    """K_r closure: a pair uv is infected once its common neighbourhood holds an (r-2)-clique.

    Witness: the sorted vertex set of the completed clique, using the
    lexicographically least (r-2)-clique of the common neighbourhood.
    """
    if r < 3:
        raise DomainError("close_kr needs r >= 3")
    if g.n > KR_MAX_N:
        raise SizeLimitError(f"close_kr keeps dense bitsets; n <= {KR_MAX_N}")
    n = g.n
    adj = list(g.adj)
    need = r - 2
    rounds = []
    pending = sorted(g.non_edges()) if n >= r else []
    while pending:
        events = []
        for u, v in pending:
            if adj[u] >> v & 1:
                continue
            s = first_clique_adj(adj, adj[u] & adj[v], need)
            if s is not None:
                events.append((Edge(u, v), tuple(sorted(s + (u, v)))))
        if not events:
            break
        for e, _ in events:
            adj[e.u] |= 1 << e.v
            adj[e.v] |= 1 << e.u
        rounds.append(tuple(events))
        pending = sorted(p for p in _dirty_pairs(adj, events, r) if not adj[p[0]] >> p[1] & 1)
    closure = SimpleGraph(n, adj)
    if not trace:
        return closure, None
    return closure, InfectionTrace(n, g.edge_set(), tuple(rounds))


def edge_arrays(g: SimpleGraph) -> tuple[np.ndarray, np.ndarray]:
    es = g.edges()
    us = np.fromiter((e.u for e in es), dtype=np.int64, count=len(es))
    vs = np.fromiter((e.v for e in es), dtype=np.int64, count=len(es))
    return us, vs


def k4_classes(n: int, us: np.ndarray, vs: np.ndarray) -> list[frozenset]:
    """Vertex sets of the terminal cliques of the K_4 merge process (compiled kernel)."""
    labels, _ = _kernels.k4_clique_classes(n, us, vs, False)
    groups: dict = {}
    for lab, a, b in zip(labels.tolist(), us.tolist(), vs.tolist()):
        s = groups.setdefault(lab, set())
        s.add(a)
        s.add(b)
    return [frozenset(s) for s in groups.values()]


def percolates_edges(n: int, us: np.ndarray, vs: np.ndarray, h) -> bool:
    """Percolation of the graph given by endpoint arrays; K_3 and K_4 never build bitsets."""
    r = h if isinstance(h, (int, np.integer)) else _as_pattern(h).clique_order
    if n <= 1:
        return True
    if r == 3:
        return _kernels.components(n, us, vs) == 1
    if r == 4:
        _, full = _kernels.k4_clique_classes(n, us, vs, True)
        return bool(full)
    g = SimpleGraph.from_edges(n, zip(us.tolist(), vs.tolist()))
    return percolates(g, h)


Patternish = Union[PatternGraph, int]


def percolates(g: SimpleGraph, h: Patternish) -> bool:
    """Whether the closure of ``g`` is all of K_n."""
    n = g.n
    if g.is_complete():
        return True
    pat = _as_pattern(h)
    r = pat.clique_order
    if r is not None and r in (3, 4):
        return percolates_edges(n, *edge_arrays(g), r)
    if r is not None and r >= 3:
        closure, _ = close_kr(g, r, trace=False)
    else:
        closure, _ = close_generic(g, pat, trace=False)
    return closure.is_complete()


def closure(g: SimpleGraph, h: Patternish) -> SimpleGraph:
    pat = _as_pattern(h)
    r = pat.clique_order
    if r is not None and r >= 3:
        return close_kr(g, r, trace=False)[0]
    return close_generic(g, pat, trace=False)[0]
