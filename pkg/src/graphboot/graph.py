"""Dense labelled graphs on ``0..n-1`` with Python-int bitset adjacency."""
from __future__ import annotations

import re
from typing import Iterable, Iterator, NamedTuple

from .errors import DomainError, InvalidInputError, ParseError
from . import rng


class Edge(NamedTuple):
    u: int
    v: int

    @classmethod
    def of(cls, a: int, b: int) -> "Edge":
        if a == b:
            raise DomainError(f"loop edge ({a}, {a})")
        return cls(a, b) if a < b else cls(b, a)


def iter_bits(x: int) -> Iterator[int]:
    """Indices of the set bits of ``x``, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits(vertices: Iterable[int]) -> int:
    s = 0
    for v in vertices:
        s |= 1 << v
    return s


class SimpleGraph:
    """Undirected simple graph; immutable after construction.

    ``adj[v]`` is an int whose bit ``u`` is set iff ``uv`` is an edge.
    """

    __slots__ = ("n", "adj", "m", "_hash")

    def __init__(self, n: int, adj: Iterable[int]):
        self.n = n
        self.adj = tuple(adj)
        if len(self.adj) != n:
            raise InvalidInputError("adjacency length does not match n")
        self.m = sum(a.bit_count() for a in self.adj) // 2
        self._hash = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj = [0] * n
        for a, b in edges:
            if a == b:
                raise InvalidInputError(f"loop edge ({a}, {a})")
            if not (0 <= a < n and 0 <= b < n):
                raise InvalidInputError(f"edge ({a}, {b}) out of range for n={n}")
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return cls(n, adj)

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[Edge]:
        """All edges in lexicographic order."""
        out = []
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                out.append(Edge(u, u + 1 + v))
        return out

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def non_edges(self) -> list[Edge]:
        full = (1 << self.n) - 1
        out = []
        for u in range(self.n):
            missing = (full ^ self.adj[u]) >> (u + 1)
            for v in iter_bits(missing):
                out.append(Edge(u, u + 1 + v))
        return out

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def is_subgraph_of(self, other: "SimpleGraph") -> bool:
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.adj, other.adj))

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj = list(self.adj)
        for a, b in edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return SimpleGraph(self.n, adj)

    def without_edges(self, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj = list(self.adj)
        for a, b in edges:
            adj[a] &= ~(1 << b)
            adj[b] &= ~(1 << a)
        return SimpleGraph(self.n, adj)

    def induced(self, vertex_bits: int) -> "SimpleGraph":
        """Same vertex labels, keeping only edges inside ``vertex_bits``."""
        return SimpleGraph(
            self.n,
            [(a & vertex_bits) if vertex_bits >> v & 1 else 0 for v, a in enumerate(self.adj)],
        )

    def __eq__(self, other):
        return isinstance(other, SimpleGraph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, m={self.m})"


def edge_vertex_count(edges: Iterable[tuple[int, int]]) -> int:
    """Number of distinct endpoints, i.e. v(F) for an edge set F."""
    seen = set()
    for a, b in edges:
        seen.add(a)
        seen.add(b)
    return len(seen)


_HEADER = re.compile(r"^n\s*=\s*(\d+)$")


def graph_from_edge_list(text: str) -> SimpleGraph:
    """Parse the edge-list format: ``u v`` per line, ``#`` comments, optional ``n=<k>`` header."""
    n_fixed = None
    edges = []
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if first:
            first = False
            h = _HEADER.match(line)
            if h:
                n_fixed = int(h.group(1))
                continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {raw.strip()!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex label in {raw.strip()!r}", lineno) from None
        if a < 0 or b < 0:
            raise ParseError("negative vertex label", lineno)
        if a == b:
            raise InvalidInputError(f"line {lineno}: loop edge '{a} {b}'")
        edges.append((a, b))
    top = 1 + max((max(e) for e in edges), default=-1)
    if n_fixed is None:
        n = top
    else:
        n = n_fixed
        if top > n:
            raise InvalidInputError(f"vertex label {top - 1} exceeds header n={n}")
    return SimpleGraph.from_edges(n, edges)


def to_edge_list(g: SimpleGraph) -> str:
    lines = [f"n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def erdos_renyi(n: int, p: float, seed: int) -> SimpleGraph:
    """``G(n, p)``: each of the binom(n, 2) edges kept independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    if n < 1:
        raise DomainError("n must be at least 1")
    us, vs = rng.sample_edges(n, p, seed)
    return SimpleGraph.from_edges(n, zip(us.tolist(), vs.tolist()))


def is_connected(g: SimpleGraph) -> bool:
    if g.n <= 1:
        return True
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == (1 << g.n) - 1


def common_neighbors(g: SimpleGraph, u: int, v: int) -> int:
    if u == v:
        raise DomainError("common_neighbors needs two distinct vertices")
    return g.adj[u] & g.adj[v]


def has_clique_in(g: SimpleGraph, s: int, k: int) -> bool:
    """Whether the subgraph induced on vertex bitset ``s`` contains a ``k``-clique."""
    return first_clique_in(g, s, k) is not None


def first_clique_in(g: SimpleGraph, s: int, k: int) -> tuple[int, ...] | None:
    """Lexicographically smallest ``k``-clique inside ``s`` (as a sorted tuple), or None."""
    return first_clique_adj(g.adj, s, k)


def first_clique_adj(adj, s: int, k: int) -> tuple[int, ...] | None:
    """Same as ``first_clique_in`` over a raw adjacency sequence."""
    if k <= 0:
        return ()

    def search(cand: int, need: int) -> tuple[int, ...] | None:
        if need == 1:
            return ((cand & -cand).bit_length() - 1,) if cand else None
        while cand.bit_count() >= need:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            rest = search(cand & adj[v], need - 1)
            if rest is not None:
                return (v,) + rest
        return None

    return search(s, k)
