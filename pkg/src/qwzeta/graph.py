"""Finite multigraphs and their symmetric digraphs.

Edges are unordered vertex pairs kept in input order; loops and repeated
edges are allowed.  Edge ``k = {u, v}`` produces arc ``2k = (u, v)`` and arc
``2k + 1 = (v, u)``, so arc indices are fully determined by the edge list
and ``mate(a) == a ^ 1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InputError, ParseError

__all__ = [
    "Multigraph",
    "Arc",
    "SymmetricDigraph",
    "build_symmetric_digraph",
    "degree",
    "parse_graph",
    "serialize_graph",
    "load_graph",
]


@dataclass(frozen=True)
class Multigraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise InputError("n_vertices must be non-negative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for k, (u, v) in enumerate(edges):
            for x in (u, v):
                if not 0 <= x < self.n_vertices:
                    raise InputError(
                        f"edge {k} = {{{u}, {v}}}: endpoint {x} outside 0..{self.n_vertices - 1}"
                    )
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return True
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        return len({find(v) for v in range(self.n_vertices)}) == 1


class Arc(NamedTuple):
    id: int
    tail: int
    head: int
    mate: int
    edge: int


@dataclass(frozen=True, eq=False)
class SymmetricDigraph:
    graph: Multigraph
    arcs: tuple[Arc, ...]
    out_index: tuple[tuple[int, ...], ...]
    in_index: tuple[tuple[int, ...], ...]
    tails: np.ndarray = field(repr=False)
    heads: np.ndarray = field(repr=False)
    mates: np.ndarray = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def arcs_between(self, u: int, v: int) -> list[int]:
        """Arcs with tail ``u`` and head ``v``."""
        return [a for a in self.out_index[u] if self.arcs[a].head == v]

    def degrees(self) -> np.ndarray:
        return np.array([len(ix) for ix in self.out_index], dtype=int)

    def arc_adjacency(self) -> np.ndarray:
        """0/1 matrix with entry (a, b) = 1 iff head(a) == tail(b)."""
        return (self.heads[:, None] == self.tails[None, :]).astype(np.int64)


def build_symmetric_digraph(g: Multigraph) -> SymmetricDigraph:
    arcs = []
    out_index = [[] for _ in range(g.n_vertices)]
    in_index = [[] for _ in range(g.n_vertices)]
    for k, (u, v) in enumerate(g.edges):
        for a, (t, h) in ((2 * k, (u, v)), (2 * k + 1, (v, u))):
            arcs.append(Arc(a, t, h, a ^ 1, k))
            out_index[t].append(a)
            in_index[h].append(a)
    return SymmetricDigraph(
        graph=g,
        arcs=tuple(arcs),
        out_index=tuple(map(tuple, out_index)),
        in_index=tuple(map(tuple, in_index)),
        tails=np.array([a.tail for a in arcs], dtype=int),
        heads=np.array([a.head for a in arcs], dtype=int),
        mates=np.array([a.mate for a in arcs], dtype=int),
    )


def degree(d: SymmetricDigraph, v: int) -> int:
    """Number of arcs leaving ``v``; a loop at ``v`` contributes 2."""
    if not 0 <= v < d.n_vertices:
        raise InputError(f"vertex {v} outside 0..{d.n_vertices - 1}")
    return len(d.out_index[v])


_HEADER = re.compile(r"^n\s+(\S+)$")


def parse_graph(text: str) -> Multigraph:
    """Parse the edge-list format.

    An optional first content line ``n <count>`` declares the vertex count;
    otherwise it is one more than the largest index seen.  Every other
    content line is ``u v``.  ``#`` starts a comment.
    """
    declared = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            if declared is not None or edges:
                raise ParseError("header 'n <count>' must come before any edge", lineno)
            declared = _parse_index(m.group(1), lineno)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        edges.append(tuple(_parse_index(p, lineno) for p in parts))
    inferred = 1 + max((max(e) for e in edges), default=-1)
    n = inferred if declared is None else declared
    if n < inferred:
        raise ParseError(f"header declares {n} vertices but index {inferred - 1} is used")
    return Multigraph(n, tuple(edges))


def _parse_index(tok, lineno):
    try:
        x = int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}", lineno) from None
    if x < 0:
        raise ParseError(f"negative vertex index {x}", lineno)
    return x


def serialize_graph(g: Multigraph) -> str:
    lines = [f"n {g.n_vertices}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def load_graph(path) -> Multigraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())
