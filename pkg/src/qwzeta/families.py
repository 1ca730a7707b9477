"""Standard graph families and seeded random generators."""
from __future__ import annotations

import itertools

import numpy as np

from .graph import Multigraph


def cycle_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Multigraph:
    """Path on ``n`` vertices (``n - 1`` edges)."""
    return Multigraph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple(itertools.combinations(range(n), 2)))


def star_graph(leaves: int) -> Multigraph:
    return Multigraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def petersen_graph() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Multigraph(10, tuple(outer + spokes + inner))


def single_loop() -> Multigraph:
    return Multigraph(1, ((0, 0),))


def random_connected_graph(rng: np.random.Generator, max_vertices: int = 7) -> Multigraph:
    """Simple connected graph: a random spanning tree plus random extra edges."""
    n = int(rng.integers(2, max_vertices + 1))
    order = rng.permutation(n)
    edges = set()
    for i in range(1, n):
        u, v = int(order[i]), int(order[rng.integers(0, i)])
        edges.add((min(u, v), max(u, v)))
    candidates = [e for e in itertools.combinations(range(n), 2) if e not in edges]
    if candidates:
        extra = int(rng.integers(0, len(candidates) + 1))
        for j in rng.choice(len(candidates), size=extra, replace=False):
            edges.add(candidates[j])
    return Multigraph(n, tuple(sorted(edges)))


def random_multigraph(
    rng: np.random.Generator,
    max_vertices: int = 6,
    max_edges: int = 8,
    min_edges: int = 1,
) -> Multigraph:
    """Uniform endpoint pairs, so loops and repeated edges occur naturally."""
    n = int(rng.integers(1, max_vertices + 1))
    m = int(rng.integers(min_edges, max_edges + 1))
    edges = tuple((int(rng.integers(0, n)), int(rng.integers(0, n))) for _ in range(m))
    return Multigraph(n, edges)
