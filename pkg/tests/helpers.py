"""Shared corpora and brute-force oracles for the test suite."""
import itertools

import numpy as np

from qwzeta.cycles import closed_path_counts
from qwzeta.families import (
    complete_graph,
    cycle_graph,
    path_graph,
    petersen_graph,
    random_connected_graph,
    random_multigraph,
    star_graph,
)
from qwzeta.graph import build_symmetric_digraph
from qwzeta.zeta import WeightScheme

# closed paths up to length 8 that one corpus graph may contain; larger
# draws are resampled so the enumeration oracles stay at desk scale
CORPUS_PATH_BUDGET = 300_000


def simple_corpus(seed=7, n_random=20):
    named = (
        [(f"C{n}", cycle_graph(n)) for n in range(3, 9)]
        + [(f"P{n}", path_graph(n)) for n in range(2, 7)]
        + [("K4", complete_graph(4)), ("K5", complete_graph(5)), ("K1,3", star_graph(3))]
        + [("Petersen", petersen_graph())]
    )
    rng = np.random.default_rng(seed)
    named += [(f"rand{i}", random_connected_graph(rng, 7)) for i in range(n_random)]
    return named


def multigraph_corpus(seed=11, count=50, order=8, budget=CORPUS_PATH_BUDGET):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        g = random_multigraph(rng, max_vertices=6, max_edges=8)
        d = build_symmetric_digraph(g)
        if sum(closed_path_counts(d, order)) <= budget:
            out.append(g)
    return out


def random_complex(rng, n, scale=0.5):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def random_weights(rng, d, scale=0.5):
    return WeightScheme(random_complex(rng, d.n_arcs, scale), random_complex(rng, d.n_arcs, scale))


def edge_matrix_by_definition(d, tau, upsilon):
    """Entrywise evaluation of tau(b)[head(a) = tail(b)] - upsilon(b)[b = mate(a)]."""
    n = d.n_arcs
    m = np.zeros((n, n), dtype=complex)
    for a, b in itertools.product(range(n), repeat=2):
        x = 0
        if d.arcs[a].head == d.arcs[b].tail:
            x += tau[b]
        if d.arcs[a].mate == b:
            x -= upsilon[b]
        m[a, b] = x
    return m


def brute_closed_paths(d, k):
    """Every arc sequence of length k that closes up, by exhaustive product."""
    out = []
    for seq in itertools.product(range(d.n_arcs), repeat=k):
        if all(d.arcs[seq[i]].head == d.arcs[seq[(i + 1) % k]].tail for i in range(k)):
            out.append(seq)
    return out


ACCEPTANCE_LINES = []


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
