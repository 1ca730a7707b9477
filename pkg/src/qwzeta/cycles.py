"""Closed paths, rotation classes and prime cycles on a symmetric digraph.

Everything here is explicit enumeration and therefore exponential in the
path length.  It exists to serve as an independent oracle for the
determinant formulas in :mod:`qwzeta.zeta`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InputError, ResourceError
from .graph import SymmetricDigraph

__all__ = [
    "ClosedPath",
    "Cycle",
    "DEFAULT_MAX_LEN",
    "DEFAULT_MAX_PATHS",
    "closed_path_counts",
    "iter_closed_paths",
    "enumerate_closed_paths",
    "rotate",
    "is_backtrackless",
    "is_primitive",
    "is_prime",
    "canonical_rotation",
    "enumerate_prime_cycles",
    "circ",
]

DEFAULT_MAX_LEN = 10
DEFAULT_MAX_PATHS = 2_000_000


@dataclass(frozen=True)
class ClosedPath:
    arcs: tuple[int, ...]

    def __post_init__(self):
        if len(self.arcs) < 1:
            raise InputError("a closed path has length >= 1")
        object.__setattr__(self, "arcs", tuple(int(a) for a in self.arcs))

    def __len__(self):
        return len(self.arcs)

    def is_valid(self, d: SymmetricDigraph) -> bool:
        k = len(self.arcs)
        return all(
            d.heads[self.arcs[i]] == d.tails[self.arcs[(i + 1) % k]] for i in range(k)
        )


@dataclass(frozen=True)
class Cycle:
    """Rotation class of a closed path, stored by its smallest rotation."""

    representative: ClosedPath
    period: int

    @property
    def length(self) -> int:
        return len(self.representative)


def closed_path_counts(d: SymmetricDigraph, max_len: int) -> list[int]:
    """``|X_k|`` for k = 1..max_len as traces of the 0/1 arc adjacency."""
    adj = d.arc_adjacency().astype(object)
    power = np.identity(d.n_arcs, dtype=object)
    counts = []
    for _ in range(max_len):
        power = power.dot(adj)
        counts.append(int(np.trace(power)) if d.n_arcs else 0)
    return counts


def _check_budget(d, max_len, max_paths):
    if max_len < 1:
        raise InputError("path length must be >= 1")
    total = sum(closed_path_counts(d, max_len))
    if total > max_paths:
        raise ResourceError(
            f"{total} closed paths up to length {max_len} exceed the budget of {max_paths}"
        )


def iter_closed_paths(
    d: SymmetricDigraph, max_len: int, max_paths: int = DEFAULT_MAX_PATHS
) -> Iterator[tuple[int, ...]]:
    """Yield every rooted closed path of length 1..max_len as an arc tuple.

    Depth-first from each root arc, pruning any prefix that cannot return to
    the root's tail within the remaining length.
    """
    _check_budget(d, max_len, max_paths)
    adj = d.arc_adjacency().astype(np.int8)
    succ = [d.out_index[h] for h in d.heads]
    for v0 in range(d.n_vertices):
        roots = d.out_index[v0]
        if not roots:
            continue
        # reach[j][a]: from last arc a, the path can close within j more arcs
        reach = [d.heads == v0]
        for _ in range(max_len - 1):
            reach.append(reach[0] | (adj @ reach[-1].astype(np.int8) > 0))
        for r in roots:
            if not reach[max_len - 1][r]:
                continue
            stack = [(r,)]
            while stack:
                path = stack.pop()
                last = path[-1]
                k = len(path)
                if d.heads[last] == v0:
                    yield path
                if k < max_len:
                    ok = reach[max_len - k - 1]
                    for b in reversed(succ[last]):
                        if ok[b]:
                            stack.append(path + (b,))


def enumerate_closed_paths(
    d: SymmetricDigraph, k: int, max_paths: int = DEFAULT_MAX_PATHS
) -> list[ClosedPath]:
    """All rooted closed paths of length exactly ``k``, sorted by arc sequence."""
    if k < 1:
        raise InputError("path length must be >= 1")
    found = sorted(p for p in iter_closed_paths(d, k, max_paths) if len(p) == k)
    return [ClosedPath(p) for p in found]


def rotate(p: ClosedPath) -> ClosedPath:
    return ClosedPath(p.arcs[1:] + p.arcs[:1])


def _rotation_period(arcs):
    k = len(arcs)
    for r in range(1, k + 1):
        if k % r == 0 and arcs[r:] + arcs[:r] == arcs:
            return r
    return k


def is_backtrackless(p: ClosedPath) -> bool:
    """No cyclically consecutive pair ``(a, mate(a))``.

    Arc indexing pairs an arc with its mate as ``a ^ 1``.
    """
    arcs = p.arcs
    k = len(arcs)
    return all(arcs[(i + 1) % k] != arcs[i] ^ 1 for i in range(k))


def is_primitive(p: ClosedPath) -> bool:
    """True unless ``p`` is ``q^m`` for a shorter closed path ``q``."""
    return _rotation_period(p.arcs) == len(p.arcs)


def is_prime(p: ClosedPath) -> bool:
    return is_backtrackless(p) and is_primitive(p)


def canonical_rotation(p: ClosedPath) -> ClosedPath:
    arcs = p.arcs
    return ClosedPath(min(arcs[i:] + arcs[:i] for i in range(len(arcs))))


def enumerate_prime_cycles(
    d: SymmetricDigraph,
    max_len: int,
    allow_backtracking: bool = False,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> list[Cycle]:
    """One :class:`Cycle` per rotation class of prime closed paths.

    With ``allow_backtracking`` the backtrack-free requirement is dropped and
    the classes of all primitive closed paths are returned; that is the
    product range needed when the weight does not annihilate backtracks.
    """
    keep = is_primitive if allow_backtracking else is_prime
    cycles = []
    for arcs in iter_closed_paths(d, max_len, max_paths):
        p = ClosedPath(arcs)
        if keep(p) and canonical_rotation(p).arcs == arcs:
            cycles.append(Cycle(p, len(arcs)))
    cycles.sort(key=lambda c: (c.length, c.representative.arcs))
    return cycles


def circ(theta: np.ndarray, p: ClosedPath):
    """Circular product ``theta[a1, a2] theta[a2, a3] ... theta[ak, a1]``."""
    arcs = p.arcs
    value = 1
    for i in range(len(arcs)):
        value = value * theta[arcs[i], arcs[(i + 1) % len(arcs)]]
    return value
