"""Coined quantum walks on the arcs of a symmetric digraph.

The shift ``S`` reverses arcs, ``(S psi)(a) = psi(mate(a))``; the transition
matrix is ``U = S C``.  Walks driven by a zeta weight use ``U = M^T`` with
``M`` the edge matrix, so the coin is ``C = S U``.

A transition matrix with rational entries keeps an extended-precision copy
(``numpy.clongdouble``) and states evolve in that precision.  Rounding
``2/3`` to a double makes the float matrix very slightly non-unitary and the
norm then drifts by about ``1e-16`` per step; the wider copy keeps long runs
well inside ``1e-12``.  On platforms where ``longdouble`` is plain double the
two paths coincide.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .errors import InputError, NonUnitaryError
from .graph import SymmetricDigraph

log = logging.getLogger(__name__)

__all__ = [
    "TransitionMatrix",
    "WalkState",
    "shift_matrix",
    "grover_coin",
    "grover_transition",
    "transition_from_weights",
    "unitarity_residual",
    "delta_state",
    "uniform_state",
    "step",
    "evolve",
    "trajectory",
    "observe",
]

UNITARY_TOL = 1e-10
NORM_TOL = 1e-12


def unitarity_residual(u) -> float:
    """``max |U* U - I|`` entrywise."""
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u.conj().T @ u - np.identity(len(u))), initial=0.0))


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    entries: np.ndarray
    provenance: str
    exact: Optional[np.ndarray] = None
    working: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        u = np.asarray(self.entries, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise InputError(f"transition matrix must be square, got {u.shape}")
        res = unitarity_residual(u)
        if res >= UNITARY_TOL:
            raise NonUnitaryError(f"transition matrix is not unitary (residual {res:.3e})")
        object.__setattr__(self, "entries", u)
        working = u
        if self.exact is not None:
            working = _extended(self.exact)
        object.__setattr__(self, "working", working)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def coin(self) -> np.ndarray:
        """Coin ``C = S^-1 U``; ``S`` is its own inverse."""
        n = self.dim
        s = np.zeros((n, n))
        s[np.arange(n), np.arange(n) ^ 1] = 1
        return s @ self.entries


def _extended(exact) -> np.ndarray:
    out = np.zeros(exact.shape, dtype=np.clongdouble)
    for idx, x in np.ndenumerate(exact):
        x = Fraction(x)
        out[idx] = np.longdouble(x.numerator) / np.longdouble(x.denominator)
    return out


def shift_matrix(d: SymmetricDigraph) -> np.ndarray:
    n = d.n_arcs
    s = np.zeros((n, n))
    s[np.arange(n), d.mates] = 1.0
    return s


def _require_degrees(d):
    deg = d.degrees()
    isolated = [v for v in range(d.n_vertices) if deg[v] == 0]
    if isolated:
        raise InputError(f"isolated vertices {isolated}: the Grover coin needs deg >= 1")
    return deg


def grover_coin(d: SymmetricDigraph, exact: bool = False) -> np.ndarray:
    """``C[a, a'] = 2/deg(head(a)) - delta(a, a')`` for ``a'`` sharing ``a``'s head."""
    deg = _require_degrees(d)
    n = d.n_arcs
    same_head = d.heads[:, None] == d.heads[None, :]
    if exact:
        c = np.empty((n, n), dtype=object)
        for a in range(n):
            share = Fraction(2, int(deg[d.heads[a]]))
            for b in range(n):
                c[a, b] = (share if same_head[a, b] else Fraction(0)) - (a == b)
        return c
    c = np.where(same_head, 2.0 / deg[d.heads][:, None], 0.0)
    return c - np.identity(n)


def grover_transition(d: SymmetricDigraph, exact: bool = True) -> TransitionMatrix:
    """``U = S C``.  The default keeps the rational entries (and so the
    extended-precision working copy); ``exact=False`` is pure double."""
    coin = grover_coin(d, exact=exact)
    if exact:
        u = coin[d.mates, :]
        return TransitionMatrix(u.astype(complex), "grover", exact=u)
    return TransitionMatrix(shift_matrix(d) @ coin, "grover")


def transition_from_weights(d: SymmetricDigraph, w, tol: float = 1e-9) -> TransitionMatrix:
    """Walk whose transition matrix is the transpose of the weight's edge matrix.

    The matching unitarity conditions are checked first.  Rejection happens when
    the edge matrix is not unitary; if those conditions fail on a
    matrix that is nonetheless unitary the walk is built and a warning logged.
    """
    from .unitarity import check_unitarity
    from .zeta import edge_matrix

    verdict = check_unitarity(d, w, tol=tol)
    if not verdict.direct_unitary:
        names = ", ".join(sorted({v.condition for v in verdict.violations})) or "direct test"
        raise NonUnitaryError(
            f"weights do not give a unitary edge matrix (violated: {names}; "
            f"residual {verdict.direct_residual:.3e})",
            verdict.violations,
        )
    if not verdict.unitary:
        log.warning("edge matrix is unitary although the %s conditions fail", verdict.family)
    m = edge_matrix(d, w)
    exact = m.T.copy() if w.exact else None
    return TransitionMatrix(m.T.astype(complex), "from_zeta", exact=exact)


@dataclass(frozen=True, eq=False)
class WalkState:
    amplitudes: np.ndarray
    time: int = 0

    def __post_init__(self):
        psi = np.asarray(self.amplitudes)
        if psi.dtype != np.clongdouble:
            psi = psi.astype(complex)
        if psi.ndim != 1:
            raise InputError("amplitudes must be a vector")
        object.__setattr__(self, "amplitudes", psi)

    @classmethod
    def normalized(cls, amplitudes, time: int = 0) -> "WalkState":
        psi = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise InputError("the zero vector is not a state")
        return cls(psi / norm, time)

    @property
    def norm(self) -> float:
        psi = self.amplitudes
        return float(np.sqrt(np.vdot(psi, psi).real))


def delta_state(d: SymmetricDigraph, arc: int) -> WalkState:
    if not 0 <= arc < d.n_arcs:
        raise InputError(f"arc {arc} outside 0..{d.n_arcs - 1}")
    psi = np.zeros(d.n_arcs, dtype=complex)
    psi[arc] = 1
    return WalkState(psi)


def uniform_state(d: SymmetricDigraph) -> WalkState:
    return WalkState.normalized(np.ones(d.n_arcs))


def _check_dims(u, s):
    if u.dim != len(s.amplitudes):
        raise InputError(f"state has {len(s.amplitudes)} amplitudes, matrix is {u.dim}x{u.dim}")


def step(u: TransitionMatrix, s: WalkState) -> WalkState:
    _check_dims(u, s)
    return WalkState(u.working @ s.amplitudes, s.time + 1)


def trajectory(u: TransitionMatrix, s: WalkState, n: int) -> Iterator[WalkState]:
    """Yield ``s`` and its ``n`` successors."""
    if n < 0:
        raise InputError("step count must be >= 0")
    _check_dims(u, s)
    yield s
    for _ in range(n):
        s = step(u, s)
        yield s


def evolve(u: TransitionMatrix, s: WalkState, n: int) -> WalkState:
    for s in trajectory(u, s, n):
        pass
    return s


def observe(d: SymmetricDigraph, s: WalkState) -> np.ndarray:
    """Probability of finding the walker at each vertex (mass of arcs pointing into it)."""
    if len(s.amplitudes) != d.n_arcs:
        raise InputError("state does not match the digraph")
    mass = np.abs(s.amplitudes) ** 2
    out = np.zeros(d.n_vertices, dtype=mass.dtype)
    np.add.at(out, d.heads, mass)
    return out
