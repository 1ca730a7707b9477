"""Unitarity of edge matrices: condition checkers and weight constructors.

The edge matrix splits into one block per vertex ``u``: with ``d = deg(u)``
and the arcs leaving ``u`` in order, the block is ``1 tau^T - diag(upsilon)``.
Checkers test the closed-form conditions on ``tau`` and ``upsilon`` vertex
by vertex and always report the direct ``max |M* M - I|`` next to them.

Sato weights (``upsilon == 1``) are unitary exactly when ``tau`` is constant
on each vertex's out-arcs and ``d |tau|^2 = 2 Re tau``.

For general weights the checker tests: ``|tau - upsilon| = 1`` at degree-1
vertices; at higher degree ``|upsilon| = 1`` and a common ratio
``tau / upsilon = d R^2 / 2 + i R sqrt(4 - d^2 R^2) / 2`` with
``|R| <= 2 / d``.  These conditions are sufficient.  They are not
necessary: a degree-2 block with ``tau = (1/2, 1/2)`` and
``upsilon = (1/2 - sqrt(3)/2, 1/2 + sqrt(3)/2)`` is orthogonal.  Such
schemes show up as ``agrees == False`` in the verdict.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError, NumericalError, PreconditionError
from .graph import SymmetricDigraph
from .walk import unitarity_residual
from .zeta import WeightScheme, edge_matrix

__all__ = [
    "Violation",
    "UnitarityVerdict",
    "SatoParams",
    "GWParams",
    "gw_ratio",
    "check_sato",
    "check_gw",
    "check_unitarity",
    "construct_sato",
    "construct_gw",
]

DEFAULT_TOL = 1e-9
DIRECT_TOL = 1e-10


@dataclass(frozen=True)
class Violation:
    condition: str
    residual: float
    vertex: Optional[int] = None
    arc: Optional[int] = None

    def to_dict(self):
        out = {}
        if self.vertex is not None:
            out["vertex"] = self.vertex
        if self.arc is not None:
            out["arc"] = self.arc
        out["condition"] = self.condition
        out["residual"] = self.residual
        return out


@dataclass
class UnitarityVerdict:
    family: str
    unitary: bool
    violations: list
    direct_residual: float
    direct_unitary: bool
    radii: dict = field(default_factory=dict)

    @property
    def agrees(self) -> bool:
        return self.unitary == self.direct_unitary


def _direct(d, w, direct_tol):
    res = unitarity_residual(edge_matrix(d, w.as_complex()))
    return res, res < direct_tol


def check_sato(
    d: SymmetricDigraph, w: WeightScheme, tol: float = DEFAULT_TOL, direct_tol: float = DIRECT_TOL
) -> UnitarityVerdict:
    """Constancy of ``tau`` per vertex plus the magnitude condition.

    The magnitude residual ``|d |tau|^2 - 2 Re tau|`` is exactly the
    diagonal defect of ``M* M`` at that arc.
    """
    tau = w.tau.astype(complex)
    ups = w.upsilon.astype(complex)
    off = np.max(np.abs(ups - 1), initial=0.0)
    if off > tol:
        raise PreconditionError(f"Sato weights need upsilon == 1 (max deviation {off:.3e})")
    violations = []
    for u, out in enumerate(d.out_index):
        if not out:
            continue
        deg = len(out)
        vals = tau[list(out)]
        spread = float(np.max(np.abs(vals - vals[0])))
        if spread > tol:
            violations.append(Violation("constancy", spread, vertex=u))
        for a, t in zip(out, vals):
            res = abs(deg * abs(t) ** 2 - 2 * t.real)
            if res > tol:
                violations.append(Violation("magnitude", float(res), vertex=u, arc=a))
    res, ok = _direct(d, w, direct_tol)
    return UnitarityVerdict("sato", not violations, violations, res, ok)


def gw_ratio(deg: int, radius: float) -> complex:
    """``d R^2 / 2 + i R sqrt(4 - d^2 R^2) / 2``."""
    return complex(deg * radius**2 / 2, radius * math.sqrt(max(0.0, 4 - (deg * radius) ** 2)) / 2)


def check_gw(
    d: SymmetricDigraph, w: WeightScheme, tol: float = DEFAULT_TOL, direct_tol: float = DIRECT_TOL
) -> UnitarityVerdict:
    tau = w.tau.astype(complex)
    ups = w.upsilon.astype(complex)
    violations = []
    radii = {}
    for u, out in enumerate(d.out_index):
        deg = len(out)
        if deg == 0:
            continue
        if deg == 1:
            a = out[0]
            res = abs(abs(tau[a] - ups[a]) ** 2 - 1)
            if res > tol:
                violations.append(Violation("deg1_circle", float(res), vertex=u, arc=a))
            continue
        for a in out:
            res = abs(abs(ups[a]) - 1)
            if res > tol:
                violations.append(Violation("upsilon_modulus", float(res), vertex=u, arc=a))
        ratio = tau[list(out)] * ups[list(out)].conj()
        spread = float(np.max(np.abs(ratio - ratio[0])))
        if spread > tol:
            violations.append(Violation("common_ratio", spread, vertex=u))
        z = ratio[0]
        # |ratio| = |R| and sign(R) = sign(Im ratio)
        r = math.copysign(abs(z), z.imag) if z.imag != 0 else abs(z)
        limit = 2 / deg
        if abs(r) > limit + tol:
            violations.append(Violation("radius_range", abs(r) - limit, vertex=u))
        r = max(-limit, min(limit, r))
        radii[u] = r
        # the ratio formula traces the circle |z - 1/d| = 1/d as R runs over
        # [-2/d, 2/d]; testing the circle avoids the sqrt blow-up near |R| = 2/d
        for a, za in zip(out, ratio):
            res = abs(abs(za - 1 / deg) - 1 / deg)
            if res > tol:
                violations.append(Violation("ratio_formula", float(res), vertex=u, arc=a))
    res, ok = _direct(d, w, direct_tol)
    return UnitarityVerdict("gw", not violations, violations, res, ok, radii)


def check_unitarity(d: SymmetricDigraph, w: WeightScheme, tol: float = DEFAULT_TOL) -> UnitarityVerdict:
    """Sato checker when ``upsilon == 1``, the general one otherwise."""
    if np.max(np.abs(w.upsilon.astype(complex) - 1), initial=0.0) <= tol:
        return check_sato(d, w, tol)
    return check_gw(d, w, tol)


# --------------------------------------------------------------------------
# constructors


@dataclass
class SatoParams:
    """Per-vertex phase ``f_v``; vertices flagged in ``zero`` get ``tau = 0``."""

    phase: np.ndarray
    zero: np.ndarray

    @classmethod
    def uniform(cls, n_vertices: int, phase: float = 0.0, zero=()):
        flags = np.zeros(n_vertices, dtype=bool)
        flags[list(zero)] = True
        return cls(np.full(n_vertices, float(phase)), flags)


@dataclass
class GWParams:
    """Inputs for the general unitary family.

    ``radius`` is per vertex, ``upsilon`` per arc (unit modulus at vertices of
    degree >= 2, free at degree 1).  At degree-1 vertices
    ``tau = upsilon + exp(i deg1_phase)``.
    """

    radius: np.ndarray
    upsilon: np.ndarray
    deg1_phase: np.ndarray

    @classmethod
    def grover(cls, d: SymmetricDigraph):
        deg = d.degrees().astype(float)
        radius = np.divide(2.0, deg, out=np.zeros_like(deg), where=deg > 0)
        return cls(radius, np.ones(d.n_arcs, dtype=complex), np.zeros(d.n_arcs))


def _validated(d, w, checker, tol):
    verdict = checker(d, w, tol)
    if not (verdict.unitary and verdict.direct_unitary):
        raise NumericalError(
            f"constructed weights failed validation (residual {verdict.direct_residual:.3e}, "
            f"violations {[v.condition for v in verdict.violations]})"
        )
    return w


def construct_sato(d: SymmetricDigraph, p: SatoParams, tol: float = DEFAULT_TOL) -> WeightScheme:
    """``tau = (2 cos f_v / deg v) exp(i f_v)`` on arcs leaving ``v``; ``upsilon = 1``."""
    phase = np.asarray(p.phase, dtype=float)
    zero = np.asarray(p.zero, dtype=bool)
    if phase.shape != (d.n_vertices,) or zero.shape != (d.n_vertices,):
        raise InputError("SatoParams needs one phase and one zero flag per vertex")
    bad = [v for v in range(d.n_vertices) if not zero[v] and not -math.pi / 2 < phase[v] < math.pi / 2]
    if bad:
        raise InputError(f"phases of vertices {bad} lie outside (-pi/2, pi/2) and are not zero-flagged")
    deg = d.degrees()
    tau = np.zeros(d.n_arcs, dtype=complex)
    for v, out in enumerate(d.out_index):
        if out and not zero[v]:
            tau[list(out)] = 2 * math.cos(phase[v]) / deg[v] * np.exp(1j * phase[v])
    w = WeightScheme(tau, np.ones(d.n_arcs, dtype=complex), "sato")
    return _validated(d, w, check_sato, tol)


def construct_gw(d: SymmetricDigraph, p: GWParams, tol: float = DEFAULT_TOL) -> WeightScheme:
    radius = np.asarray(p.radius, dtype=float)
    ups = np.asarray(p.upsilon, dtype=complex)
    alpha = np.asarray(p.deg1_phase, dtype=float)
    if radius.shape != (d.n_vertices,):
        raise InputError("GWParams.radius needs one value per vertex")
    if ups.shape != (d.n_arcs,) or alpha.shape != (d.n_arcs,):
        raise InputError("GWParams.upsilon and deg1_phase need one value per arc")
    deg = d.degrees()
    tau = np.zeros(d.n_arcs, dtype=complex)
    for u, out in enumerate(d.out_index):
        if not out:
            continue
        out = list(out)
        if deg[u] == 1:
            tau[out] = ups[out] + np.exp(1j * alpha[out])
            continue
        limit = 2 / deg[u]
        if abs(radius[u]) > limit * (1 + 1e-12):
            raise InputError(f"radius {radius[u]} at vertex {u} outside [-{limit}, {limit}]")
        mod = np.abs(ups[out])
        if np.max(np.abs(mod - 1)) > tol:
            raise InputError(f"upsilon must have unit modulus on arcs leaving vertex {u}")
        tau[out] = ups[out] * gw_ratio(int(deg[u]), float(np.clip(radius[u], -limit, limit)))
    w = WeightScheme(tau, ups, "custom")
    return _validated(d, w, check_gw, tol)
