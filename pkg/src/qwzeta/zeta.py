"""Generalized weighted zeta functions of symmetric digraphs.

The weight of an arc pair is

    theta(a, a') = tau(a') [head(a) == tail(a')] - upsilon(a') [a' == mate(a)]

and the zeta function is evaluated four ways: by summing circular products
over closed paths (exponential form), by a product over primitive cycles
(Euler form), as ``1 / det(I - t M)`` (Hashimoto form) and through the
vertex-sized determinant with weighted adjacency and degree matrices (Ihara
form).  The first three produce truncated series; the last is evaluated
pointwise.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cycles import (
    DEFAULT_MAX_LEN,
    DEFAULT_MAX_PATHS,
    enumerate_prime_cycles,
    iter_closed_paths,
)
from .errors import InputError, ParseError, ResourceError, SingularityError
from .graph import SymmetricDigraph
from .series import TruncatedSeries
from .spectral import char_poly

__all__ = [
    "PRESETS",
    "WeightScheme",
    "make_weights",
    "edge_matrix",
    "closed_path_sums",
    "zeta_exponential",
    "zeta_euler",
    "zeta_hashimoto",
    "reciprocal_zeta_coeffs",
    "weighted_adjacency",
    "weighted_degree",
    "zeta_ihara_expression",
    "default_t_samples",
    "ihara_residuals",
    "weights_to_dict",
    "weights_from_dict",
    "load_weights",
]

PRESETS = ("ihara", "bartholdi", "mizuno_sato", "sato", "grover", "custom")
DEFAULT_ORDER = 8


@dataclass(frozen=True, eq=False)
class WeightScheme:
    """Per-arc ``tau`` and ``upsilon``.

    Arrays are complex, or object arrays of ``Fraction`` for exact work.
    """

    tau: np.ndarray
    upsilon: np.ndarray
    preset: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise InputError(f"unknown preset {self.preset!r}; expected one of {PRESETS}")
        tau, ups = np.asarray(self.tau), np.asarray(self.upsilon)
        if tau.ndim != 1 or tau.shape != ups.shape:
            raise InputError(f"tau and upsilon must be equal-length vectors, got {tau.shape} and {ups.shape}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "upsilon", ups)
        self._check_preset()

    def _check_preset(self):
        tau = self.tau.astype(complex)
        ups = self.upsilon.astype(complex)
        p = self.preset
        ok = True
        if p == "ihara":
            ok = np.all(tau == 1) and np.all(ups == 1)
        elif p == "bartholdi":
            ok = np.allclose(ups, (complex(self.params["q"]) - 1) * tau, rtol=0, atol=1e-12)
        elif p == "mizuno_sato":
            ok = np.array_equal(tau, ups)
        elif p in ("sato", "grover"):
            ok = np.all(ups == 1)
        if not ok:
            raise InputError(f"weights violate the constraints of preset {p!r}")

    @property
    def n_arcs(self) -> int:
        return len(self.tau)

    @property
    def exact(self) -> bool:
        return self.tau.dtype == object

    def as_complex(self) -> "WeightScheme":
        if not self.exact:
            return self
        return WeightScheme(
            self.tau.astype(complex), self.upsilon.astype(complex), self.preset, self.params
        )


def _per_arc(value, n, exact, name):
    """Broadcast a scalar or validate a per-arc sequence."""
    if isinstance(value, (list, tuple, np.ndarray)):
        arr = list(value)
        if len(arr) != n:
            raise InputError(f"{name} has {len(arr)} entries, expected one per arc ({n})")
    else:
        arr = [value] * n
    if exact:
        return np.array([Fraction(x) for x in arr], dtype=object)
    return np.array([complex(_as_number(x)) for x in arr], dtype=complex)


def _as_number(x):
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(x[0], x[1])
    return x


def make_weights(
    d: SymmetricDigraph, preset: str, params: dict | None = None, exact: bool = False
) -> WeightScheme:
    """Weights for a named preset.

    ``bartholdi`` needs ``q`` and takes an optional ``tau`` (default 1) with
    ``upsilon = (q - 1) tau``.  ``sato`` and ``mizuno_sato`` take an optional
    ``tau`` (default 1).  ``custom`` needs ``tau`` and ``upsilon`` arrays.
    ``exact=True`` yields ``Fraction`` arrays and needs rational parameters.
    """
    params = dict(params or {})
    n = d.n_arcs
    one = _per_arc(1, n, exact, "one")
    if preset == "ihara":
        return WeightScheme(one, one.copy(), "ihara", params)
    if preset == "grover":
        deg = d.degrees()
        if exact:
            tau = np.array([Fraction(2, int(deg[t])) for t in d.tails], dtype=object)
        else:
            tau = (2.0 / deg[d.tails]).astype(complex)
        return WeightScheme(tau, one, "grover", params)
    if preset == "bartholdi":
        if "q" not in params:
            raise InputError("preset 'bartholdi' needs parameter q")
        q = Fraction(params["q"]) if exact else complex(_as_number(params["q"]))
        tau = _per_arc(params.get("tau", 1), n, exact, "tau")
        return WeightScheme(tau, tau * (q - 1), "bartholdi", params)
    if preset == "mizuno_sato":
        tau = _per_arc(params.get("tau", 1), n, exact, "tau")
        return WeightScheme(tau, tau.copy(), "mizuno_sato", params)
    if preset == "sato":
        tau = _per_arc(params.get("tau", 1), n, exact, "tau")
        return WeightScheme(tau, one, "sato", params)
    if preset == "custom":
        if "tau" not in params or "upsilon" not in params:
            raise InputError("preset 'custom' needs tau and upsilon arrays")
        for key in ("tau", "upsilon"):
            if not isinstance(params[key], (list, tuple, np.ndarray)):
                raise InputError(f"custom {key} must be a per-arc array")
        tau = _per_arc(params["tau"], n, exact, "tau")
        ups = _per_arc(params["upsilon"], n, exact, "upsilon")
        return WeightScheme(tau, ups, "custom")
    raise InputError(f"unknown preset {preset!r}; expected one of {PRESETS}")


def _check_sizes(d, w):
    if w.n_arcs != d.n_arcs:
        raise InputError(f"weights cover {w.n_arcs} arcs but the digraph has {d.n_arcs}")


def edge_matrix(d: SymmetricDigraph, w: WeightScheme) -> np.ndarray:
    """Arc-indexed matrix of ``theta(a, a')``; ``Fraction`` entries for exact weights."""
    _check_sizes(d, w)
    n = d.n_arcs
    follows = d.heads[:, None] == d.tails[None, :]
    if w.exact:
        m = np.empty((n, n), dtype=object)
        m.fill(Fraction(0))
        for a in range(n):
            for b in np.flatnonzero(follows[a]):
                m[a, b] = w.tau[b]
            b = d.mates[a]
            m[a, b] = m[a, b] - w.upsilon[b]
        return m
    m = np.where(follows, w.tau[None, :], 0).astype(complex)
    rows = np.arange(n)
    m[rows, d.mates] -= w.upsilon[d.mates]
    return m


# --------------------------------------------------------------------------
# series expressions


def _check_order(L, max_len):
    if L < 1:
        raise InputError("series order must be >= 1")
    if L > max_len:
        raise ResourceError(f"order {L} exceeds the enumeration cap {max_len}")


def closed_path_sums(
    d: SymmetricDigraph, w: WeightScheme, L: int, max_paths: int = DEFAULT_MAX_PATHS
) -> np.ndarray:
    """``N_k = sum of circ over all closed paths of length k``, for k = 0..L (N_0 = 0)."""
    theta = edge_matrix(d, w.as_complex()).tolist()
    sums = np.zeros(L + 1, dtype=complex)
    for path in iter_closed_paths(d, L, max_paths):
        value = theta[path[-1]][path[0]]
        for a, b in zip(path, path[1:]):
            value *= theta[a][b]
        sums[len(path)] += value
    return sums


def zeta_exponential(
    d: SymmetricDigraph,
    w: WeightScheme,
    L: int = DEFAULT_ORDER,
    max_len: int = DEFAULT_MAX_LEN,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> TruncatedSeries:
    """``exp(sum_k N_k t^k / k)`` with each ``N_k`` from explicit enumeration."""
    _check_order(L, max_len)
    sums = closed_path_sums(d, w, L, max_paths)
    k = np.arange(L + 1)
    k[0] = 1
    return TruncatedSeries(sums / k).exp()


def zeta_euler(
    d: SymmetricDigraph,
    w: WeightScheme,
    L: int = DEFAULT_ORDER,
    max_len: int = DEFAULT_MAX_LEN,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> TruncatedSeries:
    """Product of ``1 / (1 - circ(C) t^|C|)`` over primitive cycles with ``|C| <= L``.

    Backtracking cycles are included: their circular product carries the
    factor ``tau(mate(a)) - upsilon(mate(a))``, which vanishes only for
    weights with ``tau == upsilon``.
    """
    _check_order(L, max_len)
    theta = edge_matrix(d, w.as_complex()).tolist()
    # per length k: prod_C (1 - c_C u) as a polynomial in u = t^k, kept to degree L // k
    factors = defaultdict(lambda: None)
    for cyc in enumerate_prime_cycles(d, L, allow_backtracking=True, max_paths=max_paths):
        arcs = cyc.representative.arcs
        c = theta[arcs[-1]][arcs[0]]
        for a, b in zip(arcs, arcs[1:]):
            c *= theta[a][b]
        if c == 0:
            continue
        k = len(arcs)
        poly = factors[k]
        if poly is None:
            poly = np.zeros(L // k + 1, dtype=complex)
            poly[0] = 1
            factors[k] = poly
        poly[1:] -= c * poly[:-1].copy()
    denom = TruncatedSeries.one(L)
    for k, poly in factors.items():
        spread = np.zeros(L + 1, dtype=complex)
        spread[:: k][: len(poly)] = poly
        denom = denom * TruncatedSeries(spread)
    return denom.reciprocal()


def reciprocal_zeta_coeffs(d: SymmetricDigraph, w: WeightScheme):
    """Ascending coefficients of ``det(I - t M)``.

    A :class:`~qwzeta.spectral.CharPoly` is returned; its ``coeffs`` read
    ascending in ``t`` are this polynomial, and ``exact`` is filled for
    rational weights.
    """
    return char_poly(edge_matrix(d, w), exact=w.exact or None)


def zeta_hashimoto(d: SymmetricDigraph, w: WeightScheme, L: int = DEFAULT_ORDER) -> TruncatedSeries:
    if L < 1:
        raise InputError("series order must be >= 1")
    cp = reciprocal_zeta_coeffs(d, w)
    return TruncatedSeries(cp.coeffs, L).reciprocal()


# --------------------------------------------------------------------------
# Ihara expression


def _edge_denominators(d, w, t, pole_tol=1e-14):
    ups = w.upsilon.astype(complex)
    den = 1 - t * t * ups[0::2] * ups[1::2]
    bad = np.flatnonzero(np.abs(den) <= pole_tol)
    if bad.size:
        e = int(bad[0])
        raise SingularityError(
            f"t = {t} is a pole: 1 - t^2 upsilon(a) upsilon(mate(a)) = 0 on edge {e} {d.graph.edges[e]}"
        )
    return den


def weighted_adjacency(d: SymmetricDigraph, w: WeightScheme, t: complex) -> np.ndarray:
    """``A_uv = sum over arcs u->v of tau(a) / (1 - t^2 upsilon(a) upsilon(mate(a)))``."""
    _check_sizes(d, w)
    den = np.repeat(_edge_denominators(d, w, t), 2)
    a = np.zeros((d.n_vertices, d.n_vertices), dtype=complex)
    np.add.at(a, (d.tails, d.heads), w.tau.astype(complex) / den)
    return a


def weighted_degree(d: SymmetricDigraph, w: WeightScheme, t: complex) -> np.ndarray:
    """Diagonal ``D_uu = sum over arcs leaving u of tau(a) upsilon(mate(a)) / (...)``."""
    _check_sizes(d, w)
    den = np.repeat(_edge_denominators(d, w, t), 2)
    vals = w.tau.astype(complex) * w.upsilon.astype(complex)[d.mates] / den
    return np.diag(np.bincount(d.tails, weights=vals.real, minlength=d.n_vertices)
                   + 1j * np.bincount(d.tails, weights=vals.imag, minlength=d.n_vertices))


def zeta_ihara_expression(d: SymmetricDigraph, w: WeightScheme, t: complex) -> complex:
    """Reciprocal zeta value ``prod_e (1 - t^2 ups ups') det(I - t A + t^2 D)``."""
    den = _edge_denominators(d, w, t)
    n = d.n_vertices
    mat = np.identity(n) - t * weighted_adjacency(d, w, t) + t * t * weighted_degree(d, w, t)
    return complex(np.prod(den) * np.linalg.det(mat))


def default_t_samples(count: int = 16, radius: float = 0.3) -> np.ndarray:
    """Points ``radius (k+1)/count exp(2 pi i k / 8)``; includes real samples of both signs."""
    k = np.arange(count)
    return radius * (k + 1) / count * np.exp(2j * np.pi * k / 8)


def ihara_residuals(d: SymmetricDigraph, w: WeightScheme, ts=None) -> np.ndarray:
    """Relative gaps between the Ihara expression and ``det(I - t M)``."""
    ts = default_t_samples() if ts is None else np.asarray(ts, dtype=complex)
    m = edge_matrix(d, w.as_complex())
    eye = np.identity(d.n_arcs)
    out = []
    for t in ts:
        direct = np.linalg.det(eye - t * m)
        value = zeta_ihara_expression(d, w, t)
        out.append(abs(value - direct) / max(abs(direct), 1e-300))
    return np.array(out)


# --------------------------------------------------------------------------
# weight files


def _pairs(arr):
    return [[float(complex(x).real), float(complex(x).imag)] for x in arr]


def weights_to_dict(w: WeightScheme) -> dict:
    """Serialisable form; named presets without per-arc data keep their params."""
    if w.preset in ("ihara", "grover"):
        return {"preset": w.preset, "params": {}}
    if w.preset == "bartholdi" and "tau" not in w.params:
        return {"preset": "bartholdi", "params": {"q": w.params["q"]}}
    return {"preset": "custom", "tau": _pairs(w.tau), "upsilon": _pairs(w.upsilon)}


def weights_from_dict(d: SymmetricDigraph, doc: dict, exact: bool = False) -> WeightScheme:
    if not isinstance(doc, dict) or "preset" not in doc:
        raise ParseError("weight document needs a 'preset' field")
    preset = doc["preset"]
    if preset == "custom":
        params = {"tau": doc.get("tau"), "upsilon": doc.get("upsilon")}
        if params["tau"] is None or params["upsilon"] is None:
            raise ParseError("custom weights need 'tau' and 'upsilon' arrays")
    else:
        params = dict(doc.get("params", {}))
    return make_weights(d, preset, params, exact=exact)


def load_weights(path, d: SymmetricDigraph) -> WeightScheme:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc.msg}", exc.lineno) from None
    return weights_from_dict(d, doc)
