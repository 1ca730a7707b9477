"""Characteristic polynomials, spectra, Konno-Sato factorisation, periodicity.

Polynomials are stored with coefficients in *descending* powers, leading
coefficient first, matching ``det(lam*I - M) = sum_k c_k lam^(n-k)``.  The
same array read in ascending order is ``det(I - t*M)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, NumericalError
from .graph import Multigraph, build_symmetric_digraph

log = logging.getLogger(__name__)

__all__ = [
    "CharPoly",
    "KonnoSatoReport",
    "Periodicity",
    "SpectrumReport",
    "is_exact_matrix",
    "to_exact",
    "char_poly",
    "t_matrix",
    "konno_sato_rhs",
    "konno_sato_check",
    "spectrum",
    "periodicity",
    "cyclotomic",
    "cyclotomic_factorization",
    "spectrum_report",
]


@dataclass(frozen=True)
class CharPoly:
    """``det(lam*I - M)``; ``exact`` is set when computed over the rationals."""

    coeffs: np.ndarray
    exact: Optional[tuple] = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam):
        return np.polyval(self.coeffs, lam)

    def reciprocal_coeffs(self) -> np.ndarray:
        """Ascending coefficients of ``det(I - t*M)``."""
        return self.coeffs.copy()


# --------------------------------------------------------------------------
# exact rational helpers


def is_exact_matrix(m) -> bool:
    m = np.asarray(m)
    return m.dtype == object and all(isinstance(x, (int, Fraction)) for x in m.flat)


def to_exact(m) -> np.ndarray:
    """Object array of ``Fraction`` entries; floats are converted bit-exactly."""
    m = np.asarray(m)
    out = np.empty(m.shape, dtype=object)
    for idx, x in np.ndenumerate(m):
        if isinstance(x, (int, Fraction)):
            out[idx] = Fraction(x)
            continue
        x = complex(x)
        if x.imag != 0:
            raise InputError("exact mode supports real rational entries only")
        out[idx] = Fraction(x.real)
    return out


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_divmod(p, q):
    """Descending-coefficient long division over the rationals."""
    p = list(p)
    if len(p) < len(q):
        return [Fraction(0)], p
    quot = []
    lead = q[0]
    for i in range(len(p) - len(q) + 1):
        c = p[i] / lead
        quot.append(c)
        if c:
            for j in range(1, len(q)):
                p[i + j] -= c * q[j]
    rem = p[len(p) - len(q) + 1 :]
    return quot, rem


def _strip(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


# --------------------------------------------------------------------------
# Faddeev-LeVerrier


def _faddeev_leverrier(a, one, divide):
    n = a.shape[0]
    coeffs = [one]
    m = np.identity(n, dtype=a.dtype) if a.dtype != object else _object_identity(n, one)
    for k in range(1, n + 1):
        am = a.dot(m)
        c = divide(-np.trace(am), k)
        coeffs.append(c)
        m = am
        for i in range(n):
            m[i, i] = m[i, i] + c
    return coeffs


def _object_identity(n, one):
    eye = np.empty((n, n), dtype=object)
    eye.fill(one - one)
    for i in range(n):
        eye[i, i] = one
    return eye


def _exact_int_division(x, k):
    q, r = divmod(x, k)
    if r:
        raise NumericalError("non-integral Faddeev-LeVerrier step on an integer matrix")
    return q


def char_poly(m, exact: Optional[bool] = None) -> CharPoly:
    """Characteristic polynomial by the Faddeev-LeVerrier recurrence.

    ``exact=None`` selects rational arithmetic when ``m`` already holds
    ``int``/``Fraction`` entries.  Exact mode clears denominators first so the
    recurrence runs over Python integers.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"char_poly needs a square matrix, got shape {m.shape}")
    if exact is None:
        exact = m.dtype == object and is_exact_matrix(m)
    n = m.shape[0]
    if exact:
        q = to_exact(m)
        scale = math.lcm(1, *(x.denominator for x in q.flat))
        ints = np.empty((n, n), dtype=object)
        for idx, x in np.ndenumerate(q):
            ints[idx] = int(x * scale)
        e = _faddeev_leverrier(ints, 1, _exact_int_division)
        rational = tuple(Fraction(c, scale**k) for k, c in enumerate(e))
        return CharPoly(np.array([complex(c) for c in rational]), rational)
    a = np.asarray(m, dtype=complex)
    coeffs = _faddeev_leverrier(a, 1.0 + 0j, lambda x, k: x / k)
    return CharPoly(np.array(coeffs, dtype=complex))


# --------------------------------------------------------------------------
# Konno-Sato


def t_matrix(g: Multigraph, exact: bool = False) -> np.ndarray:
    """Random-walk matrix ``T_uv = |arc_uv| / deg(u)``.

    On simple graphs this is ``1/deg(u)`` on neighbours.  Multi-edges and
    loops use the arc-count extension.
    """
    d = build_symmetric_digraph(g)
    deg = d.degrees()
    isolated = [v for v in range(g.n_vertices) if deg[v] == 0]
    if isolated:
        raise InputError(f"isolated vertices {isolated} have no transition row")
    n = g.n_vertices
    if exact:
        t = _object_identity(n, Fraction(1))
        t.fill(Fraction(0))
        for arc in d.arcs:
            t[arc.tail, arc.head] += Fraction(1, int(deg[arc.tail]))
        return t
    t = np.zeros((n, n))
    for arc in d.arcs:
        t[arc.tail, arc.head] += 1.0 / deg[arc.tail]
    return t


@dataclass
class KonnoSatoReport:
    n_vertices: int
    n_edges: int
    exponent: int
    hypothesis_ok: bool
    warnings: list
    lhs: np.ndarray
    rhs: np.ndarray
    residual: float
    float_residual: float
    exact: bool
    t_spectrum: np.ndarray
    quadratic_factors: list
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tol


def _expand_determinant(e, one):
    """``det((lam^2+1)I - 2 lam T)`` from the char-poly coefficients ``e`` of T.

    Uses ``sum_j e_j (lam^2+1)^(n-j) (2 lam)^j``.
    """
    n = len(e) - 1
    zero = one - one
    total = [zero] * (2 * n + 1)
    sq = [one, zero, one]
    for j, c in enumerate(e):
        term = [c * one]
        for _ in range(n - j):
            term = _poly_mul(term, sq) if isinstance(one, Fraction) else list(np.convolve(term, sq))
        term = term + [zero] * j
        factor = (2 * one) ** j
        offset = len(total) - len(term)
        for i, x in enumerate(term):
            total[offset + i] += factor * x
    return total


def konno_sato_rhs(g: Multigraph, exact: bool = True):
    """Descending coefficients of ``(lam^2-1)^(m-n) det((lam^2+1)I - 2 lam T)``."""
    n, m = g.n_vertices, g.n_edges
    if exact:
        e = char_poly(t_matrix(g, exact=True), exact=True).exact
        det_side = _expand_determinant(list(e), Fraction(1))
        trivial = [Fraction(1), Fraction(0), Fraction(-1)]
        if m >= n:
            for _ in range(m - n):
                det_side = _poly_mul(det_side, trivial)
            return det_side
        for _ in range(n - m):
            det_side, rem = _poly_divmod(det_side, trivial)
            if any(rem):
                raise NumericalError("(lam^2-1) does not divide the determinant side")
        return det_side
    e = char_poly(t_matrix(g)).coeffs
    det_side = np.array(_expand_determinant(list(e), 1.0 + 0j))
    if m >= n:
        for _ in range(m - n):
            det_side = np.convolve(det_side, [1, 0, -1])
        return det_side
    for _ in range(n - m):
        det_side, rem = np.polydiv(det_side, np.array([1, 0, -1], dtype=complex))
        if np.max(np.abs(rem), initial=0) > 1e-9 * max(1.0, np.max(np.abs(det_side))):
            raise NumericalError("(lam^2-1) does not divide the determinant side")
    return det_side


def konno_sato_check(g: Multigraph, tol: float = 1e-8, exact: bool = True) -> KonnoSatoReport:
    """Compare ``det(lam I - U_Gr)`` with the Konno-Sato right-hand side.

    The factorization assumes a simple connected graph; other inputs are still
    evaluated but the report carries a warning and the comparison is only
    informational.
    """
    from .walk import grover_transition

    warnings = []
    if not g.is_connected():
        warnings.append("graph is not connected")
    if not g.is_simple():
        warnings.append("graph is not simple; T uses the arc-count extension")
    for w in warnings:
        log.warning("konno_sato_check: %s", w)

    d = build_symmetric_digraph(g)
    u_float = grover_transition(d, exact=False).entries
    lhs_f = char_poly(u_float).coeffs
    rhs_f = konno_sato_rhs(g, exact=False)
    float_residual = _coeff_residual(lhs_f, rhs_f)
    if exact:
        lhs_q = char_poly(grover_transition(d, exact=True).exact, exact=True).exact
        rhs_q = konno_sato_rhs(g, exact=True)
        residual = (
            float(max(abs(a - b) for a, b in zip(lhs_q, rhs_q)))
            if len(lhs_q) == len(rhs_q)
            else math.inf
        )
        lhs = np.array([complex(x) for x in lhs_q])
        rhs = np.array([complex(x) for x in rhs_q])
    else:
        residual, lhs, rhs = float_residual, lhs_f, rhs_f
    mu = np.sort(np.linalg.eigvals(t_matrix(g)).real)
    quads = [(float(x), [1.0, -2.0 * float(x), 1.0]) for x in mu]
    return KonnoSatoReport(
        n_vertices=g.n_vertices,
        n_edges=g.n_edges,
        exponent=g.n_edges - g.n_vertices,
        hypothesis_ok=not warnings,
        warnings=warnings,
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        float_residual=float_residual,
        exact=exact,
        t_spectrum=mu,
        quadratic_factors=quads,
        tol=tol,
    )


def _coeff_residual(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return math.inf
    return float(np.max(np.abs(a - b), initial=0.0))


# --------------------------------------------------------------------------
# spectra and periodicity


def spectrum(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"spectrum needs a square matrix, got shape {m.shape}")
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc


@dataclass
class Periodicity:
    periodic: bool
    period: Optional[int]
    orders: list
    n_max: int
    verified: Optional[bool] = None
    power_residual: Optional[float] = None
    exact_periodic: Optional[bool] = None
    exact_orders: Optional[dict] = None

    def to_dict(self):
        return {
            "periodic": self.periodic,
            "period": self.period,
            "orders": self.orders,
            "n_max": self.n_max,
            "verified": self.verified,
            "power_residual": self.power_residual,
            "exact_periodic": self.exact_periodic,
            "exact_orders": None
            if self.exact_orders is None
            else {str(k): v for k, v in sorted(self.exact_orders.items())},
        }


def periodicity(
    eigenvalues: Sequence[complex],
    n_max: int = 720,
    tol: float = 1e-8,
    matrix=None,
    verify_tol: float = 1e-8,
) -> Periodicity:
    """Smallest ``n <= n_max`` with ``|lam^n - 1| < tol`` for every eigenvalue.

    When all orders exist the period is their LCM; if ``matrix`` is given the
    period is confirmed by a direct matrix power.
    """
    lam = np.asarray(eigenvalues, dtype=complex)
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    powers = lam[:, None] ** np.arange(1, n_max + 1)[None, :]
    hit = np.abs(powers - 1) < tol
    orders = [int(np.argmax(row)) + 1 if row.any() else None for row in hit]
    if any(o is None for o in orders):
        return Periodicity(False, None, orders, n_max)
    period = math.lcm(*orders) if orders else 1
    result = Periodicity(True, period, orders, n_max)
    if matrix is not None:
        u = np.asarray(matrix, dtype=complex)
        res = float(
            np.max(np.abs(np.linalg.matrix_power(u, period) - np.identity(len(u))), initial=0.0)
        )
        result.verified = res < verify_tol
        result.power_residual = res
        if not result.verified:
            result.periodic = False
            result.period = None
    return result


def _totient(n):
    result, p, m = n, 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


_CYCLOTOMIC_CACHE: dict = {}


def cyclotomic(n: int) -> list:
    """Descending integer coefficients of the n-th cyclotomic polynomial."""
    if n in _CYCLOTOMIC_CACHE:
        return _CYCLOTOMIC_CACHE[n]
    p = [Fraction(1)] + [Fraction(0)] * (n - 1) + [Fraction(-1)]
    for k in range(1, n):
        if n % k == 0:
            p, rem = _poly_divmod(p, cyclotomic(k))
            assert not any(rem)
    p = [Fraction(int(x)) for x in p]
    _CYCLOTOMIC_CACHE[n] = p
    return p


def cyclotomic_factorization(coeffs) -> tuple[dict, list]:
    """Divide every cyclotomic factor out of a rational polynomial.

    Returns ``(orders, cofactor)``: ``orders[n]`` is the multiplicity of
    ``Phi_n`` and ``cofactor`` the remaining monic polynomial.  All roots are
    roots of unity exactly when the cofactor is the constant 1.
    """
    p = _strip([Fraction(x) for x in coeffs])
    if p[0] == 0:
        raise InputError("zero polynomial")
    p = [x / p[0] for x in p]
    deg = len(p) - 1
    orders = {}
    n = 1
    # phi(n) >= sqrt(n/2), so no Phi_n of degree <= deg has n beyond 2 deg^2
    while n <= max(2, 2 * deg * deg) and len(p) > 1:
        if _totient(n) <= len(p) - 1:
            phi = cyclotomic(n)
            while len(p) >= len(phi):
                quot, rem = _poly_divmod(p, phi)
                if any(rem):
                    break
                p = quot
                orders[n] = orders.get(n, 0) + 1
        n += 1
    return orders, p


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    char_poly: CharPoly
    periodicity: Periodicity
    konno_sato: Optional[KonnoSatoReport] = None
    t_spectrum: Optional[np.ndarray] = None
    unit_modulus_residual: float = field(default=0.0)


def spectrum_report(
    u,
    exact_u=None,
    graph: Optional[Multigraph] = None,
    n_max: int = 720,
    tol: float = 1e-8,
    konno_sato: bool = False,
) -> SpectrumReport:
    """Eigenvalues, characteristic polynomial and periodicity of ``u``.

    ``exact_u`` (a rational matrix) makes the characteristic polynomial exact
    and adds the cyclotomic verdict, which decides periodicity outright.
    """
    u = np.asarray(u, dtype=complex)
    eig = spectrum(u)
    cp = char_poly(exact_u, exact=True) if exact_u is not None else char_poly(u)
    per = periodicity(eig, n_max=n_max, tol=tol, matrix=u)
    if cp.exact is not None:
        # eigenvalues of a unitary matrix are simple roots of its minimal
        # polynomial, so the period is the LCM of the cyclotomic orders
        orders, cofactor = cyclotomic_factorization(cp.exact)
        per.exact_periodic = len(cofactor) == 1
        if per.exact_periodic:
            per.exact_orders = orders
            exact_period = math.lcm(*orders) if orders else 1
            if per.periodic and per.period != exact_period:
                raise NumericalError(
                    f"numerical period {per.period} disagrees with exact period {exact_period}"
                )
        elif per.periodic:
            raise NumericalError("numerical search found a period but the exact test rules it out")
    ks = None
    t_spec = None
    if graph is not None:
        t_spec = np.sort(np.linalg.eigvals(t_matrix(graph)).real)
        if konno_sato:
            ks = konno_sato_check(graph, tol=tol)
    return SpectrumReport(
        eigenvalues=eig,
        char_poly=cp,
        periodicity=per,
        konno_sato=ks,
        t_spectrum=t_spec,
        unit_modulus_residual=float(np.max(np.abs(np.abs(eig) - 1), initial=0.0)),
    )
