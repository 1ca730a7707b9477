from fractions import Fraction

import numpy as np
import pytest

from helpers import simple_corpus
from qwzeta.errors import InputError
from qwzeta.families import complete_graph, cycle_graph, path_graph, random_connected_graph, star_graph
from qwzeta.graph import Multigraph, build_symmetric_digraph
from qwzeta.spectral import (
    char_poly,
    cyclotomic,
    cyclotomic_factorization,
    konno_sato_check,
    periodicity,
    spectrum,
    spectrum_report,
    t_matrix,
)
from qwzeta.walk import grover_transition, shift_matrix

C3 = cycle_graph(3)
K4 = complete_graph(4)


def grover(g, exact=False):
    return grover_transition(build_symmetric_digraph(g), exact=exact)


def sorted_eigs(z):
    z = np.asarray(z)
    return z[np.lexsort((np.round(z.imag, 8), np.round(z.real, 8)))]


class TestCharPoly:
    def test_identity(self):
        assert np.allclose(char_poly(np.identity(2)).coeffs, [1, -2, 1])

    def test_flip(self):
        assert np.allclose(char_poly(np.array([[0, 1], [1, 0]], dtype=float)).coeffs, [1, 0, -1])

    def test_triangle_grover(self):
        expected = np.polymul(np.polymul([1, -1], [1, -1]), np.polymul([1, 1, 1], [1, 1, 1]))
        cp = char_poly(grover(C3, exact=True).exact)
        assert cp.exact == tuple(Fraction(int(x)) for x in expected)
        assert np.allclose(char_poly(grover(C3).entries).coeffs, expected, atol=1e-12)

    def test_non_square(self):
        with pytest.raises(InputError):
            char_poly(np.ones((2, 3)))

    def test_float_matches_numpy(self):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
        assert np.allclose(char_poly(m).coeffs, np.poly(m), atol=1e-9)

    def test_exact_matches_float(self):
        rng = np.random.default_rng(1)
        q = np.array([[Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 7))) for _ in range(5)] for _ in range(5)], dtype=object)
        cp = char_poly(q)
        assert cp.exact is not None
        assert np.allclose(cp.coeffs, np.poly(q.astype(float)), atol=1e-10)

    def test_evaluation_matches_determinant(self):
        u = grover(K4).entries
        cp = char_poly(u)
        for lam in (0.3, 1.7j, -0.4 + 0.9j):
            det = np.linalg.det(lam * np.identity(12) - u)
            assert abs(np.polyval(cp.coeffs, lam) - det) <= 1e-8 * max(1, abs(det))


class TestTMatrix:
    def test_triangle(self):
        t = t_matrix(C3)
        assert np.allclose(t, (np.ones((3, 3)) - np.identity(3)) / 2)
        assert np.allclose(np.sort(np.linalg.eigvalsh(t)), [-0.5, -0.5, 1])

    def test_k4(self):
        t = t_matrix(K4)
        assert np.allclose(t, (np.ones((4, 4)) - np.identity(4)) / 3)
        assert np.allclose(np.sort(np.linalg.eigvalsh(t)), [-1 / 3] * 3 + [1])

    def test_k2(self):
        assert np.array_equal(t_matrix(path_graph(2)), [[0, 1], [1, 0]])

    def test_isolated(self):
        with pytest.raises(InputError):
            t_matrix(Multigraph(3, ((0, 1),)))

    def test_multigraph_extension(self):
        t = t_matrix(Multigraph(2, ((0, 1), (0, 1), (1, 1))), exact=True)
        assert t[0, 1] == 1 and t[1, 0] == Fraction(1, 2) and t[1, 1] == Fraction(1, 2)


class TestKonnoSato:
    def test_triangle(self):
        rep = konno_sato_check(C3)
        assert rep.passed and rep.residual < 1e-10 and rep.exponent == 0

    def test_k4(self):
        rep = konno_sato_check(K4)
        assert rep.passed and rep.residual < 1e-10 and rep.exponent == 2

    def test_star_divides(self):
        rep = konno_sato_check(star_graph(3))
        assert rep.exponent == -1
        assert rep.passed and rep.residual == 0
        assert len(rep.rhs) == 7

    def test_hypothesis_warnings(self):
        rep = konno_sato_check(Multigraph(4, ((0, 1), (2, 3))))
        assert not rep.hypothesis_ok and rep.warnings
        rep = konno_sato_check(Multigraph(2, ((0, 1), (0, 1))))
        assert not rep.hypothesis_ok

    @pytest.mark.parametrize("name, g", simple_corpus(seed=3, n_random=5))
    def test_against_numpy(self, name, g):
        """Independent oracle: numpy polynomial products of the factored form."""
        u = grover(g).entries
        t = t_matrix(g)
        mu = np.linalg.eigvals(t)
        rhs = np.array([1.0])
        for x in mu:
            rhs = np.polymul(rhs, [1, -2 * x, 1])
        e = g.n_edges - g.n_vertices
        if e >= 0:
            for _ in range(e):
                rhs = np.polymul(rhs, [1, 0, -1])
        else:
            for _ in range(-e):
                rhs, rem = np.polydiv(rhs, [1, 0, -1])
                assert np.allclose(rem, 0, atol=1e-9)
        assert np.allclose(np.poly(u), rhs, atol=1e-8)
        assert konno_sato_check(g).residual < 1e-8


class TestSpectrum:
    def test_triangle(self):
        w = np.exp(2j * np.pi / 3)
        expected = [1, 1, w, w, w.conjugate(), w.conjugate()]
        assert np.allclose(sorted_eigs(spectrum(grover(C3).entries)), sorted_eigs(expected), atol=1e-8)

    def test_flip(self):
        g = cycle_graph(5)
        eig = spectrum(shift_matrix(build_symmetric_digraph(g)))
        assert np.allclose(sorted_eigs(eig), [-1] * 5 + [1] * 5)

    def test_k4(self):
        roots = np.roots([1, 2 / 3, 1])
        # (lambda^2 - 1)^2 from m - n = 2, (lambda - 1)^2 from mu = 1, three pairs from mu = -1/3
        expected = [1, 1, -1, -1, 1, 1] + list(roots) * 3
        assert np.allclose(sorted_eigs(spectrum(grover(K4).entries)), sorted_eigs(expected), atol=1e-7)

    def test_product_is_constant_term(self):
        u = grover(random_connected_graph(np.random.default_rng(3), 6)).entries
        cp = char_poly(u)
        assert abs(np.prod(spectrum(u)) - (-1) ** len(u) * cp.coeffs[-1]) < 1e-8


class TestPeriodicity:
    def test_triangle(self):
        u = grover(C3).entries
        p = periodicity(spectrum(u), matrix=u)
        assert p.periodic and p.period == 3 and p.verified

    def test_k4(self):
        p = periodicity(spectrum(grover(K4).entries))
        assert not p.periodic and p.period is None

    def test_identity(self):
        p = periodicity(np.ones(4), matrix=np.identity(4))
        assert p.periodic and p.period == 1

    @pytest.mark.parametrize("g", [cycle_graph(n) for n in range(3, 8)] + [path_graph(3), star_graph(3), complete_graph(3)])
    def test_consistency(self, g):
        u = grover(g).entries
        p = periodicity(spectrum(u), matrix=u)
        assert p.periodic
        eye = np.identity(len(u))
        assert np.abs(np.linalg.matrix_power(u, p.period) - eye).max() < 1e-8
        for j in range(1, p.period):
            assert np.abs(np.linalg.matrix_power(u, j) - eye).max() > 0.1

    def test_report_exact(self):
        rep = spectrum_report(grover(K4).entries, exact_u=grover(K4, exact=True).exact)
        assert rep.periodicity.exact_periodic is False
        rep = spectrum_report(grover(cycle_graph(6)).entries, exact_u=grover(cycle_graph(6), exact=True).exact)
        assert rep.periodicity.exact_periodic and rep.periodicity.period == 6


class TestCyclotomic:
    def test_small(self):
        assert cyclotomic(1) == [1, -1]
        assert cyclotomic(4) == [1, 0, 1]
        assert cyclotomic(6) == [1, -1, 1]
        assert cyclotomic(12) == [1, 0, -1, 0, 1]

    def test_k4_quadratic_is_not_cyclotomic(self):
        orders, cofactor = cyclotomic_factorization([1, Fraction(2, 3), 1])
        assert orders == {} and len(cofactor) == 3

    def test_product(self):
        p = np.polymul(np.polymul(cyclotomic(3), cyclotomic(3)), cyclotomic(10))
        orders, cofactor = cyclotomic_factorization([int(x) for x in p])
        assert orders == {3: 2, 10: 1} and cofactor == [1]
