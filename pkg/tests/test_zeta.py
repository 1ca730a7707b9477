import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import edge_matrix_by_definition, random_weights
from qwzeta.errors import InputError, ParseError, ResourceError, SingularityError
from qwzeta.families import complete_graph, cycle_graph, path_graph, random_multigraph, single_loop, star_graph
from qwzeta.graph import Multigraph, build_symmetric_digraph
from qwzeta.series import TruncatedSeries
from qwzeta.walk import grover_transition
from qwzeta.zeta import (
    WeightScheme,
    closed_path_sums,
    edge_matrix,
    ihara_residuals,
    load_weights,
    make_weights,
    reciprocal_zeta_coeffs,
    weighted_adjacency,
    weighted_degree,
    weights_from_dict,
    weights_to_dict,
    zeta_euler,
    zeta_exponential,
    zeta_hashimoto,
    zeta_ihara_expression,
)

C3 = build_symmetric_digraph(cycle_graph(3))
K4 = build_symmetric_digraph(complete_graph(4))
LOOP = build_symmetric_digraph(single_loop())
TREE = build_symmetric_digraph(star_graph(3))
P2 = build_symmetric_digraph(path_graph(2))

TRIANGLE_SERIES = [1, 0, 0, 2, 0, 0, 3, 0]  # 1 / (1 - t^3)^2


def zero_weights(d):
    z = np.zeros(d.n_arcs, dtype=complex)
    return WeightScheme(z, z.copy())


class TestMakeWeights:
    def test_ihara(self):
        w = make_weights(C3, "ihara")
        assert np.all(w.tau == 1) and np.all(w.upsilon == 1)

    def test_grover_cycle(self):
        w = make_weights(C3, "grover")
        assert np.all(w.tau == 1) and np.all(w.upsilon == 1)

    def test_grover_k4(self):
        assert np.allclose(make_weights(K4, "grover").tau, 2 / 3)
        assert set(make_weights(K4, "grover", exact=True).tau) == {Fraction(2, 3)}

    def test_bartholdi(self):
        w = make_weights(C3, "bartholdi", {"q": 3})
        assert np.allclose(w.upsilon, 2 * w.tau)
        with pytest.raises(InputError):
            make_weights(C3, "bartholdi")

    def test_mizuno_sato(self):
        w = make_weights(C3, "mizuno_sato", {"tau": 0.5})
        assert np.array_equal(w.tau, w.upsilon)

    def test_custom_needs_arrays(self):
        with pytest.raises(InputError):
            make_weights(C3, "custom", {"tau": 1, "upsilon": 1})
        with pytest.raises(InputError):
            make_weights(C3, "custom", {"tau": [1] * 5, "upsilon": [1] * 6})

    def test_preset_constraint(self):
        with pytest.raises(InputError):
            WeightScheme(np.ones(6), 2 * np.ones(6), "sato")
        with pytest.raises(InputError):
            make_weights(C3, "nonsense")


class TestEdgeMatrix:
    def test_path_is_zero(self):
        assert np.array_equal(edge_matrix(P2, make_weights(P2, "ihara")), np.zeros((2, 2)))

    def test_loop(self):
        assert np.array_equal(edge_matrix(LOOP, make_weights(LOOP, "ihara")), np.identity(2))

    def test_grover_transpose(self):
        m = edge_matrix(C3, make_weights(C3, "grover"))
        assert np.allclose(m.T, grover_transition(C3).entries, atol=1e-15)

    def test_exact(self):
        m = edge_matrix(K4, make_weights(K4, "grover", exact=True))
        assert m.dtype == object
        assert all(isinstance(x, Fraction) for x in m.ravel())
        # arc 0 runs 0 -> 1; its continuations leave vertex 1 and arc 1 is its mate
        for b in K4.out_index[1]:
            assert m[0, b] == (Fraction(-1, 3) if b == 1 else Fraction(2, 3))
        assert m[0, 0] == 0

    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_matches_definition_and_adjacency(self, seed):
        rng = np.random.default_rng(seed)
        d = build_symmetric_digraph(random_multigraph(rng, max_vertices=4, max_edges=5))
        w = random_weights(rng, d)
        m = edge_matrix(d, w)
        assert np.allclose(m, edge_matrix_by_definition(d, w.tau, w.upsilon), atol=0)
        rows, cols = np.nonzero(m)
        assert np.all(d.heads[rows] == d.tails[cols])


class TestExpressions:
    def test_tree_is_one(self):
        for f in (zeta_exponential, zeta_euler, zeta_hashimoto):
            assert f(TREE, make_weights(TREE, "ihara"), 8) == TruncatedSeries.one(8)

    def test_triangle(self):
        w = make_weights(C3, "ihara")
        for f in (zeta_exponential, zeta_euler, zeta_hashimoto):
            assert np.allclose(f(C3, w, 7).coeffs, TRIANGLE_SERIES, atol=1e-12)

    def test_zero_weights(self):
        d = build_symmetric_digraph(Multigraph(2, ((0, 1), (1, 1), (0, 1))))
        for f in (zeta_exponential, zeta_euler, zeta_hashimoto):
            assert f(d, zero_weights(d), 6) == TruncatedSeries.one(6)

    def test_loop_euler(self):
        assert np.allclose(zeta_euler(LOOP, make_weights(LOOP, "ihara"), 3).coeffs, [1, 2, 3, 4])

    def test_k4_grover(self):
        w = make_weights(K4, "grover")
        assert zeta_hashimoto(K4, w, 6).max_deviation(zeta_exponential(K4, w, 6)) < 1e-8

    def test_backtracking_cycle_in_product(self):
        # on a single edge only the backtrack (a, mate a) closes up;
        # det(I - tM) = 1 - t^2 (tau' - ups')(tau - ups)
        tau = np.array([0.3 + 0.1j, -0.2 + 0.5j])
        ups = np.array([0.7j, 0.4])
        w = WeightScheme(tau, ups)
        c = (tau[1] - ups[1]) * (tau[0] - ups[0])
        expected = TruncatedSeries([1, 0, -c], 6).reciprocal()
        for f in (zeta_exponential, zeta_euler, zeta_hashimoto):
            assert f(P2, w, 6).max_deviation(expected) < 1e-12

    def test_order_cap(self):
        with pytest.raises(ResourceError):
            zeta_exponential(C3, make_weights(C3, "ihara"), 11)
        with pytest.raises(InputError):
            zeta_euler(C3, make_weights(C3, "ihara"), 0)

    @given(st.integers(0, 10_000))
    @settings(max_examples=20, deadline=None)
    def test_path_sums_are_traces(self, seed):
        rng = np.random.default_rng(seed)
        d = build_symmetric_digraph(random_multigraph(rng, max_vertices=4, max_edges=5))
        w = random_weights(rng, d)
        m = edge_matrix(d, w)
        sums = closed_path_sums(d, w, 6)
        for k in range(1, 7):
            assert abs(sums[k] - np.trace(np.linalg.matrix_power(m, k))) < 1e-9 * max(1, abs(sums[k]))

    def test_reciprocal_coefficients_are_reversed_char_poly(self):
        rng = np.random.default_rng(3)
        d = build_symmetric_digraph(random_multigraph(rng))
        w = random_weights(rng, d)
        coeffs = reciprocal_zeta_coeffs(d, w).coeffs
        assert np.allclose(coeffs, np.poly(edge_matrix(d, w)), atol=1e-10)


class TestIhara:
    def test_weighted_matrices_at_zero(self):
        w = make_weights(C3, "ihara")
        a = weighted_adjacency(C3, w, 0)
        assert np.array_equal(a, np.ones((3, 3)) - np.identity(3))

    def test_degree_vanishes_without_upsilon(self):
        w = WeightScheme(np.ones(6), np.zeros(6))
        assert np.array_equal(weighted_degree(C3, w, 0.25), np.zeros((3, 3)))

    def test_loop_values(self):
        w = make_weights(LOOP, "ihara")
        assert weighted_adjacency(LOOP, w, 0.5)[0, 0] == pytest.approx(8 / 3)
        assert weighted_degree(LOOP, w, 0.5)[0, 0] == pytest.approx(8 / 3)

    def test_value_at_zero(self):
        rng = np.random.default_rng(0)
        d = build_symmetric_digraph(random_multigraph(rng))
        assert zeta_ihara_expression(d, random_weights(rng, d), 0) == pytest.approx(1)

    def test_triangle(self):
        m = edge_matrix(C3, make_weights(C3, "ihara"))
        direct = np.linalg.det(np.identity(6) - 0.3 * m)
        assert abs(zeta_ihara_expression(C3, make_weights(C3, "ihara"), 0.3) - direct) < 1e-10

    def test_k4_grover(self):
        w = make_weights(K4, "grover")
        t = 0.2 + 0.1j
        direct = np.linalg.det(np.identity(12) - t * edge_matrix(K4, w))
        assert abs(zeta_ihara_expression(K4, w, t) - direct) < 1e-10

    def test_pole_names_edge(self):
        w = make_weights(C3, "ihara")
        with pytest.raises(SingularityError, match="edge 0"):
            zeta_ihara_expression(C3, w, 1.0)

    def test_times_hashimoto_is_one(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            d = build_symmetric_digraph(random_multigraph(rng))
            w = random_weights(rng, d)
            m = edge_matrix(d, w)
            for t in (0.1, -0.15 + 0.1j, 0.2j):
                hashimoto = 1 / np.linalg.det(np.identity(d.n_arcs) - t * m)
                assert abs(zeta_ihara_expression(d, w, t) * hashimoto - 1) < 1e-9
            assert ihara_residuals(d, w).max() < 1e-8


class TestWeightFiles:
    def test_round_trip_custom(self, tmp_path):
        rng = np.random.default_rng(1)
        w = random_weights(rng, C3)
        path = tmp_path / "w.json"
        path.write_text(json.dumps(weights_to_dict(w)))
        w2 = load_weights(path, C3)
        assert np.array_equal(w2.tau, w.tau) and np.array_equal(w2.upsilon, w.upsilon)

    def test_preset_document(self):
        w = weights_from_dict(C3, {"preset": "bartholdi", "params": {"q": 2}})
        assert np.allclose(w.upsilon, w.tau)

    def test_bad_documents(self, tmp_path):
        with pytest.raises(ParseError):
            weights_from_dict(C3, {"tau": []})
        with pytest.raises(ParseError):
            weights_from_dict(C3, {"preset": "custom", "tau": [1] * 6})
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            load_weights(path, C3)
