import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from regomax import (CapacityError, DimensionError, DirectedGraph, GoogleOperator,
                     GraphFormatError, bandwidth, cuthill_mckee, invert, load_edge_list,
                     load_labels, relabel)

from conftest import literal_google, random_graph


def lines(*rows):
    return io.StringIO("\n".join(rows) + "\n")


class TestLoadEdgeList:
    def test_minimal(self):
        g = load_edge_list(lines("0 1"))
        assert g.n_nodes == 2
        assert g.edge_set() == {(0, 1)}
        assert g.dangling.tolist() == [False, True]

    def test_dedup_and_cycle(self):
        g = load_edge_list(lines("0 1", "0 1", "1 0"))
        assert g.n_edges == 2
        assert not g.dangling.any()

    def test_empty_with_hint(self):
        g = load_edge_list(io.StringIO(""), n_hint=3)
        assert g.n_nodes == 3
        assert g.dangling.all()

    def test_hint_larger_than_ids(self):
        assert load_edge_list(lines("0 1"), n_hint=5).n_nodes == 5

    def test_comments_and_blank_lines(self):
        g = load_edge_list(lines("# header", "", "2 0", "  # indented comment", "0 2"))
        assert g.edge_set() == {(2, 0), (0, 2)}

    def test_order_independent(self):
        rows = ["0 3", "3 1", "1 2", "2 0", "3 2"]
        a = load_edge_list(lines(*rows))
        b = load_edge_list(lines(*reversed(rows)))
        assert a == b
        assert np.array_equal(a.in_indices, b.in_indices)

    @pytest.mark.parametrize("bad,lineno", [("0 x", 2), ("0 1 2", 2), ("-1 0", 2), ("7", 2)])
    def test_parse_error_reports_line(self, bad, lineno):
        with pytest.raises(GraphFormatError) as err:
            load_edge_list(lines("0 1", bad))
        assert err.value.lineno == lineno
        assert f"line {lineno}" in str(err.value)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            load_edge_list(lines(f"0 {2**40}"))

    def test_self_loops_kept_or_dropped(self):
        assert (1, 1) in load_edge_list(lines("0 1", "1 1")).edge_set()
        assert (1, 1) not in load_edge_list(lines("0 1", "1 1"), drop_self_loops=True).edge_set()


def test_load_labels():
    labels = load_labels(lines("0\tAlpha", "2\tGamma ray"), 3)
    assert labels == ("Alpha", "1", "Gamma ray")
    with pytest.raises(GraphFormatError):
        load_labels(lines("0 Alpha"), 3)


def test_invariants_on_random_graph():
    g = random_graph(80, 3.0, seed=3)
    for j in range(g.n_nodes):
        succ = g.successors(j)
        assert np.all(np.diff(succ) > 0)
        assert g.out_degree[j] == succ.size
        assert g.dangling[j] == (succ.size == 0)
    src, dst = g.edges()
    assert src.min() >= 0 and dst.max() < g.n_nodes
    assert {(int(s), int(t)) for s, t in zip(src, dst)} == g.edge_set()


class TestInvert:
    def test_single_edge(self):
        g = DirectedGraph.from_edges([0], [1])
        assert invert(g).edge_set() == {(1, 0)}

    def test_cycle(self):
        g = DirectedGraph.from_edges([0, 1, 2], [1, 2, 0])
        assert invert(g).edge_set() == {(0, 2), (2, 1), (1, 0)}

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 50), st.integers(0, 2**31 - 1))
    def test_involution(self, n, seed):
        g = random_graph(n, 2.0, seed=seed)
        assert invert(invert(g)).edge_set() == g.edge_set()
        assert invert(g).edge_set() == {(t, s) for s, t in g.edge_set()}


class TestApply:
    def test_column_of_linked_node(self):
        op = GoogleOperator(DirectedGraph.from_edges([0], [1]), 0.85)
        np.testing.assert_allclose(op.apply([1.0, 0.0]), [0.075, 0.925], rtol=0, atol=1e-15)

    def test_column_of_dangling_node(self):
        op = GoogleOperator(DirectedGraph.from_edges([0], [1]), 0.85)
        np.testing.assert_allclose(op.apply([0.0, 1.0]), [0.5, 0.5], rtol=0, atol=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 7])
    def test_all_dangling_gives_uniform(self, n):
        g = DirectedGraph.from_edges([], [], n)
        v = np.random.default_rng(n).random(n)
        y = GoogleOperator(g).apply(v / v.sum())
        np.testing.assert_allclose(y, np.full(n, 1.0 / n), atol=1e-15)

    def test_dimension_error(self):
        op = GoogleOperator(DirectedGraph.from_edges([0], [1]))
        with pytest.raises(DimensionError):
            op.apply([1.0, 0.0, 0.0])

    def test_rejects_non_stochastic(self):
        op = GoogleOperator(DirectedGraph.from_edges([0], [1]))
        with pytest.raises(ValueError):
            op.apply([0.7, 0.7])

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_literal_dense_matrix(self, seed):
        g = random_graph(40, 2.5, seed=seed, n_dangling=4)
        G = literal_google(g, 0.85)
        op = GoogleOperator(g, 0.85)
        for j in range(g.n_nodes):
            np.testing.assert_allclose(op.column(j), G[:, j], rtol=0, atol=1e-14)

    def test_rmatvec_is_transpose(self):
        g = random_graph(30, 2.0, seed=11, n_dangling=3)
        G = literal_google(g, 0.7)
        y = np.random.default_rng(0).standard_normal(30)
        np.testing.assert_allclose(GoogleOperator(g, 0.7).rmatvec(y), G.T @ y, atol=1e-14)

    def test_inverted_direction(self):
        g = random_graph(20, 2.0, seed=5)
        np.testing.assert_allclose(GoogleOperator(g, direction="inverted").to_dense(),
                                   literal_google(invert(g), 0.85), atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 60), st.floats(0.05, 0.95), st.integers(0, 10_000))
    def test_stochastic_and_positive(self, n, alpha, seed):
        g = random_graph(n, 2.0, seed=seed, n_dangling=min(n, 3))
        v = np.random.default_rng(seed).random(n)
        v /= v.sum()
        y = GoogleOperator(g, alpha).apply(v)
        assert abs(y.sum() - 1.0) <= 1e-12
        assert y.min() >= (1 - alpha) / n * v.sum() * (1 - 1e-12)

    def test_bad_alpha(self):
        with pytest.raises(ValueError):
            GoogleOperator(DirectedGraph.from_edges([0], [1]), alpha=1.0)


def brute_bandwidth(graph, order):
    pos = {node: k for k, node in enumerate(order)}
    return max((abs(pos[s] - pos[t]) for s, t in graph.edge_set()), default=0)


class TestCuthillMcKee:
    def test_path_reorders_to_bandwidth_one(self):
        g = DirectedGraph.from_edges([0, 2], [2, 1])
        order = cuthill_mckee(g)
        assert sorted(order) == [0, 1, 2]
        assert bandwidth(g, order) == 1 == brute_bandwidth(g, order)

    def test_banded_chain_stays_banded(self):
        g = DirectedGraph.from_edges([0, 1, 2], [1, 2, 3])
        order = cuthill_mckee(g)
        assert bandwidth(g, order) == 1

    def test_deterministic_tie_break(self):
        # star: hub 0 with leaves 1..4; all leaves have degree 1
        g = DirectedGraph.from_edges([0, 0, 0, 0], [1, 2, 3, 4])
        assert cuthill_mckee(g).tolist() == [1, 0, 2, 3, 4]

    def test_components_by_min_degree(self):
        # component {0,1,2} (triangle, min degree 2) and path {3,4} (min degree 1)
        g = DirectedGraph.from_edges([0, 1, 2, 3], [1, 2, 0, 4])
        assert cuthill_mckee(g).tolist() == [3, 4, 0, 1, 2]

    def test_relabel_is_isomorphism(self):
        g = random_graph(60, 2.0, seed=9)
        order = cuthill_mckee(g)
        h = relabel(g, order)
        pos = np.empty(60, dtype=int)
        pos[order] = np.arange(60)
        assert h.edge_set() == {(int(pos[s]), int(pos[t])) for s, t in g.edge_set()}
        assert bandwidth(h) == bandwidth(g, order) == brute_bandwidth(g, order)

    def test_random_graphs_mostly_improve(self):
        wins = 0
        for seed in range(20):
            g = random_graph(100, 1.5, seed=seed)
            order = cuthill_mckee(g)
            assert sorted(order.tolist()) == list(range(100))
            wins += brute_bandwidth(g, order) <= brute_bandwidth(g, range(100))
        assert wins >= 18
