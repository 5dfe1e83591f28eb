import numpy as np
import pytest

from regomax import (DirectedGraph, GoogleOperator, NodeSelection, SelectionError, compute_reduced,
                     pagerank, reduce_oracle, scattering_eigs, sector_weights)
from regomax.exceptions import SeriesDivergenceError
from regomax.reduced import component_weights

from conftest import literal_google, random_graph, random_selection


def dense_blocks(graph, alpha, selection):
    G = literal_google(graph, alpha)
    r = np.asarray(selection.nodes)
    s = np.setdiff1d(np.arange(graph.n_nodes), r)
    return G, r, s


class TestNodeSelection:
    def test_rejects_duplicates(self):
        with pytest.raises(SelectionError):
            NodeSelection((1, 2, 1))

    def test_rejects_out_of_range(self):
        with pytest.raises(SelectionError):
            NodeSelection((0, 5)).validate(5)

    def test_rejects_empty(self):
        with pytest.raises(SelectionError):
            NodeSelection(()).validate(5)

    def test_defaults_and_positions(self):
        sel = NodeSelection((4, 2, 9), ("bank", "country", "bank"))
        assert sel.groups == (0, 0, 0)
        assert sel.labels == ("4", "2", "9")
        assert sel.positions("bank").tolist() == [0, 2]
        assert sel.positions().tolist() == [0, 1, 2]


class TestScatteringEigs:
    def test_scalar_block(self):
        g = random_graph(6, 2.0, seed=1)
        sel = NodeSelection((0, 1, 2, 3, 5))
        lam, psi_R, psi_L = scattering_eigs(g, 0.85, sel)
        G = literal_google(g, 0.85)
        assert lam == pytest.approx(G[4, 4], abs=1e-15)
        assert psi_R.tolist() == [1.0] and psi_L.tolist() == pytest.approx([1.0])

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_dense_eigensolve(self, seed):
        g = random_graph(30, 5.0, seed=seed, n_dangling=2)
        sel = random_selection(30, 5, seed)
        G, r, s = dense_blocks(g, 0.85, sel)
        Gss = G[np.ix_(s, s)]
        w, V = np.linalg.eig(Gss)
        k = np.argmax(w.real)
        lam, psi_R, psi_L = scattering_eigs(g, 0.85, sel)
        assert abs(lam - w[k].real) < 1e-10
        ref = np.real(V[:, k])
        np.testing.assert_allclose(psi_R, ref / ref.sum(), atol=1e-11)
        np.testing.assert_allclose(Gss.T @ psi_L, lam * psi_L, atol=1e-10)
        assert psi_L @ psi_R == pytest.approx(1.0, abs=1e-13)
        assert 0 < lam < 1

    def test_all_dangling(self):
        g = DirectedGraph.from_edges([], [], 10)
        lam, psi_R, psi_L = scattering_eigs(g, 0.85, NodeSelection((0, 1)))
        assert lam == pytest.approx(0.8, abs=1e-14)
        np.testing.assert_allclose(psi_R, np.full(8, 1 / 8), atol=1e-15)

    def test_empty_complement(self):
        g = random_graph(4, 1.0, seed=0)
        with pytest.raises(SelectionError):
            scattering_eigs(g, 0.85, NodeSelection((0, 1, 2, 3)))


class TestOracle:
    def test_whole_graph_is_G(self):
        g = random_graph(12, 2.0, seed=3)
        sel = NodeSelection(tuple(range(12)))
        np.testing.assert_allclose(reduce_oracle(g, 0.85, sel), literal_google(g, 0.85), atol=1e-15)

    def test_one_by_one(self):
        g = DirectedGraph.from_edges([0], [1])
        np.testing.assert_allclose(reduce_oracle(g, 0.85, NodeSelection((1,))), [[1.0]], atol=1e-15)

    def test_size_guard(self):
        g = DirectedGraph.from_edges([], [], 2001)
        with pytest.raises(MemoryError):
            reduce_oracle(g, 0.85, NodeSelection((0,)))


@pytest.mark.parametrize("n,n_r,seed", [(30, 5, 0), (30, 3, 1), (100, 10, 2), (200, 25, 3)])
def test_closure_against_oracle(n, n_r, seed):
    g = random_graph(n, 5.0, seed=seed, n_dangling=n // 20)
    sel = random_selection(n, n_r, seed)
    R = compute_reduced(g, 0.85, sel)
    oracle = reduce_oracle(g, 0.85, sel)
    assert np.abs(R.G_rr + R.G_pr + R.G_qr - oracle).max() < 1e-10
    np.testing.assert_allclose(R.G_R, R.G_rr + R.G_pr + R.G_qr, rtol=0, atol=1e-12)
    np.testing.assert_allclose(R.G_R.sum(axis=0), 1.0, atol=1e-10)


def test_components_match_dense_formulas():
    g = random_graph(40, 4.0, seed=8, n_dangling=3)
    sel = random_selection(40, 6, 8)
    G, r, s = dense_blocks(g, 0.85, sel)
    Grs, Gsr, Gss = G[np.ix_(r, s)], G[np.ix_(s, r)], G[np.ix_(s, s)]
    w, VR = np.linalg.eig(Gss)
    k = np.argmax(w.real)
    lam = w[k].real
    psi_R = np.real(VR[:, k])
    psi_R /= psi_R.sum()
    wl, VL = np.linalg.eig(Gss.T)
    psi_L = np.real(VL[:, np.argmax(wl.real)])
    psi_L /= psi_L @ psi_R
    Pc = np.outer(psi_R, psi_L)
    Qc = np.eye(s.size) - Pc
    Gpr = Grs @ Pc @ Gsr / (1 - lam)
    Gqr = Grs @ Qc @ np.linalg.solve(np.eye(s.size) - Qc @ Gss @ Qc, Qc @ Gsr)
    R = compute_reduced(g, 0.85, sel)
    np.testing.assert_allclose(R.G_rr, G[np.ix_(r, r)], atol=1e-15)
    np.testing.assert_allclose(R.G_pr, Gpr, atol=1e-10)
    np.testing.assert_allclose(R.G_qr, Gqr, atol=1e-10)


def test_rank_restriction():
    g = random_graph(300, 5.0, seed=21, n_dangling=10)
    sel = random_selection(300, 12, 21)
    R = compute_reduced(g, 0.85, sel)
    p_r = pagerank(R.G_R, tol=1e-15, max_iter=10_000).probabilities
    p = pagerank(GoogleOperator(g), tol=1e-15, max_iter=10_000).probabilities[list(sel.nodes)]
    p /= p.sum()
    assert np.abs(p_r - p).max() / p.max() < 1e-8


@pytest.mark.parametrize("batch", [1, 3, 8, 20])
def test_batch_and_thread_invariance(batch):
    g = random_graph(150, 5.0, seed=5)
    sel = random_selection(150, 17, 5)
    ref = compute_reduced(g, 0.85, sel, batch_size=16, n_threads=1)
    for threads in (1, 4):
        R = compute_reduced(g, 0.85, sel, batch_size=batch, n_threads=threads)
        for name in ("G_R", "G_rr", "G_pr", "G_qr"):
            assert np.abs(getattr(R, name) - getattr(ref, name)).max() <= 1e-12


def test_whole_graph_selection_gives_G():
    g = random_graph(15, 2.0, seed=6)
    R = compute_reduced(g, 0.85, NodeSelection(tuple(range(15))))
    np.testing.assert_allclose(R.G_R, literal_google(g, 0.85), atol=1e-15)
    assert not R.G_pr.any() and not R.G_qr.any()


def test_nonnegativity_and_damping_floor():
    # 0 -> 2 -> 1 path through an unselected node; 0 and 1 are not linked
    g = DirectedGraph.from_edges([0, 2, 2, 3, 1, 4], [2, 1, 3, 4, 3, 0], 5)
    sel = NodeSelection((0, 1))
    R = compute_reduced(g, 0.85, sel)
    floor = (1 - 0.85) / 5
    assert R.G_rr[1, 0] == pytest.approx(floor, rel=1e-15, abs=0)
    assert R.G_rr[0, 1] == pytest.approx(floor, rel=1e-15, abs=0)
    assert (R.G_rr >= 0).all() and (R.G_pr >= 0).all()
    assert R.G_R.min() >= -1e-12
    # the indirect 0 -> 2 -> 1 path shows up in the reduced matrix
    assert R.G_R[1, 0] > 10 * floor


def test_gqr_negative_entries_small_on_large_graph():
    # the projector part dominates when lambda_c is close to 1
    g = random_graph(20_000, 8.0, seed=1)
    sel = random_selection(20_000, 20, 1)
    R = compute_reduced(g, 0.85, sel)
    assert R.lambda_c > 0.99
    assert R.G_qr.min() > -1e-3
    assert R.G_R.min() >= -1e-12


def test_weights():
    g = random_graph(120, 5.0, seed=12)
    cats = tuple("bank" if k < 4 else "country" for k in range(10))
    sel = NodeSelection(random_selection(120, 10, 12).nodes, cats)
    R = compute_reduced(g, 0.85, sel)
    w = component_weights(R)
    assert w["GR"] == pytest.approx(1.0, abs=1e-10)
    assert w["GR"] == pytest.approx(w["Grr"] + w["Gpr"] + w["Gqr"], abs=1e-12)
    assert w["Gqrnd"] == pytest.approx((R.G_qr.sum() - np.trace(R.G_qr)) / 10, abs=1e-15)
    assert sector_weights(R, "all", "all") == w
    total = sum(sector_weights(R, a, b)["GR"] for a in ("bank", "country") for b in ("bank", "country"))
    assert total == pytest.approx(w["GR"], abs=1e-12)
    bb = sector_weights(R, "bank", "bank")
    assert bb["Grr"] == pytest.approx(R.G_rr[:4, :4].sum() / 10, abs=1e-15)
    with pytest.raises(SelectionError):
        sector_weights(R, "bank", "planet")
    wa = component_weights(R, use_abs=True)
    assert wa["Gqr"] == pytest.approx(np.abs(R.G_qr).sum() / 10)


def test_component_lookup():
    g = random_graph(50, 4.0, seed=2)
    R = compute_reduced(g, 0.85, random_selection(50, 5, 2))
    np.testing.assert_array_equal(R.component("Grr+Gqr"), R.G_rr + R.G_qr)
    with pytest.raises(ValueError):
        R.component("Gxx")


def test_series_stagnation_is_reported(monkeypatch):
    import regomax.reduced as red

    # an operator that never contracts: every term has the same norm
    monkeypatch.setattr(red._Blocks, "columns", lambda self, nodes: np.ones((len(nodes), self.n)))
    monkeypatch.setattr(red._Blocks, "g_apply", lambda self, X: X.copy())
    monkeypatch.setattr(red, "_project_out", lambda X, r, l: np.zeros(X.shape[0]))
    g = random_graph(60, 4.0, seed=3)
    with pytest.raises(SeriesDivergenceError) as err:
        compute_reduced(g, 0.85, random_selection(60, 4, 3))
    assert err.value.lambda_estimate == pytest.approx(1.0)
    assert err.value.iterations == red.STAGNATION_WINDOW + 1
