from pathlib import Path

import numpy as np
import pytest

from regomax import DirectedGraph, NodeSelection

ROOT = Path(__file__).resolve().parents[1]
FIXTURE_DIR = ROOT / "data" / "fixture"


def random_graph(n, mean_degree=5.0, seed=0, n_dangling=0):
    """Uniform random digraph with about ``mean_degree * n`` links."""
    rng = np.random.default_rng(seed)
    m = int(round(mean_degree * n))
    src = rng.integers(0, n, m)
    dst = rng.integers(0, n, m)
    if n_dangling:
        dead = rng.choice(n, n_dangling, replace=False)
        keep = ~np.isin(src, dead)
        src, dst = src[keep], dst[keep]
    return DirectedGraph.from_edges(src, dst, n)


def random_selection(n, n_r, seed=0):
    rng = np.random.default_rng(seed + 7919)
    return NodeSelection(tuple(int(j) for j in rng.choice(n, n_r, replace=False)))


def literal_google(graph, alpha):
    """G built entry by entry from its definition; independent of the package."""
    n = graph.n_nodes
    A = [[0] * n for _ in range(n)]
    for j, i in graph.edge_set():
        A[i][j] = 1
    G = np.empty((n, n))
    for j in range(n):
        kout = sum(A[i][j] for i in range(n))
        for i in range(n):
            s = A[i][j] / kout if kout else 1.0 / n
            G[i, j] = alpha * s + (1 - alpha) / n
    return G


def stationary(M):
    """Normalized eigenvector of M for its eigenvalue closest to 1."""
    w, V = np.linalg.eig(M)
    k = np.argmin(np.abs(w - 1.0))
    v = np.real(V[:, k])
    return v / v.sum()


@pytest.fixture(scope="session")
def fixture_paths():
    return {
        "edges": FIXTURE_DIR / "edges.txt",
        "labels": FIXTURE_DIR / "labels.tsv",
        "selection": FIXTURE_DIR / "selection.csv",
    }
