"""Reduced Google matrix of a node subset and its three-component split.

With the nodes split into the selection ``r`` and the scattering
complement ``s``, the reduced matrix is

    G_R = G_rr + G_rs (1 - G_ss)^{-1} G_sr.

The inverse is never formed. Let ``psi_R``/``psi_L`` be the leading
right/left eigenvectors of ``G_ss`` (eigenvalue ``lambda_c``), normalized
by ``sum(psi_R) = 1`` and ``psi_L . psi_R = 1``, ``P_c = psi_R psi_L^T``
and ``Q_c = 1 - P_c``. Then

    G_pr = G_rs P_c G_sr / (1 - lambda_c)
    G_qr = G_rs (sum_l Gbar_ss^l) Q_c G_sr,   Gbar_ss = Q_c G_ss Q_c

and the deflated series converges geometrically even when ``lambda_c``
is close to one. Every block of ``G`` is realized from the sparse link
structure plus the dangling and teleport broadcasts.
"""
from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import ConvergenceError, SelectionError, SeriesDivergenceError
from .graph import DirectedGraph, GoogleOperator, dense_google_matrix

__all__ = [
    "NodeSelection",
    "ReducedMatrix",
    "ScatteringSpectrum",
    "scattering_eigs",
    "compute_reduced",
    "reduce_oracle",
    "component_weights",
    "sector_weights",
    "COMPONENTS",
]

COMPONENTS = ("GR", "Grr", "Gpr", "Gqr")

# Number of consecutive terms without a new minimum increment before the
# series is declared divergent.
STAGNATION_WINDOW = 100


@dataclass(frozen=True)
class NodeSelection:
    """Ordered nodes of interest; their order is the row/column order of every reduced matrix."""

    nodes: tuple
    categories: tuple = ()
    groups: tuple = ()
    external_ranks: tuple = ()
    codes: tuple = ()
    labels: tuple = ()

    def __post_init__(self):
        nodes = tuple(int(j) for j in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        n = len(nodes)
        if len(set(nodes)) != n:
            raise SelectionError("selection contains duplicate nodes")
        if any(j < 0 for j in nodes):
            raise SelectionError("selection contains negative node ids")
        for name, default in (("categories", ""), ("groups", 0), ("external_ranks", None),
                              ("codes", "")):
            values = tuple(getattr(self, name))
            if not values:
                values = (default,) * n
            if len(values) != n:
                raise SelectionError(f"{name} has {len(values)} entries for {n} nodes")
            object.__setattr__(self, name, values)
        labels = tuple(self.labels) or tuple(str(j) for j in nodes)
        if len(labels) != n:
            raise SelectionError(f"labels has {len(labels)} entries for {n} nodes")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.nodes)

    @property
    def index(self) -> np.ndarray:
        return np.asarray(self.nodes, dtype=np.int64)

    def validate(self, n_nodes: int) -> None:
        if len(self) == 0:
            raise SelectionError("empty selection")
        if max(self.nodes) >= n_nodes:
            raise SelectionError(f"selected node {max(self.nodes)} outside [0, {n_nodes})")

    def positions(self, category: Optional[str] = None) -> np.ndarray:
        """Row/column positions belonging to ``category`` (all if None)."""
        if category is None or category == "all":
            return np.arange(len(self))
        pos = [k for k, c in enumerate(self.categories) if c == category]
        return np.asarray(pos, dtype=np.int64)

    def category_names(self) -> list:
        seen = []
        for c in self.categories:
            if c not in seen:
                seen.append(c)
        return seen

    def relabeled(self, order: Sequence[int]) -> "NodeSelection":
        """Same selection expressed in the ids of ``relabel(graph, order)``."""
        position = np.empty(len(order), dtype=np.int64)
        position[np.asarray(order)] = np.arange(len(order))
        return NodeSelection(tuple(int(position[j]) for j in self.nodes), self.categories,
                             self.groups, self.external_ranks, self.codes, self.labels)


@dataclass(frozen=True)
class ScatteringSpectrum:
    lambda_c: float
    psi_R: np.ndarray
    psi_L: np.ndarray
    iterations: tuple = (0, 0)

    def __iter__(self):
        return iter((self.lambda_c, self.psi_R, self.psi_L))


@dataclass(frozen=True)
class ReducedMatrix:
    """Dense reduced matrix and its components in selection order."""

    selection: NodeSelection
    alpha: float
    G_R: np.ndarray
    G_rr: np.ndarray
    G_pr: np.ndarray
    G_qr: np.ndarray
    lambda_c: float
    psi_R: np.ndarray = field(repr=False)
    psi_L: np.ndarray = field(repr=False)
    series_terms: np.ndarray = field(default=None, repr=False)

    @property
    def n_r(self) -> int:
        return self.G_R.shape[0]

    @property
    def G_qrnd(self) -> np.ndarray:
        out = self.G_qr.copy()
        np.fill_diagonal(out, 0.0)
        return out

    def component(self, name: str) -> np.ndarray:
        """Matrix by name: GR, Grr, Gpr, Gqr, Gqrnd or a '+'-joined sum like 'Grr+Gqr'."""
        table = {"GR": self.G_R, "Grr": self.G_rr, "Gpr": self.G_pr,
                 "Gqr": self.G_qr, "Gqrnd": self.G_qrnd}
        parts = [p.strip() for p in name.split("+")]
        try:
            mats = [table[p] for p in parts]
        except KeyError:
            raise ValueError(f"unknown component {name!r}; choose from {sorted(table)}") from None
        out = mats[0].copy()
        for m in mats[1:]:
            out += m
        return out

    def weights(self, use_abs: bool = False) -> dict:
        return component_weights(self, use_abs=use_abs)


def _complement_mask(n_nodes: int, selection: NodeSelection) -> np.ndarray:
    mask = np.ones(n_nodes, dtype=bool)
    mask[selection.index] = False
    return mask


def scattering_eigs(graph: DirectedGraph, alpha: float, selection: NodeSelection,
                    tol: float = 1e-12, max_iter: int = 1000) -> ScatteringSpectrum:
    """Leading eigenvalue and eigenvectors of the scattering block G_ss.

    Vectors are returned in the ordering of the complement (ascending
    node id), normalized to ``sum(psi_R) = 1`` and ``psi_L . psi_R = 1``.
    """
    selection.validate(graph.n_nodes)
    op = GoogleOperator(graph, alpha)
    s = _complement_mask(graph.n_nodes, selection)
    n_s = int(s.sum())
    if n_s == 0:
        raise SelectionError("selection covers the whole graph; the scattering block is empty")

    def block_power(step):
        x = np.full(n_s, 1.0 / n_s)
        buf = np.zeros(graph.n_nodes)
        residual = np.inf
        for it in range(1, max_iter + 1):
            buf[s] = x
            y = step(buf)[s]
            y /= y.sum()
            residual = float(np.abs(y - x).sum())
            x = y
            if residual < tol:
                return x, it
        raise ConvergenceError("scattering-block power iteration did not converge",
                               residual, max_iter, last=x)

    psi_R, it_r = block_power(op.matvec)
    psi_L, it_l = block_power(op.rmatvec)
    buf = np.zeros(graph.n_nodes)
    buf[s] = psi_R
    g_psi = op.matvec(buf)[s]
    lam = float(psi_L @ g_psi / (psi_L @ psi_R))
    psi_L = psi_L / (psi_L @ psi_R)
    return ScatteringSpectrum(lam, psi_R, psi_L, (it_r, it_l))


class _Blocks:
    """Matrix-free access to the r/s blocks of G, batched over columns.

    Column blocks are stored transposed, one contiguous row of length N
    per column, so every per-column reduction is independent of how many
    columns share a batch.
    """

    def __init__(self, graph, alpha, selection):
        self.n = graph.n_nodes
        self.alpha = alpha
        self.S = graph.transition_matrix()
        self.dangling = graph.dangling_nodes()
        self.sel = selection.index
        self.s_mask = _complement_mask(self.n, selection)
        self.r_mask = ~self.s_mask

    def g_apply(self, X):
        """Rows of ``X`` (k x N) mapped through G: returns (G X^T)^T."""
        a = self.alpha
        Y = np.ascontiguousarray((self.S @ X.T).T)
        Y *= a
        dang = np.sum(X[:, self.dangling], axis=1)
        tot = np.sum(X, axis=1)
        Y += ((a * dang + (1.0 - a) * tot) / self.n)[:, None]
        return Y

    def columns(self, nodes):
        """Columns of G at ``nodes``, transposed (k x N)."""
        E = np.zeros((len(nodes), self.n))
        E[np.arange(len(nodes)), nodes] = 1.0
        return self.g_apply(E)


def _project_out(X, psi_R_full, psi_L_full):
    """Apply Q_c = 1 - psi_R psi_L^T to each row of X (vectors live on s)."""
    coef = np.sum(X * psi_L_full, axis=1)
    X -= coef[:, None] * psi_R_full
    return coef


def _series_batch(blocks, cols, psi_R_full, psi_L_full, tol, max_terms):
    """Sum ``sum_l Gbar^l Q_c G_sr e_r`` for one batch; returns (acc k x N, coef, terms)."""
    s = blocks.s_mask
    X = blocks.columns(cols)
    X[:, ~s] = 0.0
    coef = _project_out(X, psi_R_full, psi_L_full)
    acc = X.copy()
    k = len(cols)
    terms = np.zeros(k, dtype=np.int64)
    best = np.full(k, np.inf)
    since_best = np.zeros(k, dtype=np.int64)
    active = np.arange(k)
    term = 0
    while active.size:
        term += 1
        Y = blocks.g_apply(X)
        Y[:, ~s] = 0.0
        _project_out(Y, psi_R_full, psi_L_full)
        acc[active] += Y
        inc = np.sum(np.abs(Y), axis=1)
        terms[active] = term
        improved = inc < best
        best = np.where(improved, inc, best)
        since_best = np.where(improved, 0, since_best + 1)
        stalled = since_best >= STAGNATION_WINDOW
        if stalled.any() or term >= max_terms:
            j = int(np.argmax(stalled)) if stalled.any() else 0
            ratio = float(inc[j] / best[j]) ** (1.0 / max(since_best[j], 1)) if best[j] > 0 else 1.0
            raise SeriesDivergenceError(
                f"deflated series for selection column {int(cols[active[j]])} is not decreasing",
                float(inc[j]), term, ratio)
        done = inc < tol
        keep = ~done
        X = Y[keep]
        active = active[keep]
        best = best[keep]
        since_best = since_best[keep]
    return acc, coef, terms


def compute_reduced(graph: DirectedGraph, alpha: float, selection: NodeSelection,
                    series_tol: float = 1e-13, batch_size: int = 16, n_threads: Optional[int] = 1,
                    eig_tol: float = 1e-12, max_iter: int = 1000,
                    max_terms: int = 100_000) -> ReducedMatrix:
    """Reduced Google matrix ``G_R = G_rr + G_pr + G_qr`` of ``selection``.

    Parameters
    ----------
    graph : DirectedGraph
    alpha : float
        Damping factor.
    selection : NodeSelection
        Ordered nodes; fixes row and column order of the output.
    series_tol : float
        A column of the deflated series stops once the L1 norm of its
        latest term falls below this value.
    batch_size : int
        Columns propagated together through the sparse operator.
    n_threads : int or None
        Worker threads for independent batches (None: all cores).
    eig_tol, max_iter : float, int
        Tolerance and iteration cap of the scattering-block eigensolver.

    Notes
    -----
    The output does not depend on ``batch_size`` or ``n_threads``: each
    column is summed in the same order whatever batch it lands in.
    A selection covering the whole graph yields ``G_R = G`` with empty
    projector components and ``lambda_c = 0``.
    """
    if series_tol <= 0:
        raise ValueError("series_tol must be positive")
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    selection.validate(graph.n_nodes)
    blocks = _Blocks(graph, alpha, selection)
    sel = blocks.sel
    n_r = sel.size

    G_cols = blocks.columns(sel)                 # (N_r x N): row k is column sel[k] of G
    G_rr = np.ascontiguousarray(G_cols[:, sel].T)
    if n_r == graph.n_nodes:
        zero = np.zeros_like(G_rr)
        return ReducedMatrix(selection, alpha, G_rr.copy(), G_rr, zero, zero.copy(), 0.0,
                             np.zeros(0), np.zeros(0), np.zeros(n_r, dtype=np.int64))

    spec = scattering_eigs(graph, alpha, selection, tol=eig_tol, max_iter=max_iter)
    s = blocks.s_mask
    psi_R_full = np.zeros(graph.n_nodes)
    psi_L_full = np.zeros(graph.n_nodes)
    psi_R_full[s] = spec.psi_R
    psi_L_full[s] = spec.psi_L

    # G_rs psi_R, a single column
    g_psi = blocks.g_apply(psi_R_full[None, :])[0, sel]

    starts = list(range(0, n_r, batch_size))

    def run(start):
        cols = sel[start:start + batch_size]
        acc, coef, terms = _series_batch(blocks, cols, psi_R_full, psi_L_full,
                                         series_tol, max_terms)
        qr = blocks.g_apply(acc)[:, sel]        # rows: G_rs acc for each column
        return start, qr, coef, terms

    G_pr = np.empty((n_r, n_r))
    G_qr = np.empty((n_r, n_r))
    terms_all = np.empty(n_r, dtype=np.int64)
    workers = n_threads or os.cpu_count() or 1
    if workers > 1 and len(starts) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(start) for start in starts]
    scale = 1.0 / (1.0 - spec.lambda_c)
    for start, qr, coef, terms in results:
        stop = start + qr.shape[0]
        G_qr[:, start:stop] = qr.T
        G_pr[:, start:stop] = np.outer(g_psi, coef) * scale
        terms_all[start:stop] = terms
    G_R = G_rr + G_pr + G_qr
    return ReducedMatrix(selection, alpha, G_R, G_rr, G_pr, G_qr, spec.lambda_c,
                         spec.psi_R, spec.psi_L, terms_all)


def reduce_oracle(graph: DirectedGraph, alpha: float, selection: NodeSelection,
                  max_nodes: int = 2000) -> np.ndarray:
    """Dense ``G_rr + G_rs (1 - G_ss)^{-1} G_sr`` by direct linear solve."""
    if graph.n_nodes > max_nodes:
        raise MemoryError(f"dense oracle refused for N={graph.n_nodes} > {max_nodes}")
    selection.validate(graph.n_nodes)
    G = dense_google_matrix(graph, alpha)
    r = selection.index
    s = np.flatnonzero(_complement_mask(graph.n_nodes, selection))
    G_rr = G[np.ix_(r, r)]
    if s.size == 0:
        return G_rr
    G_rs = G[np.ix_(r, s)]
    G_sr = G[np.ix_(s, r)]
    G_ss = G[np.ix_(s, s)]
    return G_rr + G_rs @ np.linalg.solve(np.eye(s.size) - G_ss, G_sr)


def _weights_of(mats: dict, n_r: int, rows=None, cols=None, use_abs=False) -> dict:
    out = {}
    for name, M in mats.items():
        if rows is not None:
            M = M[np.ix_(rows, cols)]
        if use_abs and name in ("Gqr", "Gqrnd"):
            M = np.abs(M)
        out[name] = float(M.sum() / n_r)
    return out


def _named_components(R: ReducedMatrix) -> dict:
    return {"GR": R.G_R, "Grr": R.G_rr, "Gpr": R.G_pr, "Gqr": R.G_qr, "Gqrnd": R.G_qrnd}


def component_weights(R: ReducedMatrix, use_abs: bool = False) -> dict:
    """W_X = (sum of all elements of X) / N_r for GR, Grr, Gpr, Gqr and Gqrnd."""
    return _weights_of(_named_components(R), R.n_r, use_abs=use_abs)


def sector_weights(R: ReducedMatrix, rows: Optional[str] = None, cols: Optional[str] = None,
                   use_abs: bool = False) -> dict:
    """Component weights over a category sub-block, still divided by N_r."""
    sel = R.selection
    for cat in (rows, cols):
        if cat not in (None, "all") and cat not in sel.categories:
            raise SelectionError(f"category {cat!r} not present in the selection")
    r = sel.positions(rows)
    c = sel.positions(cols)
    return _weights_of(_named_components(R), R.n_r, r, c, use_abs=use_abs)
