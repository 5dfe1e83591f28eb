"""Directed graph storage, the implicit Google matrix and Cuthill-McKee reordering.

A :class:`DirectedGraph` keeps its 0/1 adjacency twice, in per-source
(out-link) and per-target (in-link) compressed form. The Google matrix

    G_ij = alpha * S_ij + (1 - alpha) / N,   S_ij = A_ij / k_out(j)

with uniform ``1/N`` columns for dangling nodes is never stored: a
:class:`GoogleOperator` applies the sparse part through the in-link
structure and adds the dangling and teleport terms as scalar broadcasts.
"""
from __future__ import annotations

import collections
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np
import scipy.sparse as sp

from .exceptions import CapacityError, DimensionError, GraphFormatError

__all__ = [
    "DirectedGraph",
    "GoogleOperator",
    "load_edge_list",
    "load_labels",
    "invert",
    "cuthill_mckee",
    "bandwidth",
    "relabel",
    "dense_google_matrix",
]

# Compressed indices are int32 (scipy's default); ids beyond that are refused.
MAX_NODES = np.iinfo(np.int32).max


def _compress(keys, values, n_nodes):
    """Group ``values`` by ``keys`` into (indptr, indices) with sorted rows."""
    order = np.lexsort((values, keys))
    keys = keys[order]
    values = values[order]
    counts = np.bincount(keys, minlength=n_nodes)
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, values.astype(np.int32, copy=False)


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Immutable 0/1 directed graph on dense node ids ``0..N-1``.

    Build instances with :meth:`from_edges` or :func:`load_edge_list`;
    the constructor expects already-compressed arrays.
    """

    n_nodes: int
    out_indptr: np.ndarray
    out_indices: np.ndarray
    in_indptr: np.ndarray
    in_indices: np.ndarray
    labels: Optional[tuple] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edges(cls, src, dst, n_nodes=None, labels=None, drop_self_loops=False):
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise DimensionError("src and dst must have the same length")
        if src.size and min(src.min(), dst.min()) < 0:
            raise GraphFormatError("node ids must be nonnegative")
        top = int(max(src.max(), dst.max())) + 1 if src.size else 0
        if n_nodes is None:
            n_nodes = top
        elif n_nodes < top:
            raise GraphFormatError(f"edge endpoint {top - 1} outside [0, {n_nodes})")
        if n_nodes < 1:
            raise GraphFormatError("a graph needs at least one node")
        if n_nodes > MAX_NODES:
            raise CapacityError(f"{n_nodes} nodes exceed the supported maximum {MAX_NODES}")
        if drop_self_loops:
            keep = src != dst
            src, dst = src[keep], dst[keep]
        # collapse duplicate edges
        if src.size:
            code = np.unique(src * n_nodes + dst)
            src, dst = np.divmod(code, n_nodes)
        out_indptr, out_indices = _compress(src, dst, n_nodes)
        in_indptr, in_indices = _compress(dst, src, n_nodes)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n_nodes:
                raise DimensionError(f"{len(labels)} labels for {n_nodes} nodes")
        for arr in (out_indptr, out_indices, in_indptr, in_indices):
            arr.setflags(write=False)
        return cls(int(n_nodes), out_indptr, out_indices, in_indptr, in_indices, labels)

    # -- basic queries -------------------------------------------------

    @property
    def n_edges(self) -> int:
        return int(self.out_indices.size)

    @property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    @property
    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_indptr)

    @property
    def dangling(self) -> np.ndarray:
        """Boolean mask of nodes without outgoing links."""
        return self.out_degree == 0

    def successors(self, j: int) -> np.ndarray:
        return self.out_indices[self.out_indptr[j]:self.out_indptr[j + 1]]

    def predecessors(self, i: int) -> np.ndarray:
        return self.in_indices[self.in_indptr[i]:self.in_indptr[i + 1]]

    def edges(self):
        """Return ``(src, dst)`` arrays sorted by source then target."""
        src = np.repeat(np.arange(self.n_nodes, dtype=np.int64), self.out_degree)
        return src, self.out_indices.astype(np.int64)

    def edge_set(self) -> set:
        src, dst = self.edges()
        return set(zip(src.tolist(), dst.tolist()))

    def label(self, j: int) -> str:
        return self.labels[j] if self.labels is not None else str(j)

    def with_labels(self, labels) -> "DirectedGraph":
        labels = tuple(labels)
        if len(labels) != self.n_nodes:
            raise DimensionError(f"{len(labels)} labels for {self.n_nodes} nodes")
        return DirectedGraph(self.n_nodes, self.out_indptr, self.out_indices,
                             self.in_indptr, self.in_indices, labels)

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self.n_nodes == other.n_nodes
                and np.array_equal(self.out_indptr, other.out_indptr)
                and np.array_equal(self.out_indices, other.out_indices))

    __hash__ = None

    def __repr__(self):
        return f"DirectedGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"

    # -- sparse Markov matrices (cached, read-only) ----------------------

    def transition_matrix(self) -> sp.csr_matrix:
        """S restricted to non-dangling columns, stored row-wise by target."""
        if "S" not in self._cache:
            kout = self.out_degree.astype(float)
            inv = np.divide(1.0, kout, out=np.zeros_like(kout), where=kout > 0)
            data = inv[self.in_indices]
            self._cache["S"] = sp.csr_matrix(
                (data, self.in_indices, self.in_indptr), shape=(self.n_nodes, self.n_nodes))
        return self._cache["S"]

    def transition_matrix_t(self) -> sp.csr_matrix:
        """S^T, stored row-wise by source (out-link form)."""
        if "ST" not in self._cache:
            kout = self.out_degree.astype(float)
            src = np.repeat(np.arange(self.n_nodes), self.out_degree)
            data = 1.0 / kout[src]
            self._cache["ST"] = sp.csr_matrix(
                (data, self.out_indices, self.out_indptr), shape=(self.n_nodes, self.n_nodes))
        return self._cache["ST"]

    def dangling_nodes(self) -> np.ndarray:
        if "dangling" not in self._cache:
            self._cache["dangling"] = np.flatnonzero(self.dangling)
        return self._cache["dangling"]


def _parse_int(token, lineno):
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(f"not an integer: {token!r}", lineno) from None
    if value < 0:
        raise GraphFormatError(f"negative node id {value}", lineno)
    if value >= MAX_NODES:
        raise CapacityError(f"line {lineno}: node id {value} exceeds {MAX_NODES - 1}")
    return value


def load_edge_list(stream: Iterable[str] | TextIO, n_hint: Optional[int] = None,
                   labels=None, drop_self_loops: bool = False) -> DirectedGraph:
    """Read ``src dst`` lines into a :class:`DirectedGraph`.

    Blank lines and lines starting with ``#`` are skipped. The node count
    is ``max id + 1`` or ``n_hint`` if that is larger.
    """
    src, dst = [], []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'src dst', got {line!r}", lineno)
        src.append(_parse_int(parts[0], lineno))
        dst.append(_parse_int(parts[1], lineno))
    top = max(max(src), max(dst)) + 1 if src else 0
    n_nodes = max(top, n_hint or 0)
    if n_nodes == 0:
        raise GraphFormatError("empty edge list and no node count given")
    return DirectedGraph.from_edges(src, dst, n_nodes, labels=labels,
                                    drop_self_loops=drop_self_loops)


def load_labels(stream: Iterable[str] | TextIO, n_nodes: int) -> tuple:
    """Read ``id<TAB>label`` lines; ids without a line keep their number as label."""
    labels = [str(j) for j in range(n_nodes)]
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        node, sep, label = line.partition("\t")
        if not sep:
            raise GraphFormatError("expected 'id<TAB>label'", lineno)
        j = _parse_int(node.strip(), lineno)
        if j >= n_nodes:
            raise GraphFormatError(f"label for node {j} outside [0, {n_nodes})", lineno)
        labels[j] = label
    return tuple(labels)


def invert(graph: DirectedGraph) -> DirectedGraph:
    """Graph with every link reversed (basis of CheiRank)."""
    # in-link arrays of the graph are the out-link arrays of its inverse
    return DirectedGraph(graph.n_nodes, graph.in_indptr, graph.in_indices,
                         graph.out_indptr, graph.out_indices, graph.labels)


class GoogleOperator:
    """Column-stochastic Google matrix applied matrix-free.

    Parameters
    ----------
    graph : DirectedGraph
    alpha : float
        Damping factor in (0, 1).
    direction : {"forward", "inverted"}
        ``"inverted"`` builds G* on the link-reversed graph.
    """

    def __init__(self, graph: DirectedGraph, alpha: float = 0.85, direction: str = "forward"):
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        if direction not in ("forward", "inverted"):
            raise ValueError(f"direction must be 'forward' or 'inverted', got {direction!r}")
        self.graph = invert(graph) if direction == "inverted" else graph
        self.alpha = float(alpha)
        self.direction = direction

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes

    @property
    def shape(self):
        return (self.n_nodes, self.n_nodes)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """G @ x for a vector or a (N, k) block, with no stochasticity check."""
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.n_nodes:
            raise DimensionError(f"vector of length {x.shape[0]} for operator of size {self.n_nodes}")
        n = self.n_nodes
        a = self.alpha
        y = self.graph.transition_matrix() @ x
        y *= a
        dang = x[self.graph.dangling_nodes()].sum(axis=0)
        y += (a * dang + (1.0 - a) * x.sum(axis=0)) / n
        return y

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        """G^T @ y."""
        y = np.asarray(y, dtype=float)
        if y.shape[0] != self.n_nodes:
            raise DimensionError(f"vector of length {y.shape[0]} for operator of size {self.n_nodes}")
        n = self.n_nodes
        a = self.alpha
        total = y.sum(axis=0)
        x = self.graph.transition_matrix_t() @ y
        x *= a
        x += (1.0 - a) * total / n
        x[self.graph.dangling_nodes()] += a * total / n
        return x

    def apply(self, v: np.ndarray) -> np.ndarray:
        """One Markov step of a probability vector."""
        v = np.asarray(v, dtype=float)
        if v.ndim != 1 or v.size != self.n_nodes:
            raise DimensionError(f"expected a vector of length {self.n_nodes}, got shape {v.shape}")
        if (v < 0).any():
            raise ValueError("probability vector has negative entries")
        if abs(v.sum() - 1.0) > 1e-9:
            raise ValueError(f"probability vector sums to {v.sum()!r}, not 1")
        return self.matvec(v)

    def column(self, j: int) -> np.ndarray:
        e = np.zeros(self.n_nodes)
        e[j] = 1.0
        return self.matvec(e)

    def to_dense(self, max_nodes: int = 5000) -> np.ndarray:
        if self.n_nodes > max_nodes:
            raise MemoryError(f"refusing to densify a {self.n_nodes}-node Google matrix")
        return dense_google_matrix(self.graph, self.alpha)

    def __repr__(self):
        return f"GoogleOperator({self.graph!r}, alpha={self.alpha}, direction={self.direction!r})"


def dense_google_matrix(graph: DirectedGraph, alpha: float = 0.85) -> np.ndarray:
    """Materialize G entry by entry from its definition (small graphs only)."""
    n = graph.n_nodes
    A = np.zeros((n, n))
    src, dst = graph.edges()
    A[dst, src] = 1.0
    kout = A.sum(axis=0)
    S = np.empty((n, n))
    for j in range(n):
        S[:, j] = A[:, j] / kout[j] if kout[j] else 1.0 / n
    return alpha * S + (1.0 - alpha) / n


# -- bandwidth reduction -----------------------------------------------


def _symmetric_adjacency(graph: DirectedGraph) -> sp.csr_matrix:
    src, dst = graph.edges()
    keep = src != dst
    src, dst = src[keep], dst[keep]
    n = graph.n_nodes
    A = sp.csr_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    A = ((A + A.T) > 0).astype(np.int8).tocsr()
    A.sort_indices()
    return A


def cuthill_mckee(graph: DirectedGraph) -> np.ndarray:
    """Cuthill-McKee ordering of the symmetrized graph.

    Returns ``order`` with ``order[new_id] = old_id``. Each connected
    component starts from its lowest-degree node; components are visited
    by increasing minimum degree and neighbours are enqueued by
    increasing degree, all ties broken by node id. If the result would
    widen the band, the identity ordering is returned instead, so the
    bandwidth never increases.
    """
    A = _symmetric_adjacency(graph)
    n = graph.n_nodes
    indptr, indices = A.indptr, A.indices
    degree = np.diff(indptr)
    visited = np.zeros(n, dtype=bool)
    order = np.empty(n, dtype=np.int64)
    pos = 0
    # candidate starts in (degree, id) order; stale entries are skipped
    starts = sorted(range(n), key=lambda j: (degree[j], j))
    queue = collections.deque()
    for start in starts:
        if visited[start]:
            continue
        visited[start] = True
        queue.append(start)
        while queue:
            j = queue.popleft()
            order[pos] = j
            pos += 1
            nbrs = indices[indptr[j]:indptr[j + 1]]
            nbrs = nbrs[~visited[nbrs]]
            if nbrs.size:
                nbrs = nbrs[np.lexsort((nbrs, degree[nbrs]))]
                visited[nbrs] = True
                queue.extend(nbrs.tolist())
    if bandwidth(graph, order) > bandwidth(graph):
        return np.arange(n, dtype=np.int64)
    return order


def bandwidth(graph: DirectedGraph, order: Optional[Sequence[int]] = None) -> int:
    """max |pos(i) - pos(j)| over links i-j, under ``order`` (identity if None)."""
    src, dst = graph.edges()
    if src.size == 0:
        return 0
    if order is None:
        return int(np.abs(src - dst).max())
    position = np.empty(graph.n_nodes, dtype=np.int64)
    position[np.asarray(order)] = np.arange(graph.n_nodes)
    return int(np.abs(position[src] - position[dst]).max())


def relabel(graph: DirectedGraph, order: Sequence[int]) -> DirectedGraph:
    """Graph whose node ``k`` is node ``order[k]`` of the input."""
    order = np.asarray(order, dtype=np.int64)
    n = graph.n_nodes
    if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
        raise ValueError("order must be a permutation of range(n_nodes)")
    position = np.empty(n, dtype=np.int64)
    position[order] = np.arange(n)
    src, dst = graph.edges()
    labels = None if graph.labels is None else [graph.labels[j] for j in order]
    return DirectedGraph.from_edges(position[src], position[dst], n, labels=labels)
