"""PageRank / CheiRank by power iteration and rank-index bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import ConvergenceError, DimensionError
from .graph import DirectedGraph, GoogleOperator

__all__ = [
    "RankVector",
    "RankJoinRow",
    "power_iteration",
    "pagerank",
    "cheirank",
    "rank_order",
    "local_rank",
]


def rank_order(p: np.ndarray) -> np.ndarray:
    """Node ids sorted by descending probability, ties by ascending id."""
    p = np.asarray(p)
    return np.lexsort((np.arange(p.size), -p))


@dataclass(frozen=True)
class RankVector:
    """Stationary probabilities with their descending-order index.

    ``order[k]`` is the node at rank ``K = k + 1``; ``K`` maps node -> K.
    """

    probabilities: np.ndarray
    order: np.ndarray
    residual: float
    iterations: int

    @classmethod
    def from_probabilities(cls, p, residual=0.0, iterations=0):
        p = np.asarray(p, dtype=float)
        return cls(p, rank_order(p), float(residual), int(iterations))

    @property
    def K(self) -> np.ndarray:
        k = np.empty(self.order.size, dtype=np.int64)
        k[self.order] = np.arange(1, self.order.size + 1)
        return k

    def __len__(self):
        return self.probabilities.size


def power_iteration(matvec: Callable[[np.ndarray], np.ndarray], n: int, tol: float = 1e-12,
                    max_iter: int = 1000, start: Optional[np.ndarray] = None) -> RankVector:
    """Iterate ``p <- matvec(p) / sum`` until the L1 change drops below ``tol``.

    Raises :class:`ConvergenceError` if ``max_iter`` steps are not enough.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    p = np.full(n, 1.0 / n) if start is None else np.array(start, dtype=float)
    if p.shape != (n,):
        raise DimensionError(f"start vector has shape {p.shape}, expected ({n},)")
    p /= p.sum()
    residual = np.inf
    for it in range(1, max_iter + 1):
        q = matvec(p)
        q /= q.sum()
        residual = float(np.abs(q - p).sum())
        p = q
        if residual < tol:
            return RankVector.from_probabilities(p, residual, it)
    raise ConvergenceError("power iteration did not converge", residual, max_iter, last=p)


def pagerank(op, tol: float = 1e-12, max_iter: int = 1000,
             start: Optional[np.ndarray] = None) -> RankVector:
    """PageRank of a :class:`GoogleOperator` or of a dense column-stochastic matrix."""
    if isinstance(op, GoogleOperator):
        return power_iteration(op.matvec, op.n_nodes, tol, max_iter, start)
    M = np.asarray(op, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return power_iteration(M.__matmul__, M.shape[0], tol, max_iter, start)


def cheirank(graph: DirectedGraph, alpha: float = 0.85, tol: float = 1e-12,
             max_iter: int = 1000) -> RankVector:
    """PageRank of the graph with all links inverted."""
    return pagerank(GoogleOperator(graph, alpha, direction="inverted"), tol, max_iter)


@dataclass(frozen=True)
class RankJoinRow:
    node: int
    K_local: int
    K_external: Optional[int] = None
    group: Optional[int] = None
    category: Optional[str] = None


def local_rank(rank: RankVector, members: Sequence[int], external=None, groups=None,
               category: Optional[str] = None) -> list[RankJoinRow]:
    """Rank ``members`` among themselves by descending probability.

    ``external`` and ``groups`` are optional mappings node -> value carried
    into the output rows (e.g. asset ranks and group ids).
    """
    members = np.unique(np.asarray(members, dtype=np.int64))
    if members.size == 0:
        return []
    n = len(rank)
    if members.min() < 0 or members.max() >= n:
        raise DimensionError(f"member ids must lie in [0, {n})")
    K = rank.K
    ordered = members[np.argsort(K[members], kind="stable")]
    external = external or {}
    groups = groups or {}
    return [RankJoinRow(int(node), k, external.get(int(node)), groups.get(int(node)), category)
            for k, node in enumerate(ordered, start=1)]
