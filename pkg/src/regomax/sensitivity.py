"""PageRank sensitivity of selected nodes to single links of a reduced matrix.

The element ``G_R(b -> c)`` (row ``c``, column ``b``) is scaled by
``1 + delta``, column ``b`` is renormalized to unit sum and the PageRank of
the perturbed matrix is recomputed. The logarithmic derivative of the
target probability is estimated by finite differences.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import ConvergenceError, SelectionError
from .rank import RankVector, pagerank
from .reduced import ReducedMatrix

__all__ = [
    "SensitivityRow",
    "SensitivityTable",
    "perturb_column",
    "sensitivity",
    "sensitivity_matrix",
]

METHODS = ("central", "one-sided")
FLAG_OK = ""
FLAG_ZERO = "zero_element"
FLAG_NONCONVERGED = "nonconverged"


def perturb_column(G: np.ndarray, b: int, c: int, delta: float) -> np.ndarray:
    """Copy of ``G`` with ``G[c, b]`` scaled by ``1 + delta`` and column b renormalized."""
    Gp = np.array(G, dtype=float, copy=True)
    if delta == 0:
        return Gp
    Gp[c, b] *= 1.0 + delta
    Gp[:, b] /= Gp[:, b].sum()
    return Gp


def _pagerank(G, start, tol, max_iter) -> np.ndarray:
    return pagerank(G, tol=tol, max_iter=max_iter, start=start).probabilities


def sensitivity(G: np.ndarray, b: int, c: int, delta: float = 1e-3, method: str = "central",
                observe: Optional[int] = None, base: Optional[RankVector] = None,
                tol: float = 1e-14, max_iter: int = 100_000) -> tuple[float, str]:
    """Log-derivative ``d ln P(observe) / d delta`` for the link ``b -> c``.

    ``G`` is a reduced matrix (or a :class:`ReducedMatrix`, whose ``G_R`` is
    used). ``observe`` defaults to ``c`` (diagonal sensitivity); other
    targets are experimental. Returns ``(D, flag)`` where ``flag`` is empty
    on success and ``"zero_element"`` when ``G[c, b]`` is exactly zero, in
    which case ``D = 0``.
    """
    if isinstance(G, ReducedMatrix):
        G = G.G_R
    G = np.asarray(G, dtype=float)
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if b == c:
        raise ValueError("source and target must differ")
    if not 0.0 < delta <= 0.1:
        raise ValueError(f"delta must lie in (0, 0.1], got {delta}")
    a = c if observe is None else observe
    if G[c, b] == 0.0:
        return 0.0, FLAG_ZERO
    if base is None:
        base = pagerank(G, tol=tol, max_iter=max_iter)
    p0 = base.probabilities
    plus = _pagerank(perturb_column(G, b, c, delta), p0, tol, max_iter)
    if method == "central":
        minus = _pagerank(perturb_column(G, b, c, -delta), p0, tol, max_iter)
        return float((np.log(plus[a]) - np.log(minus[a])) / (2.0 * delta)), FLAG_OK
    return float((np.log(plus[a]) - np.log(p0[a])) / delta), FLAG_OK


@dataclass(frozen=True)
class SensitivityRow:
    source: int
    target: int
    D: float
    flag: str = ""


@dataclass
class SensitivityTable:
    """Sensitivities over a source x target cross product (selection positions)."""

    rows: list
    delta: float
    method: str
    selection: Optional[object] = field(default=None, repr=False)

    def __len__(self):
        return len(self.rows)

    def extrema(self) -> list:
        """``(source, D_min, D_max)`` per source over unflagged rows."""
        out = {}
        for row in self.rows:
            if row.flag:
                continue
            lo, hi = out.get(row.source, (np.inf, -np.inf))
            out[row.source] = (min(lo, row.D), max(hi, row.D))
        return [(src, lo, hi) for src, (lo, hi) in out.items()]

    def as_array(self, sources, targets) -> np.ndarray:
        si = {s: k for k, s in enumerate(sources)}
        ti = {t: k for k, t in enumerate(targets)}
        out = np.full((len(sources), len(targets)), np.nan)
        for row in self.rows:
            out[si[row.source], ti[row.target]] = row.D
        return out


def _positions(R: ReducedMatrix, spec) -> list:
    if isinstance(spec, str):
        if spec not in R.selection.categories and spec != "all":
            raise SelectionError(f"category {spec!r} not present in the selection")
        return R.selection.positions(spec).tolist()
    return [int(k) for k in spec]


def sensitivity_matrix(R: ReducedMatrix, sources, targets, delta: float = 1e-3,
                       method: str = "central", n_threads: Optional[int] = 1,
                       tol: float = 1e-14, max_iter: int = 100_000) -> SensitivityTable:
    """Diagonal sensitivity for every source/target pair.

    ``sources`` and ``targets`` are category names or sequences of selection
    positions. Failing cells are flagged rather than aborting the sweep.
    Rows are sorted by source, then by descending D.
    """
    src = _positions(R, sources)
    tgt = _positions(R, targets)
    G = R.G_R
    base = pagerank(G, tol=tol, max_iter=max_iter)

    def cell(pair):
        b, c = pair
        if b == c:
            return SensitivityRow(b, c, float("nan"), "self")
        try:
            D, flag = sensitivity(G, b, c, delta, method, base=base, tol=tol, max_iter=max_iter)
        except ConvergenceError:
            return SensitivityRow(b, c, float("nan"), FLAG_NONCONVERGED)
        return SensitivityRow(b, c, D, flag)

    pairs = [(b, c) for b in src for c in tgt]
    if n_threads and n_threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=n_threads) as pool:
            rows = list(pool.map(cell, pairs))
    else:
        rows = [cell(p) for p in pairs]
    order = {b: k for k, b in enumerate(src)}
    rows.sort(key=lambda r: (order[r.source], -r.D if np.isfinite(r.D) else np.inf, r.target))
    return SensitivityTable(rows, delta, method, R.selection)
