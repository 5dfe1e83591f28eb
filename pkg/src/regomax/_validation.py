"""Argument checks shared by the estimators and the CLI."""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import DimensionError
from .graph import DirectedGraph
from .reduced import NodeSelection


def check_alpha(alpha) -> float:
    if not isinstance(alpha, numbers.Real) or not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be a real number in (0, 1), got {alpha!r}")
    return float(alpha)


def check_positive(value, name, integer=False):
    kind = numbers.Integral if integer else numbers.Real
    if not isinstance(value, kind) or value <= 0:
        raise ValueError(f"{name} must be a positive {'integer' if integer else 'number'}, got {value!r}")
    return value


def check_graph(X, n_nodes=None) -> DirectedGraph:
    """Accept a DirectedGraph or an (m, 2) array of ``src, dst`` edges."""
    if isinstance(X, DirectedGraph):
        return X
    edges = np.asarray(X)
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise DimensionError(f"expected a DirectedGraph or an (m, 2) edge array, got shape {edges.shape}")
    if edges.size and not np.issubdtype(edges.dtype, np.integer):
        raise TypeError("edge array must hold integer node ids")
    return DirectedGraph.from_edges(edges[:, 0], edges[:, 1], n_nodes)


def check_selection(selection, n_nodes) -> NodeSelection:
    if not isinstance(selection, NodeSelection):
        selection = NodeSelection(tuple(selection))
    selection.validate(n_nodes)
    return selection


def check_probability_vector(v, n) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (n,):
        raise DimensionError(f"expected shape ({n},), got {v.shape}")
    if (v < 0).any() or abs(v.sum() - 1.0) > 1e-9:
        raise ValueError("not a probability vector")
    return v
