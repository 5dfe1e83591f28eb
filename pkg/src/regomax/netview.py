"""Leveled friend/follower networks extracted from a reduced matrix.

Node ``j`` has friend ``i`` when ``j`` points to ``i``; in matrix terms the
friends of ``j`` are the largest entries of column ``j`` and its followers
the largest entries of row ``j``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import SelectionError
from .reduced import NodeSelection, ReducedMatrix

__all__ = [
    "NetNode",
    "NetEdge",
    "InfluenceNetwork",
    "build_network",
    "top_per_group",
    "export_dot",
    "export_json",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
MODES = ("friends", "followers")


@dataclass(frozen=True)
class NetNode:
    id: int           # position in the selection
    label: str
    category: str
    group: int
    level: int
    attached_to: Optional[int] = None


@dataclass(frozen=True)
class NetEdge:
    """Link found while expanding ``expanded``; ``selected`` is its friend or follower.

    The actual link direction is ``expanded -> selected`` for friends and
    ``selected -> expanded`` for followers (see :meth:`InfluenceNetwork.links`).
    """

    expanded: int
    selected: int
    level: int
    weight: float


@dataclass
class InfluenceNetwork:
    mode: str
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def node_ids(self) -> list:
        return [n.id for n in self.nodes]

    def links(self):
        """``(src, dst, level, weight)`` in the direction of the underlying link."""
        for e in self.edges:
            if self.mode == "friends":
                yield e.expanded, e.selected, e.level, e.weight
            else:
                yield e.selected, e.expanded, e.level, e.weight

    def levels(self) -> dict:
        return {n.id: n.level for n in self.nodes}


def top_per_group(selection: NodeSelection, probabilities: np.ndarray,
                  category: Optional[str] = None) -> list:
    """Highest-probability member of each group (positions), groups ascending.

    ``probabilities`` is indexed by selection position.
    """
    best = {}
    for k in selection.positions(category):
        g = selection.groups[k]
        if g not in best or probabilities[k] > probabilities[best[g]]:
            best[g] = int(k)
    return [best[g] for g in sorted(best)]


def _top_k(line: np.ndarray, candidates: np.ndarray, k: int) -> list:
    """``k`` candidates with the largest values; ties by candidate order."""
    if k <= 0 or candidates.size == 0:
        return []
    order = np.lexsort((np.arange(candidates.size), -line[candidates]))
    return candidates[order[:k]].tolist()


def build_network(R, seeds: Sequence[int], n_cat1: int = 4, n_cat2: int = 2, max_level: int = 2,
                  mode: str = "friends", selection: Optional[NodeSelection] = None,
                  cat1: str = "bank", cat2: str = "country", component: str = "GR",
                  priority: Optional[Sequence[int]] = None) -> InfluenceNetwork:
    """Breadth-wise friend or follower expansion from ``seeds``.

    Parameters
    ----------
    R : ReducedMatrix or ndarray
        Matrix whose columns (friends) or rows (followers) are scanned.
        A plain array needs ``selection``.
    seeds : sequence of int
        Selection positions forming level 0.
    n_cat1, n_cat2 : int
        Quota per expanded node among ``cat1`` and ``cat2`` members.
    max_level : int
        Deepest level added.
    priority : sequence of int, optional
        Position order used to pick the circle a new node is attached to
        (e.g. local PageRank order); defaults to selection order.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if min(n_cat1, n_cat2, max_level) < 0:
        raise ValueError("quotas and max_level must be nonnegative")
    if isinstance(R, ReducedMatrix):
        selection = R.selection if selection is None else selection
        M = R.component(component)
    else:
        M = np.asarray(R, dtype=float)
    if selection is None:
        raise ValueError("a selection is required with a plain matrix")
    n_r = len(selection)
    if M.shape != (n_r, n_r):
        raise ValueError(f"matrix shape {M.shape} does not match selection of {n_r}")
    if mode == "followers":
        M = M.T
    seeds = [int(s) for s in seeds]
    for s in seeds:
        if not 0 <= s < n_r:
            raise SelectionError(f"seed {s} is not a selection position")
    pos1 = selection.positions(cat1)
    pos2 = selection.positions(cat2)
    rank = {k: i for i, k in enumerate(priority if priority is not None else range(n_r))}

    level = {}
    for s in seeds:
        level.setdefault(s, 0)
    order = list(level)
    edges = []
    frontier = [s for s in order if selection.categories[s] == cat1]
    for j in range(max_level):
        found = []
        for node in frontier:
            line = M[:, node]
            picks = (_top_k(line, pos1[pos1 != node], n_cat1)
                     + _top_k(line, pos2[pos2 != node], n_cat2))
            for p in picks:
                edges.append(NetEdge(node, p, j, float(line[p])))
                if p not in level:
                    level[p] = j + 1
                    order.append(p)
                    found.append(p)
        frontier = [p for p in found if selection.categories[p] == cat1]

    nodes = []
    for k in order:
        attached = None
        if level[k] > 0:
            parents = [e.expanded for e in edges if e.selected == k and level[e.expanded] == level[k] - 1]
            parents.sort(key=lambda p: rank.get(p, n_r + p))
            same = [p for p in parents if selection.groups[p] == selection.groups[k]]
            attached = (same or parents or [None])[0]
        nodes.append(NetNode(k, _label(selection, k), selection.categories[k],
                             int(selection.groups[k]), level[k], attached))
    return InfluenceNetwork(mode, nodes, edges)


def _label(selection, k):
    return selection.codes[k] or selection.labels[k]


# group colors; index 0 is used for nodes without a group (e.g. countries)
PALETTE = ("indigo", "red", "olive", "green", "cyan", "blue", "orange", "magenta",
           "brown", "gray", "purple")
LEVEL_SIZE = (0.9, 0.65, 0.45)
EDGE_STYLE = {0: ("black", 3.0), 1: ("red", 1.0)}


def _quote(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(net: InfluenceNetwork, name: str = "influence") -> str:
    """Deterministic Graphviz text for the network."""
    lines = [f"digraph {_quote(name)} {{",
             f"  graph [mode={_quote(net.mode)}];",
             "  node [shape=circle, style=filled, fontsize=10];"]
    for n in net.nodes:
        color = PALETTE[n.group % len(PALETTE)] if n.group > 0 else PALETTE[0]
        size = LEVEL_SIZE[min(n.level, len(LEVEL_SIZE) - 1)]
        attrs = [f"label={_quote(n.label)}", f"fillcolor={_quote(color)}",
                 f"width={size}", f"level={n.level}", f"category={_quote(n.category)}",
                 f"group={n.group}"]
        if n.attached_to is not None:
            attrs.append(f"attached_to=n{n.attached_to}")
        lines.append(f"  n{n.id} [{', '.join(attrs)}];")
    for src, dst, lvl, w in net.links():
        color, width = EDGE_STYLE.get(lvl, ("gray", 0.5))
        lines.append(f"  n{src} -> n{dst} [color={color}, penwidth={width}, "
                     f"level={lvl}, weight_value={_quote(repr(w))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(net: InfluenceNetwork) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "mode": net.mode,
        "nodes": [asdict(n) for n in net.nodes],
        "edges": [dict(asdict(e), source=s, target=t)
                  for e, (s, t, _, _) in zip(net.edges, net.links())],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
