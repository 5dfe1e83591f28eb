"""File formats: selection CSV in, rank/reduced/weight/sensitivity CSVs out.

All floats are written with ``%.17g`` so every value round-trips exactly.
"""
from __future__ import annotations

import csv
import io
from typing import Optional

import numpy as np

from .exceptions import GraphFormatError, SelectionError
from .reduced import NodeSelection

SELECTION_FIELDS = ("node_label", "category", "group", "external_rank")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return str(x)


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


def read_selection(stream, labels: Optional[tuple] = None, n_nodes: Optional[int] = None,
                   resolve: bool = True) -> NodeSelection:
    """Parse ``node_label,category,group,external_rank[,code]`` rows.

    Labels are resolved through ``labels`` (node id -> label); a label that
    is not found but is a plain integer is taken as the node id itself.
    With ``resolve=False`` the row number stands in for the node id, which
    is enough when only selection-indexed matrices are involved.
    """
    index = {lab: j for j, lab in enumerate(labels)} if labels is not None else {}
    reader = csv.DictReader(stream)
    missing = [f for f in SELECTION_FIELDS if f not in (reader.fieldnames or ())]
    if missing:
        raise GraphFormatError(f"selection header lacks columns {missing}", 1)
    nodes, cats, groups, ext, codes, labs = [], [], [], [], [], []
    for row in reader:
        lineno = reader.line_num
        label = row["node_label"]
        if not resolve:
            node = len(nodes)
        elif label in index:
            node = index[label]
        elif label.strip().isdigit():
            node = int(label)
        else:
            raise SelectionError(f"line {lineno}: unknown node label {label!r}")
        if n_nodes is not None and node >= n_nodes:
            raise SelectionError(f"line {lineno}: node {node} outside [0, {n_nodes})")
        try:
            group = int(row["group"]) if row["group"].strip() else 0
            rank = int(row["external_rank"]) if row["external_rank"].strip() else None
        except ValueError:
            raise GraphFormatError("group and external_rank must be integers", lineno) from None
        nodes.append(node)
        labs.append(label)
        cats.append(row["category"])
        groups.append(group)
        ext.append(rank)
        codes.append((row.get("code") or "").strip())
    return NodeSelection(tuple(nodes), tuple(cats), tuple(groups), tuple(ext), tuple(codes),
                         tuple(labs))


def write_selection(stream, selection: NodeSelection) -> None:
    w = _writer(stream)
    w.writerow(SELECTION_FIELDS + ("code",))
    for k in range(len(selection)):
        w.writerow([selection.labels[k], selection.categories[k], selection.groups[k],
                    fmt(selection.external_ranks[k]), selection.codes[k]])


def write_matrix(stream, M: np.ndarray, row_labels, col_labels) -> None:
    """Dense matrix with a header row and a header column of labels."""
    w = _writer(stream)
    w.writerow([""] + list(col_labels))
    for label, row in zip(row_labels, M):
        w.writerow([label] + [fmt(float(x)) for x in row])


def read_matrix(stream):
    """Inverse of :func:`write_matrix`: returns ``(M, row_labels, col_labels)``."""
    rows = list(csv.reader(stream))
    if not rows:
        raise GraphFormatError("empty matrix file", 1)
    cols = rows[0][1:]
    labels = [r[0] for r in rows[1:]]
    try:
        M = np.array([[float(x) for x in r[1:]] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise GraphFormatError(f"bad matrix entry: {exc}") from None
    if M.shape != (len(labels), len(cols)):
        raise GraphFormatError(f"matrix is {M.shape}, header says {len(labels)}x{len(cols)}")
    return M, labels, cols


def write_rows(stream, header, rows) -> None:
    w = _writer(stream)
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])


def to_text(writer, *args) -> str:
    buf = io.StringIO()
    writer(buf, *args)
    return buf.getvalue()
