"""Command line driver: ``regomax {rank,reduce,sensitivity,network,bench}``.

Options can also come from a ``key=value`` file given with ``--config``;
flags on the command line win over the file. Exit codes: 0 success,
2 configuration error, 3 numerical non-convergence, 4 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .exceptions import ConvergenceError, GraphFormatError, RegomaxError
from .graph import GoogleOperator, bandwidth, cuthill_mckee, load_edge_list, load_labels, relabel
from .io import read_matrix, read_selection, write_matrix, write_rows
from .netview import build_network, export_dot, export_json, top_per_group
from .rank import local_rank, pagerank, rank_order
from .reduced import COMPONENTS, NodeSelection, ReducedMatrix, compute_reduced, sector_weights
from .sensitivity import METHODS, sensitivity_matrix

log = logging.getLogger("regomax")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


class ConfigError(RegomaxError):
    pass


# name -> (type, default); every entry is also a long flag (underscores -> dashes)
OPTIONS = {
    "alpha": (float, 0.85),
    "threads": (int, None),
    "out_dir": (str, "."),
    "edges": (str, None),
    "labels": (str, None),
    "selection": (str, None),
    "n_nodes": (int, None),
    "drop_self_loops": (bool, False),
    "tol": (float, 1e-12),
    "max_iter": (int, 1000),
    # rank
    "all_nodes": (bool, False),
    # reduce
    "series_tol": (float, 1e-13),
    "batch_size": (int, 16),
    "sector": (str, None),
    "weights_abs": (bool, False),
    # sensitivity
    "sources": (str, "bank"),
    "targets": (str, "country"),
    "source_labels": (str, None),
    "delta": (float, 1e-3),
    "method": (str, "central"),
    "from_reduced": (str, None),
    # network
    "seeds": (str, None),
    "cat1": (str, "bank"),
    "cat2": (str, "country"),
    "n_cat1": (int, 4),
    "n_cat2": (int, 2),
    "max_level": (int, 2),
    "mode": (str, "friends"),
    "component": (str, "GR"),
    # bench
    "batch_sizes": (str, "1,8,16,20"),
    "repeat": (int, 1),
}


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None

    @property
    def out_path(self) -> Path:
        return Path(self.values["out_dir"])

    @property
    def n_threads(self) -> int:
        return self.values["threads"] or os.cpu_count() or 1


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def read_config_file(path) -> dict:
    """Plain ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in OPTIONS:
            raise ConfigError(f"{path}:{lineno}: unknown or malformed entry {line!r}")
        out[key] = value.strip()
    return out


def _coerce(name, raw):
    kind, _ = OPTIONS[name]
    if raw is None:
        return None
    try:
        return _parse_bool(raw) if kind is bool else kind(raw)
    except ValueError:
        raise ConfigError(f"{name}: cannot interpret {raw!r} as {kind.__name__}") from None


def build_config(command: str, cli_values: dict) -> RunConfig:
    file_values = read_config_file(cli_values["config"]) if cli_values.get("config") else {}
    values = {}
    for name, (_, default) in OPTIONS.items():
        if name in cli_values:
            values[name] = _coerce(name, cli_values[name])
        elif name in file_values:
            values[name] = _coerce(name, file_values[name])
        else:
            values[name] = default
    cfg = RunConfig(command, values)
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    v = cfg.values
    if not 0.0 < v["alpha"] < 1.0:
        raise ConfigError("--alpha must lie in (0, 1)")
    for name in ("tol", "series_tol"):
        if v[name] <= 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be positive")
    for name in ("max_iter", "batch_size", "repeat"):
        if v[name] < 1:
            raise ConfigError(f"--{name.replace('_', '-')} must be at least 1")
    if v["threads"] is not None and v["threads"] < 1:
        raise ConfigError("--threads must be at least 1")
    for name in ("n_cat1", "n_cat2", "max_level"):
        if v[name] < 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be nonnegative")
    if not 0.0 < v["delta"] <= 0.1:
        raise ConfigError("--delta must lie in (0, 0.1]")
    if v["method"] not in METHODS:
        raise ConfigError(f"--method must be one of {METHODS}")
    if v["mode"] not in ("friends", "followers"):
        raise ConfigError("--mode must be 'friends' or 'followers'")
    if v["component"] not in ("GR", "Grr+Gqr", "Gqr", "Grr", "Gpr", "Gqrnd"):
        raise ConfigError("--component must be one of GR, Grr+Gqr, Gqr")
    if v["edges"] is None and not (cfg.command in ("sensitivity", "network") and v["from_reduced"]):
        raise ConfigError("--edges is required")
    if v["selection"] is None:
        raise ConfigError("--selection is required")
    for name in ("edges", "labels", "selection", "from_reduced"):
        if v[name] is not None and not Path(v[name]).exists():
            raise ConfigError(f"--{name.replace('_', '-')}: {v[name]} does not exist")


# -- shared loading ----------------------------------------------------


@dataclass
class Inputs:
    graph: object
    selection: NodeSelection


def load_inputs(cfg: RunConfig) -> Inputs:
    graph = None
    labels = None
    if cfg.edges:
        with open(cfg.edges, encoding="utf-8") as fh:
            graph = load_edge_list(fh, cfg.n_nodes, drop_self_loops=cfg.drop_self_loops)
        if cfg.labels:
            with open(cfg.labels, encoding="utf-8") as fh:
                labels = load_labels(fh, graph.n_nodes)
            graph = graph.with_labels(labels)
    with open(cfg.selection, encoding="utf-8", newline="") as fh:
        selection = read_selection(fh, labels, graph.n_nodes if graph else None,
                                   resolve=graph is not None)
    if graph is not None:
        selection.validate(graph.n_nodes)
    return Inputs(graph, selection)


def _write(path: Path, writer, *args):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer(fh, *args)
    log.info("wrote %s", path)


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def _reduce(cfg: RunConfig, inp: Inputs) -> ReducedMatrix:
    return compute_reduced(inp.graph, cfg.alpha, inp.selection, cfg.series_tol, cfg.batch_size,
                           cfg.n_threads, eig_tol=cfg.tol, max_iter=cfg.max_iter)


def _load_reduced(cfg: RunConfig, selection: NodeSelection) -> ReducedMatrix:
    mats = {}
    for name in COMPONENTS:
        with open(Path(cfg.from_reduced) / f"reduced_{name}.csv", encoding="utf-8", newline="") as fh:
            M, rows, _ = read_matrix(fh)
        if list(rows) != list(selection.labels):
            raise ConfigError(f"reduced_{name}.csv rows do not match the selection order")
        mats[name] = M
    return ReducedMatrix(selection, cfg.alpha, mats["GR"], mats["Grr"], mats["Gpr"], mats["Gqr"],
                         float("nan"), np.zeros(0), np.zeros(0))


def _reduced_for(cfg, inp):
    if cfg.from_reduced:
        return _load_reduced(cfg, inp.selection)
    return _reduce(cfg, inp)


# -- subcommands -------------------------------------------------------


def cmd_rank(cfg: RunConfig) -> None:
    inp = load_inputs(cfg)
    g, sel = inp.graph, inp.selection
    P = pagerank(GoogleOperator(g, cfg.alpha), cfg.tol, cfg.max_iter)
    Ps = pagerank(GoogleOperator(g, cfg.alpha, "inverted"), cfg.tol, cfg.max_iter)
    K, Ks = P.K, Ps.K
    nodes = range(g.n_nodes) if cfg.all_nodes else sel.nodes
    out = cfg.out_path
    _write(out / "ranks.csv", write_rows, ("node", "label", "P", "K", "Pstar", "Kstar"),
           [(j, g.label(j), float(P.probabilities[j]), int(K[j]), float(Ps.probabilities[j]), int(Ks[j]))
            for j in nodes])

    pos = {node: k for k, node in enumerate(sel.nodes)}
    join, plane = [], []
    for cat in sel.category_names():
        members = [sel.nodes[k] for k in sel.positions(cat)]
        ext = {sel.nodes[k]: sel.external_ranks[k] for k in sel.positions(cat)}
        grp = {sel.nodes[k]: sel.groups[k] for k in sel.positions(cat)}
        rows = local_rank(P, members, ext, grp, cat)
        star = {r.node: r.K_local for r in local_rank(Ps, members)}
        for r in sorted(rows, key=lambda r: pos[r.node]):
            label = sel.labels[pos[r.node]]
            join.append((r.node, label, cat, r.group, r.K_local, r.K_external))
            plane.append((r.node, label, cat, r.group, r.K_local, r.K_external, star[r.node]))
    _write(out / "rankjoin.csv", write_rows,
           ("node", "label", "category", "group", "K_local", "K_external"), join)
    _write(out / "rankplane.csv", write_rows,
           ("node", "label", "category", "group", "K_local", "K_external", "Kstar_local"), plane)


def cmd_reduce(cfg: RunConfig) -> None:
    inp = load_inputs(cfg)
    sel = inp.selection
    R = _reduce(cfg, inp)
    out = cfg.out_path
    for name in COMPONENTS:
        _write(out / f"reduced_{name}.csv", write_matrix, R.component(name), sel.labels, sel.labels)
    w = R.weights(use_abs=cfg.weights_abs)
    _write(out / "weights.csv", write_rows, ("component", "W"), list(w.items()))
    rows = []
    cats = sel.category_names()
    for rc in cats:
        for cc in cats:
            for comp, val in sector_weights(R, rc, cc, use_abs=cfg.weights_abs).items():
                rows.append((rc, cc, comp, val))
    _write(out / "sector_weights.csv", write_rows, ("rows", "cols", "component", "W"), rows)
    _write(out / "reduce_info.csv", write_rows, ("key", "value"),
           [("N", inp.graph.n_nodes), ("N_r", R.n_r), ("alpha", cfg.alpha),
            ("lambda_c", R.lambda_c), ("max_series_terms", int(R.series_terms.max()))])
    if cfg.sector:
        parts = [p.strip() for p in cfg.sector.split(",")]
        if len(parts) != 2:
            raise ConfigError("--sector expects 'rows,cols' category names")
        rpos, cpos = sel.positions(parts[0]), sel.positions(parts[1])
        if rpos.size == 0 or cpos.size == 0:
            raise ConfigError(f"--sector {cfg.sector}: category not present in the selection")
        for name in COMPONENTS:
            M = R.component(name)[np.ix_(rpos, cpos)]
            _write(out / f"reduced_{name}_{parts[0]}_{parts[1]}.csv", write_matrix, M,
                   [sel.labels[k] for k in rpos], [sel.labels[k] for k in cpos])


def cmd_sensitivity(cfg: RunConfig) -> None:
    inp = load_inputs(cfg)
    sel = inp.selection
    R = _reduced_for(cfg, inp)
    sources = sel.positions(cfg.sources).tolist() if cfg.sources else []
    if cfg.source_labels:
        wanted = [s.strip() for s in cfg.source_labels.split(",")]
        lookup = {lab: k for k, lab in enumerate(sel.labels)}
        missing = [s for s in wanted if s not in lookup]
        if missing:
            raise ConfigError(f"--source-labels: unknown labels {missing}")
        sources = [lookup[s] for s in wanted]
    targets = sel.positions(cfg.targets).tolist()
    if not sources or not targets:
        raise ConfigError("no source or target nodes in the selection")
    table = sensitivity_matrix(R, sources, targets, cfg.delta, cfg.method, n_threads=cfg.n_threads)
    out = cfg.out_path
    _write(out / "sensitivity.csv", write_rows,
           ("source_label", "target_label", "alpha2", "D", "delta", "method", "flag"),
           [(sel.labels[r.source], sel.labels[r.target], sel.codes[r.target], r.D,
             cfg.delta, cfg.method, r.flag) for r in table.rows])
    _write(out / "sensitivity_extrema.csv", write_rows, ("source_label", "D_min", "D_max"),
           [(sel.labels[s], lo, hi) for s, lo, hi in table.extrema()])


def cmd_network(cfg: RunConfig) -> None:
    inp = load_inputs(cfg)
    sel = inp.selection
    R = _reduced_for(cfg, inp)
    P = pagerank(R.G_R, tol=1e-14, max_iter=100_000).probabilities
    if cfg.seeds:
        lookup = {lab: k for k, lab in enumerate(sel.labels)}
        wanted = [s.strip() for s in cfg.seeds.split(",")]
        missing = [s for s in wanted if s not in lookup]
        if missing:
            raise ConfigError(f"--seeds: unknown labels {missing}")
        seeds = [lookup[s] for s in wanted]
    else:
        seeds = top_per_group(sel, P, cfg.cat1)
    net = build_network(R, seeds, cfg.n_cat1, cfg.n_cat2, cfg.max_level, cfg.mode,
                        cat1=cfg.cat1, cat2=cfg.cat2, component=cfg.component,
                        priority=rank_order(P))
    _write_text(cfg.out_path / "network.dot", export_dot(net))
    _write_text(cfg.out_path / "network.json", export_json(net))


def cmd_bench(cfg: RunConfig) -> None:
    inp = load_inputs(cfg)
    try:
        sizes = [int(b) for b in cfg.batch_sizes.split(",")]
    except ValueError:
        raise ConfigError("--batch-sizes expects comma-separated integers") from None
    variants = [("identity", inp.graph, inp.selection, None)]
    order = cuthill_mckee(inp.graph)
    variants.append(("cmk", relabel(inp.graph, order), inp.selection.relabeled(order), order))
    rows = []
    base_pr = base_red = None
    for name, g, sel, _ in variants:
        bw = bandwidth(g)
        op = GoogleOperator(g, cfg.alpha)
        for b in sizes:
            t_pr = t_red = np.inf
            for _ in range(cfg.repeat):
                t0 = time.perf_counter()
                pagerank(op, cfg.tol, cfg.max_iter)
                t1 = time.perf_counter()
                compute_reduced(g, cfg.alpha, sel, cfg.series_tol, b, cfg.n_threads,
                                eig_tol=cfg.tol, max_iter=cfg.max_iter)
                t2 = time.perf_counter()
                t_pr, t_red = min(t_pr, t1 - t0), min(t_red, t2 - t1)
            if base_pr is None:
                base_pr, base_red = t_pr, t_red
            rows.append((name, b, bw, t_pr, t_red, base_pr / t_pr, base_red / t_red))
    _write(cfg.out_path / "bench.csv", write_rows,
           ("ordering", "batch_size", "bandwidth", "pagerank_seconds", "reduce_seconds",
            "pagerank_speedup", "reduce_speedup"), rows)


COMMANDS = {
    "rank": cmd_rank,
    "reduce": cmd_reduce,
    "sensitivity": cmd_sensitivity,
    "network": cmd_network,
    "bench": cmd_bench,
}

HELP = {
    "rank": "PageRank/CheiRank of the graph, local ranks of the selection",
    "reduce": "reduced Google matrix, its components and weights",
    "sensitivity": "PageRank sensitivity of targets to source links in G_R",
    "network": "friend/follower network from G_R as DOT and JSON",
    "bench": "time pagerank and reduction under identity/Cuthill-McKee ordering",
}

FLAG_HELP = {
    "alpha": "damping factor (default 0.85)",
    "threads": "worker threads (default: all cores)",
    "out_dir": "output directory",
    "config": "key=value file with option defaults",
    "n_nodes": "minimum node count",
    "tol": "L1 tolerance of power iterations",
    "sector": "also write the 'rows,cols' category sub-block of each component",
    "weights_abs": "sum |Gqr| instead of signed values in weights",
    "from_reduced": "directory with reduced_*.csv from a previous 'reduce' run",
    "component": "matrix used to pick friends/followers: GR, Grr+Gqr or Gqr",
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config")
    for name, (kind, default) in OPTIONS.items():
        flag = "--" + name.replace("_", "-")
        helptext = FLAG_HELP.get(name)
        if kind is bool:
            common.add_argument(flag, action="store_const", const=True, help=helptext)
        else:
            common.add_argument(flag, help=helptext)
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="regomax", parents=[common], description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = make_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    logging.basicConfig(level=logging.INFO if args.pop("verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(command, args)
        COMMANDS[command](cfg)
    except ConfigError as exc:
        print(f"regomax: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"regomax: not converged: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, GraphFormatError) as exc:
        print(f"regomax: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RegomaxError as exc:
        print(f"regomax: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
