"""Command-line benchmark runner.

Subcommands tie ingestion, detection, pruning, quality and significance
testing into reproducible runs: every output is a CSV or JSON file whose
bytes depend only on the run configuration.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import detect as detect_mod
from . import graph as graph_mod
from . import pruning as pruning_mod
from . import quality as quality_mod
from . import stattests as stats_mod
from .errors import ConfigError, DegenerateInputError, DependencyError, HiercutError, InsufficientDataError
from .scoring import Criterion, CriterionKind, EdgeScoreTable, INFINITE, edge_betweenness, score_all

CANONICAL_DATASETS = ("adjnoun", "dolphins", "football", "karate", "lesmis", "polbooks")

# column orders used by the wide mirror tables
CORRELATION_COLUMNS = ("cn", "aa", "ra", "pa", "hd", "hp", "ja", "llhn", "sa", "so")
BENCH_COLUMNS = ("cn", "aa", "ra", "pa", "ja", "so", "sa", "hd", "hp", "llhn")


@dataclass
class RunConfig:
    datasets: dict[str, Path]  # name -> gml path
    criteria: tuple[Criterion, ...]
    k_max: int = 10
    prune_threshold: int = 2
    prune_mode: str = "one-pass"
    salton_variant: str = "paper"
    out_dir: Path = Path("out")
    seed: int = 0
    per_dataset_threshold: dict[str, int] = field(default_factory=dict)
    per_dataset_mode: dict[str, str] = field(default_factory=dict)

    def threshold_for(self, name: str) -> int:
        return self.per_dataset_threshold.get(name, self.prune_threshold)

    def mode_for(self, name: str) -> str:
        return self.per_dataset_mode.get(name, self.prune_mode)


def _fmt(x: float) -> str:
    if x == INFINITE:
        return "inf"
    return format(x, ".10g")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _resolve_datasets(names: list[str], data_dir: Path) -> dict[str, Path]:
    if not names:
        names = [n for n in CANONICAL_DATASETS if (data_dir / f"{n}.gml").exists()]
        if not names:
            raise ConfigError(f"no datasets found under {data_dir}")
    out: dict[str, Path] = {}
    for name in names:
        path = Path(name)
        if not path.exists():
            path = data_dir / f"{name}.gml"
        if not path.exists():
            raise ConfigError(f"dataset {name!r} not found (looked for {path})")
        out[path.stem] = path
    return out


def _resolve_criteria(tokens: list[str], salton_variant: str) -> tuple[Criterion, ...]:
    if not tokens:
        tokens = [k.value for k in CriterionKind]
    criteria = []
    for token in tokens:
        try:
            kind = CriterionKind(token.lower())
        except ValueError:
            raise ConfigError(
                f"unknown criterion {token!r}; choose from "
                f"{', '.join(k.value for k in CriterionKind)}"
            ) from None
        criteria.append(Criterion(kind, salton_variant))
    if not criteria:
        raise ConfigError("criteria list is empty")
    return tuple(criteria)


def build_config(args: argparse.Namespace) -> RunConfig:
    data_dir = Path(args.data_dir or os.environ.get("HIERCUT_DATA_DIR", "data"))
    cfg = RunConfig(
        datasets=_resolve_datasets(args.dataset or [], data_dir),
        criteria=_resolve_criteria(args.criterion or [], args.salton),
        k_max=args.k_max,
        prune_threshold=args.prune_threshold,
        prune_mode=args.prune_mode,
        salton_variant=args.salton,
        out_dir=Path(args.out),
        seed=args.seed,
    )
    if cfg.k_max < 2:
        raise ConfigError("k-max must be at least 2")
    if args.config:
        parser = configparser.ConfigParser()
        read = parser.read(args.config)
        if not read:
            raise ConfigError(f"config file {args.config!r} not found")
        for section in parser.sections():
            if section == "run":
                continue
            if parser.has_option(section, "prune_threshold"):
                cfg.per_dataset_threshold[section] = parser.getint(section, "prune_threshold")
            if parser.has_option(section, "prune_mode"):
                cfg.per_dataset_mode[section] = parser.get(section, "prune_mode")
    return cfg


def _write_manifest(cfg: RunConfig, command: str) -> None:
    payload = {
        "command": command,
        "datasets": {name: str(path) for name, path in sorted(cfg.datasets.items())},
        "criteria": [c.kind.value for c in cfg.criteria],
        "k_max": cfg.k_max,
        "prune_threshold": cfg.prune_threshold,
        "prune_mode": cfg.prune_mode,
        "per_dataset_threshold": dict(sorted(cfg.per_dataset_threshold.items())),
        "per_dataset_mode": dict(sorted(cfg.per_dataset_mode.items())),
        "salton_variant": cfg.salton_variant,
        "seed": cfg.seed,
    }
    path = cfg.out_dir / "run_config.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def _curve(g: graph_mod.Graph, dendrogram, k_max: int, record: pruning_mod.PruneRecord | None = None) -> dict[int, float]:
    """Q per community count; pruned-run partitions are reattached first."""
    lo = max(2, dendrogram.initial_components)
    hi = min(k_max, max(dendrogram.reachable_counts(), default=lo))
    out: dict[int, float] = {}
    for k in range(lo, hi + 1):
        part = dendrogram.cut(k)
        if record is not None:
            part = pruning_mod.reattach(record, part)
        out[k] = quality_mod.modularity(g, part)
    return out


def _detect_at(g: graph_mod.Graph, criterion: Criterion, k_max: int) -> detect_mod.Dendrogram:
    cfg = detect_mod.DetectionConfig(criterion=criterion, k_max=min(k_max, g.n))
    return detect_mod.detect(g, cfg)


def cmd_detect(cfg: RunConfig) -> int:
    _write_manifest(cfg, "detect")
    for name, path in sorted(cfg.datasets.items()):
        g = graph_mod.load_graph(path)
        for criterion in cfg.criteria:
            dendrogram = _detect_at(g, criterion, cfg.k_max)
            base = cfg.out_dir / "detect" / name / criterion.kind.value
            base.mkdir(parents=True, exist_ok=True)
            (base / "dendrogram.json").write_text(dendrogram.to_json() + "\n", encoding="utf-8")
            curve = _curve(g, dendrogram, cfg.k_max)
            for k in curve:
                part = dendrogram.cut(k)
                _write_csv(
                    base / f"partition_k{k}.csv",
                    ["node_label", "community_id"],
                    [[g.labels[node], part.labels[node]] for node in range(g.n)],
                )
            _write_csv(
                base / "modularity_curve.csv",
                ["k", "Q"],
                [[k, _fmt(q)] for k, q in sorted(curve.items())],
            )
    return 0


def cmd_bench(cfg: RunConfig) -> int:
    _write_manifest(cfg, "bench")
    curves_dir = cfg.out_dir / "bench" / "curves"
    long_rows = []
    wide: dict[str, dict[tuple[str, str], tuple[float, float]]] = {"original": {}, "pruned": {}}
    for name, path in sorted(cfg.datasets.items()):
        g = graph_mod.load_graph(path)
        record = pruning_mod.prune(g, cfg.threshold_for(name), cfg.mode_for(name))
        for criterion in cfg.criteria:
            for variant, graph_used, rec in (
                ("original", g, None),
                ("pruned", record.pruned_graph, record),
            ):
                dendrogram = _detect_at(graph_used, criterion, cfg.k_max)
                curve = _curve(g, dendrogram, cfg.k_max, rec)
                _write_csv(
                    curves_dir / f"{name}__{criterion.kind.value}__{variant}.csv",
                    ["k", "Q"],
                    [[k, _fmt(q)] for k, q in sorted(curve.items())],
                )
                qs = list(curve.values())
                avg_q = sum(qs) / len(qs)
                max_q = max(qs)
                long_rows.append(
                    [name, criterion.kind.value, variant, _fmt(avg_q), _fmt(max_q)]
                )
                wide[variant][(name, criterion.kind.value)] = (avg_q, max_q)
    _write_csv(
        cfg.out_dir / "bench" / "bench_long.csv",
        ["dataset", "criterion", "variant", "avg_q", "max_q"],
        long_rows,
    )
    requested = {c.kind.value for c in cfg.criteria}
    columns = [c for c in BENCH_COLUMNS if c in requested]
    for variant in ("original", "pruned"):
        rows = []
        for name in sorted(cfg.datasets):
            cells = [wide[variant][(name, c)][1] for c in columns]
            rows.append(
                [name]
                + [_fmt(v) for v in cells]
                + [_fmt(sum(cells) / len(cells)), _fmt(max(cells))]
            )
        _write_csv(
            cfg.out_dir / "bench" / f"bench_{variant}.csv",
            ["dataset"] + list(columns) + ["avg", "max"],
            rows,
        )
    return 0


def _criterion_vector(g, criterion: Criterion) -> list[float]:
    table: EdgeScoreTable = score_all(g, criterion)
    return [table.scores[eid] for eid in sorted(table.scores)]


def cmd_correlate(cfg: RunConfig, self_check: bool = False) -> int:
    _write_manifest(cfg, "correlate")
    columns = list(CORRELATION_COLUMNS)
    if self_check:
        columns.append("betweenness")
    rows = []
    col_values: dict[str, list[float]] = {c: [] for c in columns}
    for name, path in sorted(cfg.datasets.items()):
        g = graph_mod.load_graph(path)
        bn = _criterion_vector(g, Criterion(CriterionKind.BETWEENNESS))
        row_vals = []
        for token in columns:
            vec = _criterion_vector(g, Criterion(CriterionKind(token), cfg.salton_variant))
            r, excluded = stats_mod.pearson_excluding_nonfinite(bn, vec)
            if excluded:
                print(f"note: {name}/{token}: {excluded} pair(s) excluded (non-finite)", file=sys.stderr)
            row_vals.append(r)
            col_values[token].append(r)
        rows.append([name] + [_fmt(v) for v in row_vals] + [_fmt(sum(row_vals) / len(row_vals))])
    rows.append(
        ["average"]
        + [_fmt(sum(col_values[c]) / len(col_values[c])) for c in columns]
        + [""]
    )
    _write_csv(cfg.out_dir / "correlation_matrix.csv", ["dataset"] + columns + ["avg"], rows)
    return 0


def _read_curve(path: Path) -> dict[int, float]:
    if not path.exists():
        raise DependencyError(f"missing bench output {path}; run `hiercut bench` first")
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out[int(row["k"])] = float(row["Q"])
    return out


def _paired_cell(a: dict[int, float], b: dict[int, float], test) -> str:
    ks = sorted(set(a) & set(b))
    if len(ks) < 2:
        return "insufficient"
    series = stats_mod.PairedSeries.of([a[k] for k in ks], [b[k] for k in ks], ks)
    try:
        return _fmt(test(series).p_value)
    except DegenerateInputError:
        return "degenerate"
    except InsufficientDataError:
        return "insufficient"


def cmd_stats(cfg: RunConfig) -> int:
    _write_manifest(cfg, "stats")
    curves = cfg.out_dir / "bench" / "curves"
    datasets = sorted(cfg.datasets)
    local = [c for c in BENCH_COLUMNS if c in {c.kind.value for c in cfg.criteria}]
    tables = {
        "ttest_betweenness_vs_pruned.csv": (
            stats_mod.paired_t_test,
            [("betweenness", "original", crit, "pruned") for crit in local],
        ),
        "wilcoxon_betweenness_vs_pruned.csv": (
            stats_mod.wilcoxon_signed_rank,
            [("betweenness", "original", crit, "pruned") for crit in local],
        ),
        "ttest_original_vs_pruned.csv": (
            stats_mod.paired_t_test,
            [(crit, "original", crit, "pruned") for crit in local],
        ),
    }
    for filename, (test, comparisons) in tables.items():
        rows = []
        for crit_a, variant_a, crit_b, variant_b in comparisons:
            label = f"{crit_a}-{variant_a} vs {crit_b}-{variant_b}"
            cells = []
            for name in datasets:
                a = _read_curve(curves / f"{name}__{crit_a}__{variant_a}.csv")
                b = _read_curve(curves / f"{name}__{crit_b}__{variant_b}.csv")
                cells.append(_paired_cell(a, b, test))
            rows.append([label] + cells)
        _write_csv(cfg.out_dir / "stats" / filename, ["comparison"] + datasets, rows)
    return 0


def cmd_prune_sweep(cfg: RunConfig, max_threshold: int) -> int:
    _write_manifest(cfg, "prune-sweep")
    for name, path in sorted(cfg.datasets.items()):
        g = graph_mod.load_graph(path)
        thresholds = list(range(1, max_threshold + 1))
        result = pruning_mod.stats_sweep(g, thresholds, cfg.mode_for(name))
        _write_csv(
            cfg.out_dir / "prune_sweep" / f"{name}.csv",
            ["threshold", "n", "m", "avg_degree", "avg_clustering"],
            [
                [t, s.n, s.m, _fmt(s.avg_degree), _fmt(s.avg_clustering)]
                for t, s in zip(thresholds, result)
            ],
        )
    return 0


def cmd_score_dump(cfg: RunConfig) -> int:
    _write_manifest(cfg, "score-dump")
    for name, path in sorted(cfg.datasets.items()):
        g = graph_mod.load_graph(path)
        for criterion in cfg.criteria:
            table = score_all(g, criterion)
            rows = [
                [eid, g.edges[eid][0], g.edges[eid][1], criterion.kind.value, _fmt(table.scores[eid])]
                for eid in sorted(table.scores)
            ]
            _write_csv(
                cfg.out_dir / "scores" / f"{name}__{criterion.kind.value}.csv",
                ["edge_id", "u", "v", "criterion", "score"],
                rows,
            )
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiercut",
        description="Divisive hierarchical community detection benchmark runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("detect", "dendrograms, partitions and modularity curves per criterion"),
        ("bench", "aggregate modularity tables for original and pruned networks"),
        ("correlate", "correlation of betweenness against each local index"),
        ("stats", "significance tests over previously benched curves"),
        ("prune-sweep", "structural stats across pruning thresholds"),
        ("score-dump", "raw edge scores per criterion"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dataset", action="append", help="dataset name or path (repeatable)")
        p.add_argument("--criterion", action="append", help="criterion token (repeatable)")
        p.add_argument("--k-max", type=int, default=10)
        p.add_argument("--prune-threshold", type=int, default=2)
        p.add_argument("--prune-mode", choices=pruning_mod.MODES, default="one-pass")
        p.add_argument("--salton", choices=("paper", "standard"), default="paper")
        p.add_argument("--out", default="out")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--data-dir", default=None, help="defaults to $HIERCUT_DATA_DIR or ./data")
        p.add_argument("--config", default=None, help="INI file with per-dataset overrides")
        if name == "correlate":
            p.add_argument("--self-check", action="store_true",
                           help="add a betweenness-vs-betweenness column (must be 1.0)")
        if name == "prune-sweep":
            p.add_argument("--max-threshold", type=int, default=4)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "detect":
            return cmd_detect(cfg)
        if args.command == "bench":
            return cmd_bench(cfg)
        if args.command == "correlate":
            return cmd_correlate(cfg, self_check=args.self_check)
        if args.command == "stats":
            return cmd_stats(cfg)
        if args.command == "prune-sweep":
            return cmd_prune_sweep(cfg, args.max_threshold)
        if args.command == "score-dump":
            return cmd_score_dump(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except HiercutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
