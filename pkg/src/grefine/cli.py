"""Command-line surface: ``grefine refine | evaluate | stats``.

Configuration comes from an optional TOML file plus flag overrides; every
hyperparameter defaults to the library's standard settings. Reports are
machine-first (CSV and JSON); plotting is left to external tools, with
per-metric histogram dumps providing the underlying data.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .corpus import (
    Dataset,
    load_dataset_json,
    load_graphs_json,
    load_tudataset,
    save_graphs_json,
)
from .evolution import EvolutionConfig
from .fitness import CorpusStats, FitnessWeights
from .genome import Opcode, format_genome
from .graph import Graph
from .metrics import (
    clustering_histogram,
    degree_histogram,
    laplacian_spectrum,
    spectral_histogram,
)
from .pipeline import build_class_stats, evaluate_graphs, refine_graphs

__all__ = ["main", "RunConfig", "load_run_config"]

_THREADS_ENV = "GREFINE_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings for one CLI invocation."""

    dataset: str | None = None
    format: str = "tud"
    seeds: str | None = None
    graphs: str | None = None
    out: str | None = None
    class_filter: int | None = None
    threads: int = 1
    dump_genomes: bool = False
    weights: FitnessWeights = field(default_factory=FitnessWeights)
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)

    def __post_init__(self) -> None:
        if self.format not in ("tud", "json"):
            raise ValueError(f'format must be "tud" or "json", got {self.format!r}')
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


_RUN_KEYS = {
    "dataset",
    "format",
    "seeds",
    "graphs",
    "out",
    "class",
    "threads",
    "dump_genomes",
}
_WEIGHT_KEYS = {"wd", "wc", "ws", "we", "sigma"}
_EVOLUTION_KEYS = {
    "population",
    "generations",
    "crossover",
    "mutation",
    "tournament",
    "elitism",
    "seed",
    "swap_strict",
}


def _reject_unknown(table: dict, allowed: set[str], where: str) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ValueError(f"unknown config key(s) in [{where}]: {sorted(unknown)}")


def _parse_op_probs(table: dict) -> dict[Opcode, float]:
    by_name = {op.value: op for op in Opcode}
    _reject_unknown(table, set(by_name), "evolution.op_probs")
    probs = {op: 0.0 for op in Opcode}
    for name, value in table.items():
        probs[by_name[name]] = float(value)
    return probs


def load_run_config(path: str | Path | None, overrides: argparse.Namespace) -> RunConfig:
    """Merge defaults, the optional TOML file, and CLI flag overrides."""
    run_tbl: dict = {}
    weight_tbl: dict = {}
    evo_tbl: dict = {}
    op_probs_tbl: dict | None = None
    if path is not None:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
        _reject_unknown(doc, {"run", "weights", "evolution"}, "top level")
        run_tbl = dict(doc.get("run", {}))
        weight_tbl = dict(doc.get("weights", {}))
        evo_tbl = dict(doc.get("evolution", {}))
        _reject_unknown(run_tbl, _RUN_KEYS, "run")
        _reject_unknown(weight_tbl, _WEIGHT_KEYS, "weights")
        _reject_unknown(evo_tbl, _EVOLUTION_KEYS | {"op_probs"}, "evolution")
        if "op_probs" in evo_tbl:
            op_probs_tbl = dict(evo_tbl.pop("op_probs"))

    def pick(flag_name: str, table: dict, key: str, fallback):
        value = getattr(overrides, flag_name, None)
        if value is not None:
            return value
        return table.get(key, fallback)

    threads = pick("threads", run_tbl, "threads", None)
    if threads is None:
        env = os.environ.get(_THREADS_ENV)
        if env is not None:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(
                    f"{_THREADS_ENV} must be an integer, got {env!r}"
                ) from None
        else:
            threads = 1

    weights = FitnessWeights(
        w_d=float(pick("wd", weight_tbl, "wd", 1.0)),
        w_c=float(pick("wc", weight_tbl, "wc", 1.0)),
        w_s=float(pick("ws", weight_tbl, "ws", 1.0)),
        w_e=float(pick("we", weight_tbl, "we", 0.05)),
        sigma=float(pick("sigma", weight_tbl, "sigma", 1.0)),
    )
    evo_kwargs = dict(
        population_size=int(pick("pop", evo_tbl, "population", 500)),
        generations=int(pick("gens", evo_tbl, "generations", 300)),
        crossover_rate=float(pick("crossover", evo_tbl, "crossover", 0.5)),
        mutation_rate=float(pick("mutation", evo_tbl, "mutation", 0.8)),
        tournament_size=int(pick("tournament", evo_tbl, "tournament", 5)),
        elitism=int(pick("elitism", evo_tbl, "elitism", 2)),
        master_seed=int(pick("seed", evo_tbl, "seed", 0)),
        swap_strict=bool(pick("swap_strict", evo_tbl, "swap_strict", False)),
    )
    if op_probs_tbl is not None:
        evo_kwargs["op_probs"] = _parse_op_probs(op_probs_tbl)
    evolution = EvolutionConfig(**evo_kwargs)

    dump = getattr(overrides, "dump_genomes", None)
    if dump is None or dump is False:
        dump = bool(run_tbl.get("dump_genomes", False))
    return RunConfig(
        dataset=pick("dataset", run_tbl, "dataset", None),
        format=str(pick("format", run_tbl, "format", "tud")),
        seeds=pick("seeds", run_tbl, "seeds", None),
        graphs=pick("graphs", run_tbl, "graphs", None),
        out=pick("out", run_tbl, "out", None),
        class_filter=pick("class_filter", run_tbl, "class", None),
        threads=int(threads),
        dump_genomes=bool(dump),
        weights=weights,
        evolution=evolution,
    )


def _load_corpus(cfg: RunConfig) -> Dataset:
    if cfg.dataset is None:
        raise ValueError("a corpus is required: pass --dataset")
    if cfg.format == "tud":
        return load_tudataset(cfg.dataset)
    return load_dataset_json(cfg.dataset)


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_rows(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(x if isinstance(x, str) else str(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _stats_table(dataset: Dataset) -> str:
    lines = ["class,graphs,avg_nodes,avg_edges"]
    for label, count, avg_nodes, avg_edges in dataset.class_summary():
        lines.append(f"{label},{count},{_fmt(avg_nodes)},{_fmt(avg_edges)}")
    count, _, avg_nodes, avg_edges = dataset.overall_summary()
    lines.append(f"all,{count},{_fmt(avg_nodes)},{_fmt(avg_edges)}")
    return "\n".join(lines) + "\n"


def _cmd_stats(cfg: RunConfig) -> int:
    sys.stdout.write(_stats_table(_load_corpus(cfg)))
    return 0


def _filter_class(graphs: list[Graph], class_filter: int | None) -> list[Graph]:
    if class_filter is None:
        return graphs
    return [g for g in graphs if g.class_label == class_filter]


def _histogram_rows(bin_edges: np.ndarray, masses: np.ndarray) -> list[list[str]]:
    return [
        [_fmt(bin_edges[i]), _fmt(bin_edges[i + 1]), _fmt(masses[i])]
        for i in range(len(masses))
    ]


def _dump_class_histograms(
    out: Path, label: int, members: list[Graph], stats: CorpusStats
) -> None:
    bins = stats.bins
    candidate = {
        "degree": np.mean(
            [
                degree_histogram(g, 0.0, stats.degree_range[1], bins).masses
                for g in members
            ],
            axis=0,
        ),
        "clustering": np.mean(
            [clustering_histogram(g, bins).masses for g in members], axis=0
        ),
        "spectral": np.mean(
            [
                spectral_histogram(
                    laplacian_spectrum(g), stats.spectral_range[1], bins
                ).masses
                for g in members
            ],
            axis=0,
        ),
    }
    edges = {
        "degree": stats.degree_hists[0].bin_edges,
        "clustering": stats.clustering_hists[0].bin_edges,
        "spectral": stats.spectral_hists[0].bin_edges,
    }
    header = ["bin_lo", "bin_hi", "mass"]
    for metric in ("degree", "clustering", "spectral"):
        _write_rows(
            out / f"hist_{metric}_class{label}.csv",
            header,
            _histogram_rows(edges[metric], candidate[metric]),
        )
        _write_rows(
            out / f"hist_{metric}_class{label}_corpus.csv",
            header,
            _histogram_rows(edges[metric], stats.corpus_masses(metric).mean(axis=0)),
        )


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def _cmd_refine(cfg: RunConfig) -> int:
    if cfg.seeds is None:
        raise ValueError("refine requires --seeds")
    if cfg.out is None:
        raise ValueError("refine requires --out")
    dataset = _load_corpus(cfg)
    seeds = _filter_class(load_graphs_json(cfg.seeds), cfg.class_filter)
    if not seeds:
        raise ValueError("no seed graphs remain after class filtering")
    classes = []
    for i, g in enumerate(seeds):
        if g.class_label is None:
            raise ValueError(f"seed graph #{i} carries no class label")
        if g.class_label not in dataset.class_index:
            raise ValueError(
                f"seed graph #{i} has class {g.class_label}, absent from the corpus"
            )
        classes.append(g.class_label)
    stats_by_class = build_class_stats(dataset.graphs, classes)

    progress = sys.stderr if cfg.threads == 1 else None
    outcomes = refine_graphs(
        seeds, stats_by_class, cfg.weights, cfg.evolution, cfg.threads, progress
    )

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    save_graphs_json([o.result.best_graph for o in outcomes], out / "refined.json")
    history_header = [
        "generation",
        "best_total",
        "mmd_d",
        "mmd_c",
        "mmd_s",
        "edge_penalty",
    ]
    for o in outcomes:
        rows = [
            [
                rec.generation,
                _fmt(rec.best_total),
                _fmt(rec.mmd_d),
                _fmt(rec.mmd_c),
                _fmt(rec.mmd_s),
                _fmt(rec.edge_penalty),
            ]
            for rec in o.result.history
        ]
        _write_rows(out / f"history_seed{o.seed_index:03d}.csv", history_header, rows)
        if cfg.dump_genomes:
            (out / f"genome_seed{o.seed_index:03d}.txt").write_text(
                format_genome(o.result.best_genome), encoding="utf-8"
            )

    summary_rows = []
    for label in sorted({o.seed.class_label for o in outcomes}):
        group = [o for o in outcomes if o.seed.class_label == label]
        summary_rows.append(
            [
                label,
                len(group),
                _fmt(_mean([float(o.seed.edge_count) for o in group])),
                _fmt(_mean([float(o.result.best_graph.edge_count) for o in group])),
                _fmt(_mean([o.seed_fitness.mmd_d for o in group])),
                _fmt(_mean([o.result.best_fitness.mmd_d for o in group])),
                _fmt(_mean([o.seed_fitness.mmd_c for o in group])),
                _fmt(_mean([o.result.best_fitness.mmd_c for o in group])),
                _fmt(_mean([o.seed_fitness.mmd_s for o in group])),
                _fmt(_mean([o.result.best_fitness.mmd_s for o in group])),
                _fmt(_mean([o.seed_fitness.total for o in group])),
                _fmt(_mean([o.result.best_fitness.total for o in group])),
            ]
        )
    _write_rows(
        out / "summary.csv",
        [
            "class",
            "n_seeds",
            "avg_edges_seed",
            "avg_edges_refined",
            "mmd_degree_seed",
            "mmd_degree_refined",
            "mmd_clustering_seed",
            "mmd_clustering_refined",
            "mmd_spectral_seed",
            "mmd_spectral_refined",
            "avg_fitness_seed",
            "avg_fitness_refined",
        ],
        summary_rows,
    )
    return 0


def _cmd_evaluate(cfg: RunConfig) -> int:
    if cfg.graphs is None:
        raise ValueError("evaluate requires --graphs")
    if cfg.out is None:
        raise ValueError("evaluate requires --out")
    dataset = _load_corpus(cfg)
    graphs = _filter_class(load_graphs_json(cfg.graphs), cfg.class_filter)
    if not graphs:
        raise ValueError("no graphs remain after class filtering")
    classes = []
    for i, g in enumerate(graphs):
        if g.class_label is None:
            raise ValueError(f"graph #{i} carries no class label")
        if g.class_label not in dataset.class_index:
            raise ValueError(
                f"graph #{i} has class {g.class_label}, absent from the corpus"
            )
        classes.append(g.class_label)
    stats_by_class = build_class_stats(dataset.graphs, classes)
    scores = evaluate_graphs(graphs, stats_by_class, cfg.weights)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_rows(
        out / "per_graph.csv",
        ["index", "class", "edges", "mmd_degree", "mmd_clustering", "mmd_spectral", "edge_penalty", "total"],
        [
            [
                s.index,
                s.class_label,
                s.edge_count,
                _fmt(s.fitness.mmd_d),
                _fmt(s.fitness.mmd_c),
                _fmt(s.fitness.mmd_s),
                _fmt(s.fitness.edge_penalty),
                _fmt(s.fitness.total),
            ]
            for s in scores
        ],
    )

    eval_header = [
        "class",
        "n_graphs",
        "avg_edges",
        "mmd_degree",
        "mmd_clustering",
        "mmd_spectral",
        "avg_fitness",
    ]
    eval_rows = []
    for label in sorted({s.class_label for s in scores}):
        group = [s for s in scores if s.class_label == label]
        eval_rows.append(
            [
                label,
                len(group),
                _fmt(_mean([float(s.edge_count) for s in group])),
                _fmt(_mean([s.fitness.mmd_d for s in group])),
                _fmt(_mean([s.fitness.mmd_c for s in group])),
                _fmt(_mean([s.fitness.mmd_s for s in group])),
                _fmt(_mean([s.fitness.total for s in group])),
            ]
        )
        members = [g for g in graphs if g.class_label == label]
        _dump_class_histograms(out, label, members, stats_by_class[label])
    _write_rows(out / "evaluation.csv", eval_header, eval_rows)
    sys.stdout.write((out / "evaluation.csv").read_text(encoding="utf-8"))
    return 0


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML config file; flags override its values")
    p.add_argument("--dataset", help="corpus location (directory for tud, file for json)")
    p.add_argument("--format", choices=("tud", "json"), help="corpus format")


def _add_weight_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--wd", type=float, help="degree-MMD weight")
    p.add_argument("--wc", type=float, help="clustering-MMD weight")
    p.add_argument("--ws", type=float, help="spectral-MMD weight")
    p.add_argument("--we", type=float, help="edge-penalty weight")
    p.add_argument("--sigma", type=float, help="MMD kernel bandwidth")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grefine",
        description="Evolutionary edge-edit refinement of graphs against a reference corpus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_refine = sub.add_parser("refine", help="refine seed graphs against the corpus")
    _add_common_flags(p_refine)
    p_refine.add_argument("--seeds", help="JSON file of seed graphs")
    p_refine.add_argument("--class", dest="class_filter", type=int, help="only this class")
    p_refine.add_argument("--out", help="output directory")
    p_refine.add_argument("--seed", dest="seed", type=int, help="master RNG seed")
    p_refine.add_argument("--pop", type=int, help="population size")
    p_refine.add_argument("--gens", type=int, help="generations")
    p_refine.add_argument("--crossover", type=float, help="crossover probability")
    p_refine.add_argument("--mutation", type=float, help="mutation probability")
    p_refine.add_argument("--tournament", type=int, help="tournament size")
    p_refine.add_argument("--elitism", type=int, help="elite count")
    _add_weight_flags(p_refine)
    p_refine.add_argument(
        "--dump-genomes",
        dest="dump_genomes",
        action="store_true",
        default=None,
        help="write the best genome per seed in debug form",
    )
    p_refine.add_argument(
        "--threads", type=int, help=f"worker count (fallback: ${_THREADS_ENV})"
    )
    p_refine.set_defaults(func=_cmd_refine)

    p_eval = sub.add_parser("evaluate", help="score a graph set against the corpus")
    _add_common_flags(p_eval)
    p_eval.add_argument("--graphs", help="JSON file of graphs to score")
    p_eval.add_argument("--class", dest="class_filter", type=int, help="only this class")
    p_eval.add_argument("--out", help="output directory")
    _add_weight_flags(p_eval)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_stats = sub.add_parser("stats", help="print dataset summary statistics")
    _add_common_flags(p_stats)
    p_stats.set_defaults(func=_cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_run_config(args.config, args)
        return args.func(cfg)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
