"""In-process bridge for handing generated graphs to the refiner.

Generator pipelines call ``refine_batch``/``evaluate_batch`` with plain
dict graphs matching the JSON interchange schema
(``{"n": int, "edges": [[u, v], ...], "class": int}``) and get plain
dicts back. Everything is validated at the boundary and delegated to the
same batch entry points the ``grefine`` CLI uses; no refinement logic
lives here, so results are bit-identical to CLI outputs for the same
inputs and master seed.

With ``threads >= 2`` in the config, refinement runs in worker
processes, so a long batch leaves the calling interpreter responsive.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

from grefine.corpus import load_dataset_json, load_tudataset
from grefine.evolution import EvolutionConfig
from grefine.fitness import FitnessValue, FitnessWeights
from grefine.graph import Graph, graph_from_dict, graph_to_dict
from grefine.pipeline import build_class_stats, evaluate_graphs, refine_graphs

__all__ = ["refine_batch", "evaluate_batch"]

_WEIGHT_KEYS = {"wd", "wc", "ws", "we", "sigma"}
_CONFIG_KEYS = _WEIGHT_KEYS | {
    "seed",
    "pop",
    "gens",
    "crossover",
    "mutation",
    "tournament",
    "elitism",
    "swap_strict",
    "threads",
}


def _parse_graphs(objs: Sequence[Mapping], what: str) -> list[Graph]:
    graphs = []
    for i, obj in enumerate(objs):
        try:
            graphs.append(graph_from_dict(dict(obj)))
        except ValueError as exc:
            raise ValueError(f"{what} #{i}: {exc}") from None
    return graphs


def _load_corpus(corpus_dir: str | Path) -> list[Graph]:
    path = Path(corpus_dir)
    if path.is_dir():
        return list(load_tudataset(path).graphs)
    return list(load_dataset_json(path).graphs)


def _parse_config(config: Mapping) -> tuple[FitnessWeights, EvolutionConfig, int]:
    unknown = set(config) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config key(s): {sorted(unknown)}")
    weights = _parse_weights({k: v for k, v in config.items() if k in _WEIGHT_KEYS})
    evolution = EvolutionConfig(
        population_size=int(config.get("pop", 500)),
        generations=int(config.get("gens", 300)),
        crossover_rate=float(config.get("crossover", 0.5)),
        mutation_rate=float(config.get("mutation", 0.8)),
        tournament_size=int(config.get("tournament", 5)),
        elitism=int(config.get("elitism", 2)),
        master_seed=int(config.get("seed", 0)),
        swap_strict=bool(config.get("swap_strict", False)),
    )
    threads = int(config.get("threads", 1))
    return weights, evolution, threads


def _parse_weights(weights: Mapping) -> FitnessWeights:
    unknown = set(weights) - _WEIGHT_KEYS
    if unknown:
        raise ValueError(f"unknown weight key(s): {sorted(unknown)}")
    return FitnessWeights(
        w_d=float(weights.get("wd", 1.0)),
        w_c=float(weights.get("wc", 1.0)),
        w_s=float(weights.get("ws", 1.0)),
        w_e=float(weights.get("we", 0.05)),
        sigma=float(weights.get("sigma", 1.0)),
    )


def _fitness_dict(fv: FitnessValue) -> dict:
    return {
        "total": fv.total,
        "mmd_d": fv.mmd_d,
        "mmd_c": fv.mmd_c,
        "mmd_s": fv.mmd_s,
        "edge_penalty": fv.edge_penalty,
    }


def refine_batch(
    seeds: Sequence[Mapping],
    corpus_dir: str | Path,
    config: Mapping | None = None,
) -> list[tuple[dict, dict]]:
    """Refine seed graphs against the corpus; one (graph, fitness) per seed.

    ``corpus_dir`` is either a TUDataset directory or a JSON graph file.
    ``config`` keys mirror the CLI flags (``seed``, ``pop``, ``gens``,
    ``wd``/``wc``/``ws``/``we``, ``sigma``, ``threads``, ...).
    """
    weights, evolution, threads = _parse_config(config or {})
    parsed = _parse_graphs(seeds, "seed graph")
    if not parsed:
        return []
    corpus = _load_corpus(corpus_dir)
    classes = {g.class_label for g in parsed if g.class_label is not None}
    known = {g.class_label for g in corpus}
    stats = build_class_stats(corpus, classes & known)
    outcomes = refine_graphs(parsed, stats, weights, evolution, threads=threads)
    return [
        (graph_to_dict(o.result.best_graph), _fitness_dict(o.result.best_fitness))
        for o in outcomes
    ]


def evaluate_batch(
    graphs: Sequence[Mapping],
    corpus_dir: str | Path,
    weights: Mapping | None = None,
) -> list[dict]:
    """Score graphs against their class's corpus statistics, one dict each."""
    parsed = _parse_graphs(graphs, "graph")
    if not parsed:
        return []
    w = _parse_weights(weights or {})
    corpus = _load_corpus(corpus_dir)
    classes = {g.class_label for g in parsed if g.class_label is not None}
    known = {g.class_label for g in corpus}
    stats = build_class_stats(corpus, classes & known)
    return [_fitness_dict(s.fitness) for s in evaluate_graphs(parsed, stats, w)]
