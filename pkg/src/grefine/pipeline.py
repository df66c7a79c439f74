"""Batch refinement/evaluation entry points shared by the CLI and embedders.

One GA run refines one seed graph; a batch is a sequence of independent
runs, each seeded by a stable value derived from the master seed and the
seed's position. Batches therefore parallelize at the run level across a
process pool, and results are identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence, TextIO

from .evolution import EvolutionConfig, RunResult, derive_seed, run
from .fitness import (
    CorpusStats,
    FitnessValue,
    FitnessWeights,
    build_corpus_stats,
    evaluate,
)
from .graph import Graph
from .metrics import DEFAULT_BINS

__all__ = [
    "SeedOutcome",
    "GraphScore",
    "build_class_stats",
    "refine_graphs",
    "evaluate_graphs",
]


@dataclass(frozen=True)
class SeedOutcome:
    """Refinement of one seed: its pre-refinement score and the run result."""

    seed_index: int
    seed: Graph
    seed_fitness: FitnessValue
    result: RunResult


@dataclass(frozen=True)
class GraphScore:
    index: int
    class_label: int
    edge_count: int
    fitness: FitnessValue


def build_class_stats(
    corpus: Iterable[Graph],
    classes: Iterable[int],
    bins: int = DEFAULT_BINS,
) -> dict[int, CorpusStats]:
    corpus = list(corpus)
    return {c: build_corpus_stats(corpus, c, bins) for c in sorted(set(classes))}


def _require_class(g: Graph, index: int, stats_by_class: Mapping[int, CorpusStats]):
    if g.class_label is None:
        raise ValueError(f"graph #{index} carries no class label")
    if g.class_label not in stats_by_class:
        raise ValueError(
            f"graph #{index} has class {g.class_label}, which is absent "
            f"from the corpus"
        )
    return stats_by_class[g.class_label]


def _refine_task(
    task: tuple[int, Graph, CorpusStats, FitnessWeights, EvolutionConfig]
) -> SeedOutcome:
    index, seed, stats, weights, cfg = task
    seed_fitness = evaluate(seed, stats, weights)
    result = run(seed, stats, weights, cfg)
    return SeedOutcome(index, seed, seed_fitness, result)


def refine_graphs(
    seeds: Sequence[Graph],
    stats_by_class: Mapping[int, CorpusStats],
    weights: FitnessWeights,
    cfg: EvolutionConfig,
    threads: int = 1,
    progress: TextIO | None = None,
) -> list[SeedOutcome]:
    """Refine a batch of seed graphs, one independent GA run per seed.

    Seed i runs with master seed ``derive_seed(cfg.master_seed, i)``, so
    outcomes do not depend on batch composition order beyond position,
    nor on ``threads``. Progress streaming is only available serially.
    """
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    tasks = []
    for i, seed in enumerate(seeds):
        if seed.node_count < 2:
            raise ValueError(
                f"seed graph #{i} has {seed.node_count} node(s) and cannot be refined"
            )
        stats = _require_class(seed, i, stats_by_class)
        tasks.append(
            (i, seed, stats, weights, replace(cfg, master_seed=derive_seed(cfg.master_seed, i)))
        )

    if threads == 1 or len(tasks) <= 1:
        outcomes = []
        for index, seed, stats, w, seed_cfg in tasks:
            seed_fitness = evaluate(seed, stats, w)
            result = run(seed, stats, w, seed_cfg, progress=progress)
            outcomes.append(SeedOutcome(index, seed, seed_fitness, result))
        return outcomes

    with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
        return list(pool.map(_refine_task, tasks))


def evaluate_graphs(
    graphs: Sequence[Graph],
    stats_by_class: Mapping[int, CorpusStats],
    weights: FitnessWeights,
) -> list[GraphScore]:
    """Score each graph against its class's corpus statistics."""
    scores = []
    for i, g in enumerate(graphs):
        stats = _require_class(g, i, stats_by_class)
        scores.append(GraphScore(i, g.class_label, g.edge_count, evaluate(g, stats, weights)))
    return scores
