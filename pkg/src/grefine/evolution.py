"""Generational GA over edge-edit genomes.

The population starts from the identity genome (all Null, expressing to
the untouched seed graph) plus random genomes, so the search begins no
worse than the seed. Each generation copies the top elites verbatim and
fills the remainder with tournament-selected parents recombined by
two-point crossover and perturbed by small multi-gene mutation.

Randomness discipline: every random draw comes from a generator derived
from (master_seed, generation, slot index) via numpy seed sequences, one
stream per offspring pair (keyed by the pair's first slot) and one for
initialization. Fitness evaluation consumes no randomness, so results
are reproducible bit for bit regardless of how evaluations are scheduled.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence, TextIO

import numpy as np

from .fitness import CorpusStats, FitnessValue, FitnessWeights, evaluate_edges
from .genome import (
    DEFAULT_OP_PROBS,
    Genome,
    Opcode,
    _express_edges,
    genome_length,
    identity_genome,
    random_gene,
    validate_op_probs,
)
from .graph import Graph

__all__ = [
    "EvolutionConfig",
    "Provenance",
    "Individual",
    "GenerationRecord",
    "RunResult",
    "derive_seed",
    "initialize_population",
    "tournament_select",
    "two_point_crossover",
    "mutate",
    "run",
]

_MAX_SEED = 2**64


@dataclass(frozen=True)
class EvolutionConfig:
    population_size: int = 500
    generations: int = 300
    crossover_rate: float = 0.5
    mutation_rate: float = 0.8
    tournament_size: int = 5
    elitism: int = 2
    op_probs: Mapping[Opcode, float] = field(
        default_factory=lambda: dict(DEFAULT_OP_PROBS)
    )
    master_seed: int = 0
    swap_strict: bool = False

    def __post_init__(self) -> None:
        if self.elitism < 0 or self.population_size <= self.elitism:
            raise ValueError(
                f"need population_size > elitism >= 0, got "
                f"{self.population_size} / {self.elitism}"
            )
        if self.tournament_size < 1:
            raise ValueError(f"tournament_size must be >= 1, got {self.tournament_size}")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {rate}")
        if self.generations < 0:
            raise ValueError(f"generations must be non-negative, got {self.generations}")
        if not 0 <= self.master_seed < _MAX_SEED:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        validate_op_probs(self.op_probs)


class Provenance(enum.Enum):
    IDENTITY = "identity"
    RANDOM = "random"
    OFFSPRING = "offspring"


@dataclass(frozen=True)
class Individual:
    genome: Genome
    fitness: FitnessValue | None
    provenance: Provenance


@dataclass(frozen=True)
class GenerationRecord:
    """Best/mean fitness of one generation plus the best's breakdown."""

    generation: int
    best_total: float
    mean_total: float
    mmd_d: float
    mmd_c: float
    mmd_s: float
    edge_penalty: float


@dataclass(frozen=True)
class RunResult:
    best_genome: Genome
    best_graph: Graph
    best_fitness: FitnessValue
    history: tuple[GenerationRecord, ...]
    wall_time: float
    master_seed: int


def derive_seed(master_seed: int, index: int) -> int:
    """Stable per-run seed for the index-th member of a batch of runs."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _stream(master_seed: int, generation: int, slot: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(generation, slot))
    )


def initialize_population(
    base: Graph, cfg: EvolutionConfig, rng: np.random.Generator
) -> list[Individual]:
    """Identity genome in slot 0, random genomes elsewhere; fitness unset."""
    if base.node_count < 2:
        raise ValueError(
            f"refinement needs at least 2 nodes, got {base.node_count}"
        )
    length = genome_length(base.node_count)
    population = [Individual(identity_genome(base.node_count), None, Provenance.IDENTITY)]
    for _ in range(cfg.population_size - 1):
        genome = tuple(
            random_gene(base.node_count, cfg.op_probs, rng) for _ in range(length)
        )
        population.append(Individual(genome, None, Provenance.RANDOM))
    return population


def tournament_select(
    population: Sequence[Individual], k: int, rng: np.random.Generator
) -> Individual:
    """Lowest-fitness member of k uniform draws with replacement.

    Ties break toward the lowest population index.
    """
    if k > len(population):
        raise ValueError(f"tournament size {k} exceeds population {len(population)}")
    draws = rng.integers(0, len(population), size=k)
    best = int(draws[0])
    for raw in draws[1:]:
        i = int(raw)
        if (population[i].fitness.total, i) < (population[best].fitness.total, best):
            best = i
    return population[best]


def _splice(a: Genome, b: Genome, i: int, j: int) -> Genome:
    return a[:i] + b[i:j] + a[j:]


def two_point_crossover(
    a: Genome, b: Genome, rng: np.random.Generator
) -> tuple[Genome, Genome]:
    """Swap the segment [i, j) between parents; cut points drawn uniformly."""
    if len(a) != len(b):
        raise ValueError(f"parent genome lengths differ: {len(a)} vs {len(b)}")
    cuts = rng.integers(0, len(a) + 1, size=2)
    i, j = sorted((int(cuts[0]), int(cuts[1])))
    return _splice(a, b, i, j), _splice(b, a, i, j)


def _mutation_positions(length: int, rng: np.random.Generator) -> list[int]:
    """1-4 distinct positions, count uniform, positions uniform."""
    m = int(rng.integers(1, 5))
    return [int(p) for p in rng.choice(length, size=min(m, length), replace=False)]


def mutate(
    genome: Genome,
    node_count: int,
    op_probs: Mapping[Opcode, float],
    rng: np.random.Generator,
) -> Genome:
    """Replace 1-4 randomly chosen genes with fresh random genes."""
    if not genome:
        raise ValueError("cannot mutate an empty genome")
    genes = list(genome)
    for pos in _mutation_positions(len(genes), rng):
        genes[pos] = random_gene(node_count, op_probs, rng)
    return tuple(genes)


def _best_index(population: Sequence[Individual]) -> int:
    return min(range(len(population)), key=lambda i: (population[i].fitness.total, i))


def _record(generation: int, population: Sequence[Individual]) -> GenerationRecord:
    best = population[_best_index(population)]
    mean = sum(ind.fitness.total for ind in population) / len(population)
    fv = best.fitness
    return GenerationRecord(
        generation=generation,
        best_total=fv.total,
        mean_total=mean,
        mmd_d=fv.mmd_d,
        mmd_c=fv.mmd_c,
        mmd_s=fv.mmd_s,
        edge_penalty=fv.edge_penalty,
    )


def _emit_progress(out: TextIO | None, rec: GenerationRecord) -> None:
    if out is None:
        return
    out.write(
        f"gen={rec.generation} best={rec.best_total:.6g} mean={rec.mean_total:.6g} "
        f"mmd_d={rec.mmd_d:.6g} mmd_c={rec.mmd_c:.6g} mmd_s={rec.mmd_s:.6g} "
        f"pedge={rec.edge_penalty:.6g}\n"
    )


def run(
    base: Graph,
    stats: CorpusStats,
    weights: FitnessWeights,
    cfg: EvolutionConfig,
    progress: TextIO | None = None,
) -> RunResult:
    """Refine one seed graph; deterministic given the config's master seed."""
    started = time.perf_counter()
    if (
        base.class_label is not None
        and stats.class_label is not None
        and base.class_label != stats.class_label
    ):
        raise ValueError(
            f"seed class {base.class_label} does not match corpus class "
            f"{stats.class_label}"
        )
    n = base.node_count
    base_edges = set(base.edges)

    def scored(ind: Individual) -> Individual:
        edges = _express_edges(base_edges, ind.genome, cfg.swap_strict)
        return replace(ind, fitness=evaluate_edges(n, edges, stats, weights))

    population = [
        scored(ind)
        for ind in initialize_population(base, cfg, _stream(cfg.master_seed, 0, 0))
    ]

    history = [_record(0, population)]
    _emit_progress(progress, history[0])
    best_ever = population[_best_index(population)]

    for gen in range(1, cfg.generations + 1):
        elite_order = sorted(
            range(len(population)), key=lambda i: (population[i].fitness.total, i)
        )
        next_population = [population[i] for i in elite_order[: cfg.elitism]]

        while len(next_population) < cfg.population_size:
            slot = len(next_population)
            rng = _stream(cfg.master_seed, gen, slot)
            parent_a = tournament_select(population, cfg.tournament_size, rng)
            parent_b = tournament_select(population, cfg.tournament_size, rng)
            if rng.random() < cfg.crossover_rate:
                genomes = two_point_crossover(parent_a.genome, parent_b.genome, rng)
                crossed = True
            else:
                genomes = (parent_a.genome, parent_b.genome)
                crossed = False
            room = cfg.population_size - len(next_population)
            for child_idx, (genome, parent) in enumerate(
                zip(genomes[:room], (parent_a, parent_b))
            ):
                mutated = rng.random() < cfg.mutation_rate
                if mutated:
                    genome = mutate(genome, n, cfg.op_probs, rng)
                if crossed or mutated:
                    child = scored(Individual(genome, None, Provenance.OFFSPRING))
                else:
                    child = parent  # unmodified clone keeps its memoized fitness
                next_population.append(child)

        population = next_population
        rec = _record(gen, population)
        history.append(rec)
        _emit_progress(progress, rec)
        gen_best = population[_best_index(population)]
        if gen_best.fitness.total < best_ever.fitness.total:
            best_ever = gen_best

    best_edges = _express_edges(base_edges, best_ever.genome, cfg.swap_strict)
    best_graph = Graph(n, frozenset(best_edges), base.class_label)
    return RunResult(
        best_genome=best_ever.genome,
        best_graph=best_graph,
        best_fitness=best_ever.fitness,
        history=tuple(history),
        wall_time=time.perf_counter() - started,
        master_seed=cfg.master_seed,
    )
