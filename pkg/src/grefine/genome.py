"""Command-string genotype: genes, edit operations, and expression.

A genome is a fixed-length sequence of edge-edit commands, twice as long
as the base graph's node count. Expressing a genome applies its genes
left to right to a copy of the base graph. Unsatisfied preconditions are
silent no-ops, never errors: evolved genomes routinely carry neutral
genes and that is legitimate material for the search.

Local operations take their arguments as (u, w, v) with w the witness
node: they require edges {u, w} and {w, v} and then act on {u, v}.
Hop takes (u, v, w): it requires {u, v} and {v, w}, forbids {u, w},
then moves the u-endpoint, removing {u, v} and adding {u, w}.
Swap takes (u, v, w, x): it requires {u, v} and {w, x}, forbids the
replacements {u, x} and {v, w}, then rewires to those replacements,
preserving all four degrees. A strict variant additionally forbids any
other edge among the four nodes (``swap_strict``); the default is the
permissive reading, which only constrains the four edge slots involved
in the rewiring.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .graph import Graph

__all__ = [
    "Opcode",
    "Gene",
    "Genome",
    "OP_ARITY",
    "DEFAULT_OP_PROBS",
    "identity_genome",
    "random_gene",
    "random_genome",
    "apply_gene",
    "express",
    "format_gene",
    "format_genome",
]


class Opcode(enum.Enum):
    TOGGLE = "toggle"
    LOCAL_TOGGLE = "local_toggle"
    HOP = "hop"
    ADD = "add"
    LOCAL_ADD = "local_add"
    DELETE = "delete"
    LOCAL_DELETE = "local_delete"
    SWAP = "swap"
    NULL = "null"


OP_ARITY: dict[Opcode, int] = {
    Opcode.TOGGLE: 2,
    Opcode.LOCAL_TOGGLE: 3,
    Opcode.HOP: 3,
    Opcode.ADD: 2,
    Opcode.LOCAL_ADD: 3,
    Opcode.DELETE: 2,
    Opcode.LOCAL_DELETE: 3,
    Opcode.SWAP: 4,
    Opcode.NULL: 0,
}

# Degree-affecting ops are sampled at half the rate of the shape-preserving
# ones; this keeps the degree distribution from degrading during search.
DEFAULT_OP_PROBS: dict[Opcode, float] = {
    Opcode.TOGGLE: 1 / 14,
    Opcode.ADD: 1 / 14,
    Opcode.DELETE: 1 / 14,
    Opcode.LOCAL_TOGGLE: 1 / 14,
    Opcode.HOP: 1 / 7,
    Opcode.SWAP: 1 / 7,
    Opcode.LOCAL_ADD: 1 / 7,
    Opcode.LOCAL_DELETE: 1 / 7,
    Opcode.NULL: 1 / 7,
}

_OPCODE_ORDER: tuple[Opcode, ...] = tuple(Opcode)


@dataclass(frozen=True)
class Gene:
    """One edit command: an opcode plus four node arguments.

    Only the first ``OP_ARITY[opcode]`` arguments are meaningful; the
    rest are carried but ignored.
    """

    opcode: Opcode
    args: tuple[int, int, int, int] = (0, 0, 0, 0)

    def used_args(self) -> tuple[int, ...]:
        return self.args[: OP_ARITY[self.opcode]]


Genome = tuple[Gene, ...]


def identity_genome(node_count: int) -> Genome:
    """All-Null genome of the canonical length: expresses to the base graph."""
    return (Gene(Opcode.NULL),) * (2 * node_count)


def genome_length(node_count: int) -> int:
    return 2 * node_count


def validate_op_probs(op_probs: Mapping[Opcode, float]) -> None:
    unknown = set(op_probs) - set(Opcode)
    if unknown:
        raise ValueError(f"unknown opcodes in probability table: {unknown}")
    probs = [op_probs.get(op, 0.0) for op in _OPCODE_ORDER]
    if any(p < 0 for p in probs):
        raise ValueError("operation probabilities must be non-negative")
    total = sum(probs)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"operation probabilities must sum to 1, got {total!r}")


def _effective_cumprobs(
    op_probs: Mapping[Opcode, float], node_count: int
) -> tuple[np.ndarray, tuple[Opcode, ...]]:
    """Cumulative probabilities after dropping ops whose arity exceeds node_count.

    Removed mass is redistributed proportionally over the remaining ops, so
    tiny graphs (where e.g. Swap cannot draw four distinct nodes) still
    sample from a proper distribution.
    """
    ops = [op for op in _OPCODE_ORDER if OP_ARITY[op] <= node_count]
    weights = np.array([op_probs.get(op, 0.0) for op in ops], dtype=np.float64)
    total = weights.sum()
    if total <= 0:
        raise ValueError("no sampleable operation has positive probability")
    return np.cumsum(weights / total), tuple(ops)


def _distinct_args(node_count: int, arity: int, rng: np.random.Generator) -> tuple:
    if arity == 0:
        return (0, 0, 0, 0)
    picked: list[int] = []
    while len(picked) < arity:
        x = int(rng.integers(0, node_count))
        if x not in picked:
            picked.append(x)
    picked.extend([0] * (4 - arity))
    return tuple(picked)


def random_gene(
    node_count: int,
    op_probs: Mapping[Opcode, float] | None = None,
    rng: np.random.Generator | None = None,
) -> Gene:
    """Sample a gene: opcode per the probability table, distinct args uniform."""
    if rng is None:
        rng = np.random.default_rng()
    if node_count < 2:
        raise ValueError(f"need at least 2 nodes to sample genes, got {node_count}")
    cum, ops = _effective_cumprobs(
        DEFAULT_OP_PROBS if op_probs is None else op_probs, node_count
    )
    idx = int(np.searchsorted(cum, rng.random(), side="right"))
    idx = min(idx, len(ops) - 1)
    op = ops[idx]
    return Gene(op, _distinct_args(node_count, OP_ARITY[op], rng))


def random_genome(
    node_count: int,
    op_probs: Mapping[Opcode, float] | None = None,
    rng: np.random.Generator | None = None,
) -> Genome:
    if rng is None:
        rng = np.random.default_rng()
    return tuple(
        random_gene(node_count, op_probs, rng) for _ in range(genome_length(node_count))
    )


def _apply_gene_to_set(
    edges: set[tuple[int, int]], gene: Gene, swap_strict: bool
) -> None:
    """Apply one gene in place on a normalized edge set.

    Every unsatisfied precondition (including degenerate repeated
    arguments) is a silent no-op.
    """
    op = gene.opcode
    a = gene.args
    if op is Opcode.NULL:
        return

    if op in (Opcode.TOGGLE, Opcode.ADD, Opcode.DELETE):
        u, v = a[0], a[1]
        if u == v:
            return
        e = (u, v) if u < v else (v, u)
        if op is Opcode.TOGGLE:
            if e in edges:
                edges.discard(e)
            else:
                edges.add(e)
        elif op is Opcode.ADD:
            edges.add(e)
        else:
            edges.discard(e)
        return

    if op in (Opcode.LOCAL_TOGGLE, Opcode.LOCAL_ADD, Opcode.LOCAL_DELETE):
        u, w, v = a[0], a[1], a[2]
        if u == v or u == w or v == w:
            return
        e_uw = (u, w) if u < w else (w, u)
        e_wv = (w, v) if w < v else (v, w)
        if e_uw not in edges or e_wv not in edges:
            return
        e = (u, v) if u < v else (v, u)
        if op is Opcode.LOCAL_ADD:
            edges.add(e)
        elif op is Opcode.LOCAL_DELETE:
            edges.discard(e)
        else:
            if e in edges:
                edges.discard(e)
            else:
                edges.add(e)
        return

    if op is Opcode.HOP:
        u, v, w = a[0], a[1], a[2]
        if u == v or u == w or v == w:
            return
        e_uv = (u, v) if u < v else (v, u)
        e_vw = (v, w) if v < w else (w, v)
        e_uw = (u, w) if u < w else (w, u)
        if e_uv in edges and e_vw in edges and e_uw not in edges:
            edges.discard(e_uv)
            edges.add(e_uw)
        return

    if op is Opcode.SWAP:
        u, v, w, x = a
        if len({u, v, w, x}) != 4:
            return
        e_uv = (u, v) if u < v else (v, u)
        e_wx = (w, x) if w < x else (x, w)
        e_ux = (u, x) if u < x else (x, u)
        e_vw = (v, w) if v < w else (w, v)
        if e_uv not in edges or e_wx not in edges:
            return
        if e_ux in edges or e_vw in edges:
            return
        if swap_strict:
            e_uw = (u, w) if u < w else (w, u)
            e_vx = (v, x) if v < x else (x, v)
            if e_uw in edges or e_vx in edges:
                return
        edges.discard(e_uv)
        edges.discard(e_wx)
        edges.add(e_ux)
        edges.add(e_vw)
        return

    raise AssertionError(f"unhandled opcode {op}")


def apply_gene(g: Graph, gene: Gene, swap_strict: bool = False) -> Graph:
    """Apply a single gene to a graph, returning the (possibly unchanged) result."""
    _check_gene_args(gene, g.node_count)
    edges = set(g.edges)
    _apply_gene_to_set(edges, gene, swap_strict)
    return Graph(g.node_count, frozenset(edges), g.class_label)


def _check_gene_args(gene: Gene, node_count: int) -> None:
    for x in gene.used_args():
        if not (0 <= x < node_count):
            raise ValueError(
                f"gene {format_gene(gene)} argument {x} out of range "
                f"[0, {node_count})"
            )


def express(base: Graph, genome: Genome, swap_strict: bool = False) -> Graph:
    """Apply a genome's genes left to right to the base graph.

    Deterministic: the same (base, genome) pair always yields the same
    phenotype. The base graph is not modified.
    """
    expected = genome_length(base.node_count)
    if len(genome) != expected:
        raise ValueError(
            f"genome length {len(genome)} does not match 2 x node_count = {expected}"
        )
    for gene in genome:
        _check_gene_args(gene, base.node_count)
    edges = set(base.edges)
    for gene in genome:
        _apply_gene_to_set(edges, gene, swap_strict)
    return Graph(base.node_count, frozenset(edges), base.class_label)


def _express_edges(
    base_edges: set[tuple[int, int]], genome: Genome, swap_strict: bool
) -> set[tuple[int, int]]:
    """Unchecked expression on a raw edge set; genes must be pre-validated."""
    edges = set(base_edges)
    for gene in genome:
        _apply_gene_to_set(edges, gene, swap_strict)
    return edges


def format_gene(gene: Gene) -> str:
    """Debug dump form: ``OPCODE u v [w [x]]``, e.g. ``HOP 5 4 3``."""
    parts = [gene.opcode.name]
    parts.extend(str(x) for x in gene.used_args())
    return " ".join(parts)


def format_genome(genome: Genome) -> str:
    """One gene per line in the debug dump form."""
    return "\n".join(format_gene(g) for g in genome) + "\n"
