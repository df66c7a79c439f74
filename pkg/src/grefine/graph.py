"""Undirected simple graph value type and JSON interchange.

Graphs are the phenotype of the refinement engine: a dense 0-based node
index set, an edge set with no self-loops and no duplicates, and an
optional class label used only for corpus selection. Edit primitives are
pure; they return a new Graph and never mutate their input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

__all__ = [
    "Graph",
    "graph_from_dict",
    "graph_to_dict",
    "load_graph_json",
    "dump_graph_json",
]


def _normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with an optional class label.

    ``edges`` holds normalized ``(u, v)`` pairs with ``u < v``. Instances
    are immutable; edit helpers return new graphs.
    """

    node_count: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    class_label: int | None = None

    def __post_init__(self) -> None:
        if self.node_count < 0:
            raise ValueError(f"node_count must be non-negative, got {self.node_count}")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop ({u}, {v}) is not allowed")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(
                    f"edge ({u}, {v}) out of range for {self.node_count} nodes"
                )
            if v < u:
                raise ValueError(f"edge ({u}, {v}) is not normalized (u < v)")

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        class_label: int | None = None,
    ) -> "Graph":
        """Build a graph, normalizing endpoint order and deduplicating."""
        normalized = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop ({u}, {v}) is not allowed")
            normalized.add(_normalize_edge(int(u), int(v)))
        return cls(node_count, frozenset(normalized), class_label)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def _check_index(self, *nodes: int) -> None:
        for x in nodes:
            if not (0 <= x < self.node_count):
                raise ValueError(f"node index {x} out of range [0, {self.node_count})")

    def has_edge(self, u: int, v: int) -> bool:
        """True iff the undirected edge {u, v} exists. Self-queries are False."""
        self._check_index(u, v)
        if u == v:
            return False
        return _normalize_edge(u, v) in self.edges

    def add_edge(self, u: int, v: int) -> "Graph":
        """Return a graph with {u, v} present. Adding an existing edge is a no-op."""
        self._check_index(u, v)
        if u == v:
            raise ValueError(f"cannot add self-loop ({u}, {v})")
        e = _normalize_edge(u, v)
        if e in self.edges:
            return self
        return Graph(self.node_count, self.edges | {e}, self.class_label)

    def remove_edge(self, u: int, v: int) -> "Graph":
        """Return a graph with {u, v} absent. Removing a missing edge is a no-op."""
        self._check_index(u, v)
        e = _normalize_edge(u, v)
        if e not in self.edges:
            return self
        return Graph(self.node_count, self.edges - {e}, self.class_label)

    def degrees(self) -> list[int]:
        """Per-node degree sequence; sums to twice the edge count."""
        degs = [0] * self.node_count
        for u, v in self.edges:
            degs[u] += 1
            degs[v] += 1
        return degs

    def adjacency_matrix(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency matrix as float64."""
        a = np.zeros((self.node_count, self.node_count), dtype=np.float64)
        for u, v in self.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def sorted_edges(self) -> list[tuple[int, int]]:
        """Edges as (u, v) with u < v, lexicographically sorted."""
        return sorted(self.edges)


def graph_to_dict(g: Graph) -> dict:
    """JSON-interchange form: {"n": int, "edges": [[u, v], ...], "class": int|null}."""
    return {
        "n": g.node_count,
        "edges": [[u, v] for u, v in g.sorted_edges()],
        "class": g.class_label,
    }


def graph_from_dict(obj: dict) -> Graph:
    """Parse the JSON-interchange form, validating all graph invariants."""
    if not isinstance(obj, dict):
        raise ValueError(f"expected an object, got {type(obj).__name__}")
    unknown = set(obj) - {"n", "edges", "class"}
    if unknown:
        raise ValueError(f"unknown keys {sorted(unknown)}")
    if "n" not in obj or "edges" not in obj:
        raise ValueError('required keys "n" and "edges" missing')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f'"n" must be an integer, got {n!r}')
    edges = obj["edges"]
    if not isinstance(edges, list):
        raise ValueError('"edges" must be a list of [u, v] pairs')
    pairs = []
    for k, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in e
        ):
            raise ValueError(f"edge #{k} must be a pair of integers, got {e!r}")
        pairs.append((e[0], e[1]))
    label = obj.get("class")
    if label is not None and (not isinstance(label, int) or isinstance(label, bool)):
        raise ValueError(f'"class" must be an integer or null, got {label!r}')
    return Graph.from_edges(n, pairs, label)


def dump_graph_json(g: Graph) -> str:
    return json.dumps(graph_to_dict(g))


def load_graph_json(text: str) -> Graph:
    return graph_from_dict(json.loads(text))
