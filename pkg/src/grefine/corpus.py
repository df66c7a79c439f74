"""Reference-corpus ingestion: TUDataset flat files and JSON graph files.

The TUDataset distribution format is three parallel text files under one
directory: ``<DS>_A.txt`` (global 1-based edge list, one ``u, v`` pair
per line, symmetric), ``<DS>_graph_indicator.txt`` (graph id per node),
and ``<DS>_graph_labels.txt`` (class per graph). Node ids are reindexed
to dense 0-based ids per graph, the symmetric edge list is collapsed to
undirected edges, and class labels are normalized to 0-based by sorting
the distinct raw labels. Node/edge attribute files are ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .graph import Graph, graph_from_dict, graph_to_dict

__all__ = [
    "CorpusFormatError",
    "Dataset",
    "load_tudataset",
    "load_graphs_json",
    "load_dataset_json",
    "save_graphs_json",
    "refinable",
]


class CorpusFormatError(ValueError):
    """Malformed corpus input; message carries file/line or object context."""


@dataclass(frozen=True)
class Dataset:
    """A labeled graph collection partitioned by class."""

    name: str
    graphs: tuple[Graph, ...]
    class_index: dict[int, tuple[int, ...]]

    @property
    def classes(self) -> list[int]:
        return sorted(self.class_index)

    def graphs_of_class(self, label: int) -> list[Graph]:
        if label not in self.class_index:
            raise KeyError(f"class {label} not present in dataset {self.name!r}")
        return [self.graphs[i] for i in self.class_index[label]]

    def class_summary(self) -> list[tuple[int, int, float, float]]:
        """Rows of (class, graph count, avg nodes, avg edges)."""
        rows = []
        for label in self.classes:
            members = self.graphs_of_class(label)
            rows.append(
                (
                    label,
                    len(members),
                    sum(g.node_count for g in members) / len(members),
                    sum(g.edge_count for g in members) / len(members),
                )
            )
        return rows

    def overall_summary(self) -> tuple[int, int, float, float]:
        """(graph count, class count, avg nodes, avg edges) over everything."""
        n = len(self.graphs)
        return (
            n,
            len(self.class_index),
            sum(g.node_count for g in self.graphs) / n,
            sum(g.edge_count for g in self.graphs) / n,
        )


def _dataset_from_graphs(name: str, graphs: list[Graph]) -> Dataset:
    index: dict[int, list[int]] = {}
    for i, g in enumerate(graphs):
        if g.class_label is None:
            raise CorpusFormatError(
                f"corpus graph #{i} carries no class label; corpora must be labeled"
            )
        index.setdefault(g.class_label, []).append(i)
    return Dataset(
        name, tuple(graphs), {k: tuple(v) for k, v in sorted(index.items())}
    )


def _read_int_pairs(path: Path) -> list[tuple[int, int]]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tokens = line.replace(",", " ").split()
            if len(tokens) != 2:
                raise CorpusFormatError(
                    f"{path}:{lineno}: expected two integers, got {line!r}"
                )
            try:
                pairs.append((int(tokens[0]), int(tokens[1])))
            except ValueError:
                raise CorpusFormatError(
                    f"{path}:{lineno}: non-integer token in {line!r}"
                ) from None
    return pairs


def _read_ints(path: Path) -> list[int]:
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise CorpusFormatError(
                    f"{path}:{lineno}: non-integer token {line!r}"
                ) from None
    return values


def _find_prefix(directory: Path) -> str:
    hits = sorted(directory.glob("*_A.txt"))
    if not hits:
        raise CorpusFormatError(f"no '<DS>_A.txt' edge file found in {directory}")
    if len(hits) > 1:
        raise CorpusFormatError(
            f"multiple '*_A.txt' files in {directory}: {[h.name for h in hits]}"
        )
    return hits[0].name[: -len("_A.txt")]


def load_tudataset(directory: str | Path) -> Dataset:
    """Load a TUDataset-format directory into a labeled Dataset."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusFormatError(f"dataset directory {directory} does not exist")
    name = _find_prefix(directory)
    a_path = directory / f"{name}_A.txt"
    ind_path = directory / f"{name}_graph_indicator.txt"
    lab_path = directory / f"{name}_graph_labels.txt"
    for path in (ind_path, lab_path):
        if not path.is_file():
            raise CorpusFormatError(f"required file {path} is missing")

    indicator = _read_ints(ind_path)
    raw_labels = _read_ints(lab_path)
    n_graphs = len(raw_labels)
    if not indicator:
        raise CorpusFormatError(f"{ind_path}: no nodes listed")
    if max(indicator) > n_graphs or min(indicator) < 1:
        raise CorpusFormatError(
            f"{ind_path}: graph ids must lie in [1, {n_graphs}]"
        )

    # Global 1-based node id -> (graph index, local 0-based id).
    node_graph: list[int] = []
    node_local: list[int] = []
    sizes = [0] * n_graphs
    for gid in indicator:
        node_graph.append(gid - 1)
        node_local.append(sizes[gid - 1])
        sizes[gid - 1] += 1

    edge_sets: list[set[tuple[int, int]]] = [set() for _ in range(n_graphs)]
    with open(a_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tokens = line.replace(",", " ").split()
            if len(tokens) != 2:
                raise CorpusFormatError(
                    f"{a_path}:{lineno}: expected two integers, got {line!r}"
                )
            try:
                gu, gv = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise CorpusFormatError(
                    f"{a_path}:{lineno}: non-integer token in {line!r}"
                ) from None
            if not (1 <= gu <= len(indicator) and 1 <= gv <= len(indicator)):
                raise CorpusFormatError(
                    f"{a_path}:{lineno}: dangling node id in ({gu}, {gv})"
                )
            if node_graph[gu - 1] != node_graph[gv - 1]:
                raise CorpusFormatError(
                    f"{a_path}:{lineno}: edge ({gu}, {gv}) crosses graphs"
                )
            if gu == gv:
                raise CorpusFormatError(
                    f"{a_path}:{lineno}: self-loop on node {gu}"
                )
            u, v = node_local[gu - 1], node_local[gv - 1]
            edge_sets[node_graph[gu - 1]].add((u, v) if u < v else (v, u))

    label_map = {raw: k for k, raw in enumerate(sorted(set(raw_labels)))}
    graphs = [
        Graph(sizes[i], frozenset(edge_sets[i]), label_map[raw_labels[i]])
        for i in range(n_graphs)
    ]
    return _dataset_from_graphs(name, graphs)


def load_graphs_json(path: str | Path) -> list[Graph]:
    """Load a JSON array of interchange-format graphs."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except FileNotFoundError:
        raise CorpusFormatError(f"graph file {path} does not exist") from None
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(payload, list):
        raise CorpusFormatError(f"{path}: expected a JSON array of graph objects")
    graphs = []
    for i, obj in enumerate(payload):
        try:
            graphs.append(graph_from_dict(obj))
        except ValueError as exc:
            raise CorpusFormatError(f"{path}: graph #{i}: {exc}") from None
    return graphs


def load_dataset_json(path: str | Path) -> Dataset:
    """Load a JSON graph file as a labeled corpus Dataset."""
    path = Path(path)
    return _dataset_from_graphs(path.stem, load_graphs_json(path))


def save_graphs_json(graphs: list[Graph], path: str | Path) -> None:
    """Write graphs in the JSON interchange format (deterministic bytes)."""
    payload = [graph_to_dict(g) for g in graphs]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def refinable(g: Graph) -> bool:
    """Whether a graph is large enough to be refined (genome of length >= 4)."""
    return g.node_count >= 2
