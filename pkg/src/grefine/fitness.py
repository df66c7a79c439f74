"""Scalar fitness: weighted structure-MMD terms plus an edge-count penalty.

A candidate graph is scored against per-class corpus statistics built
once from the reference graphs: per-graph histograms for the three
structure metrics over ranges fixed by the corpus extrema, the mean edge
count as the density target, and the (candidate-independent) corpus
self-term of the MMD, cached per kernel bandwidth. Lower is better.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph
from .metrics import (
    DEFAULT_BINS,
    FeatureHistogram,
    _bin_edges,
    _bin_masses,
    _clustering_from_adjacency,
    _gaussian_self_term,
    _mmd2,
    _spectrum_from_adjacency,
)

__all__ = [
    "FitnessWeights",
    "FitnessValue",
    "CorpusStats",
    "build_corpus_stats",
    "evaluate",
    "evaluate_edges",
]

_METRICS = ("degree", "clustering", "spectral")


@dataclass(frozen=True)
class FitnessWeights:
    """Weights for the three MMD terms, the edge penalty, and the bandwidth."""

    w_d: float = 1.0
    w_c: float = 1.0
    w_s: float = 1.0
    w_e: float = 0.05
    sigma: float = 1.0

    def __post_init__(self) -> None:
        for name in ("w_d", "w_c", "w_s", "w_e"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.w_d == 0 and self.w_c == 0 and self.w_s == 0:
            raise ValueError("at least one of w_d, w_c, w_s must be positive")
        if self.sigma <= 0:
            raise ValueError(f"kernel bandwidth must be positive, got {self.sigma}")


@dataclass(frozen=True)
class FitnessValue:
    """Total fitness and its component breakdown; lower is better."""

    total: float
    mmd_d: float
    mmd_c: float
    mmd_s: float
    edge_penalty: float

    @property
    def components(self) -> tuple[float, float, float, float]:
        return (self.mmd_d, self.mmd_c, self.mmd_s, self.edge_penalty)


class CorpusStats:
    """Per-class reference statistics, immutable after construction.

    Holds one histogram per corpus graph for each metric (shared bin
    edges per metric), the stacked mass matrices used by evaluation, the
    target edge count, and a per-bandwidth cache of the corpus MMD
    self-terms.
    """

    def __init__(
        self,
        class_label: int | None,
        bins: int,
        degree_hi: float,
        spectral_hi: float,
        degree_hists: list[FeatureHistogram],
        clustering_hists: list[FeatureHistogram],
        spectral_hists: list[FeatureHistogram],
        e_target: float,
    ) -> None:
        self.class_label = class_label
        self.bins = bins
        self.degree_range = (0.0, degree_hi)
        self.clustering_range = (0.0, 1.0)
        self.spectral_range = (0.0, spectral_hi)
        self.degree_hists = degree_hists
        self.clustering_hists = clustering_hists
        self.spectral_hists = spectral_hists
        self.e_target = e_target
        self.n_graphs = len(degree_hists)
        self._masses = {
            "degree": np.stack([h.masses for h in degree_hists]),
            "clustering": np.stack([h.masses for h in clustering_hists]),
            "spectral": np.stack([h.masses for h in spectral_hists]),
        }
        self._self_terms: dict[tuple[str, float], float] = {}

    def corpus_masses(self, metric: str) -> np.ndarray:
        return self._masses[metric]

    def self_term(self, metric: str, sigma: float) -> float:
        """Cached (1/N^2) sum_ij k(y_i, y_j) for one metric and bandwidth."""
        key = (metric, sigma)
        value = self._self_terms.get(key)
        if value is None:
            value = _gaussian_self_term(self._masses[metric], sigma)
            self._self_terms[key] = value
        return value

    def metric_range(self, metric: str) -> tuple[float, float]:
        return {
            "degree": self.degree_range,
            "clustering": self.clustering_range,
            "spectral": self.spectral_range,
        }[metric]


def build_corpus_stats(
    graphs: Iterable[Graph],
    class_label: int | None = None,
    bins: int = DEFAULT_BINS,
) -> CorpusStats:
    """Build reference statistics from the corpus graphs of one class.

    When ``class_label`` is given, only graphs carrying that label are
    used; otherwise all graphs are. Histogram ranges come from corpus
    extrema: degrees over [0, max corpus degree], clustering over [0, 1],
    spectra over [0, max corpus eigenvalue]. The ranges are shared by
    every candidate evaluated against these statistics.
    """
    if class_label is None:
        selected = list(graphs)
    else:
        selected = [g for g in graphs if g.class_label == class_label]
    if not selected:
        raise ValueError(f"no corpus graphs for class {class_label!r}")
    for g in selected:
        if g.node_count == 0:
            raise ValueError("corpus graphs must be non-empty")

    adjacencies = [g.adjacency_matrix() for g in selected]
    degree_seqs = [a.sum(axis=1) for a in adjacencies]
    spectra = [_spectrum_from_adjacency(a) for a in adjacencies]

    # Degenerate (edgeless) corpora get a floor of 1.0 so bins keep width.
    degree_hi = max(1.0, max(float(d.max()) for d in degree_seqs))
    spectral_hi = max(1.0, max(float(s[-1]) for s in spectra))

    degree_edges = _bin_edges(0.0, degree_hi, bins)
    clustering_edges = _bin_edges(0.0, 1.0, bins)
    spectral_edges = _bin_edges(0.0, spectral_hi, bins)

    degree_hists = [
        FeatureHistogram(degree_edges, _bin_masses(d, 0.0, degree_hi, bins))
        for d in degree_seqs
    ]
    clustering_hists = [
        FeatureHistogram(
            clustering_edges,
            _bin_masses(_clustering_from_adjacency(a), 0.0, 1.0, bins),
        )
        for a in adjacencies
    ]
    spectral_hists = [
        FeatureHistogram(spectral_edges, _bin_masses(s, 0.0, spectral_hi, bins))
        for s in spectra
    ]

    e_target = float(np.mean([g.edge_count for g in selected]))
    return CorpusStats(
        class_label,
        bins,
        degree_hi,
        spectral_hi,
        degree_hists,
        clustering_hists,
        spectral_hists,
        e_target,
    )


def _adjacency_from_edges(
    node_count: int, edges: Iterable[tuple[int, int]]
) -> np.ndarray:
    a = np.zeros((node_count, node_count), dtype=np.float64)
    for u, v in edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def _evaluate_adjacency(
    a: np.ndarray, edge_count: int, stats: CorpusStats, w: FitnessWeights
) -> FitnessValue:
    bins = stats.bins
    sigma = w.sigma

    degrees = a.sum(axis=1)
    x_deg = _bin_masses(degrees, 0.0, stats.degree_range[1], bins)
    mmd_d = _mmd2(
        x_deg, stats.corpus_masses("degree"), sigma, stats.self_term("degree", sigma)
    )

    x_clu = _bin_masses(_clustering_from_adjacency(a), 0.0, 1.0, bins)
    mmd_c = _mmd2(
        x_clu,
        stats.corpus_masses("clustering"),
        sigma,
        stats.self_term("clustering", sigma),
    )

    x_spec = _bin_masses(
        _spectrum_from_adjacency(a), 0.0, stats.spectral_range[1], bins
    )
    mmd_s = _mmd2(
        x_spec,
        stats.corpus_masses("spectral"),
        sigma,
        stats.self_term("spectral", sigma),
    )

    edge_penalty = w.w_e * abs(edge_count - stats.e_target)
    total = w.w_d * mmd_d + w.w_c * mmd_c + w.w_s * mmd_s + edge_penalty
    return FitnessValue(
        total=float(total),
        mmd_d=float(mmd_d),
        mmd_c=float(mmd_c),
        mmd_s=float(mmd_s),
        edge_penalty=float(edge_penalty),
    )


def evaluate(g: Graph, stats: CorpusStats, w: FitnessWeights) -> FitnessValue:
    """Score one graph against the corpus statistics. Pure and deterministic."""
    if g.node_count == 0:
        raise ValueError("cannot evaluate an empty graph")
    return _evaluate_adjacency(g.adjacency_matrix(), g.edge_count, stats, w)


def evaluate_edges(
    node_count: int,
    edges: Sequence[tuple[int, int]] | set[tuple[int, int]],
    stats: CorpusStats,
    w: FitnessWeights,
) -> FitnessValue:
    """Score a raw normalized edge set; identical result to ``evaluate``."""
    if node_count == 0:
        raise ValueError("cannot evaluate an empty graph")
    a = _adjacency_from_edges(node_count, edges)
    return _evaluate_adjacency(a, len(edges), stats, w)
