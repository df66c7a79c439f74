import os
import sys
from pathlib import Path

import numpy as np
import pytest

from grefine.graph import Graph


def pytest_runtest_logreport(report):
    """One PASS/FAIL line per acceptance criterion on the terminal."""
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        name = report.nodeid.split("::")[-1]
        sys.stderr.write(f"\nACCEPTANCE {status}: {name}\n")

RING6_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]


@pytest.fixture
def ring6():
    return Graph.from_edges(6, RING6_EDGES)


def random_graph(n: int, p: float, rng: np.random.Generator, label: int | None = None) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges, label)


def write_tud_dir(directory: Path, name: str, graphs: list[Graph]) -> Path:
    """Write graphs in TUDataset layout (independent of the loader under test).

    Emits both edge directions, as the distribution format does. Raw class
    labels are written 1-based to mimic common upstream files.
    """
    directory.mkdir(parents=True, exist_ok=True)
    a_lines = []
    indicator = []
    labels = []
    offset = 0
    for gid, g in enumerate(graphs, start=1):
        for u, v in sorted(g.edges):
            a_lines.append(f"{offset + u + 1}, {offset + v + 1}")
            a_lines.append(f"{offset + v + 1}, {offset + u + 1}")
        indicator.extend([str(gid)] * g.node_count)
        labels.append(str((g.class_label or 0) + 1))
        offset += g.node_count
    (directory / f"{name}_A.txt").write_text("\n".join(a_lines) + "\n")
    (directory / f"{name}_graph_indicator.txt").write_text("\n".join(indicator) + "\n")
    (directory / f"{name}_graph_labels.txt").write_text("\n".join(labels) + "\n")
    return directory


def dataset_dir(name: str) -> Path | None:
    """Locate a real benchmark dataset directory, if the user provided one."""
    candidates = []
    env = os.environ.get("GREFINE_DATA_ROOT")
    if env:
        candidates.append(Path(env) / name)
    candidates.append(Path(__file__).resolve().parent.parent / "data" / name)
    for c in candidates:
        if (c / f"{name}_A.txt").is_file():
            return c
    return None


def require_dataset(name: str) -> Path:
    found = dataset_dir(name)
    if found is None:
        pytest.skip(
            f"{name} dataset files not available; place the TUDataset directory "
            f"under data/{name}/ or set GREFINE_DATA_ROOT (see README)"
        )
    return found
