"""Shared fixtures: small named graphs and dataset discovery."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import pytest

from netquake.graph import Graph, load_edge_list

# 9-node benchmark tree used throughout; labels follow first appearance
# in the edge list, so locate nodes through fig2.labels, never by raw id.
FIG2_EDGE_TEXT = "a c\nb c\nc d\nd e\ne f\nf g\nf h\ng i"

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def graph_from_edges(n: int, edges) -> Graph:
    return Graph.from_edges(n, edges)


def random_edges(rng, n: int, p: float) -> list[tuple[int, int]]:
    """Bernoulli edge set over all pairs; plain python, no generator reuse."""
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


def random_graph(rng, n: int, p: float) -> Graph:
    return Graph.from_edges(n, random_edges(rng, n, p))


@pytest.fixture
def fig2() -> Graph:
    return load_edge_list(io.StringIO(FIG2_EDGE_TEXT))


def node(graph: Graph, label: str) -> int:
    return graph.labels.index(label)


@pytest.fixture
def star5() -> Graph:
    # hub 0, leaves 1..4
    return Graph.from_edges(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def path4() -> Graph:
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def k3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def k4() -> Graph:
    return Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture
def cycle4() -> Graph:
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def dataset_path(name: str) -> Path:
    return DATA_DIR / f"{name}.gml"


def require_dataset(name: str) -> Path:
    path = dataset_path(name)
    if not path.exists():
        pytest.skip(
            f"dataset {name!r} not present at {path}; "
            "run scripts/fetch_datasets.py to download it"
        )
    return path


def assert_curve_shape(materialized: np.ndarray, n: int) -> None:
    """Common sanity for a materialized curve: length, range, monotone."""
    assert materialized.shape == (n + 1,)
    assert np.all(materialized >= 0.0) and np.all(materialized <= 1.0)
    assert np.all(np.diff(materialized) <= 1e-12)
    assert materialized[n] == 0.0
