"""Node scoring metrics and the shared ranking rule.

Every scorer returns a float vector of length N where removed nodes carry a
-inf sentinel, so rank_descending can order the residual nodes without a
separate mask argument. Scores of non-removed nodes are finite and >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, RemovalState, _fresh_mask


def scaled_budget(n_nodes: int) -> int:
    """Default pivot/iteration budget: max(8, ceil(log2 N))."""
    if n_nodes < 2:
        return 8
    return max(8, math.ceil(math.log2(n_nodes)))


def literal_budget(n_nodes: int) -> int:
    """Budget rule max(2, round(sqrt(ln N))); too small below desk scale."""
    if n_nodes < 2:
        return 2
    return max(2, round(math.sqrt(math.log(n_nodes))))


def _finalize(scores: np.ndarray, mask: np.ndarray) -> np.ndarray:
    scores[mask] = -np.inf
    return scores


def degree_scores(graph: Graph, removal: RemovalState | None = None) -> np.ndarray:
    """Residual degree of every node."""
    mask = _fresh_mask(graph, removal)
    deg = _kernels.residual_degrees(graph.indptr, graph.indices, mask)
    return _finalize(deg.astype(np.float64), mask)


def betweenness_exact(graph: Graph, removal: RemovalState | None = None) -> np.ndarray:
    """Unnormalized shortest-path betweenness, unordered pairs counted once."""
    mask = _fresh_mask(graph, removal)
    scores = np.zeros(graph.n, dtype=np.float64)
    sources = np.flatnonzero(~mask)
    _kernels.brandes_accumulate(graph.indptr, graph.indices, mask, sources, scores)
    scores *= 0.5
    return _finalize(scores, mask)


@dataclass(frozen=True)
class PivotSample:
    """Distinct non-removed source nodes plus the seed that drew them."""

    pivots: np.ndarray
    seed: int


def draw_pivots(
    graph: Graph, removal: RemovalState | None, y: int, seed: int
) -> PivotSample:
    """Draw Y distinct pivots uniformly from the non-removed nodes."""
    mask = _fresh_mask(graph, removal)
    residual = np.flatnonzero(~mask)
    if not 1 <= y <= residual.size:
        raise ValueError(f"pivot count {y} outside [1, {residual.size}]")
    rng = np.random.default_rng(seed)
    pivots = rng.choice(residual, size=y, replace=False).astype(np.int64)
    return PivotSample(pivots=pivots, seed=seed)


def betweenness_approx(
    graph: Graph, removal: RemovalState | None, sample: PivotSample
) -> np.ndarray:
    """Pivot-sampled betweenness estimate, unbiased for betweenness_exact.

    Accumulates Brandes dependencies from the Y pivot sources only and
    scales by residual_count / (2 Y): averaging over all single-pivot
    choices, or passing every residual node as a pivot, reproduces the
    exact scores.
    """
    mask = _fresh_mask(graph, removal)
    pivots = np.asarray(sample.pivots, dtype=np.int64)
    residual_count = int(graph.n - np.count_nonzero(mask))
    if pivots.ndim != 1 or not 1 <= pivots.size <= residual_count:
        raise ValueError(f"pivot count {pivots.size} outside [1, {residual_count}]")
    if np.unique(pivots).size != pivots.size:
        raise ValueError("pivots must be distinct")
    if mask[pivots].any():
        raise ValueError("pivots must be non-removed nodes")
    scores = np.zeros(graph.n, dtype=np.float64)
    _kernels.brandes_accumulate(graph.indptr, graph.indices, mask, pivots, scores)
    scores *= residual_count / (2.0 * pivots.size)
    return _finalize(scores, mask)


def pagerank_scores(
    graph: Graph,
    removal: RemovalState | None = None,
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iters: int = 200,
) -> np.ndarray:
    """Power-iteration pagerank over the residual graph.

    Residual nodes with no residual neighbors spread their mass uniformly;
    the residual scores sum to 1.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie strictly between 0 and 1")
    mask = _fresh_mask(graph, removal)
    scores = _kernels.pagerank_iterate(
        graph.indptr, graph.indices, mask, damping, tol, max_iters
    )
    return _finalize(scores, mask)


def collective_influence(
    graph: Graph, removal: RemovalState | None = None, ball_radius: int = 2
) -> np.ndarray:
    """CI score with the given ball radius; residual degree <= 1 scores 0."""
    if ball_radius < 1:
        raise ValueError("ball_radius must be >= 1")
    mask = _fresh_mask(graph, removal)
    scores = _kernels.collective_influence_scores(
        graph.indptr, graph.indices, mask, ball_radius
    )
    return _finalize(scores, mask)


def rank_descending(scores: np.ndarray) -> np.ndarray:
    """Node ids by descending score, ties broken by ascending id.

    Removed nodes (score -inf) are excluded from the result.
    """
    order = np.argsort(-scores, kind="stable")
    n_residual = int(np.count_nonzero(scores != -np.inf))
    return order[:n_residual]
