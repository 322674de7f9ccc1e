"""Attack strategies and robustness-curve evaluation.

A strategy orders node removals (statically or interactively); the exact
per-Q giant-component curve of the full attack then comes from one reverse
union-find pass, and R is the mean of that curve over Q = 1..N.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .centrality import (
    betweenness_approx,
    betweenness_exact,
    collective_influence,
    degree_scores,
    draw_pivots,
    pagerank_scores,
    rank_descending,
    scaled_budget,
)
from .graph import Graph, RemovalState, gc_fraction, sq_curve_full

_METRICS = ("deg", "betw", "abet", "pr", "ci")
_MODES = ("static", "interactive")


@dataclass(frozen=True)
class StrategySpec:
    """Which metric drives the attack and how often it is recomputed.

    `pivots` applies to abet only (None picks the scaled default for the
    graph); `ball_radius` applies to ci; `damping` to pr. `batch` is the
    number of removals between recomputations in interactive mode.
    """

    metric: str
    mode: str = "static"
    ball_radius: int = 2
    damping: float = 0.85
    pivots: int | None = None
    seed: int = 0
    batch: int = 1

    def __post_init__(self):
        if self.metric not in _METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")
        if self.ball_radius < 1:
            raise ValueError("ball_radius must be >= 1")
        if self.pivots is not None and self.pivots < 1:
            raise ValueError("pivots must be >= 1")

    @property
    def interactive(self) -> bool:
        return self.mode == "interactive"

    @property
    def name(self) -> str:
        """Descriptor used in records and bench columns (deg, ibet, ici2, ...)."""
        if self.metric == "ci":
            token = f"ci{self.ball_radius}"
        elif self.metric == "betw" and self.interactive:
            token = "bet"
        else:
            token = self.metric
        return ("i" + token) if self.interactive else token


@dataclass(frozen=True)
class AttackSequence:
    """A full removal order plus the name of the strategy that made it."""

    order: np.ndarray
    origin: str


@dataclass
class RobustnessCurve:
    """Sampled (positions, gcs) pairs, optionally materialized per Q with R."""

    positions: np.ndarray
    gcs: np.ndarray
    materialized: np.ndarray | None = None
    r: float | None = None


def _pivot_seed(base_seed: int, index: int) -> int:
    return int(np.random.SeedSequence((base_seed, index)).generate_state(1)[0])


def metric_scores(
    graph: Graph,
    removal: RemovalState | None,
    spec: StrategySpec,
    round_index: int = 0,
) -> np.ndarray:
    """Score the residual graph with the strategy's metric.

    abet draws a fresh pivot sample per call, seeded by (spec.seed,
    round_index), clamped to the residual size near the end of an attack.
    """
    if spec.metric == "deg":
        return degree_scores(graph, removal)
    if spec.metric == "betw":
        return betweenness_exact(graph, removal)
    if spec.metric == "pr":
        return pagerank_scores(graph, removal, damping=spec.damping)
    if spec.metric == "ci":
        return collective_influence(graph, removal, ball_radius=spec.ball_radius)
    y = spec.pivots if spec.pivots is not None else scaled_budget(graph.n)
    residual = removal.residual_count if removal is not None else graph.n
    sample = draw_pivots(graph, removal, min(y, residual), _pivot_seed(spec.seed, round_index))
    return betweenness_approx(graph, removal, sample)


def static_attack(graph: Graph, spec: StrategySpec) -> AttackSequence:
    """Rank once on the intact graph; the order is that ranking."""
    if spec.mode != "static":
        raise ValueError("static_attack requires a static strategy")
    scores = metric_scores(graph, None, spec)
    return AttackSequence(order=rank_descending(scores), origin=spec.name)


def _interactive_degree_order(graph: Graph, n: int) -> np.ndarray:
    # lazy max-heap on (-degree, id); stale entries skipped on pop
    deg = graph.degrees().copy()
    heap = [(-int(deg[v]), v) for v in range(n)]
    heapq.heapify(heap)
    removed = np.zeros(n, dtype=bool)
    order = np.empty(n, dtype=np.int64)
    for k in range(n):
        while True:
            negd, v = heapq.heappop(heap)
            if not removed[v] and -negd == deg[v]:
                break
        removed[v] = True
        order[k] = v
        for w in graph.neighbors(v):
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (-int(deg[w]), int(w)))
    return order


def _interactive_betweenness_order(graph: Graph, batch: int) -> np.ndarray:
    """Exact interactive betweenness with per-component score caching.

    Removing a node can only change shortest paths inside its own component,
    so after each removal only that component's scores are recomputed
    (sources restricted to its members). Scores are kept in raw ordered-pair
    units; the ranking is scale-invariant.
    """
    n = graph.n
    indptr, indices = graph.indptr, graph.indices
    removed = np.zeros(n, dtype=np.bool_)
    scores = np.zeros(n, dtype=np.float64)
    _score_components(graph, removed, np.arange(n, dtype=np.int64), scores)
    order = np.empty(n, dtype=np.int64)
    filled = 0
    while filled < n:
        take = min(batch, n - filled)
        if take == 1:
            picked = np.array([np.argmax(scores)], dtype=np.int64)
        else:
            picked = rank_descending(scores)[:take].astype(np.int64)
        comp, _ = _kernels.component_labels(indptr, indices, removed)
        affected = np.unique(comp[picked])
        for v in picked:
            removed[v] = True
            scores[v] = -np.inf
            order[filled] = v
            filled += 1
        if filled == n:
            break
        members = np.flatnonzero(np.isin(comp, affected) & ~removed)
        scores[members] = 0.0
        _score_components(graph, removed, members, scores)
    return order


def _score_components(graph: Graph, removed: np.ndarray, nodes: np.ndarray, scores: np.ndarray):
    """Write exact raw betweenness for `nodes`, one residual component at a time."""
    if nodes.shape[0] == 0:
        return
    comp, _ = _kernels.component_labels(graph.indptr, graph.indices, removed)
    labels = comp[nodes]
    for lab in np.unique(labels):
        _kernels.betweenness_component(
            graph.indptr, graph.indices, nodes[labels == lab], scores
        )


def interactive_attack(graph: Graph, spec: StrategySpec) -> AttackSequence:
    """Recompute the metric every `batch` removals, removing top-ranked nodes."""
    if spec.mode != "interactive":
        raise ValueError("interactive_attack requires an interactive strategy")
    n = graph.n
    if spec.metric == "deg" and spec.batch == 1:
        return AttackSequence(order=_interactive_degree_order(graph, n), origin=spec.name)
    if spec.metric == "betw":
        return AttackSequence(
            order=_interactive_betweenness_order(graph, spec.batch), origin=spec.name
        )
    removal = RemovalState(n)
    order = np.empty(n, dtype=np.int64)
    filled = 0
    round_index = 0
    while filled < n:
        scores = metric_scores(graph, removal, spec, round_index)
        for v in rank_descending(scores)[: spec.batch]:
            removal.remove(int(v))
            order[filled] = v
            filled += 1
        round_index += 1
    return AttackSequence(order=order, origin=spec.name)


RankingProvider = Callable[[Graph, RemovalState, int], np.ndarray]


def evaluate_samples(
    graph: Graph, positions: np.ndarray, provider: RankingProvider
) -> RobustnessCurve:
    """Walk the sample positions left to right, recomputing rank per interval.

    At the start of each sub-interval the provider scores the residual
    graph; nodes are removed in that ranking's order until the interval's
    end position, where the residual gc_fraction is recorded.
    """
    positions = np.asarray(positions, dtype=np.int64)
    if positions.ndim != 1 or positions.size == 0:
        raise ValueError("positions must be a non-empty 1-d sequence")
    if positions[0] < 1 or positions[-1] > graph.n or np.any(np.diff(positions) <= 0):
        raise ValueError("positions must be strictly increasing within [1, N]")
    removal = RemovalState(graph.n)
    gcs = np.empty(positions.size, dtype=np.float64)
    prev = 0
    for i, p in enumerate(positions):
        scores = provider(graph, removal, i)
        for v in rank_descending(scores)[: int(p) - prev]:
            removal.remove(int(v))
        prev = int(p)
        gcs[i] = gc_fraction(graph, removal)
    return RobustnessCurve(positions=positions, gcs=gcs)


def materialize_step(
    positions: np.ndarray, gcs: np.ndarray, n_nodes: int, intact_fraction: float
) -> np.ndarray:
    """Step function out[Q] = gcs_i for the maximal i with p_i <= Q.

    Positions before the first sample hold intact_fraction; out has length
    N+1 with out[0] always the intact fraction.
    """
    positions = np.asarray(positions, dtype=np.int64)
    gcs = np.asarray(gcs, dtype=np.float64)
    if positions.shape != gcs.shape:
        raise ValueError("positions and gcs must have equal length")
    q = np.arange(n_nodes + 1)
    i = np.searchsorted(positions, q, side="right") - 1
    return np.where(i < 0, intact_fraction, gcs[np.maximum(i, 0)])


def merge_min(materialized_a: np.ndarray, materialized_b: np.ndarray) -> np.ndarray:
    """Pointwise minimum of two materialized curves."""
    a = np.asarray(materialized_a, dtype=np.float64)
    b = np.asarray(materialized_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("curves must have equal length")
    return np.minimum(a, b)


def compute_R(materialized: np.ndarray, n_nodes: int) -> float:
    """R = (1/N) * sum of materialized[1..N]; index 0 is excluded."""
    materialized = np.asarray(materialized, dtype=np.float64)
    if materialized.shape[0] != n_nodes + 1:
        raise ValueError("materialized curve must have length N+1")
    return float(materialized[1:].sum() / n_nodes)


def run_strategy(graph: Graph, spec: StrategySpec) -> RobustnessCurve:
    """Run an attack strategy and evaluate its exact dense robustness curve."""
    if spec.interactive:
        seq = interactive_attack(graph, spec)
    else:
        seq = static_attack(graph, spec)
    curve = sq_curve_full(graph, seq.order)
    return RobustnessCurve(
        positions=np.arange(1, graph.n + 1, dtype=np.int64),
        gcs=curve[1:],
        materialized=curve,
        r=compute_R(curve, graph.n),
    )
