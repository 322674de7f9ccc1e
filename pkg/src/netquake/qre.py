"""Two-stage quick robustness estimation.

Stage 1 walks X equi-length intervals of [0, N] attacking by residual
degree, giving a first materialized curve and R0. Each refinement iteration
then re-splits [0, N] into equi-depth intervals (equal giant-component
drops) of the best curve so far, attacks by pivot-sampled betweenness with a
fresh sample per interval, and merges the new curve in by pointwise minimum,
so the estimate can only improve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attack import compute_R, evaluate_samples, materialize_step, merge_min
from .centrality import (
    betweenness_approx,
    degree_scores,
    draw_pivots,
    literal_budget,
    scaled_budget,
)
from .graph import Graph, RemovalState, gc_fraction

_Y_MODES = ("scaled", "paper_literal")


@dataclass(frozen=True)
class QreParams:
    """Estimation knobs: interval count X, pivot budget Y, iterations Z.

    y and z default per y_mode: "scaled" uses max(8, ceil(log2 N)),
    "paper_literal" uses max(2, round(sqrt(ln N))), which underbudgets
    desk-scale graphs and exists for comparison runs.
    """

    x: int = 100
    y: int | None = None
    z: int | None = None
    seed: int = 0
    y_mode: str = "scaled"

    def __post_init__(self):
        if self.x < 1:
            raise ValueError("x must be >= 1")
        if self.y is not None and self.y < 1:
            raise ValueError("y must be >= 1")
        if self.z is not None and self.z < 0:
            raise ValueError("z must be >= 0")
        if self.y_mode not in _Y_MODES:
            raise ValueError(f"unknown y_mode {self.y_mode!r}")

    def resolve(self, n_nodes: int) -> tuple[int, int, int]:
        """Concrete (x, y, z) for a graph of n_nodes."""
        budget = scaled_budget if self.y_mode == "scaled" else literal_budget
        y = self.y if self.y is not None else budget(n_nodes)
        z = self.z if self.z is not None else budget(n_nodes)
        return self.x, y, z


@dataclass
class QreState:
    """Best materialized curve found so far, its R, and the R history."""

    best_materialized: np.ndarray
    best_r: float
    history: list[float] = field(default_factory=list)


def equi_length_positions(n_nodes: int, x: int) -> np.ndarray:
    """Right endpoints of X equal-width intervals of [0, N], deduplicated.

    p_i = round(i * N / X) half-up, zeros dropped; N is always present.
    """
    p = np.floor(np.arange(1, x + 1) * (n_nodes / x) + 0.5).astype(np.int64)
    return np.unique(p[p >= 1])


def stage1_degree_shaping(graph: Graph, x: int) -> QreState:
    """Initial curve: equi-length walk attacking by residual degree."""
    positions = equi_length_positions(graph.n, x)

    def provider(g: Graph, removal: RemovalState, _interval: int) -> np.ndarray:
        return degree_scores(g, removal)

    curve = evaluate_samples(graph, positions, provider)
    materialized = materialize_step(curve.positions, curve.gcs, graph.n, gc_fraction(graph))
    r0 = compute_R(materialized, graph.n)
    return QreState(best_materialized=materialized, best_r=r0, history=[r0])


def equi_depth_boundaries(materialized: np.ndarray, x: int) -> np.ndarray:
    """Positions where the curve first reaches each of X equal value drops.

    Level k is materialized[0] * (1 - k/X); its position is the smallest Q
    with materialized[Q] <= level. Duplicates collapse and N is appended
    when absent, so the result is strictly increasing and ends at N.
    """
    materialized = np.asarray(materialized, dtype=np.float64)
    n_nodes = materialized.shape[0] - 1
    levels = materialized[0] * (1.0 - np.arange(1, x + 1) / x)
    # first index where the (non-increasing) curve dips to the level
    p = np.searchsorted(-materialized, -levels, side="left")
    p = np.unique(np.clip(p, 1, n_nodes))
    if p.size == 0 or p[-1] != n_nodes:
        p = np.append(p, n_nodes)
    return p


def _interval_seed(iteration_seed: int, interval: int) -> int:
    return int(np.random.SeedSequence((iteration_seed, interval)).generate_state(1)[0])


def stage2_iteration(graph: Graph, state: QreState, x: int, y: int, iteration_seed: int) -> QreState:
    """One refinement pass: equi-depth walk by approximate betweenness.

    Every interval draws a fresh pivot sample (seeded by the iteration seed
    and the interval index; Y clamps to the residual count near the end of
    the walk). The resulting curve merges into the state by pointwise
    minimum, so best_r never increases.
    """
    positions = equi_depth_boundaries(state.best_materialized, x)

    def provider(g: Graph, removal: RemovalState, interval: int) -> np.ndarray:
        sample = draw_pivots(
            g,
            removal,
            min(y, removal.residual_count),
            _interval_seed(iteration_seed, interval),
        )
        return betweenness_approx(g, removal, sample)

    curve = evaluate_samples(graph, positions, provider)
    materialized = materialize_step(curve.positions, curve.gcs, graph.n, gc_fraction(graph))
    merged = merge_min(state.best_materialized, materialized)
    r = compute_R(merged, graph.n)
    state.best_materialized = merged
    state.best_r = r
    state.history.append(r)
    return state


def qre_estimate(graph: Graph, params: QreParams | None = None) -> QreState:
    """Full two-stage estimate: stage 1 plus Z refinement iterations."""
    params = params or QreParams()
    x, y, z = params.resolve(graph.n)
    state = stage1_degree_shaping(graph, x)
    for k in range(1, z + 1):
        state = stage2_iteration(graph, state, x, y, params.seed + k)
    return state
