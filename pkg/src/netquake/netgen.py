"""Seeded random-network generators for experiments."""

from __future__ import annotations

import math
import random

from .graph import Graph


def generate_ba(n_nodes: int, m: int, seed: int) -> Graph:
    """Preferential-attachment graph: complete seed on m+1 nodes, then each
    new node attaches to m distinct existing nodes drawn with probability
    proportional to their current degree (repeated draws, duplicates
    rejected). Edge count is C(m+1, 2) + (N - m - 1) * m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n_nodes < m + 1:
        raise ValueError("n must be at least m + 1")
    rnd = random.Random(seed)
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    # one entry per degree unit; uniform choice is degree-weighted
    repeated = [v for edge in edges for v in edge]
    for v in range(m + 1, n_nodes):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(rnd.choice(repeated))
        for t in targets:
            edges.append((v, t))
            repeated.append(v)
            repeated.append(t)
    return Graph.from_edges(n_nodes, edges)


def generate_er(n_nodes: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p): every unordered pair independently with prob p.

    Uses geometric gap skipping so the cost is O(N + M) rather than O(N^2);
    the sampled distribution is exactly the independent-pairs model.
    """
    if n_nodes < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    edges: list[tuple[int, int]] = []
    if p >= 1.0:
        edges = [(i, j) for i in range(n_nodes) for j in range(i + 1, n_nodes)]
    elif p > 0.0:
        rnd = random.Random(seed)
        log_q = math.log(1.0 - p)
        v = 1
        w = -1
        while v < n_nodes:
            w += 1 + int(math.log(1.0 - rnd.random()) / log_q)
            while w >= v and v < n_nodes:
                w -= v
                v += 1
            if v < n_nodes:
                edges.append((w, v))
    return Graph.from_edges(n_nodes, edges)
