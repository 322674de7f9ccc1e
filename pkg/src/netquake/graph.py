"""Graph container, ingestion, and exact giant-component curves.

Graphs are undirected, simple, and immutable once built: nodes are dense ids
0..N-1 stored in CSR form, with the original file tokens kept as labels.
All downstream tie-breaking uses the dense ids, so input file order is part
of the reproducibility contract.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

import numpy as np

from . import _kernels


class GraphFormatError(ValueError):
    """An input file could not be parsed into a graph."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph in CSR form.

    indptr/indices hold both directions of every edge; neighbor lists are
    sorted by node id. labels[i] is the source token that became dense id i.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return self.indices.shape[0] // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once, as (u, v) with u < v, in CSR order."""
        for u in range(self.n):
            for w in self.neighbors(u):
                if w > u:
                    yield u, int(w)

    @classmethod
    def from_edges(
        cls,
        n_nodes: int,
        edge_pairs: Iterable[tuple[int, int]],
        labels: tuple[str, ...] | None = None,
    ) -> "Graph":
        """Build a graph, dropping self-loops and duplicate/reversed edges."""
        if n_nodes < 1:
            raise ValueError("graph needs at least one node")
        seen = set()
        for u, v in edge_pairs:
            if u == v:
                continue
            if not (0 <= u < n_nodes and 0 <= v < n_nodes):
                raise ValueError(f"edge ({u}, {v}) out of range for {n_nodes} nodes")
            seen.add((u, v) if u < v else (v, u))
        if seen:
            uv = np.array(sorted(seen), dtype=np.int64)
            heads = np.concatenate([uv[:, 0], uv[:, 1]])
            tails = np.concatenate([uv[:, 1], uv[:, 0]])
            order = np.lexsort((tails, heads))
            # int32 indices halve the memory traffic of every BFS sweep
            indices = tails[order].astype(np.int32)
            counts = np.bincount(heads, minlength=n_nodes)
        else:
            indices = np.empty(0, dtype=np.int32)
            counts = np.zeros(n_nodes, dtype=np.int64)
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        if labels is None:
            labels = tuple(str(i) for i in range(n_nodes))
        elif len(labels) != n_nodes:
            raise ValueError("labels length must equal node count")
        indptr.flags.writeable = False
        indices.flags.writeable = False
        return cls(indptr=indptr, indices=indices, labels=labels)


class RemovalState:
    """Mutable removal mask over a graph's nodes with O(1) counters."""

    __slots__ = ("mask", "removed_count")

    def __init__(self, n_nodes: int):
        self.mask = np.zeros(n_nodes, dtype=np.bool_)
        self.removed_count = 0

    @property
    def n(self) -> int:
        return self.mask.shape[0]

    @property
    def residual_count(self) -> int:
        return self.n - self.removed_count

    def is_removed(self, node: int) -> bool:
        return bool(self.mask[node])

    def remove(self, node: int) -> None:
        if not (0 <= node < self.n):
            raise ValueError(f"node {node} out of range")
        if self.mask[node]:
            raise ValueError(f"node {node} already removed")
        self.mask[node] = True
        self.removed_count += 1

    def remove_many(self, nodes: Iterable[int]) -> None:
        for node in nodes:
            self.remove(int(node))

    def copy(self) -> "RemovalState":
        dup = RemovalState(self.n)
        dup.mask[:] = self.mask
        dup.removed_count = self.removed_count
        return dup


@dataclass(frozen=True)
class ComponentSummary:
    """Component sizes of a residual graph, gc_fraction relative to original N."""

    component_sizes: tuple[int, ...]
    gc_size: int
    gc_fraction: float


def _fresh_mask(graph: Graph, removal: RemovalState | None) -> np.ndarray:
    if removal is None:
        return np.zeros(graph.n, dtype=np.bool_)
    if removal.n != graph.n:
        raise ValueError("removal state size does not match graph")
    return removal.mask


def components_summary(graph: Graph, removal: RemovalState | None = None) -> ComponentSummary:
    mask = _fresh_mask(graph, removal)
    comp, n_comp = _kernels.component_labels(graph.indptr, graph.indices, mask)
    if n_comp == 0:
        return ComponentSummary((), 0, 0.0)
    sizes = np.bincount(comp[comp >= 0], minlength=n_comp)
    sizes = tuple(int(s) for s in sorted(sizes, reverse=True))
    gc = sizes[0]
    return ComponentSummary(sizes, gc, gc / graph.n)


def gc_fraction(graph: Graph, removal: RemovalState | None = None) -> float:
    """Giant-component size over original N; 0.0 when everything is removed."""
    mask = _fresh_mask(graph, removal)
    comp, n_comp = _kernels.component_labels(graph.indptr, graph.indices, mask)
    if n_comp == 0:
        return 0.0
    sizes = np.bincount(comp[comp >= 0], minlength=n_comp)
    return int(sizes.max()) / graph.n


def sq_curve_full(graph: Graph, attack: np.ndarray | Iterable[int]) -> np.ndarray:
    """Exact gc_fraction after each prefix of `attack`, index Q = 0..len(attack).

    Computed by replaying the attack in reverse with an incremental
    union-find, so the whole curve costs near-linear time instead of one
    component sweep per prefix.
    """
    order = np.asarray(attack, dtype=np.int64)
    if order.ndim != 1:
        raise ValueError("attack must be a flat sequence of node ids")
    if order.size:
        if order.min() < 0 or order.max() >= graph.n:
            raise ValueError("attack contains out-of-range node ids")
        if np.unique(order).size != order.size:
            raise ValueError("attack contains duplicate node ids")
    return _kernels.sq_curve_reverse(graph.indptr, graph.indices, order)


_NODES_HINT = re.compile(r"^[#%]\s*nodes\s+(\d+)\s*$")


def _open_maybe(source: str | Path | IO[str], mode: str = "r"):
    if hasattr(source, "read") or hasattr(source, "write"):
        return source, False
    return open(source, mode, encoding="utf-8"), True


def load_edge_list(source: str | Path | IO[str]) -> Graph:
    """Parse a whitespace edge list into a Graph.

    Lines starting with '#' or '%' are comments; a comment of the form
    "# nodes <N>" is honored as a node-count hint so graphs with isolated
    nodes round-trip. Data lines hold exactly two node tokens. Tokens map to
    dense ids in first-appearance order; duplicate, reversed, and self-loop
    edges are dropped silently.
    """
    stream, owned = _open_maybe(source)
    try:
        ids: dict[str, int] = {}
        edge_pairs: list[tuple[int, int]] = []
        nodes_hint: int | None = None
        for line_no, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#") or line.startswith("%"):
                hint = _NODES_HINT.match(line)
                if hint:
                    nodes_hint = int(hint.group(1))
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise GraphFormatError(
                    f"line {line_no}: expected 2 node tokens, got {len(tokens)}"
                )
            pair = []
            for tok in tokens:
                if tok not in ids:
                    ids[tok] = len(ids)
                pair.append(ids[tok])
            edge_pairs.append((pair[0], pair[1]))
    finally:
        if owned:
            stream.close()
    if not edge_pairs and nodes_hint is None:
        raise GraphFormatError("no edges")
    n = len(ids)
    if nodes_hint is not None:
        if nodes_hint < n:
            raise GraphFormatError(
                f"node-count header says {nodes_hint} but {n} distinct nodes appear"
            )
        n = nodes_hint
    labels = list(ids)
    if n > len(ids):
        # hint-padded isolated nodes need labels that collide with no token
        used = set(labels)
        candidate = 0
        while len(labels) < n:
            while str(candidate) in used:
                candidate += 1
            labels.append(str(candidate))
            used.add(str(candidate))
    return Graph.from_edges(n, edge_pairs, tuple(labels))


def write_edge_list(graph: Graph, dest: str | Path | IO[str]) -> None:
    """Write a graph in the edge-list format load_edge_list reads back."""
    stream, owned = _open_maybe(dest, "w")
    try:
        stream.write(f"# nodes {graph.n}\n")
        for u, v in graph.edges():
            stream.write(f"{graph.labels[u]} {graph.labels[v]}\n")
    finally:
        if owned:
            stream.close()


def _tokenize_gml(text: str) -> list[str]:
    tokens = []
    i = 0
    size = len(text)
    while i < size:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise GraphFormatError("unterminated string in GML input")
            tokens.append(text[i : j + 1])
            i = j + 1
            continue
        j = i
        while j < size and not text[j].isspace() and text[j] not in '[]"':
            j += 1
        if j == i:
            tokens.append(ch)
            i += 1
        else:
            tokens.append(text[i:j])
            i = j
    return tokens


def _skip_gml_value(tokens: list[str], pos: int) -> int:
    """Skip one GML value (scalar or bracketed block) starting at pos."""
    if pos >= len(tokens):
        raise GraphFormatError("unexpected end of GML input")
    if tokens[pos] != "[":
        return pos + 1
    depth = 0
    while pos < len(tokens):
        if tokens[pos] == "[":
            depth += 1
        elif tokens[pos] == "]":
            depth -= 1
            if depth == 0:
                return pos + 1
        pos += 1
    raise GraphFormatError("unbalanced brackets in GML input")


def _parse_gml_record(tokens: list[str], pos: int) -> tuple[dict[str, str], int]:
    """Parse a flat `[ key value ... ]` block, keeping scalar values only."""
    if pos >= len(tokens) or tokens[pos] != "[":
        raise GraphFormatError("expected '[' in GML record")
    pos += 1
    fields: dict[str, str] = {}
    while pos < len(tokens) and tokens[pos] != "]":
        key = tokens[pos]
        if key == "[":
            raise GraphFormatError("unexpected '[' in GML record")
        pos += 1
        if pos >= len(tokens):
            raise GraphFormatError("unexpected end of GML input")
        if tokens[pos] == "[":
            pos = _skip_gml_value(tokens, pos)
        else:
            if key not in fields:
                fields[key] = tokens[pos]
            pos += 1
    if pos >= len(tokens):
        raise GraphFormatError("unbalanced brackets in GML input")
    return fields, pos + 1


def load_gml(source: str | Path | IO[str]) -> Graph:
    """Parse the GML subset: a graph block of node[id] and edge[source target].

    All other attributes are skipped. Ids are remapped to dense 0..N-1 in
    declaration order; labels keep the textual form of the original id.
    Directed inputs are symmetrized; dedup rules match load_edge_list.
    """
    stream, owned = _open_maybe(source)
    try:
        text = stream.read()
    finally:
        if owned:
            stream.close()
    tokens = _tokenize_gml(text)
    try:
        start = tokens.index("graph")
    except ValueError:
        raise GraphFormatError("no graph block found") from None
    pos = start + 1
    if pos >= len(tokens) or tokens[pos] != "[":
        raise GraphFormatError("expected '[' after 'graph'")
    pos += 1
    ids: dict[int, int] = {}
    edge_pairs: list[tuple[int, int]] = []
    while pos < len(tokens) and tokens[pos] != "]":
        key = tokens[pos]
        pos += 1
        if key == "node":
            fields, pos = _parse_gml_record(tokens, pos)
            if "id" not in fields:
                raise GraphFormatError("node record without id")
            gml_id = int(fields["id"])
            if gml_id not in ids:
                ids[gml_id] = len(ids)
        elif key == "edge":
            fields, pos = _parse_gml_record(tokens, pos)
            if "source" not in fields or "target" not in fields:
                raise GraphFormatError("edge record without source/target")
            edge_pairs.append((int(fields["source"]), int(fields["target"])))
        else:
            pos = _skip_gml_value(tokens, pos)
    if pos >= len(tokens):
        raise GraphFormatError("unbalanced brackets in GML input")
    if not ids:
        raise GraphFormatError("graph block declares no nodes")
    dense_pairs = []
    for s, t in edge_pairs:
        if s not in ids or t not in ids:
            raise GraphFormatError(f"edge references undeclared node id {s if s not in ids else t}")
        dense_pairs.append((ids[s], ids[t]))
    labels = tuple(str(gml_id) for gml_id in ids)
    return Graph.from_edges(len(ids), dense_pairs, labels)
