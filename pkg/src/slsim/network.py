"""Undirected social graphs: edge-list ingestion, generators, statistics, seeding."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

import networkx as nx
import numpy as np

MODEL_ALIASES = {
    "ba": "preferential-attachment",
    "preferential-attachment": "preferential-attachment",
    "ws": "small-world",
    "small-world": "small-world",
}


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph over dense node IDs ``0..n-1``.

    ``edges`` holds each edge once as ``(i, j)`` with ``i < j``, sorted.
    ``adjacency[i]`` lists the neighbours of ``i`` in ascending order.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    source: str = ""

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], source: str = "") -> Graph:
        if n < 1:
            raise ValueError("graph must have at least one node")
        uniq = set()
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if i != j:
                uniq.add((min(i, j), max(i, j)))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for i, j in uniq:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return cls(n, tuple(sorted(uniq)), tuple(tuple(sorted(x)) for x in nbrs), source)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    @property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class GraphStats:
    n: int
    edge_count: int
    avg_degree: float
    avg_clustering: float
    connected: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def parse_edge_list(source: TextIO | Iterable[str], name: str = "") -> Graph:
    """Read a SNAP-style edge list (``u v`` per line, ``#`` comments).

    Duplicate and reversed edges collapse, self-loops are dropped. IDs that
    already form ``0..n-1`` are kept; otherwise they are renumbered in order
    of first appearance.
    """
    raw_edges = []
    order: dict[int, int] = {}
    for lineno, line in enumerate(source, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) < 2:
            raise ValueError(f"line {lineno}: expected two node IDs, got {text!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: node IDs must be integers, got {text!r}") from None
        for x in (u, v):
            if x not in order:
                order[x] = len(order)
        raw_edges.append((u, v))
    n = len(order)
    if not any(u != v for u, v in raw_edges):
        raise ValueError("edge list contains no edges")
    if set(order) == set(range(n)):
        remap = {x: x for x in order}
    else:
        remap = order
    return Graph.from_edges(n, ((remap[u], remap[v]) for u, v in raw_edges), source=name)


def write_edge_list(g: Graph, stream: TextIO) -> None:
    stream.write(f"# n={g.n} edges={len(g.edges)}\n")
    for i, j in g.edges:
        stream.write(f"{i} {j}\n")


def load_edge_list(path: str | Path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, name=str(path))


def generate_synthetic(
    model: str, n: int, rng: np.random.Generator, **params
) -> Graph:
    """Seeded connected synthetic graph.

    ``preferential-attachment`` (alias ``ba``) takes ``m``, the number of edges
    each new node attaches with. ``small-world`` (alias ``ws``) takes an even
    ring degree ``k`` and rewiring probability ``p``; it retries until the
    rewired graph is connected.
    """
    kind = MODEL_ALIASES.get(model)
    if kind is None:
        raise ValueError(f"unknown graph model {model!r}; choose from {sorted(MODEL_ALIASES)}")
    if n < 3:
        raise ValueError(f"synthetic graphs need n >= 3, got {n}")
    seed = int(rng.integers(2**32))
    if kind == "preferential-attachment":
        m = int(params.pop("m", 4))
        if params:
            raise ValueError(f"unexpected parameters for {kind}: {sorted(params)}")
        if not 1 <= m < n:
            raise ValueError(f"attachment degree m must be in [1, n), got {m}")
        nxg = nx.barabasi_albert_graph(n, m, seed=seed)
        desc = f"synthetic:ba,n={n},m={m}"
    else:
        k = int(params.pop("k", 6))
        p = float(params.pop("p", 0.1))
        if params:
            raise ValueError(f"unexpected parameters for {kind}: {sorted(params)}")
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"rewiring probability must be in [0, 1], got {p}")
        if k < 2 or k % 2 or k >= n:
            raise ValueError(f"ring degree k must be even and in [2, n), got {k}")
        nxg = nx.connected_watts_strogatz_graph(n, k, p, tries=1000, seed=seed)
        desc = f"synthetic:ws,n={n},k={k},p={p}"
    return Graph.from_edges(n, nxg.edges(), source=desc)


def _is_connected(g: Graph) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        for j in g.adjacency[queue.popleft()]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return len(seen) == g.n


def local_clustering(g: Graph) -> np.ndarray:
    """Per-node clustering coefficient; 0 for nodes of degree below two."""
    nbr_sets = [set(a) for a in g.adjacency]
    out = np.zeros(g.n)
    for i, nbrs in enumerate(g.adjacency):
        k = len(nbrs)
        if k < 2:
            continue
        links = sum(len(nbr_sets[j] & nbr_sets[i]) for j in nbrs) // 2
        out[i] = 2.0 * links / (k * (k - 1))
    return out


def compute_stats(g: Graph) -> GraphStats:
    return GraphStats(
        n=g.n,
        edge_count=len(g.edges),
        avg_degree=2.0 * len(g.edges) / g.n,
        avg_clustering=float(local_clustering(g).mean()),
        connected=_is_connected(g),
    )


def seed_count(n: int, fraction: float) -> int:
    """``max(1, round(fraction * n))`` with halves rounded up."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"originator fraction must be in (0, 1], got {fraction}")
    return min(n, max(1, math.floor(fraction * n + 0.5)))


def seed_originators(
    g: Graph,
    fraction: float,
    strategy: str = "uniform-random",
    rng: np.random.Generator | None = None,
    count: int | None = None,
) -> frozenset[int]:
    """Choose originator node IDs.

    ``count`` overrides the fraction-derived size when given. The
    ``highest-degree`` strategy is deterministic and breaks ties by ascending ID.
    """
    k = seed_count(g.n, fraction) if count is None else int(count)
    if not 1 <= k <= g.n:
        raise ValueError(f"originator count must be in [1, {g.n}], got {k}")
    if strategy == "uniform-random":
        if rng is None:
            raise ValueError("uniform-random seeding needs an rng")
        chosen = rng.choice(g.n, size=k, replace=False)
        return frozenset(int(x) for x in chosen)
    if strategy == "highest-degree":
        ranked = sorted(range(g.n), key=lambda i: (-g.degree(i), i))
        return frozenset(ranked[:k])
    raise ValueError(f"unknown seeding strategy {strategy!r}")


def parse_graph_source(spec: str) -> Graph:
    """Resolve a graph source string.

    Either a path to an edge-list file or ``synthetic:<model>,<key>=<value>,...``
    where ``n`` is required and ``seed`` (default 0) seeds the generator.
    """
    if not spec.startswith("synthetic:"):
        path = Path(spec)
        if not path.is_file():
            raise FileNotFoundError(f"graph file not found: {spec}")
        return load_edge_list(path)
    body = spec[len("synthetic:"):]
    model, *kvs = [p.strip() for p in body.split(",") if p.strip()]
    params: dict[str, str] = {}
    for kv in kvs:
        if "=" not in kv:
            raise ValueError(f"malformed synthetic graph parameter {kv!r}")
        key, value = kv.split("=", 1)
        params[key.strip()] = value.strip()
    if "n" not in params:
        raise ValueError(f"synthetic graph spec {spec!r} needs n=<nodes>")
    n = int(params.pop("n"))
    seed = int(params.pop("seed", 0))
    typed: dict[str, float] = {}
    for key, value in params.items():
        typed[key] = float(value) if key == "p" else int(value)
    g = generate_synthetic(model, n, np.random.default_rng(seed), **typed)
    return Graph(g.n, g.edges, g.adjacency, source=f"{g.source},seed={seed}")

