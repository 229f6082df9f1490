"""Sparse weighted spectrum graph, edge elimination and connected components."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .spectra_io import ordered_clusters

Pair = tuple[str, str]


def _key(a: str, b: str) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class SpectrumGraph:
    """Vertices are spectrum ids; a missing edge means weight 0."""

    vertices: tuple[str, ...]
    edges: Mapping[Pair, int] = field(default_factory=dict)

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Clustering:
    """A partition of spectrum ids, largest cluster first (ties by smallest id)."""

    clusters: tuple[frozenset[str], ...]

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[str]]) -> "Clustering":
        return cls(tuple(frozenset(m) for m in ordered_clusters(groups)))

    def __len__(self) -> int:
        return len(self.clusters)

    def __iter__(self):
        return iter(self.clusters)

    @property
    def num_spectra(self) -> int:
        return sum(len(c) for c in self.clusters)

    @property
    def num_singletons(self) -> int:
        return sum(1 for c in self.clusters if len(c) == 1)

    def labels(self) -> dict[str, int]:
        return {sid: i for i, c in enumerate(self.clusters) for sid in c}


def build_graph(weights: Mapping[Pair, int], ids: Sequence[str]) -> SpectrumGraph:
    known = set(ids)
    if len(known) != len(ids):
        raise ValueError("duplicate spectrum ids")
    edges: dict[Pair, int] = {}
    for (a, b), w in weights.items():
        if a not in known or b not in known:
            missing = a if a not in known else b
            raise ValueError(f"weight references unknown spectrum id {missing!r}")
        if a == b:
            raise ValueError(f"self-pair for {a!r}")
        if w >= 1:
            edges[_key(a, b)] = int(w)
    return SpectrumGraph(tuple(ids), edges)


def apply_threshold(graph: SpectrumGraph, zeta: float) -> SpectrumGraph:
    """Drop edges strictly below ``zeta``; an edge equal to ``zeta`` survives."""
    if zeta < 0:
        raise ValueError(f"threshold must be non-negative, got {zeta}")
    kept = {e: w for e, w in graph.edges.items() if w >= zeta}
    return SpectrumGraph(graph.vertices, kept)


def connected_components(graph: SpectrumGraph) -> Clustering:
    """Maximal connected vertex sets via iterative DFS, O(V + E)."""
    adjacency: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for a, b in graph.edges:
        adjacency[a].append(b)
        adjacency[b].append(a)

    seen: set[str] = set()
    groups = []
    for start in graph.vertices:
        if start in seen:
            continue
        seen.add(start)
        stack = [start]
        members = []
        while stack:
            v = stack.pop()
            members.append(v)
            for u in adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        groups.append(members)
    return Clustering.from_groups(groups)
