"""Collaboration graph construction and network statistics.

The graph is the 0/1 adjacency of the dataset: one undirected edge per
distinct collaborating pair, reciprocal dyads collapsed. Betweenness is
the unnormalized undirected score with each unordered pair counted once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .corpus import CollabEdge, SubjectAreaDataset
from .io import SCHEMA_VERSION, read_json, write_json
from .kernels.brandes import betweenness_csr


@dataclass(frozen=True)
class Graph:
    nodes: tuple[str, ...]                  # sorted institution ids
    edges: tuple[tuple[str, str], ...]      # canonical pairs (a < b), sorted

    def __post_init__(self) -> None:
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop not allowed: {a}")
            if not a < b:
                raise ValueError(f"edge not canonical: ({a}, {b})")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency as (indptr, indices) with neighbor lists sorted."""
        idx = self.index()
        adj: list[list[int]] = [[] for _ in self.nodes]
        for a, b in self.edges:
            ia, ib = idx[a], idx[b]
            adj[ia].append(ib)
            adj[ib].append(ia)
        indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        for i, nbrs in enumerate(adj):
            nbrs.sort()
            indptr[i + 1] = indptr[i] + len(nbrs)
        indices = np.array([w for nbrs in adj for w in nbrs], dtype=np.int64) \
            if self.edges else np.zeros(0, dtype=np.int64)
        return indptr, indices

    def degrees(self) -> dict[str, int]:
        out = {v: 0 for v in self.nodes}
        for a, b in self.edges:
            out[a] += 1
            out[b] += 1
        return out


def build_graph(data: SubjectAreaDataset | Iterable[CollabEdge],
                extra_nodes: Iterable[str] = ()) -> Graph:
    """0/1 collaboration graph; reciprocal CollabEdges collapse to one edge."""
    if isinstance(data, SubjectAreaDataset):
        edges = data.edges
        nodes = set(data.institutions)
    else:
        edges = list(data)
        nodes = set()
    pairs = set()
    for e in edges:
        nodes.add(e.ref_id)
        nodes.add(e.net_id)
        pairs.add((e.ref_id, e.net_id) if e.ref_id < e.net_id else (e.net_id, e.ref_id))
    nodes.update(extra_nodes)
    return Graph(nodes=tuple(sorted(nodes)), edges=tuple(sorted(pairs)))


def betweenness(g: Graph) -> dict[str, float]:
    """Unnormalized undirected betweenness (Brandes accumulation)."""
    if g.n_nodes == 0:
        return {}
    indptr, indices = g.csr()
    scores = betweenness_csr(indptr, indices)
    return {v: float(scores[i]) for i, v in enumerate(g.nodes)}


def betweenness_exact(g: Graph) -> dict[str, Fraction]:
    """Brandes accumulation in exact rational arithmetic.

    Same algorithm as the float kernels but over Fractions, for cross-checks
    against enumeration oracles where float rounding would blur equality.
    """
    idx = g.index()
    adj: list[list[int]] = [[] for _ in g.nodes]
    for a, b in g.edges:
        adj[idx[a]].append(idx[b])
        adj[idx[b]].append(idx[a])
    for nbrs in adj:
        nbrs.sort()
    n = g.n_nodes
    bc = [Fraction(0)] * n
    for s in range(n):
        dist = [-1] * n
        sigma = [0] * n
        delta = [Fraction(0)] * n
        dist[s] = 0
        sigma[s] = 1
        order = [s]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for w in reversed(order[1:]):
            coeff = (1 + delta[w]) / Fraction(sigma[w])
            for v in adj[w]:
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] * coeff
            bc[w] += delta[w]
    return {v: bc[i] / 2 for i, v in enumerate(g.nodes)}


def collab_total(data: SubjectAreaDataset, inst_id: str) -> int:
    """Total joint papers over all dataset edges incident to the institution."""
    return sum(
        e.n_papers for e in data.edges if e.ref_id == inst_id or e.net_id == inst_id
    )


def collab_totals(data: SubjectAreaDataset) -> dict[str, int]:
    out = {iid: 0 for iid in data.institutions}
    for e in data.edges:
        out[e.ref_id] = out.get(e.ref_id, 0) + e.n_papers
        out[e.net_id] = out.get(e.net_id, 0) + e.n_papers
    return out


def compute_stats(data: SubjectAreaDataset) -> dict[str, dict]:
    """Per-node betweenness, degree and collaboration totals."""
    g = build_graph(data)
    bw = betweenness(g)
    deg = g.degrees()
    totals = collab_totals(data)
    return {
        v: {"betweenness": bw[v], "degree": deg[v], "collab_total": totals.get(v, 0)}
        for v in g.nodes
    }


def stats_to_dict(subject: str, stats: Mapping[str, dict]) -> dict:
    return {"schema_version": SCHEMA_VERSION, "subject": subject, "nodes": dict(stats)}


def save_stats(subject: str, stats: Mapping[str, dict], path) -> None:
    write_json(stats_to_dict(subject, stats), path)


def load_stats(path) -> dict:
    return read_json(path)
