import itertools
from fractions import Fraction

import numpy as np
import pytest

from exnet.corpus import CollabEdge
from exnet.netstats import (
    Graph,
    betweenness,
    betweenness_exact,
    build_graph,
    collab_total,
    collab_totals,
    compute_stats,
)

from conftest import make_dataset


def enumeration_oracle(g: Graph) -> dict[str, Fraction]:
    """All-geodesics enumeration in exact arithmetic, per unordered pair."""
    idx = g.index()
    n = g.n_nodes
    adj = [[] for _ in range(n)]
    for a, b in g.edges:
        adj[idx[a]].append(idx[b])
        adj[idx[b]].append(idx[a])

    def all_shortest_paths(s, t):
        # BFS then DFS over the predecessor DAG
        from collections import deque
        dist = [-1] * n
        preds = [[] for _ in range(n)]
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
                if dist[w] == dist[v] + 1:
                    preds[w].append(v)
        if dist[t] < 0:
            return []
        paths = []

        def back(v, acc):
            if v == s:
                paths.append([s] + list(reversed(acc)))
                return
            for p in preds[v]:
                back(p, acc + [v])

        back(t, [])
        return paths

    scores = {v: Fraction(0) for v in g.nodes}
    for s, t in itertools.combinations(range(n), 2):
        paths = all_shortest_paths(s, t)
        if not paths:
            continue
        total = len(paths)
        for v in range(n):
            if v == s or v == t:
                continue
            through = sum(1 for p in paths if v in p)
            if through:
                scores[g.nodes[v]] += Fraction(through, total)
    return scores


def random_graph(rng, n_nodes, p=0.4):
    nodes = tuple(f"v{i}" for i in range(n_nodes))
    edges = tuple(
        sorted(
            (nodes[i], nodes[j])
            for i, j in itertools.combinations(range(n_nodes), 2)
            if rng.random() < p
        )
    )
    return Graph(nodes=nodes, edges=edges)


class TestBuildGraph:
    def test_reciprocal_edges_collapse(self):
        ds = make_dataset([("A", "B", 10, 1), ("B", "A", 12, 2)])
        g = build_graph(ds)
        assert g.edges == (("A", "B"),)

    def test_empty(self):
        g = build_graph([])
        assert g.nodes == () and g.edges == ()

    def test_adjacency_symmetric_zero_diagonal(self, rng):
        edges = []
        for _ in range(40):
            a, b = rng.choice(12, size=2, replace=False)
            edges.append(CollabEdge(f"I{a}", f"I{b}", 10, 1))
        g = build_graph(edges)
        indptr, indices = g.csr()
        n = g.n_nodes
        mat = np.zeros((n, n), dtype=int)
        for i in range(n):
            for j in indices[indptr[i]:indptr[i + 1]]:
                mat[i, j] = 1
        assert np.array_equal(mat, mat.T)
        assert np.all(np.diag(mat) == 0)

    def test_order_independent(self, rng):
        edges = [CollabEdge(f"I{a}", f"I{b}", 10, 1)
                 for a, b in [(0, 1), (2, 3), (1, 2), (0, 3)]]
        g1 = build_graph(edges)
        shuffled = list(edges)
        rng.shuffle(shuffled)
        g2 = build_graph(shuffled)
        assert g1 == g2

    def test_canonical_validation(self):
        with pytest.raises(ValueError):
            Graph(nodes=("a",), edges=(("a", "a"),))
        with pytest.raises(ValueError):
            Graph(nodes=("a", "b"), edges=(("b", "a"),))


class TestBetweenness:
    def test_path_graph(self):
        g = Graph(nodes=("a", "b", "c"), edges=(("a", "b"), ("b", "c")))
        assert betweenness(g) == {"a": 0.0, "b": 1.0, "c": 0.0}

    def test_complete_graph(self):
        nodes = ("a", "b", "c", "d")
        g = Graph(nodes=nodes, edges=tuple(sorted(itertools.combinations(nodes, 2))))
        assert all(v == 0.0 for v in betweenness(g).values())

    def test_star_graph_closed_form(self):
        # center of a k-star mediates all C(k,2) pairs
        nodes = ("hub",) + tuple(f"s{i}" for i in range(5))
        g = Graph(nodes=tuple(sorted(nodes)),
                  edges=tuple(sorted(("hub", s) if "hub" < s else (s, "hub")
                                     for s in nodes[1:])))
        assert betweenness(g)["hub"] == 10.0

    def test_brute_force_oracle_random_graphs(self, rng):
        for _ in range(100):
            g = random_graph(rng, int(rng.integers(2, 9)))
            oracle = enumeration_oracle(g)
            exact = betweenness_exact(g)
            assert exact == oracle
            floats = betweenness(g)
            for v in g.nodes:
                assert floats[v] == pytest.approx(float(oracle[v]), abs=1e-12)

    def test_disconnected_pairs_contribute_nothing(self):
        g = Graph(nodes=("a", "b", "c", "d"), edges=(("a", "b"), ("c", "d")))
        assert all(v == 0.0 for v in betweenness(g).values())

    def test_isolated_node_changes_nothing(self):
        g1 = Graph(nodes=("a", "b", "c"), edges=(("a", "b"), ("b", "c")))
        g2 = Graph(nodes=("a", "b", "c", "z"), edges=(("a", "b"), ("b", "c")))
        b1 = betweenness(g1)
        b2 = betweenness(g2)
        assert all(b2[v] == b1[v] for v in g1.nodes)
        assert b2["z"] == 0.0

    def test_score_sum_matches_oracle_mass(self, rng):
        g = random_graph(rng, 8, p=0.5)
        oracle_total = sum(enumeration_oracle(g).values())
        assert sum(betweenness(g).values()) == pytest.approx(float(oracle_total), abs=1e-10)


class TestCollabTotals:
    def test_absent_institution(self, tiny_dataset):
        assert collab_total(tiny_dataset, "NOPE") == 0

    def test_both_roles_counted(self):
        ds = make_dataset([("A", "B", 10, 1), ("C", "A", 15, 2)])
        assert collab_total(ds, "A") == 25
        assert collab_total(ds, "B") == 10

    def test_matches_brute_force_recount(self, rng):
        edges = []
        for i in range(60):
            a, b = rng.choice(15, size=2, replace=False)
            edges.append((f"I{a}", f"I{b}", int(rng.integers(10, 50)), 1))
        ds = make_dataset(edges)
        totals = collab_totals(ds)
        for iid in ds.institutions:
            oracle = sum(n for r, t, n, _ in edges if r == iid or t == iid)
            assert totals[iid] == oracle == collab_total(ds, iid)


def test_compute_stats_shape(tiny_dataset):
    stats = compute_stats(tiny_dataset)
    assert set(stats) == set(tiny_dataset.institutions)
    for rec in stats.values():
        assert set(rec) == {"betweenness", "degree", "collab_total"}
