"""Betweenness centrality accumulation over a CSR adjacency.

Brandes' single-source dependency accumulation, written without explicit
predecessor lists: during the reverse pass a node's predecessors are
recognized by distance. Scores are halved at the end so each unordered
node pair contributes once (undirected convention).
"""

from __future__ import annotations

import numpy as np

from . import USE_NUMBA


def betweenness_numpy(indptr, indices):
    n = indptr.shape[0] - 1
    bc = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head, tail = 0, 1
        while head < tail:
            v = order[head]
            head += 1
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for k in range(tail - 1, 0, -1):
            w = order[k]
            coeff = (1.0 + delta[w]) / sigma[w]
            for j in range(indptr[w], indptr[w + 1]):
                v = indices[j]
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] * coeff
            bc[w] += delta[w]
    return bc / 2.0


def _build_numba_betweenness():
    from numba import njit

    @njit(cache=True)
    def betweenness_numba(indptr, indices):
        n = indptr.shape[0] - 1
        bc = np.zeros(n, dtype=np.float64)
        dist = np.empty(n, dtype=np.int64)
        sigma = np.empty(n, dtype=np.float64)
        delta = np.empty(n, dtype=np.float64)
        order = np.empty(n, dtype=np.int64)
        for s in range(n):
            for i in range(n):
                dist[i] = -1
                sigma[i] = 0.0
                delta[i] = 0.0
            dist[s] = 0
            sigma[s] = 1.0
            order[0] = s
            head, tail = 0, 1
            while head < tail:
                v = order[head]
                head += 1
                for j in range(indptr[v], indptr[v + 1]):
                    w = indices[j]
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        order[tail] = w
                        tail += 1
                    if dist[w] == dist[v] + 1:
                        sigma[w] += sigma[v]
            for k in range(tail - 1, 0, -1):
                w = order[k]
                coeff = (1.0 + delta[w]) / sigma[w]
                for j in range(indptr[w], indptr[w + 1]):
                    v = indices[j]
                    if dist[v] == dist[w] - 1:
                        delta[v] += sigma[v] * coeff
                bc[w] += delta[w]
        return bc / 2.0

    return betweenness_numba


if USE_NUMBA:
    betweenness_numba = _build_numba_betweenness()
    betweenness_csr = betweenness_numba
else:
    betweenness_csr = betweenness_numpy
