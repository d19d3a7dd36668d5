"""Blocks, girth and the Euler-formula genus bound."""

from __future__ import annotations

import math
from collections import deque

from ..pis import LabeledGraph


def block_edges(g: LabeledGraph) -> list[list[tuple[int, int]]]:
    """Edge sets of the biconnected components (iterative Hopcroft-Tarjan)."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    nbrs = [g.neighbors(v) for v in range(n)]
    out: list[list[tuple[int, int]]] = []
    t = 0
    for root in range(n):
        if disc[root] != -1 or not nbrs[root]:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(nbrs[root]))]
        estack: list[tuple[int, int]] = []
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for v in it:
                if disc[v] == -1:
                    estack.append((u, v))
                    disc[v] = low[v] = t
                    t += 1
                    stack.append((v, u, iter(nbrs[v])))
                    advanced = True
                    break
                if v != parent and disc[v] < disc[u]:
                    estack.append((u, v))
                    low[u] = min(low[u], disc[v])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[u])
                if low[u] >= disc[p]:
                    comp = []
                    while True:
                        e = estack.pop()
                        comp.append((min(e), max(e)))
                        if e == (p, u):
                            break
                    out.append(sorted(comp))
    return out


def blocks(g: LabeledGraph) -> list[list[int]]:
    """Vertex sets of the blocks; isolated vertices form no block."""
    return [sorted({v for e in comp for v in e}) for comp in block_edges(g)]


def cut_vertices(g: LabeledGraph) -> list[int]:
    count = [0] * g.n
    for b in blocks(g):
        for v in b:
            count[v] += 1
    return [v for v in range(g.n) if count[v] > 1]


def girth(g: LabeledGraph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    nbrs = [g.neighbors(v) for v in range(g.n)]
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        q = deque([root])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v in nbrs[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    q.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def euler_bound_from_counts(v: int, e: int, gamma: float) -> int:
    """max(0, ceil((E(gamma-2) - gamma(V-2)) / (2 gamma))) for a connected graph."""
    if gamma == math.inf or e == 0:
        return 0
    gamma = int(gamma)
    num = e * (gamma - 2) - gamma * (v - 2)
    return max(0, -((-num) // (2 * gamma)))


def euler_lower_bound(g: LabeledGraph) -> int:
    if not g.is_connected():
        raise ValueError("euler_lower_bound needs a connected graph; pass components separately")
    return euler_bound_from_counts(g.n, g.m, girth(g))
