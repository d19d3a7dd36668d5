"""Slow reference computations used only by the tests."""

import itertools
import math

import numpy as np

from pisgenus.ideals import enumerate_ideals, int_to_mask, mask_to_int


def product_oracle(r):
    """Ideals and prime ideals of a product ring, built from the factors alone."""
    fls = [enumerate_ideals(f) for f in r.factors]
    proj = r.factor_projection
    ideals, primes = set(), set()
    for combo in itertools.product(*[range(len(fl)) for fl in fls]):
        ok = np.ones(r.order, dtype=bool)
        for k, (fl, i) in enumerate(zip(fls, combo)):
            ok &= int_to_mask(fl.ideals[i].members, fl.ring.order)[proj[:, k]]
        bits = mask_to_int(ok)
        ideals.add(bits)
        full = [i == fl.unit_index for fl, i in zip(fls, combo)]
        for k, (fl, i) in enumerate(zip(fls, combo)):
            if all(full[:k] + full[k + 1:]) and fl.is_prime[i]:
                primes.add(bits)
    return ideals, primes


def element_prime(r, mask: np.ndarray) -> bool:
    """Definition check: proper, and ab in I forces a in I or b in I."""
    if mask.all():
        return False
    out = np.flatnonzero(~mask)
    return not mask[r.mul[np.ix_(out, out)]].any()


def element_pis_edges(r, L) -> set[tuple[int, int]]:
    """PIS adjacency from element sums {a+b} and the element-level prime test."""
    verts = L.nonzero_proper
    members = [np.array(L.ideals[i].elements()) for i in verts]
    cache: dict[int, bool] = {}
    edges = set()
    for a, b in itertools.combinations(range(len(verts)), 2):
        s = np.zeros(r.order, dtype=bool)
        s[r.add[np.ix_(members[a], members[b])].ravel()] = True
        key = mask_to_int(s)
        if key not in cache:
            cache[key] = element_prime(r, s)
        if cache[key]:
            edges.add((a, b))
    return edges


def brute_genus(n: int, edges) -> int:
    """Minimum genus over every rotation system of a connected graph (tiny graphs only)."""
    nb = [[] for _ in range(n)]
    for u, v in edges:
        nb[u].append(v)
        nb[v].append(u)
    choices = []
    for v in range(n):
        o = nb[v]
        if len(o) <= 2:
            choices.append([list(o)])
        else:
            choices.append([[o[0], *p] for p in itertools.permutations(o[1:])])
    best = math.inf
    e = len(edges)
    for combo in itertools.product(*choices):
        succ = {}
        for v, o in enumerate(combo):
            for i, u in enumerate(o):
                succ[v, u] = o[(i + 1) % len(o)]
        left = set(succ)
        f = 0
        while left:
            d = left.pop()
            f += 1
            u, v = d
            cur = (v, succ[v, u])
            while cur != d:
                left.discard(cur)
                u, v = cur
                cur = (v, succ[v, u])
        best = min(best, (2 - n + e - f) // 2)
        if best == 0:
            break
    return best
