"""Rotation systems, face tracing and the search for low-genus embeddings.

A rotation system fixes the cyclic order of neighbours around every vertex;
it determines an orientable cellular embedding whose faces are recovered by
walking ``(u -> v)`` to ``(v -> succ_v(u))``.  Euler's formula then gives the
genus of the embedding surface: ``2 - 2g = V - E + F`` per component.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..pis import LabeledGraph
from .budget import Budget, BudgetExhausted

DEFAULT_EXHAUSTIVE_LIMIT = 200_000


class MalformedRotation(ValueError):
    pass


@dataclass
class RotationSystem:
    order: list[list[int]]

    def to_json(self) -> list[list[int]]:
        return [list(o) for o in self.order]

    @classmethod
    def from_json(cls, doc: Sequence[Sequence[int]]) -> "RotationSystem":
        return cls([list(map(int, o)) for o in doc])

    def check(self, g: LabeledGraph) -> None:
        if len(self.order) != g.n:
            raise MalformedRotation("rotation has wrong number of vertices")
        for v, o in enumerate(self.order):
            if len(o) != len(set(o)) or set(o) != set(g.neighbors(v)):
                raise MalformedRotation(f"rotation at vertex {v} is not a permutation of its neighbours")


def faces(g: LabeledGraph, rot: RotationSystem) -> list[list[tuple[int, int]]]:
    """Closed face walks as lists of directed edges."""
    rot.check(g)
    succ = {}
    for v, o in enumerate(rot.order):
        for i, u in enumerate(o):
            succ[v, u] = o[(i + 1) % len(o)]
    seen = set()
    out = []
    for u, v in g.edges():
        for start in ((u, v), (v, u)):
            if start in seen:
                continue
            walk = []
            d = start
            while d not in seen:
                seen.add(d)
                walk.append(d)
                a, b = d
                d = (b, succ[b, a])
            out.append(walk)
    return out


def trace_faces(g: LabeledGraph, rot: RotationSystem) -> int:
    return len(faces(g, rot))


def embedding_genus(g: LabeledGraph, rot: RotationSystem) -> int:
    """Sum over components of (2 - V + E - F) / 2; edgeless components count 0."""
    face_list = faces(g, rot)
    comp_of = {}
    comps = g.components()
    for c, vs in enumerate(comps):
        for v in vs:
            comp_of[v] = c
    nf = [0] * len(comps)
    for f in face_list:
        nf[comp_of[f[0][0]]] += 1
    total = 0
    for c, vs in enumerate(comps):
        e = sum(g.degree(v) for v in vs) // 2
        if e == 0:
            continue
        twice = 2 - len(vs) + e - nf[c]
        if twice % 2 or twice < 0:
            raise MalformedRotation("Euler characteristic has the wrong parity")
        total += twice // 2
    return total


def merge_rotations(n: int, parts: Iterable[tuple[Sequence[int], RotationSystem]]) -> RotationSystem:
    """Concatenate rotations of edge-disjoint subgraphs sharing only cut vertices.

    ``parts`` holds (local -> global vertex map, rotation of the part).  Gluing
    embeddings at a single vertex this way adds their genera.
    """
    order: list[list[int]] = [[] for _ in range(n)]
    for vmap, rot in parts:
        for lv, o in enumerate(rot.order):
            order[vmap[lv]].extend(vmap[u] for u in o)
    return RotationSystem(order)


# --------------------------------------------------------------------------
# dart-level machinery used by the search


class _Darts:
    """Darts 2e (u->v, u<v) and 2e+1 (v->u); face successor of d is nxt[d ^ 1]."""

    def __init__(self, g: LabeledGraph):
        self.g = g
        self.edges = g.edges()
        self.nd = 2 * len(self.edges)
        self.tail = [0] * self.nd
        self.head = [0] * self.nd
        self.out: list[list[int]] = [[] for _ in range(g.n)]
        self.dart_of: dict[tuple[int, int], int] = {}
        for e, (u, v) in enumerate(self.edges):
            for d, (a, b) in ((2 * e, (u, v)), (2 * e + 1, (v, u))):
                self.tail[d], self.head[d] = a, b
                self.out[a].append(d)
                self.dart_of[a, b] = d

    def nxt_from(self, rot: list[list[int]]) -> list[int]:
        nxt = [0] * self.nd
        for o in rot:
            k = len(o)
            for i, d in enumerate(o):
                nxt[d] = o[(i + 1) % k]
        return nxt

    def count_faces(self, nxt: list[int]) -> int:
        seen = bytearray(self.nd)
        f = 0
        for d in range(self.nd):
            if not seen[d]:
                f += 1
                x = d
                while not seen[x]:
                    seen[x] = 1
                    x = nxt[x ^ 1]
        return f

    def to_rotation(self, rot: list[list[int]]) -> RotationSystem:
        return RotationSystem([[self.head[d] for d in o] for o in rot])

    def from_rotation(self, r: RotationSystem) -> list[list[int]]:
        return [[self.dart_of[v, u] for u in o] for v, o in enumerate(r.order)]


def _greedy_rotation(dg: _Darts, rng: random.Random) -> list[list[int]]:
    """Spanning tree first, then each remaining edge into a face that sees both ends."""
    g = dg.g
    n = g.n
    rot: list[list[int]] = [[] for _ in range(n)]
    nbrs = [g.neighbors(v) for v in range(n)]
    roots = list(range(n))
    rng.shuffle(roots)
    seen: set[int] = set()
    tree = []
    for root in roots:
        if root in seen:
            continue
        seen.add(root)
        stack = [root]
        while stack:  # randomized DFS forest
            u = stack[-1]
            cand = [v for v in nbrs[u] if v not in seen]
            if not cand:
                stack.pop()
                continue
            v = rng.choice(cand)
            seen.add(v)
            tree.append((u, v))
            stack.append(v)
    for u, v in tree:
        rot[u].insert(rng.randrange(len(rot[u]) + 1), dg.dart_of[u, v])
        rot[v].insert(rng.randrange(len(rot[v]) + 1), dg.dart_of[v, u])
    in_tree = {frozenset(e) for e in tree}
    rest = [e for e in dg.edges if frozenset(e) not in in_tree]
    rng.shuffle(rest)
    for u, v in rest:
        nxt = dg.nxt_from(rot)
        present = [d for o in rot for d in o]
        # corner (w -> x) at vertex x: inserting after the incoming dart's reverse
        corners_u, corners_v = {}, {}
        face_id: dict[int, int] = {}
        for d in present:
            if d in face_id:
                continue
            fid = len(face_id)
            x = d
            while x not in face_id:
                face_id[x] = fid
                x = nxt[x ^ 1]
        for d in present:
            # d arrives at head(d); the next dart out of head(d) is nxt[d ^ 1]
            h = dg.head[d]
            if h == u:
                corners_u.setdefault(face_id[d], []).append(d ^ 1)
            elif h == v:
                corners_v.setdefault(face_id[d], []).append(d ^ 1)
        common = sorted(set(corners_u) & set(corners_v))
        if common:
            fid = rng.choice(common)
            cu, cv = rng.choice(corners_u[fid]), rng.choice(corners_v[fid])
        else:
            cu = rng.choice([c for cs in corners_u.values() for c in cs])
            cv = rng.choice([c for cs in corners_v.values() for c in cs])
        # new dart goes right after the out-dart cu (resp. cv) in the rotation
        du, dv = dg.dart_of[u, v], dg.dart_of[v, u]
        rot[u].insert(rot[u].index(cu) + 1, du)
        rot[v].insert(rot[v].index(cv) + 1, dv)
    return rot


@dataclass
class SearchResult:
    rotation: RotationSystem | None
    genus: int | None
    exhaustive: bool = False  # True when every rotation was examined
    nodes: int = 0


def _rotation_count(g: LabeledGraph) -> float:
    total = 1.0
    for v in range(g.n):
        d = g.degree(v)
        if d > 2:
            total *= math.factorial(d - 1)
    return total


def _genus_from_faces(v: int, e: int, f: int, ncomp: int) -> int:
    return (2 * ncomp - v + e - f) // 2


def _exhaustive(dg: _Darts, target: int, budget: Budget) -> SearchResult:
    g = dg.g
    ncomp = sum(1 for c in g.components() if len(c) > 1)
    v_eff = sum(len(c) for c in g.components() if len(c) > 1)
    choices = []
    for o in dg.out:
        if len(o) <= 2:
            choices.append([list(o)])
        else:
            choices.append([[o[0], *p] for p in itertools.permutations(o[1:])])
    best, best_rot = None, None
    for combo in itertools.product(*choices):
        budget.tick()
        rot = list(combo)
        gen = _genus_from_faces(v_eff, len(dg.edges), dg.count_faces(dg.nxt_from(rot)), ncomp)
        if best is None or gen < best:
            best, best_rot = gen, rot
            if best <= target:
                break
    return SearchResult(dg.to_rotation(best_rot), best, exhaustive=True, nodes=budget.nodes)


def _anneal(dg: _Darts, target: int, budget: Budget, rng: random.Random) -> SearchResult:
    g = dg.g
    comps = [c for c in g.components() if len(c) > 1]
    ncomp, v_eff, e = len(comps), sum(len(c) for c in comps), len(dg.edges)
    movable = [v for v in range(g.n) if len(dg.out[v]) > 2]
    weights = [len(dg.out[v]) for v in movable]
    best_rot, best = None, None
    restart = 0
    try:
        while True:
            rot = _greedy_rotation(dg, rng)
            nxt = dg.nxt_from(rot)
            f = dg.count_faces(nxt)
            budget.tick(e)
            gen = _genus_from_faces(v_eff, e, f, ncomp)
            if best is None or gen < best:
                best, best_rot = gen, [list(o) for o in rot]
            if best <= target or not movable:
                break
            # annealing on face count; a single rotation move changes F by an even amount
            steps = 4000 + 400 * len(movable) * (restart + 1)
            temp, cool = 1.2, (0.05 / 1.2) ** (1.0 / steps)
            cur = f
            for _ in range(steps):
                budget.tick()
                v = rng.choices(movable, weights)[0]
                o = rot[v]
                k = len(o)
                i = rng.randrange(k)
                j = rng.randrange(k - 1)
                d = o.pop(i)
                o.insert(j if j < i else j + 1, d)
                for a, x in enumerate(o):
                    nxt[x] = o[(a + 1) % k]
                nf = dg.count_faces(nxt)
                if nf >= cur or rng.random() < math.exp((nf - cur) / temp):
                    cur = nf
                    gen = _genus_from_faces(v_eff, e, cur, ncomp)
                    if gen < best:
                        best, best_rot = gen, [list(x) for x in rot]
                        if best <= target:
                            return SearchResult(dg.to_rotation(best_rot), best, nodes=budget.nodes)
                else:
                    o.remove(d)
                    o.insert(i, d)
                    for a, x in enumerate(o):
                        nxt[x] = o[(a + 1) % k]
                temp *= cool
            restart += 1
    except BudgetExhausted:
        pass
    return SearchResult(dg.to_rotation(best_rot) if best_rot else None, best, nodes=budget.nodes)


def minimize_genus(
    g: LabeledGraph,
    target: int = 0,
    budget: Budget | None = None,
    seed: int = 0,
    exhaustive_limit: float = DEFAULT_EXHAUSTIVE_LIMIT,
) -> SearchResult:
    """Best embedding found, stopping early once genus <= target.

    Graphs with at most ``exhaustive_limit`` rotation systems are enumerated
    completely (then ``exhaustive`` is set and the genus is exact).
    """
    budget = budget or Budget()
    if g.m == 0:
        return SearchResult(RotationSystem([[] for _ in range(g.n)]), 0, exhaustive=True)
    dg = _Darts(g)
    if _rotation_count(g) <= exhaustive_limit:
        try:
            return _exhaustive(dg, target, budget)
        except BudgetExhausted:
            pass
    return _anneal(dg, target, budget, random.Random(seed))


def search_embedding(
    g: LabeledGraph,
    target: int,
    budget: Budget | None = None,
    seed: int = 0,
    exhaustive_limit: float = DEFAULT_EXHAUSTIVE_LIMIT,
) -> RotationSystem | None:
    """A rotation system of genus <= target, or None when the budget ran out."""
    res = minimize_genus(g, target, budget, seed, exhaustive_limit)
    if res.genus is not None and res.genus <= target:
        return res.rotation
    return None


# --------------------------------------------------------------------------
# exact decision by edge insertion


def insertion_order(g: LabeledGraph) -> list[tuple[int, int]]:
    """Edge order for the exact search: each edge touches what is already built.

    Edges closing a cycle among placed vertices come first; otherwise the
    next vertex is the one with most placed neighbours (then highest degree).
    """
    if g.m == 0:
        return []
    deg = [g.degree(v) for v in range(g.n)]
    start = max(range(g.n), key=lambda v: (deg[v], -v))
    placed = {start}
    used: set[tuple[int, int]] = set()
    order: list[tuple[int, int]] = []
    total = g.m
    nbrs = [g.neighbors(v) for v in range(g.n)]
    while len(order) < total:
        closing = None
        for u in sorted(placed):
            for v in nbrs[u]:
                e = (min(u, v), max(u, v))
                if v in placed and e not in used:
                    closing = e
                    break
            if closing:
                break
        if closing:
            order.append(closing)
            used.add(closing)
            continue
        frontier = {v for u in placed for v in nbrs[u] if v not in placed}
        if not frontier:  # next component
            w = max((v for v in range(g.n) if v not in placed and deg[v]), key=lambda v: (deg[v], -v))
            placed.add(w)
            continue
        w = max(frontier, key=lambda v: (sum(1 for x in nbrs[v] if x in placed), deg[v], -v))
        u = min(x for x in nbrs[w] if x in placed)
        e = (min(u, w), max(u, w))
        order.append(e)
        used.add(e)
        placed.add(w)
    return order


@dataclass
class Decision:
    """Outcome of decide_genus_at_most: a rotation, or a completed refutation."""

    rotation: RotationSystem | None
    refuted: bool
    nodes: int


def decide_genus_at_most(g: LabeledGraph, k: int, budget: Budget | None = None) -> Decision:
    """Exact test of genus(g) <= k for a connected graph.

    Builds every rotation system edge by edge.  Inserting an edge either
    splits a face (genus unchanged) or joins two faces (genus + 1), so a
    partial embedding whose genus exceeds k can be cut.  Once no genus is
    left to spend, every remaining edge between placed vertices needs a
    common face, and an unplaced vertex needs one face shared by all its
    placed neighbours.  Raises BudgetExhausted when the budget runs out.
    """
    budget = budget or Budget()
    if not g.is_connected():
        raise ValueError("decide_genus_at_most needs a connected graph")
    if g.m == 0:
        return Decision(RotationSystem([[] for _ in range(g.n)]), False, 0)
    dg = _Darts(g)
    order = insertion_order(g)
    nd = dg.nd
    nxt = [-1] * nd
    out_darts: list[list[int]] = [[] for _ in range(g.n)]
    present = [False] * g.n
    first_u = order[0][0]
    present[first_u] = True
    # remaining edges by position, for the zero-budget prune
    nbrs = [g.neighbors(v) for v in range(g.n)]
    pos_of = {e: i for i, e in enumerate(order)}

    def face_labels():
        lab = {}
        fid = 0
        for o in out_darts:
            for d in o:
                for x in (d, d ^ 1):
                    if x in lab:
                        continue
                    y = x
                    while y not in lab:
                        lab[y] = fid
                        y = nxt[y ^ 1]
                    fid += 1
        return lab, fid

    def corner_faces(v, lab):
        # corner after out-dart c is walked by the face holding c ^ 1
        return {lab[c ^ 1] for c in out_darts[v]}

    def prune(i, lab):
        cache = {}

        def faces_at(v):
            if v not in cache:
                cache[v] = corner_faces(v, lab) if out_darts[v] else None
            return cache[v]

        for j in range(i, len(order)):
            a, b = order[j]
            if present[a] and present[b]:
                fa, fb = faces_at(a), faces_at(b)
                if fa is not None and fb is not None and not (fa & fb):
                    return True
        for w in range(g.n):
            if present[w]:
                continue
            common = None
            for x in nbrs[w]:
                if present[x] and pos_of[(min(w, x), max(w, x))] >= i:
                    fx = faces_at(x)
                    if fx is None:
                        continue
                    common = set(fx) if common is None else common & fx
                    if not common:
                        return True
        return False

    def insert_after(c, d, v):
        if c is None:
            nxt[d] = d
        else:
            nxt[d] = nxt[c]
            nxt[c] = d
        out_darts[v].append(d)

    def remove(c, d, v):
        out_darts[v].pop()
        if c is not None:
            nxt[c] = nxt[d]
        nxt[d] = -1

    found: list[list[list[int]]] = []

    def rec(i: int, genus: int) -> bool:
        budget.tick()
        if i == len(order):
            found.append([_cyclic(out_darts[v], nxt) for v in range(g.n)])
            return True
        u, v = order[i]
        if not present[u]:
            u, v = v, u
        du, dv = dg.dart_of[u, v], dg.dart_of[v, u]
        lab, _ = face_labels()
        if genus == k and i and prune(i, lab):
            return False
        cus = out_darts[u] or [None]
        if not present[v]:
            present[v] = True
            for cu in cus:
                insert_after(cu, du, u)
                insert_after(None, dv, v)
                if rec(i + 1, genus):
                    return True
                remove(None, dv, v)
                remove(cu, du, u)
            present[v] = False
            return False
        cvs = out_darts[v] or [None]
        same, diff = [], []
        for cu in cus:
            fu = lab[cu ^ 1] if cu is not None else None
            for cv in cvs:
                fv = lab[cv ^ 1] if cv is not None else None
                (same if fu == fv or fu is None or fv is None else diff).append((cu, cv))
        for (cu, cv), cost in [(p, 0) for p in same] + [(p, 1) for p in diff]:
            if genus + cost > k:
                break
            insert_after(cu, du, u)
            insert_after(cv, dv, v)
            if rec(i + 1, genus + cost):
                return True
            remove(cv, dv, v)
            remove(cu, du, u)
        return False

    import sys

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(order) + 100))
    try:
        ok = rec(0, 0)
    finally:
        sys.setrecursionlimit(limit)
    if ok:
        return Decision(dg.to_rotation(found[0]), False, budget.nodes)
    return Decision(None, True, budget.nodes)


def _cyclic(darts: list[int], nxt: list[int]) -> list[int]:
    if not darts:
        return []
    out = [darts[0]]
    x = nxt[darts[0]]
    while x != darts[0]:
        out.append(x)
        x = nxt[x]
    return out
