"""Backtracking search for subdivisions of small pattern graphs.

Branch vertices are assigned first (pattern vertices in degree-descending
order, host candidates ranked by how many already-placed pattern neighbours
they touch directly), then the pattern edges whose ends are not adjacent in
the host are routed as internally disjoint paths, shortest first.
Interchangeable pattern vertices (twins) are forced onto increasing host
indices, which removes the symmetric duplicates of K_n and K_m,n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..pis import LabeledGraph, complete_bipartite, complete_graph
from .budget import Budget, BudgetExhausted


@dataclass
class SubdivisionWitness:
    pattern: str
    branch_map: list[int]
    paths: list[list[int]]
    # pattern edges in the order the paths are listed
    pattern_edges: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "pattern": self.pattern,
            "branch_map": list(self.branch_map),
            "pattern_edges": [list(e) for e in self.pattern_edges],
            "paths": [list(p) for p in self.paths],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SubdivisionWitness":
        return cls(doc["pattern"], list(doc["branch_map"]), [list(p) for p in doc["paths"]],
                   [tuple(e) for e in doc.get("pattern_edges", [])])

    def edges(self) -> list[tuple[int, int]]:
        return sorted({(min(a, b), max(a, b)) for p in self.paths for a, b in zip(p, p[1:])})


# --------------------------------------------------------------------------
# patterns


def pattern_graph(name: str) -> LabeledGraph:
    """``K5``, ``K3,3`` ... or one-point unions such as ``K3,3.K3,3``.

    In a one-point union the first vertex of each later piece is glued to
    the first vertex of the first piece.  ``+`` instead of ``.`` gives a
    vertex-disjoint union.
    """
    if "." in name or "+" in name:
        sep = "." if "." in name else "+"
        pieces = [pattern_graph(p) for p in name.split(sep)]
        labels = list(pieces[0].vertex_labels)
        edges = list(pieces[0].edges())
        for k, piece in enumerate(pieces[1:], start=1):
            remap = {}
            for v in range(piece.n):
                if sep == "." and v == 0:
                    remap[v] = 0
                else:
                    remap[v] = len(labels)
                    labels.append(f"{piece.vertex_labels[v]}_{k}")
            edges += [(remap[a], remap[b]) for a, b in piece.edges()]
        return LabeledGraph.from_edges(len(labels), edges, labels, name=name)
    body = name[1:]
    if not name.startswith("K"):
        raise ValueError(f"unknown pattern {name!r}")
    if "," in body:
        m, n = (int(x) for x in body.split(","))
        return complete_bipartite(m, n)
    return complete_graph(int(body))


def pattern_pieces(name: str) -> tuple[list[str], str]:
    for sep in (".", "+"):
        if sep in name:
            return name.split(sep), sep
    return [name], ""


# --------------------------------------------------------------------------
# search


class _Search:
    def __init__(self, host: LabeledGraph, pattern: LabeledGraph, budget: Budget):
        self.host = host
        self.pat = pattern
        self.budget = budget
        self.hn = [host.neighbors(v) for v in range(host.n)]
        self.hdeg = [len(x) for x in self.hn]
        self.pn = [set(pattern.neighbors(p)) for p in range(pattern.n)]
        self.pdeg = [len(x) for x in self.pn]
        self.order = self._vertex_order()
        self.twin_prev = self._twin_constraints()
        self.img = [-1] * pattern.n
        self.used = 0  # bitset of host branch vertices

    def _vertex_order(self) -> list[int]:
        remaining = set(range(self.pat.n))
        order: list[int] = []
        while remaining:
            placed = set(order)
            p = max(remaining, key=lambda q: (self.pdeg[q], len(self.pn[q] & placed), -q))
            order.append(p)
            remaining.remove(p)
        return order

    def _twin_constraints(self) -> dict[int, int]:
        """pattern vertex -> earlier-ordered twin whose image must be smaller."""
        prev: dict[int, int] = {}
        last_of: dict[tuple, int] = {}
        for p in self.order:
            open_key = ("o", frozenset(self.pn[p]))
            closed_key = ("c", frozenset(self.pn[p] | {p}))
            for key in (open_key, closed_key):
                if key in last_of:
                    prev[p] = last_of[key]
                last_of[key] = p
        return prev

    def run(self) -> SubdivisionWitness | None:
        if self._assign(0):
            return self.witness
        return None

    # branch vertices ---------------------------------------------------

    def _candidates(self, p: int) -> list[int]:
        placed_nb = [self.img[q] for q in self.pn[p] if self.img[q] >= 0]
        blocked = 0
        for q in range(self.pat.n):
            if self.img[q] >= 0 and q not in self.pn[p]:
                blocked |= 1 << self.img[q]
        lo = self.img[self.twin_prev[p]] if p in self.twin_prev else -1
        out = []
        for v in range(lo + 1, self.host.n):
            if self.used >> v & 1 or self.hdeg[v] < self.pdeg[p]:
                continue
            # each pattern edge at p leaves v through a distinct host edge that
            # cannot end at a branch vertex of a non-neighbour
            if (self.host.adj[v] & ~blocked).bit_count() < self.pdeg[p]:
                continue
            direct = sum(1 for w in placed_nb if self.host.adj[v] >> w & 1)
            out.append((-direct, -self.hdeg[v], v))
        out.sort()
        return [v for _, _, v in out]

    def _reachable(self, s: int, t: int) -> bool:
        """Path s..t whose interior avoids every branch vertex."""
        blocked = self.used & ~(1 << s) & ~(1 << t)
        seen = 1 << s
        frontier = 1 << s
        adj = self.host.adj
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            if nxt >> t & 1:
                return True
            nxt &= ~seen & ~blocked
            seen |= nxt
            frontier = nxt
        return False

    def _assign(self, k: int) -> bool:
        if k == len(self.order):
            return self._route_all()
        p = self.order[k]
        for v in self._candidates(p):
            self.budget.tick()
            self.img[p] = v
            self.used |= 1 << v
            ok = all(
                self.host.adj[v] >> self.img[q] & 1 or self._reachable(v, self.img[q])
                for q in self.pn[p] if self.img[q] >= 0
            )
            if ok and self._assign(k + 1):
                return True
            self.used &= ~(1 << v)
            self.img[p] = -1
        return False

    # paths ----------------------------------------------------------------

    def _route_all(self) -> bool:
        pedges = self.pat.edges()
        paths: dict[tuple[int, int], list[int]] = {}
        todo = []
        for a, b in pedges:
            u, v = self.img[a], self.img[b]
            if self.host.adj[u] >> v & 1:
                paths[a, b] = [u, v]
            else:
                todo.append((a, b))
        if self._route(todo, paths, self.used):
            self.witness = SubdivisionWitness(
                self.pat.name, list(self.img), [paths[e] for e in pedges], list(pedges))
            return True
        return False

    def _route(self, todo, paths, blocked: int) -> bool:
        if not todo:
            return True
        # most constrained edge first: the one with the longest shortest path
        best = None
        for e in todo:
            d = self._distance(self.img[e[0]], self.img[e[1]], blocked)
            if d is None:
                return False
            if best is None or d > best[0]:
                best = (d, e)
        e = best[1]
        rest = [x for x in todo if x != e]
        s, t = self.img[e[0]], self.img[e[1]]
        for path in self._paths(s, t, blocked):
            self.budget.tick()
            inner = 0
            for x in path[1:-1]:
                inner |= 1 << x
            paths[e] = path
            if self._route(rest, paths, blocked | inner):
                return True
            del paths[e]
        return False

    def _distance(self, s: int, t: int, blocked: int) -> int | None:
        free = ~blocked
        seen = 1 << s
        frontier = 1 << s
        d = 0
        adj = self.host.adj
        while frontier:
            d += 1
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            if nxt >> t & 1:
                return d
            nxt &= free & ~seen
            seen |= nxt
            frontier = nxt
        return None

    def _paths(self, s: int, t: int, blocked: int) -> Iterator[list[int]]:
        """Simple s-t paths through unblocked interiors, by increasing length."""
        n_free = self.host.n - blocked.bit_count()
        for length in range(2, n_free + 2):
            any_long = False
            for p in self._paths_of_length(s, t, blocked, length):
                if p is None:
                    any_long = True
                    continue
                yield p
            if not any_long:
                return

    def _paths_of_length(self, s, t, blocked, length):
        # yields None as a marker that longer paths might still exist
        stack = [(s, [s], (1 << s) | blocked)]
        while stack:
            v, path, avoid = stack.pop()
            remaining = length - (len(path) - 1)
            if remaining == 1:
                if self.host.adj[v] >> t & 1:
                    yield path + [t]
                continue
            cand = [w for w in self.hn[v] if not (avoid >> w & 1) and w != t]
            if not cand:
                continue
            if remaining == 2:
                yield None
                for w in reversed(cand):
                    if self.host.adj[w] >> t & 1:
                        stack.append((w, path + [w], avoid | (1 << w)))
                continue
            for w in reversed(cand):
                stack.append((w, path + [w], avoid | (1 << w)))


def find_subdivision(
    host: LabeledGraph,
    pattern: LabeledGraph | str,
    budget: Budget | int | None = None,
) -> SubdivisionWitness | None:
    """Subdivision of ``pattern`` inside ``host``.

    Returns None only after an exhaustive search; raises BudgetExhausted when
    the node or time budget runs out first.
    """
    if isinstance(pattern, str):
        pattern = pattern_graph(pattern)
    if isinstance(budget, int):
        budget = Budget(None, budget)
    budget = budget or Budget()
    if pattern.n > host.n or pattern.m > host.m:
        return None
    need = sorted((pattern.degree(p) for p in range(pattern.n)), reverse=True)
    have = sorted((host.degree(v) for v in range(host.n)), reverse=True)
    if any(h < d for h, d in zip(have, need)):
        return None
    return _Search(host, pattern, budget).run()


def split_witness(w: SubdivisionWitness) -> list[SubdivisionWitness]:
    """Break a witness of a one-point/disjoint union into per-piece witnesses."""
    names, sep = pattern_pieces(w.pattern)
    if len(names) == 1:
        return [w]
    out = []
    offset = 0
    for k, name in enumerate(names):
        piece = pattern_graph(name)
        glob = []
        for v in range(piece.n):
            if k > 0 and sep == "." and v == 0:
                glob.append(0)
            else:
                glob.append(offset)
                offset += 1
        index = {(min(a, b), max(a, b)): i for i, (a, b) in enumerate(w.pattern_edges)}
        pedges = piece.edges()
        paths = []
        for a, b in pedges:
            ga, gb = glob[a], glob[b]
            i = index[(min(ga, gb), max(ga, gb))]
            path = w.paths[i]
            if w.pattern_edges[i][0] != ga:
                path = path[::-1]
            paths.append(path)
        out.append(SubdivisionWitness(name, [w.branch_map[x] for x in glob], paths, list(pedges)))
    return out


__all__ = [
    "BudgetExhausted",
    "SubdivisionWitness",
    "find_subdivision",
    "pattern_graph",
    "split_witness",
]
