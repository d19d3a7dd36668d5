"""Simple labelled graphs and the prime ideal sum graph of a ring."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .ideals import IdealLattice
from .ring import FiniteRing

GRAPH_SCHEMA = "pisgenus.graph/1"


@dataclass
class LabeledGraph:
    """Simple undirected graph on vertices ``0..n-1`` with dense bitset rows."""

    vertex_labels: list[str]
    adj: list[int] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        if not self.adj:
            self.adj = [0] * len(self.vertex_labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None, name: str = "") -> "LabeledGraph":
        g = cls(list(labels) if labels is not None else [str(i) for i in range(n)], name=name)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @property
    def n(self) -> int:
        return len(self.vertex_labels)

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("loops are not allowed")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        row, out = self.adj[v], []
        while row:
            low = row & -row
            out.append(low.bit_length() - 1)
            row ^= low
        return out

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.neighbors(u) if u < v]

    def induced(self, vertices: Iterable[int]) -> tuple["LabeledGraph", list[int]]:
        """Induced subgraph plus the map new index -> old index."""
        keep = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(keep)}
        sub = LabeledGraph([self.vertex_labels[v] for v in keep], name=self.name)
        for u in keep:
            for v in self.neighbors(u):
                if v in pos and u < v:
                    sub.add_edge(pos[u], pos[v])
        return sub, keep

    def edge_subgraph(self, edges: Iterable[tuple[int, int]]) -> tuple["LabeledGraph", list[int]]:
        edges = list(edges)
        keep = sorted({v for e in edges for v in e})
        pos = {v: i for i, v in enumerate(keep)}
        sub = LabeledGraph([self.vertex_labels[v] for v in keep], name=self.name)
        for u, v in edges:
            sub.add_edge(pos[u], pos[v])
        return sub, keep

    def components(self) -> list[list[int]]:
        seen, comps = 0, []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp, frontier = 1 << s, 1 << s
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= nxt
            seen |= comp
            comps.append(list(_bits(comp)))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges():
            a[u, v] = a[v, u] = True
        return a

    def __eq__(self, other) -> bool:
        return isinstance(other, LabeledGraph) and self.vertex_labels == other.vertex_labels and self.adj == other.adj


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def complete_graph(n: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)], name=f"K{n}")


def complete_bipartite(m: int, n: int) -> LabeledGraph:
    labels = [f"a{i}" for i in range(m)] + [f"b{j}" for j in range(n)]
    edges = [(i, m + j) for i in range(m) for j in range(n)]
    return LabeledGraph.from_edges(m + n, edges, labels, name=f"K{m},{n}")


def cycle_graph(n: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def build_pis(r: FiniteRing, L: IdealLattice) -> LabeledGraph:
    """Vertices: nonzero proper ideals in lattice order; I ~ J iff I + J is prime."""
    verts = L.nonzero_proper
    g = LabeledGraph([L.name(i) for i in verts], name=r.name)
    for a, i in enumerate(verts):
        for b in range(a + 1, len(verts)):
            if L.is_prime[L.sum_table[i, verts[b]]]:
                g.add_edge(a, b)
    return g


def export_graph(g: LabeledGraph, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(graph_to_json(g), indent=1)
    if fmt == "dot":
        lines = [f"graph {json.dumps(g.name or 'G')} {{"]
        for v, label in enumerate(g.vertex_labels):
            lines.append(f"  {v} [label={json.dumps(label)}];")
        for u, v in g.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}")


def graph_to_json(g: LabeledGraph) -> dict:
    return {
        "schema": GRAPH_SCHEMA,
        "name": g.name,
        "vertices": list(g.vertex_labels),
        "edges": [list(e) for e in g.edges()],
    }


def graph_from_json(doc: dict | str) -> LabeledGraph:
    if isinstance(doc, str):
        doc = json.loads(doc)
    n = len(doc["vertices"])
    for u, v in doc["edges"]:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValueError(f"bad edge {[u, v]}")
    return LabeledGraph.from_edges(n, (tuple(e) for e in doc["edges"]), doc["vertices"], name=doc.get("name", ""))
