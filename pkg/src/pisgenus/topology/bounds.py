"""Certified genus intervals.

Every bound carries a certificate that can be re-checked without the search
code: lower bounds come from the Euler count on a block, a subdivision of a
graph with known genus, an exhaustive refutation, or a sum of such
certificates living in distinct blocks; the upper bound is a rotation system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..pis import LabeledGraph, graph_to_json
from .budget import Budget, BudgetExhausted
from .embedding import (
    RotationSystem,
    decide_genus_at_most,
    embedding_genus,
    merge_rotations,
    minimize_genus,
    trace_faces,
)
from .formulas import named_genus
from .structure import block_edges, euler_lower_bound, girth
from .subdivision import SubdivisionWitness, find_subdivision, pattern_pieces, split_witness

CERT_SCHEMA = "pisgenus.certificate/1"

# blocks with more edges than this skip the exact refutation search
EXACT_EDGE_LIMIT = 100

# pattern searches tried per block, grouped by the genus they certify
PATTERNS_BY_GENUS = {
    3: ["K5,5", "K5,4.K3,3", "K3,3.K3,3.K3,3"],
    2: ["K5,4", "K3,3.K3,3", "K3,3+K3,3"],
    1: ["K3,3", "K5"],
}


def pattern_genus(name: str) -> int:
    pieces, _ = pattern_pieces(name)
    return sum(named_genus(p) for p in pieces)


# --------------------------------------------------------------------------
# lower-bound certificates


@dataclass
class EulerCert:
    vertices: list[int]
    girth: float
    genus: int
    kind: str = "euler"

    def to_json(self) -> dict:
        return {"kind": "euler", "vertices": self.vertices,
                "girth": None if self.girth == math.inf else int(self.girth), "genus": self.genus}


@dataclass
class SubdivisionCert:
    witness: SubdivisionWitness
    genus: int
    kind: str = "subdivision"

    def to_json(self) -> dict:
        return {"kind": "subdivision", "witness": self.witness.to_json(), "genus": self.genus}


@dataclass
class ExhaustiveCert:
    """The subgraph induced on ``vertices`` has no embedding of genus < ``genus``."""

    vertices: list[int]
    genus: int
    nodes: int = 0
    kind: str = "exhaustive"

    def to_json(self) -> dict:
        return {"kind": "exhaustive", "vertices": self.vertices, "genus": self.genus, "nodes": self.nodes}


@dataclass
class BlockSumCert:
    parts: list
    kind: str = "blocksum"

    @property
    def genus(self) -> int:
        return sum(p.genus for p in self.parts)

    def to_json(self) -> dict:
        return {"kind": "blocksum", "genus": self.genus, "parts": [p.to_json() for p in self.parts]}


def cert_from_json(doc: dict):
    kind = doc["kind"]
    if kind == "euler":
        g = doc["girth"]
        return EulerCert(list(doc["vertices"]), math.inf if g is None else g, doc["genus"])
    if kind == "subdivision":
        return SubdivisionCert(SubdivisionWitness.from_json(doc["witness"]), doc["genus"])
    if kind == "exhaustive":
        return ExhaustiveCert(list(doc["vertices"]), doc["genus"], doc.get("nodes", 0))
    if kind == "blocksum":
        return BlockSumCert([cert_from_json(p) for p in doc["parts"]])
    raise ValueError(f"unknown certificate kind {kind!r}")


def _as_blocksum(certs: list):
    """Flatten composite witnesses so every part sits inside one block."""
    parts = []
    for c in certs:
        if isinstance(c, SubdivisionCert) and len(pattern_pieces(c.witness.pattern)[0]) > 1:
            parts += [SubdivisionCert(w, named_genus(w.pattern)) for w in split_witness(c.witness)]
        elif isinstance(c, BlockSumCert):
            parts += c.parts
        elif c.genus > 0:
            parts.append(c)
    if len(parts) == 1:
        return parts[0]
    return BlockSumCert(parts)


def _relabel(cert, vmap: list[int]):
    if isinstance(cert, EulerCert):
        return EulerCert([vmap[v] for v in cert.vertices], cert.girth, cert.genus)
    if isinstance(cert, ExhaustiveCert):
        return ExhaustiveCert([vmap[v] for v in cert.vertices], cert.genus, cert.nodes)
    if isinstance(cert, SubdivisionCert):
        w = cert.witness
        return SubdivisionCert(SubdivisionWitness(
            w.pattern, [vmap[v] for v in w.branch_map], [[vmap[v] for v in p] for p in w.paths],
            list(w.pattern_edges)), cert.genus)
    return BlockSumCert([_relabel(p, vmap) for p in cert.parts])


# --------------------------------------------------------------------------


@dataclass
class GenusBounds:
    lower: int
    upper: int | None
    lower_certificate: object | None
    upper_certificate: RotationSystem | None
    faces: int | None = None
    supporting: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    def to_json(self, g: LabeledGraph | None = None) -> dict:
        doc = {
            "schema": CERT_SCHEMA,
            "lower": self.lower,
            "upper": self.upper,
            "lower_certificate": self.lower_certificate.to_json() if self.lower_certificate else None,
            "upper_certificate": None if self.upper_certificate is None else {
                "rotation": self.upper_certificate.to_json(), "faces": self.faces},
            "supporting": [c.to_json() for c in self.supporting],
            "notes": list(self.notes),
        }
        if g is not None:
            doc["graph"] = graph_to_json(g)
        return doc


@dataclass
class _BlockResult:
    lower: int
    cert: object
    upper: int
    rotation: RotationSystem
    notes: list[str]


def _block_bounds(b: LabeledGraph, budget: Budget, seed: int, exact_search: bool,
                  lower_goal: int | None = None) -> _BlockResult:
    notes: list[str] = []
    gam = girth(b)
    lower = euler_lower_bound(b)
    cert = EulerCert(list(range(b.n)), gam, lower)

    # subdivision certificates, highest genus first
    for gen in sorted(PATTERNS_BY_GENUS, reverse=True):
        if gen <= lower:
            break
        hit = None
        for name in PATTERNS_BY_GENUS[gen]:
            try:
                w = find_subdivision(b, name, budget.child(0.15))
            except BudgetExhausted:
                notes.append(f"{name}: search budget exhausted")
                continue
            if w is not None:
                hit = SubdivisionCert(w, pattern_genus(name))
                break
        if hit is not None:
            lower, cert = hit.genus, hit
            break

    res = minimize_genus(b, lower, budget.child(0.2), seed)
    upper, rot = res.genus, res.rotation
    if res.exhaustive and upper > lower:
        lower, cert = upper, ExhaustiveCert(list(range(b.n)), upper, res.nodes)

    # close the gap by exact refutation, one genus at a time
    if exact_search and lower < upper and b.m > EXACT_EDGE_LIMIT:
        notes.append(f"block with {b.m} edges is too large for the exact search")
        exact_search = False
    while exact_search and lower < upper and (lower_goal is None or lower < lower_goal):
        try:
            dec = decide_genus_at_most(b, lower, budget.child(1.0))
        except BudgetExhausted:
            notes.append(f"exact search could not settle genus <= {lower}")
            break
        if dec.refuted:
            lower += 1
            cert = ExhaustiveCert(list(range(b.n)), lower, dec.nodes)
        else:
            upper, rot = lower, dec.rotation
    return _BlockResult(lower, cert, upper, rot, notes)


def genus_bounds(
    g: LabeledGraph,
    budget: Budget | None = None,
    seed: int = 0,
    exact_search: bool = True,
    patterns: list[str] | None = None,
    lower_goal: int | None = None,
) -> GenusBounds:
    """Certified [lower, upper] for the genus of ``g``.

    Genus adds over blocks, so each block is bounded separately and the
    results summed.  ``patterns`` lists extra subdivision patterns whose
    witnesses are searched for on the whole graph and attached as supporting
    certificates.  With ``lower_goal`` the exact search stops as soon as a
    block's lower bound reaches it.
    """
    budget = budget or Budget()
    blocks = block_edges(g)
    parts, rots, notes = [], [], []
    lower = 0
    upper: int | None = 0
    for comp in blocks:
        b, vmap = g.edge_subgraph(comp)
        if b.m <= 2:  # a bridge, or too small to carry genus
            rots.append((vmap, minimize_genus(b, 0).rotation))
            continue
        r = _block_bounds(b, budget, seed, exact_search, lower_goal)
        notes += r.notes
        lower += r.lower
        if r.lower > 0:
            parts.append(_relabel(r.cert, vmap))
        if r.rotation is None:
            upper = None
        elif upper is not None:
            upper += r.upper
            rots.append((vmap, r.rotation))

    lower_cert = _as_blocksum(parts) if parts else None
    # whole-graph Euler count can beat the block sum only for connected graphs
    if g.m and g.is_connected():
        e = euler_lower_bound(g)
        if e > lower:
            lower, lower_cert = e, EulerCert(list(range(g.n)), girth(g), e)
    if lower_cert is None and g.m:
        lower_cert = EulerCert(list(range(g.n)), girth(g), 0) if g.is_connected() else None

    rot, nfaces = None, None
    if upper is not None:
        rot = merge_rotations(g.n, rots)
        nfaces = trace_faces(g, rot)
        got = embedding_genus(g, rot)
        if got != upper:  # should not happen; trust the trace
            notes.append(f"merged rotation has genus {got}, block sum said {upper}")
            upper = got

    supporting = []
    for name in patterns or []:
        try:
            w = find_subdivision(g, name, budget.child(0.5))
        except BudgetExhausted:
            notes.append(f"{name}: search budget exhausted")
            continue
        if w is None:
            notes.append(f"{name}: no subdivision (exhaustive)")
            continue
        c = SubdivisionCert(w, pattern_genus(name))
        supporting.append(c)
        if c.genus > lower and len(pattern_pieces(name)[0]) == 1:
            lower, lower_cert = c.genus, c
    return GenusBounds(lower, upper, lower_cert, rot, nfaces, supporting, notes)


__all__ = [
    "BlockSumCert",
    "EulerCert",
    "ExhaustiveCert",
    "GenusBounds",
    "SubdivisionCert",
    "cert_from_json",
    "genus_bounds",
    "pattern_genus",
]
