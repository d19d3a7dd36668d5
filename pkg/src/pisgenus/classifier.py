"""Predicted genus class of PIS(R) from local-factor data, and its check.

A non-local finite ring is a product of local rings; the prediction looks
only at a small profile of each factor (field or not, principal or not,
how many nonzero proper ideals, nilpotency of the maximal ideal, and
whether the maximal ideal is generated by two square-zero elements).
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .ideals import IdealLattice, enumerate_ideals, is_local_ring, is_principal_ring
from .pis import LabeledGraph, build_pis
from .ring import FiniteRing, build_ring, parse_ring_spec
from .topology.bounds import GenusBounds, genus_bounds
from .topology.budget import Budget


class GenusClass(IntEnum):
    PLANAR = 0
    ONE = 1
    TWO = 2
    AT_LEAST_THREE = 3

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "GenusClass":
        for k, v in _LABELS.items():
            if v.lower() == text.strip().lower():
                return k
        raise ValueError(f"unknown genus class {text!r}")


_LABELS = {
    GenusClass.PLANAR: "Planar",
    GenusClass.ONE: "One",
    GenusClass.TWO: "Two",
    GenusClass.AT_LEAST_THREE: "AtLeastThree",
}


@dataclass(frozen=True)
class FactorProfile:
    is_field: bool
    is_principal: bool
    count: int  # nonzero proper ideals
    eta_of_maximal: int
    two_generated_nilsquare: bool = False

    def to_json(self) -> dict:
        return {"is_field": self.is_field, "is_principal": self.is_principal,
                "proper_nonzero_ideal_count": self.count, "eta_of_maximal": self.eta_of_maximal,
                "two_generated_nilsquare": self.two_generated_nilsquare}


class NotLocalError(ValueError):
    pass


def _nilsquare_pair(r: FiniteRing, L: IdealLattice, m: int) -> bool:
    """Maximal ideal m needs two generators and some x, y in m with x^2 = y^2 = 0 generate it."""
    if L.is_principal[m]:
        return False
    members = np.array(L.ideals[m].elements())
    sq = members[r.mul[members, members] == r.zero]
    if len(sq) < 2:
        return False
    pi = L.principal_of[sq]
    gen = L.sum_table[np.ix_(pi, pi)]
    return bool((gen == m).any())


def profile_factor(r: FiniteRing, L: IdealLattice | None = None) -> FactorProfile:
    L = L or enumerate_ideals(r)
    if not is_local_ring(L):
        raise NotLocalError(f"{r.name} is not local")
    m = L.maximal[0]
    is_field = len(L) == 2
    return FactorProfile(
        is_field=is_field,
        is_principal=is_principal_ring(L),
        count=len(L) - 2,
        eta_of_maximal=L.eta[m],
        two_generated_nilsquare=False if is_field else _nilsquare_pair(r, L, m),
    )


def profile_factors(r: FiniteRing, lattices=None) -> list[FactorProfile]:
    if lattices is None:
        lattices = [enumerate_ideals(f) for f in r.factors]
    return [profile_factor(f, L) for f, L in zip(r.factors, lattices)]


def canonical_order(profiles) -> list[FactorProfile]:
    # fields last; among the rest the most nilpotent first
    return sorted(profiles, key=lambda p: (p.is_field, -p.eta_of_maximal, -p.count,
                                           p.is_principal, p.two_generated_nilsquare))


def matching_classes(profiles) -> set[GenusClass]:
    """Every class whose characterising condition the profiles satisfy."""
    ps = canonical_order(profiles)
    n = len(ps)
    fields = [p for p in ps if p.is_field]
    rest = [p for p in ps if not p.is_field]
    out = set()

    if (len(fields) == n and n in (2, 3)) \
            or (n == 2 and len(fields) >= 1 and all(p.is_principal for p in ps)) \
            or (n == 2 and all(p.count == 1 for p in ps)):
        out.add(GenusClass.PLANAR)

    if (n == 3 and len(fields) == 2 and rest[0].count == 1) \
            or (n == 2 and not fields and all(p.is_principal for p in ps)
                and sorted(p.eta_of_maximal for p in ps) == [2, 3]):
        out.add(GenusClass.ONE)

    if (n == 2 and len(fields) == 1 and rest[0].two_generated_nilsquare) \
            or (n == 2 and not fields and all(p.is_principal for p in ps)
                and ps[0].eta_of_maximal in (4, 5) and ps[1].eta_of_maximal == 2):
        out.add(GenusClass.TWO)
    return out


def predict(profiles) -> GenusClass:
    profiles = list(profiles)
    if len(profiles) < 2:
        raise ValueError("a single local factor is outside the classification")
    hits = matching_classes(profiles)
    if len(hits) > 1:
        raise RuntimeError(f"profiles match several classes: {sorted(hits)}")
    return hits.pop() if hits else GenusClass.AT_LEAST_THREE


# --------------------------------------------------------------------------


@dataclass
class VerificationReport:
    spec: str
    predicted: GenusClass
    bounds: GenusBounds
    verdict: str
    graph: LabeledGraph
    profiles: list[FactorProfile]
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def certificate(self) -> dict:
        return self.bounds.to_json(self.graph)

    def to_json(self) -> dict:
        cert = self.certificate()
        digest = hashlib.sha256(json.dumps(cert, sort_keys=True).encode()).hexdigest()
        return {
            "schema": "pisgenus.report/1",
            "spec": self.spec,
            "predicted": self.predicted.label,
            "lower": self.bounds.lower,
            "upper": self.bounds.upper,
            "verdict": self.verdict,
            "vertices": self.graph.n,
            "edges": self.graph.m,
            "profiles": [p.to_json() for p in self.profiles],
            "lower_certificate_kind": getattr(self.bounds.lower_certificate, "kind", None),
            "certificate_sha256": digest,
            "notes": self.notes + self.bounds.notes,
            "seconds": round(self.seconds, 3),
        }


def judge(predicted: GenusClass, lower: int, upper: int | None) -> tuple[str, list[str]]:
    """confirmed / lower-only / mismatch, with a note for every gap."""
    notes = []
    want = int(predicted)
    if predicted is GenusClass.AT_LEAST_THREE:
        if upper is not None and upper < 3:
            return "mismatch", [f"an embedding of genus {upper} exists, predicted at least 3"]
        if lower >= 3:
            return "confirmed", notes
        notes.append(f"gap: predicted at least 3, certified lower bound is {lower}")
        if lower < 2:
            notes.append("certified lower bound is below 2")
        return "lower-only", notes
    if lower > want or (upper is not None and upper < want):
        return "mismatch", [f"bounds [{lower}, {upper}] exclude predicted genus {want}"]
    if lower == want and upper == want:
        return "confirmed", notes
    notes.append(f"gap: bounds [{lower}, {upper}] do not pin down genus {want}")
    return "lower-only", notes


def verify(
    spec: str,
    budget: Budget | None = None,
    seed: int = 0,
    patterns: list[str] | None = None,
    order_cap: int | None = None,
) -> VerificationReport:
    t0 = time.monotonic()
    desc = parse_ring_spec(spec)
    r = build_ring(desc) if order_cap is None else build_ring(desc, order_cap=order_cap)
    L = enumerate_ideals(r)
    g = build_pis(r, L)
    profiles = profile_factors(r, list(L.factor_lattices) if r.factor_arity > 1 else None)
    predicted = predict(profiles)
    # for an open-ended class there is nothing to gain past genus 3
    goal = 3 if predicted is GenusClass.AT_LEAST_THREE else None
    bounds = genus_bounds(g, budget or Budget(), seed=seed, patterns=patterns, lower_goal=goal)
    verdict, notes = judge(predicted, bounds.lower, bounds.upper)
    return VerificationReport(spec, predicted, bounds, verdict, g, profiles, notes, time.monotonic() - t0)
