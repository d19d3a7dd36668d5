"""Ideals of a finite ring and the complete ideal lattice.

Ideals are stored as membership bitsets (``Ideal.members`` is a Python int,
bit ``a`` set iff element ``a`` belongs).  The lattice is found by closing
the set of principal ideals under pairwise sums, which reaches every ideal
because an ideal of a finite ring with unity is a finite sum of principal
ideals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .ring import FiniteRing


@dataclass(frozen=True)
class Ideal:
    members: int
    generators: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return self.members.bit_count()

    def elements(self) -> list[int]:
        m, out, i = self.members, [], 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return out

    def __contains__(self, a: int) -> bool:
        return bool(self.members >> a & 1)

    def issubset(self, other: "Ideal") -> bool:
        return self.members & ~other.members == 0


def mask_to_int(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def int_to_mask(bits: int, n: int) -> np.ndarray:
    raw = bits.to_bytes((n + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n].astype(bool)


def principal_mask(r: FiniteRing, a: int) -> np.ndarray:
    # R has unity, so {ra} is already closed under addition
    mask = np.zeros(r.order, dtype=bool)
    mask[r.mul[a]] = True
    return mask


def principal_ideal(r: FiniteRing, a: int) -> Ideal:
    return Ideal(mask_to_int(principal_mask(r, a)), (a,))


def additive_generators(r: FiniteRing) -> list[int]:
    """A small generating set of (R, +), chosen greedily by element index."""
    gens: list[int] = []
    mask = np.zeros(r.order, dtype=bool)
    mask[r.zero] = True
    for a in range(r.order):
        if not mask[a]:
            gens.append(a)
            mask = _extend_subgroup(r, mask, [a])
            if mask.all():
                break
    return gens


def _extend_subgroup(r: FiniteRing, mask: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    """Additive subgroup generated by the subgroup ``mask`` and ``gens``."""
    mask = mask.copy()
    for g in gens:
        if mask[g]:
            continue
        base = mask.copy()
        members = np.flatnonzero(base)
        x = g
        while not base[x]:
            mask[r.add[members, x]] = True
            x = int(r.add[x, g])
    return mask


def ideal_closure(r: FiniteRing, elements: Sequence[int], add_gens: Sequence[int] | None = None) -> np.ndarray:
    """Membership mask of the smallest ideal containing ``elements``."""
    if add_gens is None:
        add_gens = additive_generators(r)
    mask = np.zeros(r.order, dtype=bool)
    mask[r.zero] = True
    for a in elements:
        if mask[a]:
            continue
        mask = _extend_subgroup(r, mask, [int(r.mul[g, a]) for g in add_gens])
    return mask


def is_prime_ideal(r: FiniteRing, I: Ideal) -> bool:
    """I proper and ab in I implies a in I or b in I (checked over all pairs)."""
    mask = int_to_mask(I.members, r.order)
    if mask.all():
        return False
    return not np.any(mask[r.mul] & ~mask[:, None] & ~mask[None, :])


class IdealLattice:
    """All ideals of a ring in canonical order with cached lattice data.

    Canonical order sorts ideals by cardinality, ties broken by comparing
    the sorted member lists lexicographically.  Index 0 is always the zero
    ideal and the last index is the whole ring.
    """

    def __init__(self, ring: FiniteRing, ideals: list[Ideal]):
        self.ring = ring
        self.ideals = sorted(ideals, key=lambda I: (I.size, I.elements()))
        self._index = {I.members: k for k, I in enumerate(self.ideals)}
        self.zero_index = 0
        self.unit_index = len(self.ideals) - 1
        k = len(self.ideals)
        bits = [I.members for I in self.ideals]
        self.contains = np.array([[bits[i] & ~bits[j] == 0 for j in range(k)] for i in range(k)])
        # contains[i, j]: ideal i is a subset of ideal j
        self.sum_table = np.empty((k, k), dtype=np.int32)
        for i in range(k):
            for j in range(i, k):
                # the lattice is closed under sums, so I+J is the smallest ideal above both
                above = np.flatnonzero(self.contains[i] & self.contains[j])
                self.sum_table[i, j] = self.sum_table[j, i] = above[0]
        self.principal_of = np.empty(ring.order, dtype=np.int32)
        for a in range(ring.order):
            self.principal_of[a] = self._index[mask_to_int(principal_mask(ring, a))]
        self.product_table = np.empty((k, k), dtype=np.int32)
        for i in range(k):
            for j in range(i, k):
                self.product_table[i, j] = self.product_table[j, i] = self._product(i, j)
        self.is_prime = np.array([is_prime_ideal(ring, I) for I in self.ideals])
        self.is_maximal = np.array([self._maximal(i) for i in range(k)])
        principal = set(int(x) for x in self.principal_of)
        self.is_principal = np.array([i in principal for i in range(k)])
        self.eta = [self._eta(i) for i in range(k)]

    def __len__(self) -> int:
        return len(self.ideals)

    def index(self, I: Ideal | int) -> int:
        return self._index[I.members if isinstance(I, Ideal) else I]

    def _product(self, i: int, j: int) -> int:
        out = self.zero_index
        mul = self.ring.mul
        for a in self.ideals[i].generators:
            for b in self.ideals[j].generators:
                out = self.sum_table[out, self.principal_of[mul[a, b]]]
        return int(out)

    def _maximal(self, i: int) -> bool:
        if i == self.unit_index:
            return False
        between = self.contains[i] & self.contains[:, self.unit_index]
        between[i] = between[self.unit_index] = False
        return not between.any()

    def _eta(self, i: int) -> int | None:
        if i == self.zero_index:
            return 1
        power, n = i, 1
        while power != self.zero_index:
            nxt = int(self.product_table[power, i])
            if nxt == power:
                return None
            power, n = nxt, n + 1
        return n

    @property
    def nonzero_proper(self) -> list[int]:
        return list(range(1, self.unit_index))

    @property
    def maximal(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.is_maximal)]

    @cached_property
    def factor_lattices(self) -> tuple["IdealLattice", ...]:
        if self.ring.factor_arity == 1:
            return (self,)
        return tuple(enumerate_ideals(f) for f in self.ring.factors)

    @cached_property
    def factor_decomposition(self) -> list[tuple[int, ...]]:
        """Per-factor ideal indices whose product is each ideal.

        Raises ValueError if some ideal is not a product of its projections.
        """
        if self.ring.factor_arity == 1:
            return [(i,) for i in range(len(self))]
        proj = self.ring.factor_projection
        out = []
        for I in self.ideals:
            members = np.array(I.elements())
            coords = []
            size = 1
            for k, fl in enumerate(self.factor_lattices):
                mask = np.zeros(fl.ring.order, dtype=bool)
                mask[proj[members, k]] = True
                idx = fl.index(mask_to_int(mask))
                coords.append(idx)
                size *= fl.ideals[idx].size
            if size != I.size:
                raise ValueError("ideal is not a product of factor ideals")
            out.append(tuple(coords))
        return out

    def name(self, i: int) -> str:
        """Short printable name: per-factor generators, ``0`` and ``F1``/``R1`` shorthand."""
        fls = self.factor_lattices
        parts = []
        for k, fi in enumerate(self.factor_decomposition[i]):
            fl = fls[k]
            if fi == fl.zero_index:
                parts.append("0")
            elif fi == fl.unit_index:
                field = len(fl) == 2
                parts.append(f"{'F' if field else 'R'}{k + 1}")
            else:
                parts.append(fl.generator_name(fi))
        return " x ".join(parts)

    def generator_name(self, i: int) -> str:
        gens = self.minimal_generators(i)
        return "(" + ",".join(self.ring.elem_labels[g] for g in gens) + ")"

    def minimal_generators(self, i: int) -> tuple[int, ...]:
        """Fewest generators, preferring elements with few terms then low index."""
        cache = self.__dict__.setdefault("_mingens", {})
        if i in cache:
            return cache[i]
        target = self.ideals[i]
        weights = self.ring.elem_weights or (1,) * self.ring.order
        cands = sorted((a for a in target.elements() if a != self.ring.zero), key=lambda a: (weights[a], a))
        result: tuple[int, ...] = ()
        for size in range(1, len(cands) + 1):
            for combo in itertools.combinations(cands, size):
                acc = self.zero_index
                for a in combo:
                    acc = self.sum_table[acc, self.principal_of[a]]
                if acc == i:
                    result = combo
                    break
            if result:
                break
        cache[i] = result
        return result

    def to_json(self) -> dict:
        ring = self.ring
        rows = []
        for i, I in enumerate(self.ideals):
            rows.append({
                "index": i,
                "name": self.name(i) if i not in (self.zero_index, self.unit_index) else ("0" if i == 0 else "R"),
                "size": I.size,
                "members": [ring.elem_labels[a] for a in I.elements()],
                "generators": [ring.elem_labels[a] for a in self.minimal_generators(i)],
                "is_prime": bool(self.is_prime[i]),
                "is_maximal": bool(self.is_maximal[i]),
                "is_principal": bool(self.is_principal[i]),
                "eta": self.eta[i],
            })
        return {
            "schema": "pisgenus.lattice/1",
            "ring": ring.name,
            "order": ring.order,
            "ideal_count": len(self),
            "is_local": is_local_ring(self),
            "is_principal_ring": is_principal_ring(self),
            "ideals": rows,
        }


def enumerate_ideals(r: FiniteRing) -> IdealLattice:
    add_gens = additive_generators(r)
    principals: dict[int, int] = {}
    for a in range(r.order):
        key = mask_to_int(principal_mask(r, a))
        principals.setdefault(key, a)
    found: dict[int, tuple[int, ...]] = {key: (a,) for key, a in principals.items()}
    frontier = list(found)
    while frontier:
        nxt = []
        for key in frontier:
            gens = found[key]
            mask = int_to_mask(key, r.order)
            for pkey, a in principals.items():
                if pkey & ~key == 0:
                    continue
                new = mask_to_int(_extend_subgroup(r, mask, [int(r.mul[g, a]) for g in add_gens]))
                if new not in found:
                    found[new] = gens + (a,)
                    nxt.append(new)
        frontier = nxt
    return IdealLattice(r, [Ideal(k, g) for k, g in found.items()])


def ideal_sum(L: IdealLattice, i: int, j: int) -> int:
    return int(L.sum_table[i, j])


def is_maximal_ideal(L: IdealLattice, i: int) -> bool:
    return bool(L.is_maximal[i])


def nilpotency_index(L: IdealLattice, i: int) -> int | None:
    return L.eta[i]


def is_principal_ring(L: IdealLattice) -> bool:
    return bool(L.is_principal.all())


def is_local_ring(L: IdealLattice) -> bool:
    return int(L.is_maximal.sum()) == 1
