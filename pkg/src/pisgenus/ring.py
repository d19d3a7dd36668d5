"""Finite commutative rings as explicit addition/multiplication tables.

Every supported local ring is presented as a quotient of a polynomial ring
over ``Z/p^s``: an element is a coordinate vector over a fixed additive basis
(one modulus per coordinate) and multiplication is given by integer structure
constants.  Direct products are assembled from the factor tables by index
arithmetic, so each factor stays addressable through ``factor_projection``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

DEFAULT_ORDER_CAP = 4096

# Monic irreducible polynomials, lowest coefficient first (leading 1 omitted).
# Conway polynomials where they are standard; everything else falls back to
# the lexicographically first monic irreducible.
IRREDUCIBLE_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (5, 4): (2, 4, 4, 0),
    (7, 2): (3, 6),
    (7, 3): (4, 0, 6),
    (7, 4): (3, 4, 5, 0),
}
MAX_FIELD_DEGREE = 4


class RingSpecError(ValueError):
    """Raised for malformed or unsupported ring specification strings."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class OrderCapExceeded(ValueError):
    pass


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``n == p**k`` and p prime, else None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        return n, 1
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


@dataclass(frozen=True)
class LocalRingSpec:
    """One local factor.

    ``family`` is one of ``ZMod``, ``GaloisField``, ``ChainRing``, ``BiNil``,
    ``FourNil``.  ``q`` is the prime-power parameter and ``k`` the nilpotency
    exponent of ``t`` for chain rings.
    """

    family: str
    q: int = 0
    k: int = 1

    def __str__(self) -> str:
        if self.family == "ZMod":
            return f"Z/{self.q}"
        if self.family == "GaloisField":
            return f"GF({self.q})"
        if self.family == "ChainRing":
            return f"GF({self.q})[t]/t^{self.k}"
        if self.family == "BiNil":
            return f"GF({self.q})[x,y]/(x2,y2)"
        return "Z4[x]/(x2,2x)"

    @property
    def order(self) -> int:
        if self.family in ("ZMod", "GaloisField"):
            return self.q
        if self.family == "ChainRing":
            return self.q**self.k
        if self.family == "BiNil":
            return self.q**4
        return 8


@dataclass(frozen=True)
class RingDescriptor:
    factors: tuple[LocalRingSpec, ...]

    def __str__(self) -> str:
        return " x ".join(str(f) for f in self.factors)

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.order
        return out


# --------------------------------------------------------------------------
# parsing

_LOCAL_PATTERNS = [
    (re.compile(r"Z4\[x\]/\(x2,2x\)"), "FourNil"),
    (re.compile(r"Z/(\d+)"), "ZMod"),
    (re.compile(r"GF\((\d+)\)\[t\]/t\^(\d+)"), "ChainRing"),
    (re.compile(r"GF\((\d+)\)\[x,y\]/\(x2,y2\)"), "BiNil"),
    (re.compile(r"GF\((\d+)\)"), "GaloisField"),
]


def _require_prime_power(value: int, pos: int) -> None:
    if prime_power(value) is None:
        raise RingSpecError(f"{value} is not a prime power", pos)


def parse_ring_spec(text: str) -> RingDescriptor:
    """Parse e.g. ``"Z/16 x Z/4"`` or ``"GF(2)[x,y]/(x2,y2) x GF(2)"``.

    Whitespace is ignored everywhere; positions in error messages refer to
    the original string.
    """
    chars = [(c, i) for i, c in enumerate(text) if not c.isspace()]
    s = "".join(c for c, _ in chars)

    def orig(j: int) -> int:
        return chars[j][1] if j < len(chars) else len(text)

    if not s:
        raise RingSpecError("empty ring specification", 0)

    factors = []
    j = 0
    while True:
        for pat, family in _LOCAL_PATTERNS:
            m = pat.match(s, j)
            if m:
                break
        else:
            head = re.match(r"[A-Za-z0-9]+", s[j:])
            if head and head.group(0) not in ("Z", "GF", "Z4"):
                raise RingSpecError(f"unsupported ring family {head.group(0)!r}", orig(j))
            raise RingSpecError("syntax error: expected a local ring", orig(j))
        if family == "FourNil":
            factors.append(LocalRingSpec("FourNil", 4, 1))
        else:
            q = int(m.group(1))
            _require_prime_power(q, orig(m.start(1)))
            if family == "GaloisField":
                if prime_power(q)[1] > MAX_FIELD_DEGREE:
                    raise RingSpecError(f"GF({q}) exceeds supported degree {MAX_FIELD_DEGREE}", orig(m.start(1)))
                factors.append(LocalRingSpec("GaloisField", q))
            elif family == "ChainRing":
                k = int(m.group(2))
                if k < 1:
                    raise RingSpecError("chain ring exponent must be >= 1", orig(m.start(2)))
                factors.append(LocalRingSpec("ChainRing", q, k))
            else:
                factors.append(LocalRingSpec(family, q))
        j = m.end()
        if j == len(s):
            break
        if s[j] != "x":
            raise RingSpecError(f"syntax error: expected 'x' between factors, found {s[j]!r}", orig(j))
        j += 1
        if j == len(s):
            raise RingSpecError("syntax error: trailing 'x'", orig(j))
    return RingDescriptor(tuple(factors))


# --------------------------------------------------------------------------
# construction


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """Element-table model of a finite commutative ring with unity.

    Elements are the integers ``0 .. order-1``; ``add`` and ``mul`` are
    ``order x order`` lookup tables.  ``factor_projection[a]`` gives the
    coordinates of ``a`` in the direct factors, and ``factors`` holds those
    factor rings (a local ring is its own single factor).
    """

    order: int
    add: np.ndarray
    mul: np.ndarray
    zero: int
    one: int
    elem_labels: tuple[str, ...]
    factor_projection: np.ndarray
    factors: tuple["FiniteRing", ...] = ()
    name: str = ""
    is_field_hint: bool = False
    elem_weights: tuple[int, ...] = field(default=(), repr=False)

    @property
    def factor_arity(self) -> int:
        return self.factor_projection.shape[1]

    def neg(self, a: int) -> int:
        return int(np.flatnonzero(self.add[a] == self.zero)[0])

    def validate(self, chunk: int = 64) -> None:
        """Exhaustively check the commutative ring axioms; raise AssertionError."""
        n = self.order
        add, mul = self.add, self.mul
        idx = np.arange(n)
        for tbl, name in ((add, "add"), (mul, "mul")):
            if tbl.shape != (n, n) or tbl.min() < 0 or tbl.max() >= n:
                raise AssertionError(f"{name} table is not a total operation")
            if not np.array_equal(tbl, tbl.T):
                raise AssertionError(f"{name} is not commutative")
        if not (np.array_equal(add[self.zero], idx) and np.array_equal(mul[self.one], idx)):
            raise AssertionError("identity elements fail")
        if self.zero == self.one and n > 1:
            raise AssertionError("1 == 0")
        if not np.all((add == self.zero).sum(axis=1) == 1):
            raise AssertionError("additive inverses missing")
        for start in range(0, n, chunk):
            a = idx[start:start + chunk]
            # (a+b)+c == a+(b+c), (ab)c == a(bc), a(b+c) == ab+ac
            if not np.array_equal(add[add[a]], add[a][:, add]):
                raise AssertionError("addition not associative")
            if not np.array_equal(mul[mul[a]], mul[a][:, mul]):
                raise AssertionError("multiplication not associative")
            lhs = mul[a][:, add]
            ab = mul[a]
            rhs = add[ab[:, :, None], ab[:, None, :]]
            if not np.array_equal(lhs, rhs):
                raise AssertionError("distributivity fails")


def _poly_mod_basis(p: int, e: int) -> np.ndarray:
    """Rows r[m] = coordinates of a^m in basis 1, a, .., a^(e-1), m < 2e-1."""
    low = IRREDUCIBLE_POLYS.get((p, e)) or _first_irreducible(p, e)
    rows = np.zeros((max(2 * e - 1, 1), e), dtype=np.int64)
    cur = np.zeros(e, dtype=np.int64)
    cur[0] = 1
    for m in range(rows.shape[0]):
        rows[m] = cur
        # multiply by a: shift up, reduce a^e = -low
        top = cur[-1]
        cur = np.roll(cur, 1)
        cur[0] = 0
        cur = (cur - top * np.array(low, dtype=np.int64)) % p
    return rows


def _first_irreducible(p: int, e: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=e):
        if low[0] == 0:
            continue
        if all(_has_no_root_factor(low, p, e, d) for d in range(1, e // 2 + 1)):
            return low
    raise RuntimeError("no irreducible polynomial found")


def _has_no_root_factor(low, p, e, d) -> bool:
    # brute-force divisibility by every monic polynomial of degree d
    f = list(low) + [1]
    for g_low in itertools.product(range(p), repeat=d):
        g = list(g_low) + [1]
        r = f[:]
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i]
            if c:
                for j in range(d + 1):
                    r[i - d + j] = (r[i - d + j] - c * g[j]) % p
        if not any(r[:d]):
            return False
    return True


@dataclass
class _Algebra:
    """Structure-constant presentation: basis coordinates mod ``mods``."""

    mods: list[int]
    consts: np.ndarray  # consts[i, j] = coordinates of e_i * e_j
    basis_names: list[tuple[int, str]]  # (scalar-power, monomial) per coordinate
    scalar_degree: int  # e for coefficients in GF(p^e), 0 for integer scalars


def _galois_scalar_consts(p: int, e: int) -> np.ndarray:
    red = _poly_mod_basis(p, e)
    c = np.zeros((e, e, e), dtype=np.int64)
    for i in range(e):
        for j in range(e):
            c[i, j] = red[i + j]
    return c


def _tensor_algebra(p: int, e: int, monos: list[str], mono_mul) -> _Algebra:
    """GF(p^e) (x) monomial algebra; mono_mul(i, j) -> index or None."""
    sc = _galois_scalar_consts(p, e)
    nm = len(monos)
    d = e * nm
    consts = np.zeros((d, d, d), dtype=np.int64)
    for (m1, s1), (m2, s2) in itertools.product(itertools.product(range(nm), range(e)), repeat=2):
        prod = mono_mul(m1, m2)
        if prod is None:
            continue
        consts[m1 * e + s1, m2 * e + s2, prod * e:(prod + 1) * e] = sc[s1, s2]
    names = [(s, monos[m]) for m in range(nm) for s in range(e)]
    return _Algebra([p] * d, consts, names, e)


def _local_algebra(spec: LocalRingSpec) -> _Algebra:
    if spec.family == "ZMod":
        return _Algebra([spec.q], np.ones((1, 1, 1), dtype=np.int64), [(0, "")], 0)
    if spec.family == "FourNil":
        consts = np.zeros((2, 2, 2), dtype=np.int64)
        consts[0, 0, 0] = 1
        consts[0, 1, 1] = consts[1, 0, 1] = 1
        return _Algebra([4, 2], consts, [(0, ""), (0, "x")], 0)
    p, e = prime_power(spec.q)
    if spec.family == "GaloisField":
        return _tensor_algebra(p, e, [""], lambda a, b: 0)
    if spec.family == "ChainRing":
        k = spec.k
        monos = [""] + ["t" if i == 1 else f"t^{i}" for i in range(1, k)]
        return _tensor_algebra(p, e, monos, lambda a, b: a + b if a + b < k else None)
    if spec.family == "BiNil":
        # monomials 1, x, y, xy encoded as bit pairs
        return _tensor_algebra(p, e, ["", "x", "y", "xy"], lambda a, b: None if a & b else a | b)
    raise RingSpecError(f"unsupported ring family {spec.family!r}")


def _format_scalar(coeffs: Sequence[int], e: int) -> tuple[str, int]:
    """Printable GF(p^e) (or integer) coefficient and its number of terms."""
    if e <= 1:
        return str(coeffs[0]), 1
    terms = []
    for power in range(e - 1, -1, -1):
        c = coeffs[power]
        if not c:
            continue
        mono = "" if power == 0 else ("a" if power == 1 else f"a^{power}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms), len(terms)


def _element_label(digits: Sequence[int], alg: _Algebra) -> tuple[str, int]:
    e = max(alg.scalar_degree, 1)
    parts = []
    for start in range(0, len(digits), e):
        block = digits[start:start + e]
        if not any(block):
            continue
        mono = alg.basis_names[start][1]
        coef, nterms = _format_scalar(block, alg.scalar_degree)
        if not mono:
            parts.append(coef)
        elif coef == "1":
            parts.append(mono)
        else:
            parts.append(f"({coef}){mono}" if nterms > 1 else f"{coef}{mono}")
    if not parts:
        return "0", 0
    return "+".join(parts), len(parts)


def _build_local(spec: LocalRingSpec) -> FiniteRing:
    alg = _local_algebra(spec)
    mods = np.array(alg.mods, dtype=np.int64)
    n = int(np.prod(mods))
    strides = np.cumprod(np.concatenate([[1], mods[:-1]]))
    idx = np.arange(n)
    digits = (idx[:, None] // strides[None, :]) % mods[None, :]
    add = (((digits[:, None, :] + digits[None, :, :]) % mods) @ strides).astype(np.int32)

    mul = np.empty((n, n), dtype=np.int32)
    chunk = max(1, (1 << 22) // max(n * len(mods) ** 2, 1))
    for s in range(0, n, chunk):
        a = digits[s:s + chunk]
        prod = np.einsum("ai,bj,ijk->abk", a, digits, alg.consts) % mods
        mul[s:s + chunk] = prod @ strides

    labels, weights = zip(*(_element_label(list(digits[i]), alg) for i in range(n)))
    one = _find_one(mul)
    ring = FiniteRing(
        order=n, add=add, mul=mul, zero=0, one=one,
        elem_labels=tuple(labels),
        factor_projection=idx[:, None].astype(np.int32),
        name=str(spec),
        is_field_hint=spec.family == "GaloisField" or (spec.family == "ZMod" and prime_power(spec.q)[1] == 1),
        elem_weights=tuple(weights),
    )
    return ring


def _find_one(mul: np.ndarray) -> int:
    idx = np.arange(mul.shape[0])
    hits = np.flatnonzero((mul == idx[None, :]).all(axis=1))
    if not len(hits):
        raise AssertionError("multiplication has no identity")
    return int(hits[0])


def direct_product(factors: Sequence[FiniteRing], name: str = "") -> FiniteRing:
    """Direct product of rings; the first factor is the most significant digit."""
    if len(factors) == 1:
        f = factors[0]
        return FiniteRing(
            order=f.order, add=f.add, mul=f.mul, zero=f.zero, one=f.one,
            elem_labels=f.elem_labels, factor_projection=f.factor_projection,
            factors=(f,), name=name or f.name, is_field_hint=f.is_field_hint,
            elem_weights=f.elem_weights,
        )
    orders = [f.order for f in factors]
    n = int(np.prod(orders))
    proj = np.stack(np.unravel_index(np.arange(n), orders), axis=1).astype(np.int32)
    strides = [int(np.prod(orders[i + 1:])) for i in range(len(orders))]
    add = np.zeros((n, n), dtype=np.int32)
    mul = np.zeros((n, n), dtype=np.int32)
    for i, f in enumerate(factors):
        c = proj[:, i]
        add += f.add[c[:, None], c[None, :]] * strides[i]
        mul += f.mul[c[:, None], c[None, :]] * strides[i]
    zero = sum(f.zero * s for f, s in zip(factors, strides))
    one = sum(f.one * s for f, s in zip(factors, strides))
    labels = tuple("(" + ",".join(f.elem_labels[c] for f, c in zip(factors, row)) + ")" for row in proj)
    weights = tuple(sum(f.elem_weights[c] for f, c in zip(factors, row)) for row in proj)
    return FiniteRing(
        order=n, add=add, mul=mul, zero=zero, one=one, elem_labels=labels,
        factor_projection=proj, factors=tuple(factors),
        name=name or " x ".join(f.name for f in factors), elem_weights=weights,
    )


def build_local_ring(spec: LocalRingSpec) -> FiniteRing:
    return direct_product([_build_local(spec)])


def build_ring(d: RingDescriptor, order_cap: int = DEFAULT_ORDER_CAP, validate: bool = False) -> FiniteRing:
    """Realize a descriptor as element tables.

    ``validate=True`` runs the exhaustive axiom check (slow above a few
    hundred elements).
    """
    if not d.factors:
        raise RingSpecError("ring needs at least one factor")
    if d.order > order_cap:
        raise OrderCapExceeded(f"ring order {d.order} exceeds cap {order_cap}")
    ring = direct_product([_build_local(f) for f in d.factors], name=str(d))
    if validate:
        ring.validate()
    return ring


def ring_from_spec(text: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteRing:
    return build_ring(parse_ring_spec(text), order_cap=order_cap)
