import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pisgenus.ideals import principal_ideal
from pisgenus.ring import (
    LocalRingSpec,
    OrderCapExceeded,
    RingSpecError,
    build_ring,
    parse_ring_spec,
    ring_from_spec,
)


def elem(r, label):
    return r.elem_labels.index(label)


# --- parsing ------------------------------------------------------------


def test_parse_two_cyclic_factors():
    d = parse_ring_spec("Z/16 x Z/4")
    assert d.factors == (LocalRingSpec("ZMod", 16), LocalRingSpec("ZMod", 4))


def test_parse_binil_times_field():
    d = parse_ring_spec("GF(2)[x,y]/(x2,y2) x GF(2)")
    assert [f.family for f in d.factors] == ["BiNil", "GaloisField"]
    assert d.factors[0].q == 2 and d.order == 32


def test_parse_is_whitespace_insensitive():
    assert parse_ring_spec("Z/4xGF( 3 )") == parse_ring_spec("Z/4 x GF(3)")
    assert str(parse_ring_spec("  GF(2)[t]/t^3  x Z4[x]/(x2,2x)")) == "GF(2)[t]/t^3 x Z4[x]/(x2,2x)"


def test_parse_rejects_non_prime_power():
    with pytest.raises(RingSpecError, match="12 is not a prime power"):
        parse_ring_spec("Z/12")


@pytest.mark.parametrize("text", ["", "Z/4 x", "Q/5", "GF(2)[x]/x^2", "Z/4 y Z/4", "GF(6)", "GF(2)[t]/t^0"])
def test_parse_errors(text):
    with pytest.raises(RingSpecError):
        parse_ring_spec(text)


def test_parse_error_carries_position():
    with pytest.raises(RingSpecError) as info:
        parse_ring_spec("Z/4 x GF(6)")
    assert info.value.position is not None and info.value.position > 3


# --- construction -------------------------------------------------------


def test_gf2():
    r = ring_from_spec("GF(2)")
    assert r.order == 2
    assert r.add[r.one, r.one] == r.zero


def test_z4_times_z4():
    r = ring_from_spec("Z/4 x Z/4")
    assert r.order == 16
    a = elem(r, "(2,0)")
    assert r.mul[a, a] == r.zero


def test_binil_products():
    r = ring_from_spec("GF(2)[x,y]/(x2,y2)")
    x, y = elem(r, "x"), elem(r, "y")
    assert r.order == 16
    assert r.mul[x, y] != r.zero
    assert r.mul[x, x] == r.zero and r.mul[y, y] == r.zero


def test_binil_table_against_polynomial_oracle():
    # elements as coefficient vectors over {1, x, y, xy}; multiply by hand
    r = ring_from_spec("GF(2)[x,y]/(x2,y2)")

    def poly(label):
        out = [0, 0, 0, 0]
        if label == "0":
            return out
        for term in label.split("+"):
            out[["1", "x", "y", "xy"].index(term)] = 1
        return out

    def mult(a, b):
        c = [0, 0, 0, 0]
        c[0] = a[0] * b[0]
        c[1] = a[0] * b[1] + a[1] * b[0]
        c[2] = a[0] * b[2] + a[2] * b[0]
        c[3] = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1]
        return [v % 2 for v in c]

    for i, j in itertools.product(range(16), repeat=2):
        assert poly(r.elem_labels[r.mul[i, j]]) == mult(poly(r.elem_labels[i]), poly(r.elem_labels[j]))


def test_fournil_relations():
    r = ring_from_spec("Z4[x]/(x2,2x)")
    x, two = elem(r, "x"), elem(r, "2")
    assert r.order == 8
    assert r.mul[x, x] == r.zero and r.mul[two, x] == r.zero and r.mul[two, two] == r.zero


def test_galois_field_has_inverses():
    for q in (4, 8, 9, 16, 25, 27):
        r = ring_from_spec(f"GF({q})")
        nonzero = [a for a in range(r.order) if a != r.zero]
        for a in nonzero:
            assert (r.mul[a, nonzero] == r.one).any()


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        build_ring(parse_ring_spec("Z/64 x Z/64 x Z/2"))
    assert build_ring(parse_ring_spec("Z/64 x Z/64 x Z/2"), order_cap=10_000).order == 8192


def test_projection_is_componentwise():
    r = ring_from_spec("Z/8 x GF(3)")
    f1, f2 = r.factors
    proj = r.factor_projection
    for a, b in itertools.product(range(r.order), repeat=2):
        s, p = r.add[a, b], r.mul[a, b]
        assert proj[s, 0] == f1.add[proj[a, 0], proj[b, 0]] and proj[s, 1] == f2.add[proj[a, 1], proj[b, 1]]
        assert proj[p, 0] == f1.mul[proj[a, 0], proj[b, 0]] and proj[p, 1] == f2.mul[proj[a, 1], proj[b, 1]]


ALL_SMALL = [
    "GF(2)", "GF(4)", "GF(9)", "Z/16", "Z/27", "GF(2)[t]/t^3", "GF(3)[t]/t^2",
    "GF(2)[x,y]/(x2,y2)", "Z4[x]/(x2,2x)", "Z/4 x Z/4", "GF(2) x GF(3) x GF(5)",
    "Z/8 x Z/4", "Z/16 x Z/4", "GF(2)[x,y]/(x2,y2) x GF(2)", "Z4[x]/(x2,2x) x GF(2)",
    "Z/4 x GF(2) x GF(3)", "GF(2) x Z/8", "GF(2)[x,y]/(x2,y2) x Z/4",
]


@pytest.mark.parametrize("spec", ALL_SMALL)
def test_ring_axioms_exhaustively(spec):
    ring_from_spec(spec).validate()


def test_validate_catches_broken_table():
    r = ring_from_spec("Z/4")
    bad = r.mul.copy()
    bad[2, 3] = bad[3, 2] = 1
    from dataclasses import replace
    with pytest.raises(AssertionError):
        replace(r, mul=bad).validate()


# --- principal ideals ---------------------------------------------------


def test_principal_ideal_z16():
    r = ring_from_spec("Z/16")
    I = principal_ideal(r, elem(r, "4"))
    assert sorted(r.elem_labels[a] for a in I.elements()) == ["0", "12", "4", "8"]


def test_principal_ideal_of_zero():
    for spec in ("Z/8", "GF(2)[x,y]/(x2,y2)", "Z/4 x GF(3)"):
        r = ring_from_spec(spec)
        assert principal_ideal(r, r.zero).elements() == [r.zero]


def test_principal_ideal_binil_x_plus_y():
    r = ring_from_spec("GF(2)[x,y]/(x2,y2)")
    I = principal_ideal(r, elem(r, "x+y"))
    # oracle: all products, then close under addition
    prods = {int(r.mul[a, elem(r, "x+y")]) for a in range(16)}
    closed = set(prods)
    while True:
        more = {int(r.add[a, b]) for a in closed for b in closed} - closed
        if not more:
            break
        closed |= more
    assert set(I.elements()) == closed
    assert {r.elem_labels[a] for a in closed} == {"0", "x+y", "xy", "x+y+xy"}


SPEC_PARTS = st.sampled_from(["GF(2)", "GF(3)", "GF(4)", "Z/4", "Z/8", "GF(2)[t]/t^2", "Z4[x]/(x2,2x)"])


@given(st.lists(SPEC_PARTS, min_size=1, max_size=3))
def test_random_products_are_rings(parts):
    spec = " x ".join(parts)
    r = ring_from_spec(spec)
    if r.order <= 256:
        r.validate()
    assert r.factor_arity == len(parts)
    assert r.order == int(np.prod([f.order for f in r.factors]))
