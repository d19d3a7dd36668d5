"""Acceptance criteria 1-9, each at its stated tolerance.

Every criterion records one PASS/FAIL line (printed at the end of the pytest
run).  Sub-checks that cannot hold for mathematical reasons live in their own
strict-xfail tests, so the criterion line reads FAIL while the suite stays
green; the reasons are spelled out in the xfail markers.

Run directly with ``python tests/test_acceptance.py``.
"""

import json
import random
import sys
import time

import pytest

from pisgenus.classifier import (
    FactorProfile,
    GenusClass,
    matching_classes,
    predict,
    verify,
)
from pisgenus.cli import load_manifest, main
from pisgenus.pis import LabeledGraph, complete_bipartite, complete_graph
from pisgenus.topology.bounds import genus_bounds
from pisgenus.topology.budget import Budget
from pisgenus.topology.embedding import RotationSystem, faces
from pisgenus.topology.formulas import kmn_genus, kn_genus

from oracles import element_pis_edges, product_oracle

pytestmark = pytest.mark.slow

PLANAR = ["GF(2) x GF(3)", "GF(2) x GF(3) x GF(5)", "Z/4 x Z/4", "GF(2) x Z/8"]
GENUS_ONE = ["Z/4 x GF(2) x GF(3)", "Z/8 x Z/4"]
GENUS_TWO = ["Z/16 x Z/4", "Z/32 x Z/4", "GF(2)[x,y]/(x2,y2) x GF(2)"]
FIVE_FIELDS = "GF(2) x GF(3) x GF(5) x GF(7) x GF(11)"
AT_LEAST_THREE = ["Z/64 x Z/4", "Z/8 x Z/8", "GF(2)[x,y]/(x2,y2) x Z/4", "GF(2) x GF(3) x GF(5) x GF(7)"]
PROBE = "Z4[x]/(x2,2x) x GF(2)"
# these two have genus-2 embeddings, so "at least 3" is refuted outright
REFUTED = ["Z/64 x Z/4", "Z/8 x Z/8"]

_CASES = {c.spec: c for c in load_manifest(None)}
_REPORTS: dict[str, tuple] = {}


def report(spec):
    """VerificationReport and wall time, computed once per ring with the manifest budget."""
    if spec not in _REPORTS:
        case = _CASES[spec]
        t0 = time.monotonic()
        rep = verify(spec, Budget(case.budget_ms or 60_000, case.budget_nodes or 10_000_000),
                     patterns=case.patterns)
        _REPORTS[spec] = (rep, time.monotonic() - t0)
    return _REPORTS[spec]


def summary(specs):
    parts = []
    for s in specs:
        rep, secs = report(s)
        parts.append(f"{s} [{rep.bounds.lower},{rep.bounds.upper}] {rep.verdict} {secs:.1f}s")
    return "; ".join(parts)


# --------------------------------------------------------------------------


def test_criterion_1_formulas_and_exact_solver(criterion):
    table = all(kn_genus(n) == (0 if n < 3 else -(-(n - 3) * (n - 4) // 12)) for n in range(1, 13))
    table &= all(kmn_genus(m, n) == (0 if min(m, n) < 2 else -(-(m - 2) * (n - 2) // 4))
                 for m in range(1, 9) for n in range(1, 9))
    graphs = [(f"K{n}", complete_graph(n), kn_genus(n)) for n in (3, 4, 5, 6)]
    graphs += [(f"K{m},{n}", complete_bipartite(m, n), kmn_genus(m, n)) for m, n in ((3, 3), (4, 4), (5, 4))]
    t0 = time.monotonic()
    bad = []
    for name, g, want in graphs:
        b = genus_bounds(g, Budget(60_000, 10**7))
        if not (b.lower == b.upper == want):
            bad.append(f"{name}: [{b.lower},{b.upper}] vs {want}")
    secs = time.monotonic() - t0
    ok = table and not bad and secs < 120
    criterion(1, ok, f"formula tables {'agree' if table else 'DISAGREE'}; exact solver on 7 graphs "
                     f"{'agrees' if not bad else bad} in {secs:.1f}s (limit 120s)")
    assert ok


def test_criterion_2_planar(criterion):
    ok = True
    for s in PLANAR:
        rep, secs = report(s)
        ok &= (rep.bounds.lower, rep.bounds.upper) == (0, 0) and rep.verdict == "confirmed" and secs < 10
    criterion(2, ok, summary(PLANAR) + " (limit 10s each)")
    assert ok


def test_criterion_3_genus_one(criterion):
    ok = True
    for s in GENUS_ONE:
        rep, secs = report(s)
        ok &= (rep.bounds.lower, rep.bounds.upper) == (1, 1) and rep.verdict == "confirmed" and secs < 60
    criterion(3, ok, summary(GENUS_ONE) + " (limit 60s each)")
    assert ok


def _named_genus_two_certificate(cert) -> bool:
    """A K5,4 subdivision, or two K3,3 subdivisions sitting in different blocks."""
    if cert is None:
        return False
    if cert.kind == "subdivision":
        return cert.witness.pattern == "K5,4"
    if cert.kind == "blocksum":
        return len(cert.parts) == 2 and all(
            p.kind == "subdivision" and p.witness.pattern == "K3,3" for p in cert.parts)
    return False


def _rotation_euler_sum(rep) -> int:
    g = rep.graph
    nf = len(faces(g, RotationSystem(rep.bounds.upper_certificate.order)))
    return 2 - g.n + g.m - nf


def test_criterion_4_genus_two(criterion):
    core, kinds = True, []
    for s in GENUS_TWO:
        rep, secs = report(s)
        core &= (rep.bounds.lower, rep.bounds.upper) == (2, 2) and rep.verdict == "confirmed" and secs < 300
        core &= _rotation_euler_sum(rep) == 4
        kinds.append(f"{s}: {rep.bounds.lower_certificate.kind}")
    named = all(_named_genus_two_certificate(report(s)[0].bounds.lower_certificate) for s in GENUS_TWO)
    criterion(4, core and named,
              summary(GENUS_TWO) + f"; 2-V+E-F = 4 for all: {core}; lower certificates: {', '.join(kinds)}"
              + ("" if named else " (the GF(2)[x,y]/(x2,y2) x GF(2) graph contains neither pattern,"
                                  " so its lower bound comes from an exhaustive refutation)"))
    assert core


@pytest.mark.xfail(strict=True, reason="PIS(GF(2)[x,y]/(x2,y2) x GF(2)) contains no K5,4 subdivision and "
                                       "no pair of K3,3 subdivisions in different blocks")
def test_criterion_4_lower_certificate_kind():
    assert all(_named_genus_two_certificate(report(s)[0].bounds.lower_certificate) for s in GENUS_TWO)


def test_criterion_5_at_least_three(criterion):
    rep, secs = report(FIVE_FIELDS)
    k55 = [c for c in rep.bounds.supporting if c.kind == "subdivision" and c.witness.pattern == "K5,5"]
    five_ok = rep.bounds.lower >= 3 and bool(k55) and secs < 300
    lower_two = all(report(s)[0].bounds.lower >= 2 for s in AT_LEAST_THREE)
    verdicts = []
    for s in AT_LEAST_THREE:
        r = report(s)[0]
        if r.bounds.lower >= 3:
            verdicts.append(True)
        else:
            verdicts.append(r.verdict == "lower-only" and any("gap" in n for n in r.notes))
    ok = five_ok and lower_two and all(verdicts)
    criterion(5, ok, f"{FIVE_FIELDS}: lower {rep.bounds.lower}, K5,5 witness {'found' if k55 else 'MISSING'}, "
                     f"{secs:.1f}s (limit 300s); " + summary(AT_LEAST_THREE)
              + ("" if all(verdicts) else "; genus-2 embeddings exist for " + ", ".join(REFUTED)))
    assert five_ok and lower_two


@pytest.mark.xfail(strict=True, reason="both graphs have explicit genus-2 rotations, re-checked by the "
                                       "independent checker, so their verdict is mismatch")
def test_criterion_5_refuted_cases_verdict():
    for s in REFUTED:
        r = report(s)[0]
        assert r.bounds.lower >= 3 or r.verdict == "lower-only"


def test_criterion_5_refuted_cases_have_genus_two(tmp_path):
    # the finding behind the xfail above, checked independently
    from pisgenus.checker import check_certificate
    for s in REFUTED:
        rep = report(s)[0]
        cert = rep.certificate()
        res = check_certificate(cert["graph"], cert)
        assert res.ok and res.upper == 2


def test_criterion_6_oracles(criterion, bundle):
    specs = PLANAR + GENUS_ONE + GENUS_TWO + [FIVE_FIELDS] + AT_LEAST_THREE
    bad = []
    for s in specs:
        r, L, g = bundle(s)
        ideals, primes = product_oracle(r)
        if {I.members for I in L.ideals} != ideals:
            bad.append(f"{s}: ideals")
        if {I.members for I, p in zip(L.ideals, L.is_prime) if p} != primes:
            bad.append(f"{s}: primes")
        if set(g.edges()) != element_pis_edges(r, L):
            bad.append(f"{s}: edges")
    criterion(6, not bad, f"{len(specs)} rings, element-level adjacency and product lattice "
                          + ("match exactly" if not bad else f"differ: {bad}"))
    assert not bad


def test_criterion_7_certificates(criterion, tmp_path, capsys):
    specs = PLANAR + GENUS_ONE + GENUS_TWO + [FIVE_FIELDS] + AT_LEAST_THREE + [PROBE]
    bad, witnesses, rotations = [], 0, 0
    t0 = time.monotonic()
    for i, s in enumerate(specs):
        cert = report(s)[0].certificate()
        gpath, cpath = tmp_path / f"g{i}.json", tmp_path / f"c{i}.json"
        gpath.write_text(json.dumps(cert["graph"]))
        cpath.write_text(json.dumps(cert))
        if main(["--verify-certificate", str(gpath), str(cpath)]) != 0:
            bad.append(s)
        witnesses += json.dumps(cert).count('"witness"')
        rotations += cert["upper_certificate"] is not None
    capsys.readouterr()
    secs = time.monotonic() - t0
    criterion(7, not bad, f"{len(specs)} certificates ({witnesses} subdivision witnesses, {rotations} rotations) "
                          f"re-checked by the independent checker in {secs:.1f}s"
              + ("" if not bad else f"; rejected: {bad}"))
    assert not bad


# --------------------------------------------------------------------------

FIELD = FactorProfile(True, True, 0, 1, False)


def _random_profile(rng):
    kind = rng.randrange(3)
    if kind == 0:
        return FIELD
    eta = rng.randint(2, 6)
    if kind == 1:
        return FactorProfile(False, True, eta - 1, eta, False)
    return FactorProfile(False, False, rng.randint(3, 6), eta, rng.random() < 0.5)


def _random_graph(rng):
    n = rng.randint(3, 10)
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    for _ in range(rng.randint(0, 2 * n)):
        u, v = rng.sample(range(n), 2)
        edges.add((min(u, v), max(u, v)))
    g = LabeledGraph.from_edges(n, sorted(edges))
    order = []
    for v in range(n):
        o = g.neighbors(v)
        rng.shuffle(o)
        order.append(o)
    return g, RotationSystem(order)


def test_criterion_8_invariants(criterion):
    trials = 10_000
    rng = random.Random(0)
    t0 = time.monotonic()
    fails = {"handshake": 0, "parity": 0, "totality": 0, "permutation": 0, "exclusion": 0}
    for _ in range(trials):
        g, rot = _random_graph(rng)
        fs = faces(g, rot)
        if sum(len(f) for f in fs) != 2 * g.m:
            fails["handshake"] += 1
        if (2 - g.n + g.m - len(fs)) % 2:
            fails["parity"] += 1
    for _ in range(trials):
        ps = [_random_profile(rng) for _ in range(rng.randint(2, 5))]
        try:
            c = predict(ps)
        except RuntimeError:
            fails["totality"] += 1
            continue
        if c not in set(GenusClass):
            fails["totality"] += 1
        shuffled = ps[:]
        rng.shuffle(shuffled)
        if predict(shuffled) != c:
            fails["permutation"] += 1
        if len(matching_classes(ps)) > 1:
            fails["exclusion"] += 1
    secs = time.monotonic() - t0
    ok = not any(fails.values()) and secs < 60
    criterion(8, ok, f"{trials} trials per family, failures {fails}, {secs:.1f}s (limit 60s)")
    assert ok


def test_criterion_9_open_question_probe(criterion):
    rep, secs = report(PROBE)
    lo, up = rep.bounds.lower, rep.bounds.upper
    consistent = up is not None and lo <= up
    two_sided = consistent and lo == up
    matches = two_sided and lo == int(GenusClass.TWO)
    criterion(9, consistent and two_sided,
              f"{PROBE}: bounds [{lo},{up}] in {secs:.1f}s; predicted {rep.predicted.label}; "
              f"{'matches' if matches else 'does NOT match'} the predicted class")
    assert consistent and two_sided


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
