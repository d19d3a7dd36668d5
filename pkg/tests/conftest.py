import functools

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=100)
settings.load_profile("default")

_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""
    def record(num: int, ok: bool, detail: str) -> None:
        _CRITERIA[num] = (ok, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        ok, detail = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")


@functools.lru_cache(maxsize=None)
def ring_bundle(spec: str):
    """(ring, lattice, graph) for a spec, shared across test modules."""
    from pisgenus.ideals import enumerate_ideals
    from pisgenus.pis import build_pis
    from pisgenus.ring import ring_from_spec

    r = ring_from_spec(spec)
    L = enumerate_ideals(r)
    return r, L, build_pis(r, L)


@pytest.fixture(scope="session")
def bundle():
    return ring_bundle
