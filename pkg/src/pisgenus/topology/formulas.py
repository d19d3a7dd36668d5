"""Closed-form genera of complete and complete bipartite graphs."""

import re


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def kn_genus(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 4:
        return 0
    return _ceil_div((n - 3) * (n - 4), 12)


def kmn_genus(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if m < 2 or n < 2:
        return 0
    return _ceil_div((m - 2) * (n - 2), 4)


_NAME = re.compile(r"K(\d+)(?:,(\d+))?$")


def named_genus(name: str) -> int:
    """Genus of a pattern named ``Kn`` or ``Km,n``."""
    m = _NAME.match(name)
    if not m:
        raise ValueError(f"no closed form for pattern {name!r}")
    if m.group(2) is None:
        return kn_genus(int(m.group(1)))
    return kmn_genus(int(m.group(1)), int(m.group(2)))
