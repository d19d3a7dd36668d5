"""Wall-clock plus node-count search budgets."""

from __future__ import annotations

import time

DEFAULT_BUDGET_MS = 60_000
DEFAULT_BUDGET_NODES = 10_000_000


class BudgetExhausted(RuntimeError):
    pass


class Budget:
    """Counts search nodes and raises BudgetExhausted past either cap.

    The clock is only consulted every 256 ticks.
    """

    def __init__(self, ms: float | None = DEFAULT_BUDGET_MS, nodes: int | None = DEFAULT_BUDGET_NODES):
        self.ms = ms
        self.max_nodes = nodes
        self.nodes = 0
        self.start = time.monotonic()
        self.deadline = None if ms is None else self.start + ms / 1000.0

    def tick(self, n: int = 1) -> None:
        self.nodes += n
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExhausted(f"node budget of {self.max_nodes} exhausted")
        if self.deadline is not None and (self.nodes & 255) < n and time.monotonic() > self.deadline:
            raise BudgetExhausted(f"time budget of {self.ms} ms exhausted")

    def expired(self) -> bool:
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            return True
        return self.deadline is not None and time.monotonic() > self.deadline

    def elapsed_ms(self) -> float:
        return (time.monotonic() - self.start) * 1000.0

    def remaining_ms(self) -> float | None:
        if self.deadline is None:
            return None
        return max(0.0, (self.deadline - time.monotonic()) * 1000.0)

    def child(self, fraction: float = 1.0, nodes: int | None = None) -> "Budget":
        """A sub-budget bounded by this one's remaining time."""
        rem = self.remaining_ms()
        ms = None if rem is None else rem * fraction
        if nodes is None and self.max_nodes is not None:
            nodes = max(0, int((self.max_nodes - self.nodes) * fraction))
        return Budget(ms, nodes)
