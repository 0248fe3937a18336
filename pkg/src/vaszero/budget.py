from __future__ import annotations

from .errors import BudgetExhausted

DEFAULT_BUDGET = 1_000_000


class Budget:
    """Counter of elementary steps (node expansions and oracle invocations).

    A child created by :meth:`sub` has its own cap and also charges its parent,
    so sub-computations can be limited without escaping the global bound.
    """

    def __init__(self, max_steps: int = DEFAULT_BUDGET, parent: "Budget | None" = None):
        if max_steps < 1:
            raise ValueError("budget must allow at least one step")
        self.max_steps = max_steps
        self.used = 0
        self.parent = parent

    @property
    def remaining(self) -> int:
        r = self.max_steps - self.used
        if self.parent is not None:
            r = min(r, self.parent.remaining)
        return max(r, 0)

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.parent is not None:
            self.parent.spend(n)
        if self.used > self.max_steps:
            raise BudgetExhausted(f"budget of {self.max_steps} steps exhausted")

    def sub(self, cap: int) -> "Budget":
        return Budget(max(1, min(cap, self.remaining or 1)), parent=self)

    def __repr__(self) -> str:
        return f"Budget({self.used}/{self.max_steps})"


def as_budget(b) -> Budget:
    if b is None:
        return Budget()
    if isinstance(b, Budget):
        return b
    return Budget(int(b))
