"""Domain types shared by the discrete and discretized-continuous settings.

Everything here is an immutable value object: budget-level spaces, problem
instances, base arms (resource, level) and allocations. The only operations
are arm indexing and budget feasibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

# Absolute tolerance on budget sums over discretized grids; absorbs the float
# error accumulated in i*pitch level values. Native integer spaces compare
# exactly.
BUDGET_TOL = 1e-9


@dataclass(frozen=True)
class ActionSpace:
    """Budget levels available to every resource.

    Two flavors: native integer budgets 0..n-1 (pitch 1) and uniform grids
    {0, pitch, ..., (n-1)*pitch} produced by discretizing a continuous
    interval. Level 0 always carries zero budget, so the all-zeros allocation
    is feasible whatever the total budget.
    """

    n: int
    pitch: float = 1.0
    is_grid: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one level, got n={self.n}")
        if not (np.isfinite(self.pitch) and self.pitch > 0):
            raise ValueError(f"pitch must be positive and finite, got {self.pitch}")
        if not self.is_grid and self.pitch != 1.0:
            raise ValueError("native integer spaces have pitch 1")

    @classmethod
    def integer_levels(cls, n: int) -> "ActionSpace":
        """Native discrete space {0, 1, ..., n-1}."""
        return cls(n=int(n), pitch=1.0, is_grid=False)

    @classmethod
    def uniform_grid(cls, n: int, pitch: float) -> "ActionSpace":
        """Uniform grid {0, pitch, ..., (n-1)*pitch}."""
        return cls(n=int(n), pitch=float(pitch), is_grid=True)

    def value(self, level: int) -> float:
        """Budget carried by a level index."""
        if not 0 <= level < self.n:
            raise ValueError(f"level {level} outside 0..{self.n - 1}")
        return level * self.pitch

    @property
    def level_values(self) -> np.ndarray:
        return np.arange(self.n) * self.pitch

    @property
    def max_value(self) -> float:
        return (self.n - 1) * self.pitch


@dataclass(frozen=True)
class ArmId:
    """Base arm (k, a): give budget level a to resource k. k is 1-based."""

    k: int
    a: int


@dataclass(frozen=True)
class Allocation:
    """One level index per resource."""

    levels: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class ProblemConfig:
    """An allocation instance: `resources` players splitting budget `budget`
    over one shared level space."""

    resources: int
    budget: float
    space: ActionSpace

    def __post_init__(self) -> None:
        if self.resources < 1:
            raise ValueError(f"resources must be >= 1, got {self.resources}")
        if not (np.isfinite(self.budget) and self.budget >= 0):
            raise ValueError(f"budget must be a nonnegative real, got {self.budget}")
        if not self.space.is_grid and self.space.n > self.budget + 1:
            raise ValueError(
                f"native space needs n <= budget + 1, got n={self.space.n} "
                f"with budget {self.budget}"
            )

    @property
    def capacity_units(self) -> int:
        """Total budget in integer level units (level i costs i units)."""
        return int(np.floor(self.budget / self.space.pitch + BUDGET_TOL))

    @property
    def arm_count(self) -> int:
        return self.resources * self.space.n


def arm_index(arm: ArmId, space: ActionSpace, resources: int | None = None) -> int:
    """Flat row-major index (k-1)*n + a, bijective over the resources*n arms."""
    if arm.k < 1 or (resources is not None and arm.k > resources):
        raise ValueError(f"resource index {arm.k} out of range")
    if not 0 <= arm.a < space.n:
        raise ValueError(f"level index {arm.a} outside 0..{space.n - 1}")
    return (arm.k - 1) * space.n + arm.a


def arm_at(index: int, space: ActionSpace, resources: int) -> ArmId:
    """Inverse of arm_index."""
    if not 0 <= index < resources * space.n:
        raise ValueError(f"flat index {index} outside 0..{resources * space.n - 1}")
    return ArmId(k=index // space.n + 1, a=index % space.n)


def is_feasible(alloc: Allocation, cfg: ProblemConfig) -> bool:
    """Whether the allocation's total budget stays within cfg.budget.

    Grid spaces get an absolute 1e-9 tolerance on the value sum; native
    integer spaces compare exactly.
    """
    levels = alloc.levels
    if len(levels) != cfg.resources:
        raise ValueError(
            f"allocation has {len(levels)} entries for {cfg.resources} resources"
        )
    for lv in levels:
        if not 0 <= lv < cfg.space.n:
            raise ValueError(f"level {lv} outside 0..{cfg.space.n - 1}")
    if cfg.space.is_grid:
        total = 0.0
        for lv in levels:
            total += lv * cfg.space.pitch
        return total <= cfg.budget + BUDGET_TOL
    return sum(levels) <= cfg.budget


def iter_feasible_levels(cfg: ProblemConfig) -> Iterator[tuple[int, ...]]:
    """Yield every feasible level vector, in lexicographic order."""
    n = cfg.space.n
    resources = cfg.resources
    prefix: list[int] = []

    def rec(remaining: int, k: int) -> Iterator[tuple[int, ...]]:
        if k == resources:
            yield tuple(prefix)
            return
        for a in range(min(n - 1, remaining) + 1):
            prefix.append(a)
            yield from rec(remaining - a, k + 1)
            prefix.pop()

    yield from rec(cfg.capacity_units, 0)
