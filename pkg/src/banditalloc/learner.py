"""Optimistic allocation learner over (resource, budget-level) base arms.

Each round t the learner inflates every arm's empirical mean by the
confidence radius sqrt(3 ln t / (2 count)), clamps the result into [0, 1]
(untried arms get the clamp value 1, so each level is explored before the
radii mean anything), asks the offline solver for the best allocation under
those optimistic values, plays it, and folds the observed per-resource
rewards back into the statistics (semi-bandit feedback: one observation per
resource per round, not one per round).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import Allocation, ProblemConfig
from .environment import RewardModel
from .oracle import _SolverBase, allocation_value


@dataclass
class ArmStats:
    """Pull counts and running empirical means, one cell per base arm."""

    counts: np.ndarray  # (K, n) int64, zero-initialized
    emp_means: np.ndarray  # (K, n) float64, 0 wherever the count is 0

    @classmethod
    def fresh(cls, resources: int, levels: int) -> "ArmStats":
        return cls(
            counts=np.zeros((resources, levels), dtype=np.int64),
            emp_means=np.zeros((resources, levels)),
        )


@dataclass(frozen=True)
class UcbVector:
    """Optimistic value matrix handed to the solver, plus the radii behind it."""

    upper: np.ndarray  # (K, n), min(1, emp_mean + radius)
    radii: np.ndarray  # (K, n), +inf on untried arms


def _radii(counts: np.ndarray, t: int) -> np.ndarray:
    log_t = np.log(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        radii = np.sqrt(3.0 * log_t / (2.0 * counts))
    # 0/0 at t=1; untried arms always get an infinite radius.
    return np.where(counts > 0, radii, np.inf)


def compute_ucb(stats: ArmStats, t: int) -> UcbVector:
    """Confidence radii and clamped optimistic means at round t (t >= 1)."""
    if t < 1:
        raise ValueError(f"round index starts at 1, got {t}")
    radii = _radii(stats.counts, t)
    return UcbVector(upper=np.minimum(1.0, stats.emp_means + radii), radii=radii)


def update(stats: ArmStats, allocation: Allocation, rewards: np.ndarray) -> ArmStats:
    """Fold one round of per-resource rewards into the statistics (in place).

    Uses the incremental mean update mean += (reward - mean) / count, so a
    run's statistics never depend on when you read them.
    """
    levels = np.asarray(allocation.levels, dtype=np.int64)
    rewards = np.asarray(rewards, dtype=np.float64)
    if levels.shape != rewards.shape:
        raise ValueError(
            f"got {rewards.shape[0] if rewards.ndim else 0} rewards for "
            f"{levels.shape[0]} resources"
        )
    if np.any(rewards < 0.0) or np.any(rewards > 1.0):
        raise ValueError("rewards outside [0, 1] violate the environment contract")
    rows = np.arange(levels.shape[0])
    _fold(stats.counts, stats.emp_means, rows, levels, rewards)
    return stats


def _fold(counts, emp_means, rows, levels, rewards) -> None:
    counts[rows, levels] += 1
    seen = counts[rows, levels]
    prev = emp_means[rows, levels]
    emp_means[rows, levels] = prev + (rewards - prev) / seen


def select_allocation(stats: ArmStats, t: int, solver: _SolverBase) -> Allocation:
    """The allocation the optimistic values make the solver pick at round t."""
    ucb = compute_ucb(stats, t)
    levels = solver.solve_levels(ucb.upper)
    return Allocation(tuple(int(a) for a in levels))


@dataclass
class RunTrace:
    """Round-by-round record of one learning run."""

    levels: np.ndarray  # (T, K) chosen level indices
    rewards: np.ndarray  # (T, K) observed per-resource rewards
    expected: np.ndarray  # (T,) true expected total reward of the played allocation
    config: ProblemConfig
    stats: ArmStats  # end-of-run counts and empirical means
    metadata: dict = field(default_factory=dict)
    emp_snapshots: np.ndarray | None = None  # (T, K, n) start-of-round emp means
    radius_snapshots: np.ndarray | None = None  # (T, K, n) start-of-round radii

    def __len__(self) -> int:
        return self.expected.shape[0]

    @property
    def cumulative_expected(self) -> np.ndarray:
        return np.cumsum(self.expected)


def run(
    model: RewardModel,
    solver: _SolverBase,
    cfg: ProblemConfig,
    horizon: int,
    record_internals: bool = False,
    observer: Callable[[int, np.ndarray, np.ndarray], None] | None = None,
) -> RunTrace:
    """Run the learner for ``horizon`` rounds against a reward model.

    Parameters
    ----------
    model, solver, cfg:
        Environment, offline solver and the instance both agree on.
    horizon:
        Number of rounds T >= 1.
    record_internals:
        Keep per-round empirical means and radii on the trace ((T, K, n)
        arrays, so reserve memory accordingly).
    observer:
        Optional callback observer(t, emp_means, radii) invoked with the
        start-of-round statistics before the allocation is chosen. The
        arrays are live views; observers must not mutate them. This is the
        hook for diagnostics that need the true means, which the learner
        itself never sees.

    Returns
    -------
    RunTrace
        Per-round allocations, rewards and true expected values. The
        expected-value channel is computed from the model's closed-form
        means purely for analysis; no decision depends on it.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if model.k_count != cfg.resources:
        raise ValueError(
            f"model covers {model.k_count} resources, instance has {cfg.resources}"
        )
    model.check_space(cfg.space)
    if solver.cfg is not cfg and solver.cfg != cfg:
        raise ValueError("solver was built for a different instance")

    resources = cfg.resources
    n = cfg.space.n
    level_values = cfg.space.level_values
    mean_mat = model.mean_matrix(cfg.space)
    uniforms = np.empty((resources, horizon))
    for k in range(1, resources + 1):
        uniforms[k - 1] = model.uniform_block(k, 1, horizon)

    counts = np.zeros((resources, n), dtype=np.int64)
    emp_means = np.zeros((resources, n))
    rows = np.arange(resources)

    level_hist = np.empty((horizon, resources), dtype=np.int64)
    reward_hist = np.empty((horizon, resources))
    expected = np.empty(horizon)
    emp_snap = np.empty((horizon, resources, n)) if record_internals else None
    rad_snap = np.empty((horizon, resources, n)) if record_internals else None

    for t in range(1, horizon + 1):
        radii = _radii(counts, t)
        if observer is not None:
            observer(t, emp_means, radii)
        if record_internals:
            emp_snap[t - 1] = emp_means
            rad_snap[t - 1] = radii
        upper = np.minimum(1.0, emp_means + radii)
        levels = solver.solve_levels(upper)
        rewards = model.rewards_from_uniforms(
            levels, level_values[levels], uniforms[:, t - 1]
        )
        if rewards.min() < 0.0 or rewards.max() > 1.0:
            raise AssertionError("environment produced a reward outside [0, 1]")
        _fold(counts, emp_means, rows, levels, rewards)
        level_hist[t - 1] = levels
        reward_hist[t - 1] = rewards
        expected[t - 1] = allocation_value(mean_mat, levels)

    return RunTrace(
        levels=level_hist,
        rewards=reward_hist,
        expected=expected,
        config=cfg,
        stats=ArmStats(counts=counts, emp_means=emp_means),
        metadata={"horizon": horizon, "rng_seed": model.rng_seed, "oracle": solver.spec},
        emp_snapshots=emp_snap,
        radius_snapshots=rad_snap,
    )
