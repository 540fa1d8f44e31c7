"""Regret accounting, instance gap structure, and bound evaluators.

Everything here consumes run traces and closed-form environment means;
nothing feeds back into the learner. Regret is measured against a scaled
benchmark alpha * beta * opt, the yardstick a (alpha, beta)-limited offline
solver can actually be held to; with alpha = beta = 1 it is plain regret
against the optimum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import ActionSpace, ProblemConfig
from .environment import RewardModel
from .learner import RunTrace
from .oracle import ExactDpSolver

#: Refuse to enumerate action spaces larger than this (n ** resources rows).
MAX_ENUMERATION = 10**7

_CHUNK_ROWS = 1 << 15


class EnumerationInfeasibleError(ValueError):
    """The instance's action space is too large to enumerate exactly."""


@dataclass(frozen=True)
class BoundParams:
    """Constants the regret bounds depend on.

    smoothness bounds how much the expected total reward can move per unit
    of change in any arm mean (1 when the objective is a plain sum of arm
    means); alpha and beta declare the offline solver's quality; lipschitz
    (only needed for discretization arguments) bounds the mean's slope in
    the budget.
    """

    smoothness: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    lipschitz: float | None = None

    def __post_init__(self) -> None:
        if not (np.isfinite(self.smoothness) and self.smoothness > 0):
            raise ValueError(f"smoothness must be positive, got {self.smoothness}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.lipschitz is not None and not (
            np.isfinite(self.lipschitz) and self.lipschitz > 0
        ):
            raise ValueError(f"lipschitz must be positive, got {self.lipschitz}")


@dataclass(frozen=True)
class GapReport:
    """Suboptimality gap structure of one instance at solver quality alpha.

    Per-arm entries cover only allocations that play the arm AND have a
    strictly positive gap alpha * opt - r: arms never played suboptimally
    get +inf in delta_min_per_arm and 0 in delta_max_per_arm.
    """

    opt: float
    delta_min_per_arm: np.ndarray  # (K, n), +inf where no positive gap exists
    delta_max_per_arm: np.ndarray  # (K, n), 0 where no positive gap exists
    delta_min: float  # min over finite per-arm minima, +inf if none
    delta_max: float  # max positive gap, 0 if every allocation is optimal


@dataclass(frozen=True)
class RegretReport:
    """Cumulative scaled regret along one run."""

    series: np.ndarray  # (T,) cumulative alpha*beta*opt - expected reward
    final: float
    term_learning: float | None = None  # on-grid part, for discretized runs
    term_discretization: float | None = None  # grid-vs-continuum part


@dataclass(frozen=True)
class ReferenceInterval:
    """Two-sided bracket of the continuous-budget optimum.

    lo is the exact optimum over a reference grid; the true optimum can
    exceed it by at most lipschitz * resources * pitch (rounding each
    continuous budget down to the grid loses at most pitch per resource),
    giving hi. Conservative regret statements measure against hi.
    """

    lo: float
    hi: float
    pitch: float


@dataclass(frozen=True)
class ScalingReport:
    """Regret-vs-horizon shape check against the T^(2/3) (ln T)^(1/3) law."""

    horizons: tuple[int, ...]
    normalized: tuple[float, ...]
    slack: float
    passed: bool


@dataclass(frozen=True)
class CoverageReport:
    """Rounds whose start-of-round statistics had some arm outside its
    confidence interval, versus the theory's expected total."""

    violations: np.ndarray  # (T,) bool
    count: int
    expected_bound: float  # (pi^2 / 3) * number of arms


def compute_opt(model: RewardModel, cfg: ProblemConfig) -> float:
    """Best expected total reward of any feasible allocation."""
    return ExactDpSolver(cfg).solve(model.mean_matrix(cfg.space)).value


def compute_continuous_reference(
    model: RewardModel, budget: float, refinement: int
) -> ReferenceInterval:
    """Bracket the optimum over continuous budgets in [0, budget]^K.

    refinement is the number of reference pitches (the grid has
    refinement + 1 levels); the bracket width shrinks linearly in it.
    """
    if refinement < 2:
        raise ValueError(f"refinement must be >= 2, got {refinement}")
    if model.family == "table":
        raise ValueError("table rewards have no continuous budget axis")
    pitch = budget / refinement
    grid = ProblemConfig(
        resources=model.k_count,
        budget=budget,
        space=ActionSpace.uniform_grid(refinement + 1, pitch),
    )
    lo = compute_opt(model, grid)
    hi = lo + model.lipschitz_constant() * model.k_count * pitch
    return ReferenceInterval(lo=lo, hi=hi, pitch=pitch)


def _level_chunks(n: int, resources: int):
    it = itertools.product(range(n), repeat=resources)
    while True:
        block = list(itertools.islice(it, _CHUNK_ROWS))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64)


def compute_gaps(
    model: RewardModel,
    cfg: ProblemConfig,
    alpha: float = 1.0,
    max_enumeration: int = MAX_ENUMERATION,
) -> GapReport:
    """Enumerate every feasible allocation and collect gap extrema per arm.

    Exact but exponential: raises EnumerationInfeasibleError when
    n ** resources exceeds max_enumeration.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    n = cfg.space.n
    resources = cfg.resources
    if n**resources > max_enumeration:
        raise EnumerationInfeasibleError(
            f"{n}^{resources} allocations exceed the enumeration cap {max_enumeration}"
        )
    means = model.mean_matrix(cfg.space)
    cap = cfg.capacity_units
    cols = np.arange(resources)

    opt = -np.inf
    for block in _level_chunks(n, resources):
        feasible = block.sum(axis=1) <= cap
        if not feasible.any():
            continue
        r = means[cols[None, :], block[feasible]].sum(axis=1)
        opt = max(opt, float(r.max()))

    delta_min = np.full((resources, n), np.inf)
    delta_max = np.zeros((resources, n))
    for block in _level_chunks(n, resources):
        feasible = block.sum(axis=1) <= cap
        if not feasible.any():
            continue
        block = block[feasible]
        r = means[cols[None, :], block].sum(axis=1)
        gaps = alpha * opt - r
        positive = gaps > 0
        if not positive.any():
            continue
        block = block[positive]
        gaps = gaps[positive]
        for k in range(resources):
            np.minimum.at(delta_min[k], block[:, k], gaps)
            np.maximum.at(delta_max[k], block[:, k], gaps)

    finite = np.isfinite(delta_min)
    return GapReport(
        opt=opt,
        delta_min_per_arm=delta_min,
        delta_max_per_arm=delta_max,
        delta_min=float(delta_min[finite].min()) if finite.any() else np.inf,
        delta_max=float(delta_max.max()),
    )


def regret_series(
    trace: RunTrace, opt: float, alpha: float = 1.0, beta: float = 1.0
) -> RegretReport:
    """Cumulative alpha*beta-scaled regret of a run against a benchmark opt.

    Negative values are meaningful when alpha * beta < 1 (the run can beat
    the scaled benchmark) and are preserved, not clipped.
    """
    per_round = alpha * beta * opt - trace.expected
    series = np.cumsum(per_round)
    return RegretReport(series=series, final=float(series[-1]))


def split_discretization_regret(
    trace: RunTrace,
    grid_opt: float,
    reference: ReferenceInterval,
    alpha: float = 1.0,
    beta: float = 1.0,
) -> RegretReport:
    """Regret against the conservative continuous benchmark, split into the
    on-grid learning part and the price of the grid itself.

    The series (and final) measure against reference.hi; term_learning
    measures against the grid optimum and term_discretization is
    T * alpha * beta * (reference.hi - grid_opt). The two terms sum to the
    final value up to float rounding.
    """
    horizon = len(trace)
    report = regret_series(trace, reference.hi, alpha, beta)
    learning = alpha * beta * grid_opt * horizon - float(trace.expected.sum())
    price = horizon * alpha * beta * (reference.hi - grid_opt)
    return RegretReport(
        series=report.series,
        final=report.final,
        term_learning=learning,
        term_discretization=price,
    )


def dependent_regret_bound(
    gaps: GapReport,
    params: BoundParams,
    budget: float,
    resources: int,
    levels: int,
    horizon: int,
) -> float:
    """Logarithmic gap-dependent regret bound for the instance.

    Sums 48 B^2 Q ln T / delta_min over arms with a finite positive minimum
    gap, plus the constant terms 2 B K n and (pi^2 / 3) K n delta_max.
    Raises when no arm has a positive gap (the bound's premise fails; regret
    is identically zero there anyway).
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    finite = np.isfinite(gaps.delta_min_per_arm)
    if not finite.any():
        raise ValueError("no positive gaps: the gap-dependent bound does not apply")
    smoothness = params.smoothness
    lead = float(
        np.sum(
            48.0
            * smoothness**2
            * budget
            * math.log(horizon)
            / gaps.delta_min_per_arm[finite]
        )
    )
    arms = resources * levels
    return (
        lead
        + 2.0 * smoothness * arms
        + (math.pi**2 / 3.0) * arms * gaps.delta_max
    )


def independent_regret_bound(
    params: BoundParams,
    budget: float,
    resources: int,
    levels: int,
    horizon: int,
    delta_max: float,
) -> float:
    """Gap-free sqrt(T) regret bound for the instance.

    14 B sqrt(Q K n T ln T) plus the same constant terms as the dependent
    bound. Valid for any gap structure; at horizon 1 the leading term
    vanishes because ln 1 = 0.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if delta_max < 0:
        raise ValueError(f"delta_max must be nonnegative, got {delta_max}")
    smoothness = params.smoothness
    arms = resources * levels
    lead = 14.0 * smoothness * math.sqrt(
        budget * arms * horizon * math.log(horizon)
    )
    return lead + 2.0 * smoothness * arms + (math.pi**2 / 3.0) * arms * delta_max


def scaling_check(
    final_regrets: Mapping[int, float], slack: float = 0.25
) -> ScalingReport:
    """Check that regret grows no faster than T^(2/3) (ln T)^(1/3).

    Normalizes each final regret by that law and requires the normalized
    sequence to be non-increasing in the horizon up to a multiplicative
    slack. Needs at least three horizons spanning two decades; anything less
    cannot distinguish the shape from linear growth.
    """
    if slack < 0:
        raise ValueError(f"slack must be nonnegative, got {slack}")
    horizons = sorted(final_regrets)
    if len(horizons) < 3:
        raise ValueError("need at least three horizons")
    if horizons[0] < 2:
        raise ValueError("horizons must be >= 2 so ln T > 0")
    if horizons[-1] < 100 * horizons[0]:
        raise ValueError("horizons must span at least two decades")
    normalized = tuple(
        final_regrets[t] / (t ** (2.0 / 3.0) * math.log(t) ** (1.0 / 3.0))
        for t in horizons
    )
    passed = all(
        later <= (1.0 + slack) * earlier
        for earlier, later in zip(normalized, normalized[1:])
    )
    return ScalingReport(
        horizons=tuple(horizons), normalized=normalized, slack=slack, passed=passed
    )


def coverage_diagnostic(trace: RunTrace, model: RewardModel) -> CoverageReport:
    """Count rounds where some arm's empirical mean sat outside its
    confidence interval (|emp - true| >= radius) at the start of the round.

    Requires a trace recorded with record_internals=True. Untried arms have
    infinite radius and never violate. The theory predicts at most
    (pi^2 / 3) * arm_count such rounds in expectation, independent of the
    horizon.
    """
    if trace.emp_snapshots is None or trace.radius_snapshots is None:
        raise ValueError("trace was recorded without internals")
    mu = model.mean_matrix(trace.config.space)
    deviations = np.abs(trace.emp_snapshots - mu[None, :, :])
    violations = (deviations >= trace.radius_snapshots).any(axis=(1, 2))
    return CoverageReport(
        violations=violations,
        count=int(violations.sum()),
        expected_bound=(math.pi**2 / 3.0) * trace.config.arm_count,
    )


class CoverageObserver:
    """Streaming version of coverage_diagnostic for long runs.

    Attach as the runner's observer to count coverage violations without
    storing per-round snapshots. Holds the true means, so it lives strictly
    on the analysis side of the learner/analysis wall.
    """

    def __init__(self, mean_matrix: np.ndarray):
        self._mu = np.asarray(mean_matrix, dtype=np.float64)
        self.count = 0
        self.rounds = 0

    def __call__(self, t: int, emp_means: np.ndarray, radii: np.ndarray) -> None:
        self.rounds += 1
        if bool(np.any(np.abs(emp_means - self._mu) >= radii)):
            self.count += 1
