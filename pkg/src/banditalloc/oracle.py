"""Offline allocation solvers.

Given a matrix of per-arm values, pick one budget level per resource so the
total budget stays within the cap and the summed value is maximal (the exact
dynamic program) or at least decent (the marginal-gain greedy). A wrapper
simulates oracles that only succeed with some probability beta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import streams
from .core import Allocation, ProblemConfig

# "no solution" marker in the tie-break units table; large enough that no real
# unit total gets near it, small enough that adding level costs cannot wrap.
_UNITS_SENTINEL = np.int64(1) << 40


@dataclass(frozen=True)
class OracleSpec:
    """Declared quality of an offline solver: with probability at least beta
    it returns an allocation worth at least alpha times the optimum."""

    alpha: float = 1.0
    beta: float = 1.0
    kind: str = "exact_dp"

    def __post_init__(self) -> None:
        if self.kind not in ("exact_dp", "greedy"):
            raise ValueError(f"unknown solver kind {self.kind!r}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        # The dynamic program is exact, so alpha < 1 would misdeclare it.
        # beta < 1 is allowed: it describes the coin-wrapped variant.
        if self.kind == "exact_dp" and self.alpha != 1.0:
            raise ValueError("the exact solver always has alpha = 1")


@dataclass(frozen=True)
class OracleResult:
    """Solver output: the chosen allocation and its value under the input
    matrix (not under any true means)."""

    allocation: Allocation
    value: float


def allocation_value(means: np.ndarray, levels) -> float:
    """Objective sum_k means[k, levels[k]].

    Accumulated from the last resource backwards, matching the dynamic
    program's internal fold bit for bit, so optimality checks against plain
    enumeration can use == instead of a tolerance.
    """
    total = 0.0
    for k in range(len(levels) - 1, -1, -1):
        total = total + means[k, levels[k]]
    return float(total)


def _check_means(means: np.ndarray, cfg: ProblemConfig) -> np.ndarray:
    means = np.asarray(means, dtype=np.float64)
    want = (cfg.resources, cfg.space.n)
    if means.shape != want:
        raise ValueError(f"means must have shape {want}, got {means.shape}")
    if not np.all(np.isfinite(means)):
        raise ValueError("means must be finite")
    return means


class _SolverBase:
    """Shared result plumbing; concrete solvers implement solve_levels."""

    cfg: ProblemConfig
    spec: OracleSpec

    def solve_levels(self, means: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def solve(self, means: np.ndarray) -> OracleResult:
        means = _check_means(means, self.cfg)
        levels = self.solve_levels(means)
        alloc = Allocation(tuple(int(a) for a in levels))
        return OracleResult(alloc, allocation_value(means, levels))


class ExactDpSolver(_SolverBase):
    """Exact multiple-choice knapsack solver over integer budget units.

    Level i costs i units (one unit = the space pitch). The suffix table
    suf_v[k][c] holds the best value attainable from resources k.. with c
    units left; alongside it suf_u[k][c] tracks the minimum units spent among
    those maximizers so ties resolve toward the smaller total budget, then
    (during forward reconstruction, which scans levels in ascending order)
    toward the lexicographically smallest level vector. Identical inputs
    therefore always produce identical allocations.
    """

    def __init__(self, cfg: ProblemConfig):
        self.cfg = cfg
        self.spec = OracleSpec(1.0, 1.0, "exact_dp")
        n = cfg.space.n
        resources = cfg.resources
        # No allocation can spend more than resources*(n-1) units, so larger
        # budgets do not enlarge the table.
        cap = min(cfg.capacity_units, resources * (n - 1))
        self._cap = cap
        # gather[a, c] indexes the padded suffix row at c - a, with entry 0 of
        # the padding acting as the "a exceeds c" sentinel.
        offsets = np.arange(cap + 1)[None, :] - np.arange(n)[:, None] + 1
        self._gather = np.maximum(offsets, 0)
        self._level_cost = np.arange(n, dtype=np.int64)[:, None]
        self._suf_v = np.zeros((resources + 1, cap + 1))
        self._suf_u = np.zeros((resources + 1, cap + 1), dtype=np.int64)
        self._pad_v = np.empty(cap + 2)
        self._pad_u = np.empty(cap + 2, dtype=np.int64)

    def solve_levels(self, means: np.ndarray) -> np.ndarray:
        means = _check_means(means, self.cfg)
        resources = self.cfg.resources
        n = self.cfg.space.n
        cap = self._cap
        suf_v, suf_u = self._suf_v, self._suf_u
        pad_v, pad_u = self._pad_v, self._pad_u
        suf_v[resources] = 0.0
        suf_u[resources] = 0

        for k in range(resources - 1, -1, -1):
            pad_v[0] = -np.inf
            pad_u[0] = _UNITS_SENTINEL
            pad_v[1:] = suf_v[k + 1]
            pad_u[1:] = suf_u[k + 1]
            cand_v = pad_v[self._gather] + means[k][:, None]
            cand_u = pad_u[self._gather] + self._level_cost
            best_v = cand_v.max(axis=0)
            suf_v[k] = best_v
            suf_u[k] = np.where(cand_v == best_v[None, :], cand_u, _UNITS_SENTINEL).min(
                axis=0
            )

        levels = np.zeros(resources, dtype=np.int64)
        c = cap
        for k in range(resources):
            row = means[k]
            nxt_v = suf_v[k + 1]
            nxt_u = suf_u[k + 1]
            target_v = suf_v[k, c]
            target_u = suf_u[k, c]
            for a in range(min(n - 1, c) + 1):
                if row[a] + nxt_v[c - a] == target_v and a + nxt_u[c - a] == target_u:
                    levels[k] = a
                    c -= a
                    break
            else:  # pragma: no cover - the table always reproduces itself
                raise AssertionError("suffix table reconstruction failed")
        return levels


class GreedySolver(_SolverBase):
    """Upgrade greedy: repeatedly apply the single-resource level upgrade with
    the largest value gain per unit of budget, until no affordable upgrade has
    a strictly positive gain.

    Multi-level jumps count as one upgrade (gain divided by the full budget
    step), which lets the heuristic climb past locally flat stretches. Ties
    prefer the smaller resource index, then the smaller target level. No
    approximation ratio is claimed; measure it per instance against
    ExactDpSolver.
    """

    def __init__(self, cfg: ProblemConfig):
        self.cfg = cfg
        self.spec = OracleSpec(1.0, 1.0, "greedy")
        self._cap = min(cfg.capacity_units, cfg.resources * (cfg.space.n - 1))

    def solve_levels(self, means: np.ndarray) -> np.ndarray:
        means = _check_means(means, self.cfg)
        n = self.cfg.space.n
        pitch = self.cfg.space.pitch
        levels = np.zeros(self.cfg.resources, dtype=np.int64)
        spent = 0
        while True:
            best_ratio = 0.0
            best: tuple[int, int] | None = None
            for k in range(self.cfg.resources):
                cur = int(levels[k])
                base = means[k, cur]
                top = min(n - 1, cur + self._cap - spent)
                for b in range(cur + 1, top + 1):
                    gain = means[k, b] - base
                    if gain <= 0:
                        continue
                    ratio = gain / ((b - cur) * pitch)
                    if ratio > best_ratio:
                        best_ratio = ratio
                        best = (k, b)
            if best is None:
                return levels
            k, b = best
            spent += b - int(levels[k])
            levels[k] = b


class CoinFlipOracle(_SolverBase):
    """Simulates a solver that succeeds only with probability beta.

    Each call flips a Bernoulli(beta) coin on a dedicated counter-based
    stream; on success it defers to the base solver, on failure it returns
    the all-zeros allocation. Runs replay exactly for a fixed seed.
    """

    def __init__(
        self,
        base: _SolverBase,
        beta: float,
        seed: int,
        stream: int = streams.COIN_STREAM,
    ):
        if not 0 < beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {beta}")
        self.base = base
        self.cfg = base.cfg
        self.spec = OracleSpec(base.spec.alpha, float(beta), base.spec.kind)
        self._seed = int(seed)
        self._stream = int(stream)
        self.calls = 0

    def solve_levels(self, means: np.ndarray) -> np.ndarray:
        self.calls += 1
        u = streams.uniform_at(self._seed, self._stream, self.calls)
        if u < self.spec.beta:
            return self.base.solve_levels(means)
        return np.zeros(self.cfg.resources, dtype=np.int64)


def solve_exact_dp(means: np.ndarray, cfg: ProblemConfig) -> OracleResult:
    """One-shot exact solve; build an ExactDpSolver directly to amortize the
    table setup across calls."""
    return ExactDpSolver(cfg).solve(means)


def solve_greedy(means: np.ndarray, cfg: ProblemConfig) -> OracleResult:
    """One-shot greedy solve."""
    return GreedySolver(cfg).solve(means)


def build_solver(spec: OracleSpec, cfg: ProblemConfig, seed: int = 0) -> _SolverBase:
    """Construct the solver a declared oracle describes, coin-wrapped when
    beta < 1."""
    base: _SolverBase
    if spec.kind == "exact_dp":
        base = ExactDpSolver(cfg)
    else:
        base = GreedySolver(cfg)
    if spec.beta < 1.0:
        return CoinFlipOracle(base, spec.beta, seed)
    return base
