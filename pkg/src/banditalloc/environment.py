"""Stochastic reward environments with closed-form means.

Three families, all with rewards in [0, 1] by construction:

- ``table``: one Bernoulli success probability per (resource, level) cell;
  native integer level spaces only.
- ``hinge``: resource k draws a requirement X ~ Uniform[0, theta_k * Q] and
  budget v earns max(v - X, 0) / Q: nothing until the requirement is met,
  then linear growth, normalized by the total budget Q.
- ``concave_exp``: resource k succeeds with probability p_k and a success at
  budget v earns 1 - exp(-v / theta_k), a saturating return curve.

The noise for resource k at round t is a pure function of (rng_seed, k, t),
so two runs with the same seed face identical randomness no matter what they
play, and any round can be replayed in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import streams
from .core import ActionSpace, ArmId

_FAMILIES = ("table", "hinge", "concave_exp")


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RewardModel:
    """A reward distribution family plus its parameters and noise seed.

    Build instances through the ``table``, ``hinge`` and ``concave_exp``
    classmethods, which check the family-specific parameter ranges.
    """

    family: str
    rng_seed: int
    probs: np.ndarray | None = None  # table: (K, N) success probabilities
    thetas: np.ndarray | None = None  # hinge: scale in (0,1]; concave_exp: > 0
    success_probs: np.ndarray | None = None  # concave_exp: (K,) Bernoulli means
    budget: float | None = None  # hinge: the Q scaling requirements and rewards

    @classmethod
    def table(cls, probs, rng_seed: int) -> "RewardModel":
        probs = _frozen_array(probs)
        if probs.ndim != 2 or probs.shape[0] < 1 or probs.shape[1] < 1:
            raise ValueError("table needs a (resources, levels) probability matrix")
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValueError("table probabilities must lie in [0, 1]")
        return cls(family="table", rng_seed=int(rng_seed), probs=probs)

    @classmethod
    def hinge(cls, thetas, budget: float, rng_seed: int) -> "RewardModel":
        thetas = _frozen_array(thetas)
        if thetas.ndim != 1 or thetas.size < 1:
            raise ValueError("hinge needs one theta per resource")
        if np.any(thetas <= 0) or np.any(thetas > 1):
            raise ValueError("hinge thetas must lie in (0, 1]")
        if not (np.isfinite(budget) and budget > 0):
            raise ValueError(f"hinge needs a positive budget, got {budget}")
        return cls(
            family="hinge", rng_seed=int(rng_seed), thetas=thetas, budget=float(budget)
        )

    @classmethod
    def concave_exp(cls, success_probs, thetas, rng_seed: int) -> "RewardModel":
        success_probs = _frozen_array(success_probs)
        thetas = _frozen_array(thetas)
        if success_probs.ndim != 1 or thetas.shape != success_probs.shape:
            raise ValueError("concave_exp needs matching (K,) probs and thetas")
        if np.any(success_probs < 0) or np.any(success_probs > 1):
            raise ValueError("success probabilities must lie in [0, 1]")
        if np.any(thetas <= 0):
            raise ValueError("concave_exp thetas must be positive")
        return cls(
            family="concave_exp",
            rng_seed=int(rng_seed),
            thetas=thetas,
            success_probs=success_probs,
        )

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown reward family {self.family!r}")

    @property
    def k_count(self) -> int:
        """Number of resources the model covers."""
        if self.family == "table":
            return self.probs.shape[0]
        return self.thetas.shape[0]

    def check_space(self, space: ActionSpace) -> None:
        """Raise if the model cannot produce rewards on this level space."""
        if self.family == "table":
            if space.is_grid:
                raise ValueError("table rewards are defined per native level only")
            if space.n != self.probs.shape[1]:
                raise ValueError(
                    f"table has {self.probs.shape[1]} levels, space has {space.n}"
                )
        elif self.family == "hinge":
            # Values past Q would push rewards above 1 and break the contract.
            if space.max_value > self.budget + 1e-9:
                raise ValueError(
                    f"hinge levels must stay within the budget {self.budget}, "
                    f"space reaches {space.max_value}"
                )

    # -- sampling ---------------------------------------------------------

    def sample_reward(self, arm: ArmId, space: ActionSpace, t: int) -> float:
        """Draw the reward of a single base arm at round t (t >= 1)."""
        self.check_space(space)
        if t < 1:
            raise ValueError(f"round index starts at 1, got {t}")
        if not 1 <= arm.k <= self.k_count:
            raise ValueError(f"resource index {arm.k} out of range")
        value = space.value(arm.a)
        u = streams.uniform_at(self.rng_seed, arm.k, t)
        k0 = arm.k - 1
        if self.family == "table":
            return 1.0 if u < self.probs[k0, arm.a] else 0.0
        if self.family == "hinge":
            requirement = self.thetas[k0] * self.budget * u
            return max(value - requirement, 0.0) / self.budget
        met = u < self.success_probs[k0]
        return (1.0 - math.exp(-value / self.thetas[k0])) if met else 0.0

    def uniform_block(self, k: int, start: int, count: int) -> np.ndarray:
        """The raw uniforms behind resource k's rewards for rounds
        start..start+count-1."""
        return streams.uniform_block(self.rng_seed, k, start, count)

    def rewards_from_uniforms(
        self, levels: np.ndarray, values: np.ndarray, u: np.ndarray
    ) -> np.ndarray:
        """Vectorized reward transform for one round.

        ``levels`` are the chosen level indices, ``values`` their budget
        values and ``u`` one uniform per resource (the round's slice of
        uniform_block output).
        """
        if self.family == "table":
            picked = self.probs[np.arange(levels.shape[0]), levels]
            return (u < picked).astype(np.float64)
        if self.family == "hinge":
            requirement = self.thetas * self.budget * u
            return np.maximum(values - requirement, 0.0) / self.budget
        met = u < self.success_probs
        return np.where(met, 1.0 - np.exp(-values / self.thetas), 0.0)

    # -- closed-form moments ----------------------------------------------

    def true_mean(self, arm: ArmId, space: ActionSpace) -> float:
        """Exact expected reward of a base arm."""
        self.check_space(space)
        if not 1 <= arm.k <= self.k_count:
            raise ValueError(f"resource index {arm.k} out of range")
        k0 = arm.k - 1
        if self.family == "table":
            return float(self.probs[k0, arm.a])
        value = space.value(arm.a)
        if self.family == "hinge":
            spread = self.thetas[k0] * self.budget
            if value <= spread:
                return value * value / (2.0 * spread) / self.budget
            return (value - spread / 2.0) / self.budget
        return float(
            self.success_probs[k0] * (1.0 - math.exp(-value / self.thetas[k0]))
        )

    def mean_matrix(self, space: ActionSpace) -> np.ndarray:
        """(K, n) matrix of true means over the level space."""
        self.check_space(space)
        if self.family == "table":
            return np.array(self.probs)
        values = space.level_values[None, :]
        if self.family == "hinge":
            spread = (self.thetas * self.budget)[:, None]
            below = values * values / (2.0 * spread)
            above = values - spread / 2.0
            means = np.where(values <= spread, below, above) / self.budget
        else:
            means = self.success_probs[:, None] * (
                1.0 - np.exp(-values / self.thetas[:, None])
            )
        return means

    def lipschitz_constant(self) -> float:
        """Upper bound on |d mean / d budget| across resources.

        hinge means grow at most 1/Q per budget unit; concave_exp at most
        1/theta_k at zero. The table family has no budget continuum, so no
        constant exists.
        """
        if self.family == "hinge":
            return 1.0 / self.budget
        if self.family == "concave_exp":
            return float(np.max(1.0 / self.thetas))
        raise ValueError("table rewards have no continuous budget axis")
