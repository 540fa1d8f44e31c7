"""
Stochastic reward families and their random streams
====================================================

The environment turns (resource, budget level) pairs into noisy rewards in
[0, 1]. Three families are built in:

  table        per-level Bernoulli success probabilities (discrete budgets)
  hinge        reward ramps up once the budget clears a random requirement
  concave_exp  Bernoulli success scaled by a saturating value curve

Every draw comes from a counter-based stream addressed by (seed, resource,
round), so resource k's noise at round t is one number you can look up —
no generator state to carry around, and runs replay exactly.
"""

import numpy as np

from banditalloc import ActionSpace, ArmId, RewardModel, streams

# ---------------------------------------------------------------------------
# Table family: the means ARE the table.
space = ActionSpace.integer_levels(3)
table = RewardModel.table([[0.2, 0.5, 0.8]], rng_seed=1)
print("table means:", [table.true_mean(ArmId(1, a), space) for a in range(3)])
print("table draws at rounds 1..10:",
      [table.sample_reward(ArmId(1, 2), space, t) for t in range(1, 11)])

# ---------------------------------------------------------------------------
# Hinge family: budget v earns max(v - X, 0) / Q where the requirement X is
# uniform on [0, theta * Q]. Underfund and the reward is usually zero;
# overfund and it grows linearly. Closed-form mean vs Monte Carlo:
grid = ActionSpace.uniform_grid(5, 0.5)  # budgets {0, 0.5, 1.0, 1.5, 2.0}
hinge = RewardModel.hinge([0.75], budget=2.0, rng_seed=1)
for a in range(grid.n):
    arm = ArmId(1, a)
    mc = np.mean([hinge.sample_reward(arm, grid, t) for t in range(1, 4001)])
    print(f"  budget {grid.value(a):.1f}: mean {hinge.true_mean(arm, grid):.4f}"
          f"  (monte carlo {mc:.4f})")

# ---------------------------------------------------------------------------
# Saturating family: success with probability p earns 1 - exp(-v / theta).
# Doubling a small budget nearly doubles the reward; doubling a large one
# barely moves it. That concavity is what makes budget-splitting interesting.
sat = RewardModel.concave_exp([0.9], [0.5], rng_seed=1)
for v in (0.125, 0.25, 0.5, 1.0, 2.0):
    one = ActionSpace.uniform_grid(2, v)  # levels {0, v}
    print(f"  budget {v:<5} mean {sat.true_mean(ArmId(1, 1), one):.4f}")

# The steepest the mean can move per unit of budget, across all resources —
# the constant that sizes discretization grids in 04_continuous_learning.
print("lipschitz constant:", sat.lipschitz_constant())

# ---------------------------------------------------------------------------
# Streams are pure functions of (seed, stream, counter).
a = streams.uniform_block(seed=7, stream=2, start=100, count=4)
b = streams.uniform_block(seed=7, stream=2, start=100, count=4)
c = streams.uniform_block(seed=7, stream=3, start=100, count=4)
print("same address, same numbers: ", np.array_equal(a, b))
print("different stream, different numbers:", not np.array_equal(a, c))

# Because addressing is by round, two models with the same seed see the
# SAME underlying uniforms — common random numbers for free. Compare a
# generous and a stingy success probability on identical noise:
lucky = RewardModel.table([[0.8]], rng_seed=9)
unlucky = RewardModel.table([[0.3]], rng_seed=9)
tiny = ActionSpace.integer_levels(1)
wins = sum(
    lucky.sample_reward(ArmId(1, 0), tiny, t)
    >= unlucky.sample_reward(ArmId(1, 0), tiny, t)
    for t in range(1, 201)
)
print(f"paired draws where the 0.8 arm did at least as well: {wins} / 200")
