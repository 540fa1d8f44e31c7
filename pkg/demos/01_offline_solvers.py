"""
Offline allocation solvers
==========================

Walks through the one-shot problem the learner calls as a subroutine:
split a budget across resources, one level each, to maximize the sum of
the level means. Shows the exact dynamic program, brute-force
verification, a greedy heuristic and where it gets trapped, and the
coin-flip wrapper that simulates an unreliable solver.
"""

import numpy as np

from banditalloc import (
    ActionSpace,
    CoinFlipOracle,
    ExactDpSolver,
    GreedySolver,
    ProblemConfig,
    allocation_value,
    iter_feasible_levels,
    solve_exact_dp,
)

# ---------------------------------------------------------------------------
# Two resources, levels {0, 1, 2}, five budget units: plenty for both to be
# maxed out, so the interesting structure is in the means, not the budget.
cfg = ProblemConfig(resources=2, budget=5.0, space=ActionSpace.integer_levels(3))

means = np.array([
    [0.00, 0.40, 0.90],
    [0.00, 0.55, 0.70],
])

result = solve_exact_dp(means, cfg)
print("exact solver picks levels", result.allocation.levels, "worth", result.value)

# Brute force agrees, and not just approximately: allocation_value adds the
# per-resource means in the same order as the dynamic program, so optimal
# values compare with ==.
best = max(allocation_value(means, lv) for lv in iter_feasible_levels(cfg))
assert result.value == best
print("brute force over", sum(1 for _ in iter_feasible_levels(cfg)),
      "feasible allocations agrees exactly")

# ---------------------------------------------------------------------------
# Tighten the budget to 2 units and the problem becomes a real knapsack:
# maxing one resource competes with spreading the budget.
tight = ProblemConfig(resources=2, budget=2.0, space=ActionSpace.integer_levels(3))
for lv in iter_feasible_levels(tight):
    print(f"  levels {lv} -> value {allocation_value(means, lv):g}")
print(f"optimum under budget 2: {solve_exact_dp(means, tight).value:g}")

# ---------------------------------------------------------------------------
# The greedy heuristic repeatedly buys the level upgrade with the best
# value-per-unit ratio. On concave-ish instances it does well; here is a
# trap where the first cheap upgrade blocks the real prize.
trap = np.array([
    [0.00, 0.505, 0.51],   # resource 1: looks great for one unit, then flat
    [0.00, 0.26, 1.00],    # resource 2: pays off only at the full two units
])
greedy = GreedySolver(tight)
exact = ExactDpSolver(tight)
g = greedy.solve(trap)
e = exact.solve(trap)
print("greedy picks", g.allocation.levels, "worth", round(g.value, 3),
      "| exact picks", e.allocation.levels, "worth", e.value,
      f"| ratio {g.value / e.value:.3f}")

# ---------------------------------------------------------------------------
# CoinFlipOracle simulates a solver that only succeeds with probability
# beta; on failure it returns the all-zeros allocation. Same seed, same
# flips — unreliability is reproducible too.
flaky = CoinFlipOracle(exact, beta=0.7, seed=42)
values = [flaky.solve(trap).value for _ in range(10)]
print("flaky oracle over 10 calls:", [round(v, 2) for v in values])
print("declared quality:", flaky.spec)
