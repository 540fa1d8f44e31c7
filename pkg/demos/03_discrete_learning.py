"""
Learning discrete allocations with optimistic estimates
=======================================================

Runs the combinatorial upper-confidence-bound learner on a small table
instance and inspects what it learned: where the regret curve bends, how
pull counts concentrate on the optimal levels, and how far below the
provable regret ceiling the measured curve sits.
"""

import numpy as np

from banditalloc import (
    ActionSpace,
    BoundParams,
    CoverageObserver,
    ExactDpSolver,
    ProblemConfig,
    RewardModel,
    compute_gaps,
    compute_opt,
    dependent_regret_bound,
    regret_series,
    run,
)
from banditalloc.streams import mix_seed

cfg = ProblemConfig(resources=2, budget=3.0, space=ActionSpace.integer_levels(3))
probs = [[0.10, 0.45, 0.62], [0.05, 0.50, 0.58]]

truth = RewardModel.table(probs, rng_seed=0)
opt = compute_opt(truth, cfg)
gaps = compute_gaps(truth, cfg)
print(f"optimal per-round reward {opt} | smallest positive gap {gaps.delta_min:.3f}")

# ---------------------------------------------------------------------------
# One run. Each round the learner hands its optimistic mean estimates to the
# exact solver, plays the returned allocation, and observes one reward per
# resource. The observer counts rounds where some confidence interval
# missed the truth (theory says: finitely many, ever).
horizon = 20_000
observer = CoverageObserver(truth.mean_matrix(cfg.space))
model = RewardModel.table(probs, rng_seed=mix_seed(3, 0))
trace = run(model, ExactDpSolver(cfg), cfg, horizon, observer=observer)

series = regret_series(trace, opt).series
for t in (100, 1_000, 10_000, 20_000):
    print(f"  cumulative regret by round {t:>6}: {series[t - 1]:8.2f}")

# The per-round price of exploration falls steadily as estimates tighten.
# (The cumulative curve only bends visibly logarithmic once the smallest
# gap — 0.09 here — is fully resolved, which takes a few times 10^4
# rounds; the per-round averages show the decay much earlier.)
print("average regret per round, by span:")
for a, b in ((1, 100), (100, 1_000), (1_000, 10_000), (10_000, 20_000)):
    avg = (series[b - 1] - series[a - 1]) / (b - a)
    print(f"  rounds {a:>6}..{b:>6}: {avg:.4f}")

# ---------------------------------------------------------------------------
# Where did the rounds go? Pull counts per (resource, level): the optimal
# levels soak up almost everything, suboptimal ones get the logarithmic
# residue the confidence radii force.
print("pull counts:")
print(trace.stats.counts)
print("empirical means (truth in parentheses):")
for k in range(cfg.resources):
    row = "  ".join(
        f"{trace.stats.emp_means[k, a]:.3f} ({probs[k][a]:.2f})"
        for a in range(cfg.space.n)
    )
    print(" ", row)
print("confidence misses during the whole run:", observer.count)

# ---------------------------------------------------------------------------
# The distribution-dependent ceiling. It is loose by design — worst-case
# constants — but it is a ceiling, and the measured curve respects it.
bound = dependent_regret_bound(
    gaps, BoundParams(), cfg.budget, cfg.resources, cfg.space.n, horizon
)
print(f"measured {series[-1]:.1f} vs guaranteed ceiling {bound:.0f} "
      f"({series[-1] / bound:.1%} of it)")
