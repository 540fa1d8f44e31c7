"""Release acceptance suite.

Nine end-to-end checks gate the package: solver exactness against brute
force, learner bookkeeping invariants, compliance with the gap-dependent
regret bound, the logarithmic shape of the regret curve, the discretization
error margin, the sublinear scaling law on continuous budgets, confidence
coverage, Monte Carlo fidelity of the reward families, and byte-level
determinism of the experiment harness. Everything is seeded, so each check
either always passes or always fails on a given build.

The module takes around five minutes on one core; almost all of it goes
into the two regret-curve studies (20 replications each at horizons up to
10^5). Run it alone with ``pytest tests/test_acceptance.py -v``.
"""

import json
import math
import time

import numpy as np
import pytest

from banditalloc import (
    ActionSpace,
    ArmId,
    BoundParams,
    CoverageObserver,
    ExactDpSolver,
    OracleSpec,
    ProblemConfig,
    RewardModel,
    allocation_value,
    compute_continuous_reference,
    compute_gaps,
    compute_opt,
    dependent_regret_bound,
    iter_feasible_levels,
    regret_series,
    run,
    run_discretized,
    scaling_check,
    solve_exact_dp,
)
from banditalloc.cli import main as cli_main
from banditalloc.streams import mix_seed

# Reference instance for the regret and coverage checks: three resources,
# four budget levels each, five units to spend. The success probabilities
# were drawn once (uniformly, Philox stream seeded with 0) and frozen so the
# gap structure stays fixed: the smallest positive per-arm gap is ~0.214,
# which 10^5 rounds resolve with room to spare.
REFERENCE_PROBS = (
    (0.014067035665647709, 0.2577672456246177, 0.47156538101528966, 0.0914196711073687),
    (0.9791345000654033, 0.25608390326933783, 0.9355927732570025, 0.190052634671396),
    (0.03609107425258373, 0.05584159755756546, 0.781876100713399, 0.45294745661602376),
)
REFERENCE_BUDGET = 5.0
NOISE_SEED = 7
REPLICATIONS = 20
CHECKPOINTS = (100, 1_000, 10_000, 100_000)

# Continuous-budget study: two resources sharing one unit of budget under
# saturating (exponential-approach) rewards.
SMOOTH_PROBS = (0.9, 0.7)
SMOOTH_THETAS = (0.8, 0.5)
SMOOTH_NOISE_SEED = 11
SMOOTH_HORIZONS = (1_000, 10_000, 100_000)


def reference_cfg() -> ProblemConfig:
    return ProblemConfig(
        resources=3,
        budget=REFERENCE_BUDGET,
        space=ActionSpace.integer_levels(4),
    )


@pytest.fixture(scope="module")
def mean_regret_curve() -> np.ndarray:
    """Mean cumulative regret over 20 runs on the reference instance, read
    at each checkpoint of a single 10^5-round trajectory.

    The learner is anytime — radii depend on the current round and rewards
    come from counter-based streams — so the prefix of a long run IS the
    short run. Replication 0 asserts that identity before the prefix
    readings are trusted.
    """
    cfg = reference_cfg()
    solver = ExactDpSolver(cfg)
    opt = compute_opt(RewardModel.table(REFERENCE_PROBS, rng_seed=0), cfg)
    readings = np.empty((REPLICATIONS, len(CHECKPOINTS)))
    for rep in range(REPLICATIONS):
        model = RewardModel.table(REFERENCE_PROBS, rng_seed=mix_seed(NOISE_SEED, rep))
        trace = run(model, solver, cfg, CHECKPOINTS[-1])
        if rep == 0:
            short = run(model, solver, cfg, 1_000)
            assert np.array_equal(short.expected, trace.expected[:1_000])
        series = regret_series(trace, opt).series
        readings[rep] = series[np.asarray(CHECKPOINTS) - 1]
    return readings.mean(axis=0)


def test_exact_solver_matches_full_enumeration_on_random_instances():
    rng = np.random.default_rng(402)
    start = time.perf_counter()
    for _ in range(200):
        resources = int(rng.integers(1, 5))
        levels = int(rng.integers(2, 6))
        budget = float(rng.uniform(levels - 1, 8.0))
        cfg = ProblemConfig(
            resources=resources,
            budget=budget,
            space=ActionSpace.integer_levels(levels),
        )
        means = rng.random((resources, levels))
        result = solve_exact_dp(means, cfg)
        # allocation_value folds in the same order as the dynamic program,
        # so the comparison is exact equality, not a tolerance.
        best = max(
            allocation_value(means, levels) for levels in iter_feasible_levels(cfg)
        )
        assert result.value == best
        assert allocation_value(means, result.allocation.levels) == result.value
    assert time.perf_counter() - start < 10.0


def test_long_run_bookkeeping_invariants_hold():
    horizon = 10_000
    cfg = reference_cfg()
    table = RewardModel.table(REFERENCE_PROBS, rng_seed=mix_seed(NOISE_SEED, 0))
    native = run(table, ExactDpSolver(cfg), cfg, horizon, record_internals=True)
    smooth = RewardModel.concave_exp(SMOOTH_PROBS, SMOOTH_THETAS, rng_seed=17)
    gridded, _plan = run_discretized(
        smooth, OracleSpec(), budget=1.0, horizon=horizon, record_internals=True
    )
    for trace in (native, gridded):
        space = trace.config.space
        counts = trace.stats.counts
        # every round pulls exactly one arm per resource
        assert counts.sum(axis=1).tolist() == [horizon] * trace.config.resources
        for k in range(trace.config.resources):
            recounted = np.bincount(trace.levels[:, k], minlength=space.n)
            assert np.array_equal(recounted, counts[k])
        # optimistic estimates never fall below the empirical means
        uppers = np.minimum(1.0, trace.emp_snapshots + trace.radius_snapshots)
        assert np.all(uppers >= trace.emp_snapshots)
        assert np.all((trace.rewards >= 0.0) & (trace.rewards <= 1.0))
        spent = space.level_values[trace.levels].sum(axis=1)
        assert np.all(spent <= trace.config.budget + 1e-9)


def test_mean_regret_respects_the_gap_dependent_bound(mean_regret_curve):
    cfg = reference_cfg()
    gaps = compute_gaps(RewardModel.table(REFERENCE_PROBS, rng_seed=0), cfg)
    for horizon, observed in zip(CHECKPOINTS[1:], mean_regret_curve[1:]):
        bound = dependent_regret_bound(
            gaps, BoundParams(), cfg.budget, cfg.resources, cfg.space.n, horizon
        )
        assert observed <= bound, f"T={horizon}: regret {observed:.1f} > {bound:.1f}"


def test_regret_decade_increments_taper(mean_regret_curve):
    # Logarithmic growth signature: each decade of rounds should add no
    # more regret than the previous one, up to a 2x slack for noise.
    increments = np.diff(mean_regret_curve)
    assert np.all(increments > 0.0)
    for earlier, later in zip(increments, increments[1:]):
        assert later <= 2.0 * earlier, f"decade increments {increments}"


def test_grid_optimum_sits_within_the_lipschitz_margin():
    rng = np.random.default_rng(88)
    for trial in range(20):
        resources = int(rng.integers(1, 4))
        budget = float(rng.uniform(0.5, 3.0))
        if trial % 2 == 0:
            model = RewardModel.hinge(
                rng.uniform(0.1, 1.0, size=resources), budget=budget, rng_seed=0
            )
        else:
            model = RewardModel.concave_exp(
                rng.uniform(0.2, 1.0, size=resources),
                rng.uniform(0.3, 3.0, size=resources),
                rng_seed=0,
            )
        levels = int(rng.integers(3, 25))
        pitch = budget / (levels - 1)
        cfg = ProblemConfig(
            resources=resources,
            budget=budget,
            space=ActionSpace.uniform_grid(levels, pitch),
        )
        grid_opt = compute_opt(model, cfg)
        reference = compute_continuous_reference(model, budget, refinement=512)
        margin = model.lipschitz_constant() * resources * pitch
        width = reference.hi - reference.lo
        assert reference.hi - grid_opt <= margin + width + 1e-9


def test_normalized_continuous_regret_levels_off():
    """Final regret of the planned-grid learner, normalized by the target
    law T^(2/3) (ln T)^(1/3), should be non-increasing across decade
    horizons within a 25% slack.

    Known red at these horizons: the law is asymptotic, and every
    parameterization measured so far still gains roughly 30% per decade at
    T = 10^5 (a linear-regret learner would gain ~95%, so the check still
    separates the two regimes). The slack is kept at its strict value
    rather than loosened to whatever the current code achieves; treat a
    failure here as "not yet at the asymptote", not as a correctness or
    determinism regression.
    """
    reference = compute_continuous_reference(
        RewardModel.concave_exp(SMOOTH_PROBS, SMOOTH_THETAS, rng_seed=0),
        1.0,
        refinement=4096,
    )
    finals: dict[int, float] = {}
    for horizon in SMOOTH_HORIZONS:
        totals = []
        for rep in range(REPLICATIONS):
            model = RewardModel.concave_exp(
                SMOOTH_PROBS, SMOOTH_THETAS, rng_seed=mix_seed(SMOOTH_NOISE_SEED, rep)
            )
            trace, _plan = run_discretized(model, OracleSpec(), 1.0, horizon)
            totals.append(horizon * reference.hi - float(trace.expected.sum()))
        finals[horizon] = float(np.mean(totals))
    report = scaling_check(finals, slack=0.25)
    assert report.passed, (
        f"normalized regret {tuple(round(v, 4) for v in report.normalized)} at "
        f"horizons {report.horizons} rose faster than the 25% slack allows"
    )


def test_confidence_intervals_rarely_miss_the_truth():
    cfg = reference_cfg()
    solver = ExactDpSolver(cfg)
    truth = RewardModel.table(REFERENCE_PROBS, rng_seed=0).mean_matrix(cfg.space)
    counts = []
    for rep in range(REPLICATIONS):
        observer = CoverageObserver(truth)
        model = RewardModel.table(REFERENCE_PROBS, rng_seed=mix_seed(NOISE_SEED, rep))
        run(model, solver, cfg, 10_000, observer=observer)
        counts.append(observer.count)
    allowance = 3.0 * (math.pi**2 / 3.0) * cfg.arm_count
    assert float(np.mean(counts)) <= allowance, f"violation counts {counts}"


def _tiled_clone(model: RewardModel, k: int, copies: int) -> RewardModel:
    """A model whose resources are ``copies`` identical copies of resource
    k, so a single rewards_from_uniforms call transforms a whole block of
    per-round uniforms through the environment's own arithmetic."""
    k0 = k - 1
    if model.family == "table":
        return RewardModel.table(
            np.tile(model.probs[k0], (copies, 1)), rng_seed=model.rng_seed
        )
    if model.family == "hinge":
        return RewardModel.hinge(
            np.full(copies, model.thetas[k0]),
            budget=model.budget,
            rng_seed=model.rng_seed,
        )
    return RewardModel.concave_exp(
        np.full(copies, model.success_probs[k0]),
        np.full(copies, model.thetas[k0]),
        rng_seed=model.rng_seed,
    )


def test_sampled_rewards_match_closed_form_means():
    cases = [
        (
            RewardModel.table(REFERENCE_PROBS, rng_seed=11),
            ActionSpace.integer_levels(4),
        ),
        (
            RewardModel.hinge((0.6, 0.9), budget=2.0, rng_seed=11),
            ActionSpace.uniform_grid(5, 0.5),
        ),
        (
            RewardModel.concave_exp((0.9, 0.4), (0.8, 2.0), rng_seed=11),
            ActionSpace.uniform_grid(4, 1.0 / 3.0),
        ),
    ]
    draws_per_arm = 100_000
    for model, space in cases:
        for k in range(1, model.k_count + 1):
            u = model.uniform_block(k, 1, draws_per_arm)
            clone = _tiled_clone(model, k, draws_per_arm)
            for a in range(space.n):
                levels = np.full(draws_per_arm, a, dtype=np.int64)
                values = np.full(draws_per_arm, space.value(a))
                draws = clone.rewards_from_uniforms(levels, values, u)
                for t in (1, 2, 17):  # block agrees with the pointwise sampler
                    assert draws[t - 1] == model.sample_reward(ArmId(k, a), space, t)
                true = model.true_mean(ArmId(k, a), space)
                se = draws.std(ddof=1) / math.sqrt(draws_per_arm)
                assert abs(draws.mean() - true) <= 3.0 * se + 1e-12, (
                    f"{model.family} arm ({k}, {a})"
                )


def test_experiment_outputs_are_byte_identical_across_reruns_and_jobs(tmp_path):
    config = {
        "mode": "dra",
        "seed": 7,
        "problem": {"resources": 2, "budget": 2.0, "levels": 3},
        "rewards": {"family": "table", "probs": [[0.1, 0.5, 0.6], [0.05, 0.3, 0.9]]},
        "horizons": [50, 200],
        "replications": 4,
        "write_traces": True,
    }
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(config))

    def snapshot(out_dir):
        return {
            p.relative_to(out_dir).as_posix(): p.read_bytes()
            for p in sorted(out_dir.rglob("*"))
            if p.is_file()
        }

    outs = [tmp_path / name for name in ("first", "second", "third")]
    for out_dir, jobs in zip(outs, ("1", "1", "3")):
        code = cli_main(
            ["run", "--config", str(cfg_path), "--out", str(out_dir), "--jobs", jobs]
        )
        assert code == 0
    first, second, third = (snapshot(out) for out in outs)
    assert first.keys() == second.keys() == third.keys()
    assert first == second  # rerun is byte-identical
    assert first == third  # worker count never leaks into the outputs
