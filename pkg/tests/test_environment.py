import math

import numpy as np
import pytest

from banditalloc import ActionSpace, ArmId, RewardModel
from banditalloc import streams


class TestStreams:
    def test_pointwise_reproducible(self):
        a = streams.uniform_at(42, 3, 100)
        b = streams.uniform_at(42, 3, 100)
        assert a == b
        assert 0.0 <= a < 1.0

    def test_distinct_addresses_differ(self):
        base = streams.uniform_at(42, 3, 100)
        assert streams.uniform_at(43, 3, 100) != base
        assert streams.uniform_at(42, 4, 100) != base
        assert streams.uniform_at(42, 3, 101) != base

    def test_block_matches_pointwise(self):
        block = streams.uniform_block(7, 2, 5, 64)
        for i in range(64):
            assert block[i] == streams.uniform_at(7, 2, 5 + i)

    def test_block_edge_cases(self):
        assert streams.uniform_block(1, 1, 1, 0).shape == (0,)
        with pytest.raises(ValueError):
            streams.uniform_block(1, 1, 1, -1)

    def test_uniform_moments(self):
        block = streams.uniform_block(0, 0, 0, 10_000)
        assert abs(block.mean() - 0.5) < 0.02
        assert block.min() >= 0.0 and block.max() < 1.0

    def test_mix_seed_spreads(self):
        seeds = {streams.mix_seed(42, i) for i in range(200)}
        assert len(seeds) == 200
        assert all(0 <= s < 2**64 for s in seeds)
        # adding replications never changes earlier ones
        assert streams.mix_seed(42, 3) == streams.mix_seed(42, 3)


class TestTableFamily:
    def test_true_mean_is_the_table(self):
        probs = np.array([[0.1, 0.9], [0.4, 0.2]])
        model = RewardModel.table(probs, rng_seed=0)
        space = ActionSpace.integer_levels(2)
        for k in (1, 2):
            for a in (0, 1):
                assert model.true_mean(ArmId(k, a), space) == probs[k - 1, a]
        assert np.array_equal(model.mean_matrix(space), probs)

    def test_degenerate_probabilities(self):
        model = RewardModel.table([[0.0, 1.0]], rng_seed=5)
        space = ActionSpace.integer_levels(2)
        for t in range(1, 50):
            assert model.sample_reward(ArmId(1, 0), space, t) == 0.0
            assert model.sample_reward(ArmId(1, 1), space, t) == 1.0

    def test_samples_are_bernoulli(self):
        model = RewardModel.table([[0.3, 0.7]], rng_seed=2)
        space = ActionSpace.integer_levels(2)
        draws = [model.sample_reward(ArmId(1, 1), space, t) for t in range(1, 400)]
        assert set(draws) <= {0.0, 1.0}
        assert abs(np.mean(draws) - 0.7) < 0.1

    def test_rejects_grid_spaces(self):
        model = RewardModel.table([[0.3, 0.7]], rng_seed=2)
        with pytest.raises(ValueError):
            model.sample_reward(ArmId(1, 0), ActionSpace.uniform_grid(2, 0.5), 1)

    def test_rejects_level_mismatch(self):
        model = RewardModel.table([[0.3, 0.7]], rng_seed=2)
        with pytest.raises(ValueError):
            model.mean_matrix(ActionSpace.integer_levels(3))

    def test_no_lipschitz_constant(self):
        model = RewardModel.table([[0.3, 0.7]], rng_seed=2)
        with pytest.raises(ValueError):
            model.lipschitz_constant()

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            RewardModel.table([[0.3, 1.7]], rng_seed=0)
        with pytest.raises(ValueError):
            RewardModel.table([0.3, 0.7], rng_seed=0)


class TestHingeFamily:
    def test_closed_form_means(self):
        # theta=1, Q=1: mean(v) = v^2/2 below the spread, v - 1/2 above
        model = RewardModel.hinge([1.0], budget=1.0, rng_seed=0)
        space = ActionSpace.uniform_grid(3, 0.5)
        assert model.true_mean(ArmId(1, 0), space) == 0.0
        assert model.true_mean(ArmId(1, 1), space) == 0.125
        assert model.true_mean(ArmId(1, 2), space) == 0.5

    def test_closed_form_past_the_spread(self):
        # theta=0.5, Q=2: spread 1; v=1 sits at the boundary, v=2 above it
        model = RewardModel.hinge([0.5], budget=2.0, rng_seed=0)
        space = ActionSpace.integer_levels(3)
        assert model.true_mean(ArmId(1, 1), space) == pytest.approx(0.25)
        assert model.true_mean(ArmId(1, 2), space) == pytest.approx(0.75)

    def test_mean_matrix_matches_pointwise(self):
        model = RewardModel.hinge([0.3, 0.9], budget=2.0, rng_seed=0)
        space = ActionSpace.uniform_grid(5, 0.5)
        mat = model.mean_matrix(space)
        for k in (1, 2):
            for a in range(5):
                assert mat[k - 1, a] == pytest.approx(
                    model.true_mean(ArmId(k, a), space), abs=1e-15
                )

    def test_zero_budget_level_earns_nothing(self):
        model = RewardModel.hinge([0.7, 0.2], budget=3.0, rng_seed=9)
        space = ActionSpace.integer_levels(4)
        for t in range(1, 30):
            assert model.sample_reward(ArmId(2, 0), space, t) == 0.0

    def test_sample_reconstruction(self):
        # the draw is exactly max(v - theta*Q*u, 0)/Q for the addressed uniform
        model = RewardModel.hinge([0.6], budget=2.0, rng_seed=11)
        space = ActionSpace.integer_levels(3)
        for t in (1, 2, 17):
            u = streams.uniform_at(11, 1, t)
            want = max(2.0 - 0.6 * 2.0 * u, 0.0) / 2.0
            assert model.sample_reward(ArmId(1, 2), space, t) == want

    def test_lipschitz_constant(self):
        assert RewardModel.hinge([0.5], budget=2.0, rng_seed=0).lipschitz_constant() == 0.5
        assert RewardModel.hinge([1.0], budget=1.0, rng_seed=0).lipschitz_constant() == 1.0

    def test_rejects_levels_past_budget(self):
        model = RewardModel.hinge([1.0], budget=1.0, rng_seed=0)
        with pytest.raises(ValueError):
            model.mean_matrix(ActionSpace.uniform_grid(3, 0.75))

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            RewardModel.hinge([0.0], budget=1.0, rng_seed=0)
        with pytest.raises(ValueError):
            RewardModel.hinge([1.5], budget=1.0, rng_seed=0)
        with pytest.raises(ValueError):
            RewardModel.hinge([0.5], budget=0.0, rng_seed=0)


class TestConcaveExpFamily:
    def test_closed_form_mean(self):
        model = RewardModel.concave_exp([1.0], [1.0], rng_seed=0)
        space = ActionSpace.uniform_grid(2, 1.0)
        assert model.true_mean(ArmId(1, 1), space) == pytest.approx(1 - math.exp(-1))
        assert model.true_mean(ArmId(1, 0), space) == 0.0

    def test_deterministic_when_p_is_one(self):
        model = RewardModel.concave_exp([1.0], [1.0], rng_seed=4)
        space = ActionSpace.uniform_grid(2, 1.0)
        want = 1 - math.exp(-1)
        for t in range(1, 40):
            assert model.sample_reward(ArmId(1, 1), space, t) == pytest.approx(want)

    def test_never_pays_when_p_is_zero(self):
        model = RewardModel.concave_exp([0.0], [1.0], rng_seed=4)
        space = ActionSpace.uniform_grid(2, 1.0)
        assert all(
            model.sample_reward(ArmId(1, 1), space, t) == 0.0 for t in range(1, 40)
        )

    def test_lipschitz_constant_is_max_inverse_theta(self):
        assert RewardModel.concave_exp(
            [0.5, 0.5], [1.0, 2.0], rng_seed=0
        ).lipschitz_constant() == 1.0
        assert RewardModel.concave_exp([0.5], [4.0], rng_seed=0).lipschitz_constant() == 0.25

    def test_scale_flattens_the_curve(self):
        space = ActionSpace.uniform_grid(5, 1.0)
        steep = RewardModel.concave_exp([1.0], [0.5], rng_seed=0).mean_matrix(space)
        flat = RewardModel.concave_exp([1.0], [4.0], rng_seed=0).mean_matrix(space)
        assert steep[0, 1] > flat[0, 1]
        assert np.all(np.diff(steep[0]) >= 0) and np.all(np.diff(flat[0]) >= 0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            RewardModel.concave_exp([1.2], [1.0], rng_seed=0)
        with pytest.raises(ValueError):
            RewardModel.concave_exp([0.5], [0.0], rng_seed=0)
        with pytest.raises(ValueError):
            RewardModel.concave_exp([0.5, 0.5], [1.0], rng_seed=0)


def arm_grid(model, space):
    for k in range(1, model.k_count + 1):
        for a in range(space.n):
            yield ArmId(k, a)


@pytest.mark.parametrize(
    "model,space",
    [
        (
            RewardModel.table([[0.2, 0.8, 0.5], [1.0, 0.0, 0.3]], rng_seed=1),
            ActionSpace.integer_levels(3),
        ),
        (
            RewardModel.hinge([0.4, 1.0], budget=2.0, rng_seed=1),
            ActionSpace.uniform_grid(4, 2.0 / 3.0),
        ),
        (
            RewardModel.concave_exp([0.9, 0.4], [0.7, 2.0], rng_seed=1),
            ActionSpace.integer_levels(3),
        ),
    ],
    ids=["table", "hinge", "concave_exp"],
)
class TestSharedContract:
    def test_rewards_and_means_in_unit_interval(self, model, space):
        for arm in arm_grid(model, space):
            mean = model.true_mean(arm, space)
            assert 0.0 <= mean <= 1.0
            for t in range(1, 60):
                assert 0.0 <= model.sample_reward(arm, space, t) <= 1.0

    def test_round_index_validation(self, model, space):
        with pytest.raises(ValueError):
            model.sample_reward(ArmId(1, 0), space, 0)
        with pytest.raises(ValueError):
            model.sample_reward(ArmId(3, 0), space, 1)

    def test_bulk_path_matches_pointwise(self, model, space):
        # the runner's vectorized transform must reproduce sample_reward
        rng = np.random.default_rng(0)
        values = space.level_values
        for t in (1, 5, 33):
            levels = rng.integers(0, space.n, size=model.k_count)
            u = np.array(
                [streams.uniform_at(model.rng_seed, k, t) for k in (1, 2)]
            )
            got = model.rewards_from_uniforms(levels, values[levels], u)
            for k in (1, 2):
                want = model.sample_reward(ArmId(k, levels[k - 1]), space, t)
                assert got[k - 1] == want

    def test_same_seed_same_draws(self, model, space):
        a = [model.sample_reward(ArmId(1, space.n - 1), space, t) for t in range(1, 30)]
        b = [model.sample_reward(ArmId(1, space.n - 1), space, t) for t in range(1, 30)]
        assert a == b


class TestMonteCarloMeans:
    @pytest.mark.parametrize(
        "model,space",
        [
            (
                RewardModel.table([[0.25, 0.75]], rng_seed=3),
                ActionSpace.integer_levels(2),
            ),
            (
                RewardModel.hinge([0.8], budget=1.0, rng_seed=3),
                ActionSpace.uniform_grid(3, 0.5),
            ),
            (
                RewardModel.concave_exp([0.6], [1.5], rng_seed=3),
                ActionSpace.uniform_grid(3, 0.5),
            ),
        ],
        ids=["table", "hinge", "concave_exp"],
    )
    def test_sample_mean_approaches_true_mean(self, model, space):
        # a light version of the full Monte Carlo acceptance check
        n_draws = 2000
        for a in range(space.n):
            arm = ArmId(1, a)
            draws = np.array(
                [model.sample_reward(arm, space, t) for t in range(1, n_draws + 1)]
            )
            true = model.true_mean(arm, space)
            se = draws.std(ddof=1) / np.sqrt(n_draws)
            assert abs(draws.mean() - true) <= 4 * se + 1e-12
