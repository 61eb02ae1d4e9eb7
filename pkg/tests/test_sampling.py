"""Finite-sample EM tests: hand-checked updates, equivalence of the two
Model-2 parameterizations, likelihood ascent, and dataset plumbing."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emlab import (
    ABState,
    Dataset,
    DegenerateWeights,
    DimensionMismatch,
    MeanPair,
    MixtureModel,
    StopRule,
    from_ab,
    model1_step_sample,
    model2_step,
    model2_step_ab,
    model2_step_mu,
    run_sample,
    sample_loglik,
    sample_mixture,
    to_ab,
)

MODEL_1D = MixtureModel(1, [1.0])
MODEL_2D = MixtureModel(2, [1.0, 0.0])


def _dataset(rows, model):
    return Dataset(np.array(rows, dtype=float), None, model)


class TestModel1Step:
    def test_two_point_hand_value(self):
        """Data {2, -2} at theta = 1: both terms contribute tanh(2) * 2 / 2,
        so the update is exactly 2 tanh 2."""
        data = _dataset([[2.0], [-2.0]], MODEL_1D)
        new = model1_step_sample(np.array([1.0]), data)
        assert new[0] == pytest.approx(2.0 * math.tanh(2.0), rel=1e-15)

    def test_zero_theta_is_fixed(self):
        data = sample_mixture(MODEL_1D, 100, 3)
        new = model1_step_sample(np.array([0.0]), data)
        assert new[0] == 0.0

    def test_dim_mismatch(self):
        data = sample_mixture(MODEL_2D, 10, 0)
        with pytest.raises(DimensionMismatch):
            model1_step_sample(np.array([1.0]), data)


class TestFormEquivalence:
    """The mu-form and ab-form updates are the same algebra."""

    @settings(max_examples=30, deadline=None)
    @given(
        a=st.lists(st.floats(-1.5, 1.5), min_size=2, max_size=2),
        b=st.lists(st.floats(-1.5, 1.5), min_size=2, max_size=2),
        seed=st.integers(0, 2**31),
    )
    def test_random_instances(self, a, b, seed):
        data = sample_mixture(MODEL_2D, 50, seed)
        state = ABState(a, b)
        via_ab = model2_step_ab(state, data)
        via_mu = to_ab(model2_step_mu(from_ab(state), data))
        np.testing.assert_allclose(via_ab.a, via_mu.a, atol=1e-12)
        np.testing.assert_allclose(via_ab.b, via_mu.b, atol=1e-12)

    def test_mu_form_stays_on_weighted_means(self):
        """The mu-update is a weighted average, so it lies in the convex
        hull of the data coordinates."""
        data = sample_mixture(MODEL_2D, 200, 9)
        new = model2_step_mu(MeanPair([-0.5, 0.1], [0.7, -0.2]), data)
        lo, hi = data.data.min(axis=0), data.data.max(axis=0)
        assert np.all(new.mu1 >= lo) and np.all(new.mu1 <= hi)
        assert np.all(new.mu2 >= lo) and np.all(new.mu2 <= hi)


class TestLikelihoodAscent:
    def test_em_never_decreases_loglik(self):
        data = sample_mixture(MODEL_2D, 500, 21)
        state = ABState([0.4, -0.3], [0.2, 0.5])
        prev = sample_loglik(state, data)
        for _ in range(25):
            state = model2_step_ab(state, data)
            curr = sample_loglik(state, data)
            assert curr >= prev - 1e-12
            prev = curr

    def test_loglik_closed_form_single_point(self):
        data = _dataset([[0.7]], MODEL_1D)
        state = ABState([0.2], [0.9])
        direct = math.log(
            0.5 * math.exp(-0.5 * (0.7 - (0.2 - 0.9)) ** 2)
            + 0.5 * math.exp(-0.5 * (0.7 - (0.2 + 0.9)) ** 2)
        ) - 0.5 * math.log(2.0 * math.pi)
        assert sample_loglik(state, data) == pytest.approx(direct, rel=1e-12)


class TestLawOfLargeNumbers:
    def test_sample_step_approaches_population_step(self):
        state = ABState([0.1, 0.05], [0.6, 0.3])
        pop, _ = model2_step(state, MODEL_2D)
        data = sample_mixture(MODEL_2D, 400_000, 77)
        emp = model2_step_ab(state, data)
        assert np.linalg.norm(emp.a - pop.a) <= 2e-2
        assert np.linalg.norm(emp.b - pop.b) <= 2e-2


class TestDegenerateWeights:
    def test_one_sided_weights_raise(self):
        """Far-out data saturates tanh, emptying one component."""
        data = _dataset([[30.0], [35.0]], MODEL_1D)
        with pytest.raises(DegenerateWeights):
            model2_step_mu(MeanPair([-1.0], [1.0]), data)
        with pytest.raises(DegenerateWeights):
            model2_step_ab(ABState([0.0], [1.0]), data)


class TestDataset:
    def test_sampling_is_deterministic(self):
        d1 = sample_mixture(MODEL_2D, 50, 123)
        d2 = sample_mixture(MODEL_2D, 50, 123)
        np.testing.assert_array_equal(d1.data, d2.data)
        assert not np.array_equal(d1.data, sample_mixture(MODEL_2D, 50, 124).data)

    def test_composite_seed(self):
        d1 = sample_mixture(MODEL_2D, 20, [5, 0])
        d2 = sample_mixture(MODEL_2D, 20, [5, 1])
        assert not np.array_equal(d1.data, d2.data)

    def test_shape_and_mean_caching(self):
        data = sample_mixture(MODEL_2D, 64, 1)
        assert data.n == 64
        assert data.dim == 2
        assert data.mean is data.mean  # cached, and frozen
        with pytest.raises(ValueError):
            data.mean[0] = 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            _dataset(np.zeros((0, 1)), MODEL_1D)
        with pytest.raises(DimensionMismatch):
            _dataset([[1.0, 2.0]], MODEL_1D)
        with pytest.raises(ValueError):
            _dataset([[float("nan")]], MODEL_1D)
        with pytest.raises(ValueError):
            Dataset(np.zeros(3), None, MODEL_1D)

    def test_data_is_immutable(self):
        data = sample_mixture(MODEL_1D, 5, 0)
        with pytest.raises(ValueError):
            data.data[0, 0] = 9.9

    def test_to_csv_round_trip(self, tmp_path):
        data = sample_mixture(MODEL_2D, 7, 42)
        path = tmp_path / "sample.csv"
        data.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# seed: 42"
        assert lines[1] == "# n: 7"
        assert lines[2] == "# d: 2"
        assert lines[3].startswith("# theta_star: [")
        assert lines[4] == "y0,y1"
        parsed = np.loadtxt(path, delimiter=",", skiprows=5)
        np.testing.assert_array_equal(parsed, data.data)


class TestRunSample:
    def test_record_semantics_match_population_runner(self):
        data = sample_mixture(MODEL_2D, 1000, 6)
        stop = StopRule(max_iters=4, step_tol=1e-300)
        traj = run_sample(ABState([0.1, 0.0], [0.4, 0.2]), data, stop)
        assert not traj.converged
        assert [r.t for r in traj.records] == [0, 1, 2, 3, 4]
        np.testing.assert_array_equal(traj.records[-1].state.b, traj.final_state.b)

    def test_converged_run_stops_early(self):
        data = sample_mixture(MODEL_2D, 5000, 8)
        traj = run_sample(ABState([0.05, 0.0], [0.5, 0.1]), data, StopRule(500, 1e-9))
        assert traj.converged
        assert len(traj.records) < 500
        # the sample fixed point sits near the signed target for n this large
        assert np.linalg.norm(traj.final_state.b - traj.target) <= 0.2

    def test_both_forms_agree_along_a_run(self):
        data = sample_mixture(MODEL_2D, 300, 15)
        init = ABState([0.2, -0.1], [0.3, 0.4])
        stop = StopRule(max_iters=10, step_tol=1e-300)
        t_ab = run_sample(init, data, stop, form="ab")
        t_mu = run_sample(init, data, stop, form="mu")
        np.testing.assert_allclose(
            t_ab.final_state.b, t_mu.final_state.b, atol=1e-10
        )

    def test_unknown_form_rejected(self):
        data = sample_mixture(MODEL_2D, 10, 0)
        with pytest.raises(ValueError):
            run_sample(ABState([0.0, 0.0], [0.5, 0.0]), data, form="theta")
