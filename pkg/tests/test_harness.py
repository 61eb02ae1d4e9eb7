"""Sample-vs-population harness tests: rate fitting, contraction estimation
on synthetic trajectories, and the concentration/accumulation checks."""

import math

import numpy as np
import pytest

from emlab import (
    ABState,
    ConsistencyResult,
    InsufficientData,
    MixtureModel,
    PopStepRecord,
    Trajectory,
    concentration_check,
    consistency_ladder,
    contraction_estimate,
    coupled_run,
    error_accumulation_check,
    rate_fit,
)

MODEL = MixtureModel(2, [1.0, 0.0])
INIT = ABState([0.1, 0.0], [0.4, 0.2])


def _result(n_ladder, final_error):
    return ConsistencyResult(
        n_ladder=tuple(n_ladder),
        sup_discrepancy=tuple(final_error),
        final_error=tuple(final_error),
        slope=float("nan"),
        trials=1,
        seeds=(0,),
    )


def _toy_trajectory(ratio_bs, ratio_a=0.5, ratio_sin=0.5):
    """Hand-built records with prescribed per-step ratios."""
    state = ABState([0.0], [1.0])
    records = []
    for t, rb in enumerate(ratio_bs):
        first = t == 0
        records.append(
            PopStepRecord(
                t=t,
                state=state,
                p=0.5,
                beta=0.1,
                norm_a=0.5**t,
                dist_b=0.5**t,
                ratio_a=None if first else ratio_a,
                ratio_b=None if first else rb,
                ratio_sin=None if first else ratio_sin,
            )
        )
    return Trajectory(
        records=tuple(records),
        final_state=state,
        converged=True,
        target=np.array([1.0]),
    )


class TestRateFit:
    def test_exact_power_law(self):
        ladder = (100, 1_000, 10_000, 100_000)
        errors = [10.0 * n**-0.5 for n in ladder]
        assert rate_fit(_result(ladder, errors)) == pytest.approx(-0.5, abs=1e-12)

    def test_needs_four_points(self):
        with pytest.raises(InsufficientData):
            rate_fit(_result((10, 100, 1000), (1.0, 0.5, 0.25)))

    def test_rejects_vanishing_errors(self):
        with pytest.raises(InsufficientData):
            rate_fit(_result((10, 100, 1000, 10000), (1.0, 0.5, 0.0, 0.1)))

    def test_ladder_must_increase(self):
        with pytest.raises(ValueError):
            _result((100, 100, 1000, 10000), (1.0, 0.5, 0.2, 0.1))


class TestContractionEstimate:
    def test_clean_contraction(self):
        est = contraction_estimate(_toy_trajectory([None, 0.5, 0.5, 0.5, 0.5, 0.5]))
        assert est.valid
        assert est.T0 == 0
        assert est.kappa_b == 0.5
        assert est.kappa_a == 0.5
        assert est.kappa_sin == 0.5

    def test_burn_in_spike_moves_T0(self):
        """One ratio >= 1 at t=2 pushes the fitting window past it."""
        est = contraction_estimate(_toy_trajectory([None, 0.5, 1.2, 0.5, 0.4, 0.5]))
        assert est.T0 == 2
        assert est.valid
        assert est.kappa_b == 0.5

    def test_divergent_tail_is_invalid(self):
        est = contraction_estimate(_toy_trajectory([None, 1.1, 1.2, 1.1, 1.3, 1.5]))
        assert not est.valid
        assert math.isnan(est.kappa_b)

    def test_noncontracting_midpoint_invalidates(self):
        est = contraction_estimate(
            _toy_trajectory([None, 0.5, 0.5, 0.5, 0.5, 0.5], ratio_a=1.5)
        )
        assert not est.valid
        assert est.kappa_a == 1.5

    def test_needs_five_records(self):
        with pytest.raises(InsufficientData):
            contraction_estimate(_toy_trajectory([None, 0.5, 0.5]))

    def test_on_a_real_run(self):
        from emlab import StopRule, run

        traj = run(INIT, MODEL, StopRule(max_iters=500, step_tol=1e-8))
        est = contraction_estimate(traj)
        assert est.valid
        assert 0.0 < est.kappa_b < 1.0


class TestCoupledRun:
    def test_deterministic_and_seed_sensitive(self):
        first = coupled_run(INIT, MODEL, 2000, 8, 5)
        again = coupled_run(INIT, MODEL, 2000, 8, 5)
        other = coupled_run(INIT, MODEL, 2000, 8, 6)
        assert first[2] == again[2]
        assert first[2] != other[2]

    def test_exact_step_budget(self):
        sample_traj, pop_traj, sup = coupled_run(INIT, MODEL, 2000, 8, 5)
        # T steps plus the appended final record on both sides
        assert len(sample_traj.records) == 9
        assert len(pop_traj.records) == 9
        assert sup >= 0.0

    def test_sup_dominates_every_step(self):
        sample_traj, pop_traj, sup = coupled_run(INIT, MODEL, 2000, 8, 5)
        for rs, rp in zip(sample_traj.records, pop_traj.records):
            gap = math.hypot(
                float(np.linalg.norm(rs.state.a - rp.state.a)),
                float(np.linalg.norm(rs.state.b - rp.state.b)),
            )
            assert gap <= sup


class TestConsistencyLadder:
    def test_small_ladder_structure(self):
        result = consistency_ladder(INIT, MODEL, (200, 400), T=5, trials=3, seed=1)
        assert result.n_ladder == (200, 400)
        assert len(result.sup_discrepancy) == 2
        assert len(result.final_error) == 2
        assert all(v > 0.0 for v in result.sup_discrepancy)
        assert result.seeds == (0, 1, 2)
        assert math.isnan(result.slope)  # needs >= 4 rungs for a rate


class TestErrorAccumulation:
    def test_envelopes_hold(self):
        for kappas in ((0.3, 0.6), (0.8, 0.2), (0.5, 0.5)):
            assert error_accumulation_check(1e-3, 1e-3, kappas, 0.2, 200)

    def test_exact_recursions_without_noise(self):
        assert error_accumulation_check(0.0, 0.0, (0.25, 0.5), 1.0, 100)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            error_accumulation_check(1e-3, 1e-3, (1.0, 0.5), 0.2, 10)
        with pytest.raises(ValueError):
            error_accumulation_check(1e-3, 1e-3, (0.5, 0.0), 0.2, 10)
        with pytest.raises(ValueError):
            error_accumulation_check(-1e-3, 1e-3, (0.5, 0.5), 0.2, 10)


class TestConcentration:
    def test_violations_are_rare_at_the_stated_radius(self):
        rate = concentration_check(MixtureModel(1, [0.5]), 1000, 0.1, 100, seed=3)
        assert rate <= 0.02

    def test_deflated_radius_is_violated_often(self):
        rate = concentration_check(
            MixtureModel(1, [0.5]), 1000, 0.1, 100, seed=3, factor=0.05
        )
        assert rate >= 0.5

    def test_validation(self):
        with pytest.raises(InsufficientData):
            concentration_check(MODEL, 1000, 0.1, 99)
        with pytest.raises(ValueError):
            concentration_check(MODEL, 1000, 1.5, 100)
