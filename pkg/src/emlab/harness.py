"""Experiment drivers tying the sample and population dynamics together.

Contents: same-initialization coupled runs and their n-ladder aggregation
(sample updates track the population flow, with final b-error shrinking like
n^{-1/2}); per-step contraction-constant estimation from trajectory records;
a worst-case simulation check of the error-accumulation recursion

    a_t <= kappa_a a_{t-1} + eps_a,
    e_t <= kappa_b e_{t-1} + sqrt(c_b a_{t-1}) + eps_b,

against its closed-form envelopes; and an empirical-mean concentration spot
check.  Every function here is deterministic given its seed arguments:
per-trial RNG streams are spawned as default_rng([seed, trial]) and results
are aggregated in trial order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import InsufficientData
from .geometry import ABState, MixtureModel
from .population import StopRule, Trajectory, run
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .sampling import run_sample, sample_mixture

# forces runs to use the full iteration budget (no step is ever this small
# away from an exact fixed point)
_NEVER_TOL = 1e-300


@dataclass(frozen=True)
class ConsistencyResult:
    """Medians over trials of coupled-run statistics along a sample-size ladder."""

    n_ladder: tuple[int, ...]
    sup_discrepancy: tuple[float, ...]
    final_error: tuple[float, ...]
    slope: float
    trials: int
    seeds: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.n_ladder, self.n_ladder[1:])):
            raise ValueError(f"n_ladder must be strictly increasing, got {self.n_ladder}")


class ContractionEstimate(NamedTuple):
    kappa_a: float
    kappa_b: float
    kappa_sin: float
    T0: int
    valid: bool


def _state_distance(x: ABState, y: ABState) -> float:
    return math.hypot(
        float(np.linalg.norm(x.a - y.a)), float(np.linalg.norm(x.b - y.b))
    )


def _sup_discrepancy(sample_traj: Trajectory, pop_traj: Trajectory) -> float:
    return max(
        _state_distance(rs.state, rp.state)
        for rs, rp in zip(sample_traj.records, pop_traj.records)
    )


def coupled_run(
    init: ABState,
    model: MixtureModel,
    n: int,
    T: int,
    seed,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> tuple[Trajectory, Trajectory, float]:
    """Run sample and population EM from the same init for exactly T steps.

    Returns (sample trajectory, population trajectory, sup over recorded
    iterates of the concatenated state distance).
    """
    stop = StopRule(max_iters=T, step_tol=_NEVER_TOL)
    data = sample_mixture(model, n, seed)
    sample_traj = run_sample(init, data, stop)
    pop_traj = run(init, model, stop, spec)
    return sample_traj, pop_traj, _sup_discrepancy(sample_traj, pop_traj)


def consistency_ladder(
    init: ABState,
    model: MixtureModel,
    n_ladder,
    T: int = 50,
    trials: int = 20,
    seed: int = 0,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> ConsistencyResult:
    """Median coupled-run statistics over `trials` seeds for each ladder rung.

    The population trajectory is shared across trials (it does not depend on
    the data); trial k of every rung reuses stream [seed, k], which acts as a
    common-random-numbers coupling along the ladder.
    """
    n_ladder = tuple(int(n) for n in n_ladder)
    stop = StopRule(max_iters=T, step_tol=_NEVER_TOL)
    pop_traj = run(init, model, stop, spec)
    trial_seeds = tuple(range(trials))
    sups, finals = [], []
    for n in n_ladder:
        sup_n, fin_n = [], []
        for k in trial_seeds:
            data = sample_mixture(model, n, [seed, k])
            straj = run_sample(init, data, stop)
            sup_n.append(_sup_discrepancy(straj, pop_traj))
            fin_n.append(float(np.linalg.norm(straj.final_state.b - straj.target)))
        sups.append(float(np.median(sup_n)))
        finals.append(float(np.median(fin_n)))
    result = ConsistencyResult(
        n_ladder=n_ladder,
        sup_discrepancy=tuple(sups),
        final_error=tuple(finals),
        slope=float("nan"),
        trials=trials,
        seeds=trial_seeds,
    )
    if len(n_ladder) >= 4:
        result = replace(result, slope=rate_fit(result))
    return result


def rate_fit(result: ConsistencyResult) -> float:
    """Least-squares slope of log(final error) against log(sample size)."""
    if len(result.n_ladder) < 4:
        raise InsufficientData(
            f"rate fit needs >= 4 ladder points, got {len(result.n_ladder)}"
        )
    if any(not e > 0.0 for e in result.final_error):
        raise InsufficientData("rate fit needs strictly positive final errors")
    slope, _ = np.polyfit(np.log(result.n_ladder), np.log(result.final_error), 1)
    return float(slope)


def contraction_estimate(traj: Trajectory) -> ContractionEstimate:
    """Fit per-step contraction factors from a trajectory's recorded ratios.

    T0 is the last step index whose b-error ratio is missing or >= 1 (0 when
    contraction holds from the start); the kappas are the largest ratios over
    the post-T0 tail.  `valid` requires a finite tail estimate kappa_b < 1
    with no tail ratio of any kind reaching 1.
    """
    if len(traj) < 5:
        raise InsufficientData(f"need >= 5 records to estimate contraction, got {len(traj)}")
    records = traj.records
    bad = [r.t for r in records[1:] if r.ratio_b is None or not r.ratio_b < 1.0]
    T0 = max(bad) if bad else 0
    tail = [r for r in records if r.t > T0]

    def tail_max(field: str) -> float:
        vals = [getattr(r, field) for r in tail]
        vals = [v for v in vals if v is not None]
        return max(vals) if vals else float("nan")

    kappa_a = tail_max("ratio_a")
    kappa_b = tail_max("ratio_b")
    kappa_sin = tail_max("ratio_sin")
    valid = (
        math.isfinite(kappa_b)
        and kappa_b < 1.0
        and not (math.isfinite(kappa_a) and kappa_a >= 1.0)
        and not (math.isfinite(kappa_sin) and kappa_sin >= 1.0)
    )
    return ContractionEstimate(kappa_a, kappa_b, kappa_sin, T0, valid)


def error_accumulation_check(
    eps_a: float,
    eps_b: float,
    kappas: tuple[float, float],
    c_b: float,
    T: int,
) -> bool:
    """Simulate the two-level error recursion at worst case (equalities) from
    a_0 = e_0 = 1 and check the closed-form envelopes at every step.

    Envelopes:  a_t <= kappa_a^t + eps_a/(1-kappa_a)  and
    e_t <= kappa_b^t + t gamma^{t-1} sqrt(c_b)
          + sqrt(c_b eps_a/(1-kappa_a))/(1-kappa_b) + eps_b/(1-kappa_b),
    gamma = max(sqrt(kappa_a), kappa_b).
    """
    kappa_a, kappa_b = kappas
    for name, k in (("kappa_a", kappa_a), ("kappa_b", kappa_b)):
        if not 0.0 < k < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {k!r}")
    if eps_a < 0.0 or eps_b < 0.0 or c_b < 0.0:
        raise ValueError("eps_a, eps_b and c_b must be nonnegative")
    gamma = max(math.sqrt(kappa_a), kappa_b)
    a_stat = eps_a / (1.0 - kappa_a)
    e_stat = math.sqrt(c_b * a_stat) / (1.0 - kappa_b) + eps_b / (1.0 - kappa_b)
    a, e = 1.0, 1.0
    for t in range(1, T + 1):
        e = kappa_b * e + math.sqrt(c_b * a) + eps_b
        a = kappa_a * a + eps_a
        a_bound = kappa_a**t + a_stat
        e_bound = kappa_b**t + t * gamma ** (t - 1) * math.sqrt(c_b) + e_stat
        if a > a_bound * (1.0 + 1e-12) or e > e_bound * (1.0 + 1e-12):
            return False
    return True


def concentration_check(
    model: MixtureModel,
    n: int,
    delta: float,
    trials: int,
    seed: int = 0,
    factor: float = 4.0,
) -> float:
    """Fraction of trials where the empirical mean norm exceeds
    factor * (|theta*| + 1) * sqrt((2d + ln(1/delta)) / n)."""
    if trials < 100:
        raise InsufficientData(f"need >= 100 trials, got {trials}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    bound = factor * (model.norm_theta + 1.0) * math.sqrt(
        (2.0 * model.dim + math.log(1.0 / delta)) / n
    )
    violations = 0
    for k in range(trials):
        data = sample_mixture(model, n, [seed, k])
        if float(np.linalg.norm(data.mean)) > bound:
            violations += 1
    return violations / trials
