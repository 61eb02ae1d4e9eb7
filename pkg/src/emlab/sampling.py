"""Finite-sample EM updates for both mean parameterizations.

Data model: each draw is y = zeta * theta_star + omega with zeta a Rademacher
sign and omega standard Gaussian, i.e. an i.i.d. sample from the balanced
two-component mixture with unit covariance.  The sample updates mirror the
population maps:

    Model 1:  theta+ = (1/n) sum_i tanh(<y_i, theta>) y_i
    Model 2 (mu-form):   mu1+ = sum v_i y_i / sum v_i,   mu2+ analogous,
    Model 2 (ab-form):   a+ = qh (1-2ph)/(2 ph (1-ph)) + ybar/(2(1-ph)),
                         b+ = qh /(2 ph (1-ph))         - ybar/(2(1-ph)),

with ph = (1/n) sum w_i, qh = (1/n) sum w_i y_i, and posterior weights in the
saturation-safe tanh form

    w_i = 0.5 * (1 + tanh(<y_i - a, b>))        (weight of the +b component)
    v_i = 0.5 * (1 - tanh(<y_i - a, b>))        (weight of the -b component).

tanh is odd bit-for-bit, so w and v are exactly complementary and the two
Model-2 forms agree to rounding (they are the same algebra).  Note that for
|<y - a, b>| beyond ~19 the weights round to exactly 0.0/1.0; degenerate
weight sums raise instead of being clamped.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from .errors import DegenerateWeights, DimensionMismatch
from .geometry import ABState, MeanPair, MixtureModel, from_ab, to_ab
from .population import StopRule, Trajectory, _make_record, _sign_target


class Dataset:
    """Immutable sample matrix plus the generation record (seed, model)."""

    def __init__(self, data: np.ndarray, seed, model: MixtureModel) -> None:
        data = np.array(data, dtype=float)
        if data.ndim != 2 or data.shape[0] < 1:
            raise ValueError(f"data must be a nonempty n x d matrix, got shape {data.shape}")
        if data.shape[1] != model.dim:
            raise DimensionMismatch(
                f"data has {data.shape[1]} columns but model dimension is {model.dim}"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("data contains non-finite entries")
        data.setflags(write=False)
        self.data = data
        self.seed = seed
        self.model = model

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @cached_property
    def mean(self) -> np.ndarray:
        ybar = self.data.mean(axis=0)
        ybar.setflags(write=False)
        return ybar

    def to_csv(self, path) -> None:
        """Write one row per sample with a '#' metadata preamble."""
        # repr of the *Python* float round-trips; numpy scalar repr does not
        theta = ",".join(repr(float(v)) for v in self.model.theta_star)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# seed: {self.seed}\n")
            fh.write(f"# n: {self.n}\n")
            fh.write(f"# d: {self.dim}\n")
            fh.write(f"# theta_star: [{theta}]\n")
            fh.write(",".join(f"y{j}" for j in range(self.dim)) + "\n")
            for row in self.data:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def sample_mixture(model: MixtureModel, n: int, seed) -> Dataset:
    """Draw n rows zeta_i * theta_star + omega_i; deterministic given seed."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    zeta = rng.integers(0, 2, size=n) * 2 - 1
    omega = rng.standard_normal((n, model.dim))
    return Dataset(zeta[:, None] * model.theta_star + omega, seed, model)


def _signed_weights(data: Dataset, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """tanh(<y_i - a, b>) for every row; the +b weight is (1 + this)/2."""
    return np.tanh((data.data - a) @ b)


def model1_step_sample(theta_hat: np.ndarray, data: Dataset) -> np.ndarray:
    """One sample EM step for the symmetric model: (1/n) sum tanh(<y,theta>) y."""
    theta_hat = np.asarray(theta_hat, dtype=float)
    if theta_hat.shape != (data.dim,):
        raise DimensionMismatch(
            f"theta_hat has shape {theta_hat.shape}, expected ({data.dim},)"
        )
    return (data.data.T @ np.tanh(data.data @ theta_hat)) / data.n


def model2_step_mu(means: MeanPair, data: Dataset) -> MeanPair:
    """One sample EM step in the (mu1, mu2) parameterization."""
    if means.mu1.shape != (data.dim,):
        raise DimensionMismatch(
            f"means have dimension {means.mu1.shape[0]}, data has {data.dim}"
        )
    state = to_ab(means)
    t = _signed_weights(data, state.a, state.b)
    v = 0.5 * (1.0 - t)
    w = 0.5 * (1.0 + t)
    sv = v.sum()
    sw = w.sum()
    if sv < 1e-300 or sw < 1e-300:
        raise DegenerateWeights(
            f"posterior weight sums degenerate: sum v = {sv!r}, sum (1-v) = {sw!r}"
        )
    return MeanPair(mu1=(v @ data.data) / sv, mu2=(w @ data.data) / sw)


def _step_ab_core(state: ABState, data: Dataset) -> tuple[ABState, float]:
    t = _signed_weights(data, state.a, state.b)
    w = 0.5 * (1.0 + t)
    p_hat = float(w.mean())
    if not 1e-15 < p_hat < 1.0 - 1e-15:
        raise DegenerateWeights(f"p_hat = {p_hat!r} outside (1e-15, 1 - 1e-15)")
    q_hat = (w @ data.data) / data.n
    ybar = data.mean
    denom = 2.0 * p_hat * (1.0 - p_hat)
    shift = ybar / (2.0 * (1.0 - p_hat))
    a_new = q_hat * ((1.0 - 2.0 * p_hat) / denom) + shift
    b_new = q_hat / denom - shift
    return ABState(a=a_new, b=b_new), p_hat


def model2_step_ab(state: ABState, data: Dataset) -> ABState:
    """One sample EM step in (a, b) coordinates; same algebra as the mu-form."""
    if state.dim != data.dim:
        raise DimensionMismatch(
            f"state has dimension {state.dim}, data has {data.dim}"
        )
    new_state, _ = _step_ab_core(state, data)
    return new_state


def sample_loglik(state: ABState, data: Dataset) -> float:
    """Mean per-sample log-likelihood of the two-component model at `state`.

    log density = -d/2 log(2 pi) - (|y-a|^2 + |b|^2)/2 + log cosh(<y-a, b>),
    with log cosh evaluated as logaddexp(z, -z) - log 2 to stay finite.
    """
    if state.dim != data.dim:
        raise DimensionMismatch(
            f"state has dimension {state.dim}, data has {data.dim}"
        )
    resid = data.data - state.a
    z = resid @ state.b
    log_cosh = np.logaddexp(z, -z) - np.log(2.0)
    quad = 0.5 * (np.einsum("ij,ij->i", resid, resid) + state.b @ state.b)
    return float(np.mean(-0.5 * data.dim * np.log(2.0 * np.pi) - quad + log_cosh))


def _step_mu_as_ab(state: ABState, data: Dataset) -> tuple[ABState, float]:
    t = _signed_weights(data, state.a, state.b)
    p_hat = float((0.5 * (1.0 + t)).mean())
    return to_ab(model2_step_mu(from_ab(state), data)), p_hat


_FORMS = {"ab": _step_ab_core, "mu": _step_mu_as_ab}


def run_sample(
    init: ABState, data: Dataset, stop: StopRule = StopRule(), form: str = "ab"
) -> Trajectory:
    """Iterate the Model-2 sample step from `init` on fixed data.

    Record semantics match the population runner: row t is the iterate the
    step was taken from, with p evaluated there; a converged run does not
    append the post-step state as a row (it is Trajectory.final_state).
    """
    if init.dim != data.dim:
        raise DimensionMismatch(f"init has dimension {init.dim}, data has {data.dim}")
    try:
        step = _FORMS[form]
    except KeyError:
        raise ValueError(f"form must be one of {sorted(_FORMS)}, got {form!r}") from None
    model = data.model
    target = _sign_target(init, model)
    records = []
    state = init
    prev = None
    converged = False
    for t in range(stop.max_iters):
        new_state, p_hat = step(state, data)
        rec = _make_record(t, state, p_hat, prev, target, model)
        records.append(rec)
        prev = rec
        delta = math.hypot(
            float(np.linalg.norm(new_state.a - state.a)),
            float(np.linalg.norm(new_state.b - state.b)),
        )
        state = new_state
        if delta <= stop.step_tol:
            converged = True
            break
    if not converged:
        t_signed = _signed_weights(data, state.a, state.b)
        p_final = float((0.5 * (1.0 + t_signed)).mean())
        records.append(_make_record(stop.max_iters, state, p_final, prev, target, model))
    return Trajectory(records=tuple(records), final_state=state, converged=converged, target=target)
