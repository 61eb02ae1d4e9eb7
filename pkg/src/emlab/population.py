"""Population (infinite-sample) EM dynamics for both mean models.

Model 1 estimates a single vector theta (component means locked to ±theta);
Model 2 estimates free means, tracked here in centered (a, b) coordinates.
Each step is evaluated exactly on span(b, theta_star) via the planar
reduction and the scalar kernels:

    p  = P(x_a, ||b||, theta1)
    q  = Gamma(x_a, ||b||, theta1) e1  +  theta2 S(x_a, ||b||, theta1) e2
    a+ = q (1 - 2p) / (2p(1-p))
    b+ = q / (2p(1-p))

Model 1 is the a = 0 slice: theta+ = F(||theta||, |theta1|) e1
+ 2 theta2 S(0, ||theta||, theta1) e2, and both models share one code path
there, so ``model2_step`` at a = 0 reproduces ``model1_step`` bit-for-bit.

Exactness guarantees (no thresholding involved):
  * <a, b> == 0.0 implies p = 0.5 and a+ = 0 exactly;
  * x_theta == 0 slices (b exactly orthogonal to theta_star, constructed in
    orthogonal coordinates) keep <b+, theta_star> == 0.0 exactly;
  * b == 0 maps to the absorbing state (0, 0) with p = 0.5.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionMismatch
from .geometry import ABState, MixtureModel, PlanarCoords, planar_reduce
from .kernels import kernel_f, kernel_gamma, kernel_p, kernel_s
from .quadrature import DEFAULT_SPEC, QuadratureSpec, std_normal_cdf

_P_INTERIOR = 1e-15


@dataclass(frozen=True)
class StopRule:
    """Iteration budget and the step-size convergence threshold."""

    max_iters: int = 10_000
    step_tol: float = 1e-10

    def __post_init__(self) -> None:
        if not isinstance(self.max_iters, int) or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not self.step_tol > 0.0:
            raise ValueError(f"step_tol must be positive, got {self.step_tol!r}")


@dataclass(frozen=True)
class PopStepRecord:
    """Diagnostics for one visited iterate.

    ``t`` indexes the iterate; ``p`` is the posterior mass evaluated at this
    iterate (the scalar that produces iterate t+1).  ``beta`` is the angle
    between b and theta_star (nan when undefined), ``dist_b`` the distance of
    b to the sign-resolved target.  Ratios compare against the previous
    record and are None at t = 0 or when the previous denominator vanishes.
    """

    t: int
    state: ABState
    p: float
    beta: float
    norm_a: float
    dist_b: float
    ratio_a: Optional[float] = None
    ratio_b: Optional[float] = None
    ratio_sin: Optional[float] = None

    def __post_init__(self) -> None:
        if not (_P_INTERIOR < self.p < 1.0 - _P_INTERIOR):
            raise ValueError(f"posterior mass p left the open unit interval: {self.p!r}")

    @property
    def sin_beta(self) -> float:
        return math.sin(self.beta) if math.isfinite(self.beta) else float("nan")


class LimitClass(enum.Enum):
    """Which fixed point a run is classified to approach, from the sign of
    the initial alignment <b0, theta_star>."""

    PLUS_THETA = "plus_theta"
    MINUS_THETA = "minus_theta"
    ZERO = "zero"


@dataclass(frozen=True)
class Trajectory:
    """Visited iterates plus the exact final state of a run."""

    records: tuple[PopStepRecord, ...]
    final_state: ABState
    converged: bool
    target: np.ndarray

    def __len__(self) -> int:
        return len(self.records)

    def series(self, field: str) -> np.ndarray:
        """Per-record values of ``field`` ('norm_a', 'dist_b', 'beta',
        'sin_beta', 'p') as a float array."""
        return np.array([getattr(r, field) for r in self.records], dtype=float)

    def rows(self) -> list[tuple]:
        """CSV rows (t, norm_a, dist_b, beta, sin_beta, p, ratio_a, ratio_b,
        ratio_sin); None ratios stay None."""
        return [
            (
                r.t,
                r.norm_a,
                r.dist_b,
                r.beta,
                r.sin_beta,
                r.p,
                r.ratio_a,
                r.ratio_b,
                r.ratio_sin,
            )
            for r in self.records
        ]


TRAJECTORY_COLUMNS = (
    "t",
    "norm_a",
    "dist_b",
    "beta",
    "sin_beta",
    "p",
    "ratio_a",
    "ratio_b",
    "ratio_sin",
)


def _planar_p_q(coords: PlanarCoords, spec: QuadratureSpec) -> tuple[float, float, float]:
    """Posterior mass and in-plane q coefficients for a reduced state.

    The x_a == 0 slice takes the single-lobe route (q1 = F/2, p = 1/2 exactly)
    so that the a = 0 dynamics of both models share floating-point values.
    """
    x_a, x_b, t1, t2 = coords.x_a, coords.norm_b, coords.theta1, coords.theta2
    if x_a == 0.0:
        p = 0.5
        q1 = 0.5 * kernel_f(x_b, abs(t1), spec)
        q2 = t2 * kernel_s(0.0, x_b, t1, spec)
    else:
        p = kernel_p(x_a, x_b, t1, spec)
        q1 = kernel_gamma(x_a, x_b, t1, spec)
        q2 = t2 * kernel_s(x_a, x_b, t1, spec)
    return p, q1, q2


def posterior_mass(state: ABState, model: MixtureModel, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The scalar p for one step taken from ``state``; exactly 0.5 whenever
    <a, b> == 0 (in particular for b == 0)."""
    if float(np.linalg.norm(state.b)) == 0.0:
        return 0.5
    coords = planar_reduce(state, model)
    if coords.x_a == 0.0:
        return 0.5
    return kernel_p(coords.x_a, coords.norm_b, coords.theta1, spec)


def model1_step(theta, model: MixtureModel, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """One population step of the locked-means model; 0 maps to 0."""
    theta = np.asarray(theta, dtype=float)
    if float(np.linalg.norm(theta)) == 0.0:
        return np.zeros(model.dim)
    coords = planar_reduce(ABState(np.zeros(model.dim), theta), model)
    _, q1, q2 = _planar_p_q(coords, spec)
    return 2.0 * q1 * coords.e1 + 2.0 * q2 * coords.e2


def _step_core(
    state: ABState, model: MixtureModel, spec: QuadratureSpec
) -> tuple[ABState, float]:
    if float(np.linalg.norm(state.b)) == 0.0:
        zero = np.zeros(model.dim)
        return ABState(zero, zero), 0.5
    coords = planar_reduce(state, model)
    p, q1, q2 = _planar_p_q(coords, spec)
    q_vec = q1 * coords.e1 + q2 * coords.e2
    denom = 2.0 * p * (1.0 - p)
    if coords.x_a == 0.0:
        a_new = np.zeros(model.dim)
    else:
        a_new = q_vec * ((1.0 - 2.0 * p) / denom)
    b_new = q_vec / denom
    return ABState(a_new, b_new), p


def _beta_of(state: ABState, model: MixtureModel) -> float:
    norm_b = float(np.linalg.norm(state.b))
    norm_t = model.norm_theta
    if norm_b == 0.0 or norm_t == 0.0:
        return float("nan")
    e1 = state.b / norm_b
    theta1 = float(np.dot(model.theta_star, e1))
    # Gram-Schmidt residual, not sqrt(norm^2 - theta1^2): the Pythagorean
    # form loses half the mantissa near collinearity and floors the sine
    # diagnostic at ~1e-8 instead of ~1e-16.
    theta2 = float(np.linalg.norm(model.theta_star - theta1 * e1))
    return math.atan2(theta2, theta1)


def _ratio(curr: float, prev: Optional[float]) -> Optional[float]:
    if prev is None or not math.isfinite(prev) or prev <= 0.0 or not math.isfinite(curr):
        return None
    return curr / prev


def _make_record(
    t: int,
    state: ABState,
    p: float,
    prev: Optional[PopStepRecord],
    target: np.ndarray,
    model: MixtureModel,
) -> PopStepRecord:
    norm_a = float(np.linalg.norm(state.a))
    dist_b = float(np.linalg.norm(state.b - target))
    beta = _beta_of(state, model)
    if prev is None:
        return PopStepRecord(t, state, p, beta, norm_a, dist_b)
    return PopStepRecord(
        t,
        state,
        p,
        beta,
        norm_a,
        dist_b,
        ratio_a=_ratio(norm_a, prev.norm_a),
        ratio_b=_ratio(dist_b, prev.dist_b),
        ratio_sin=_ratio(
            math.sin(beta) if math.isfinite(beta) else float("nan"),
            prev.sin_beta if math.isfinite(prev.beta) else None,
        ),
    )


def model2_step(
    state: ABState, model: MixtureModel, spec: QuadratureSpec = DEFAULT_SPEC
) -> tuple[ABState, PopStepRecord]:
    """One population step of the free-means model in (a, b) coordinates.

    Returns the new state together with the diagnostics record of the state
    the step was taken from (the caller assigns step indices when iterating).
    b == 0 is absorbing: the step returns (0, 0) with p = 0.5.
    """
    if state.dim != model.dim:
        raise DimensionMismatch(
            f"state has dimension {state.dim}, model has {model.dim}"
        )
    target = _sign_target(state, model)
    new_state, p = _step_core(state, model, spec)
    record = _make_record(0, state, p, None, target, model)
    return new_state, record


def _sign_target(init: ABState, model: MixtureModel) -> np.ndarray:
    alignment = float(np.dot(init.b, model.theta_star))
    if alignment > 0.0:
        return model.theta_star.copy()
    if alignment < 0.0:
        return -model.theta_star
    return np.zeros(model.dim)


def classify_limit(init: ABState, model: MixtureModel) -> LimitClass:
    """Predicted limit from the sign of the initial alignment <b0, theta*>."""
    alignment = float(np.dot(init.b, model.theta_star))
    if alignment > 0.0:
        return LimitClass.PLUS_THETA
    if alignment < 0.0:
        return LimitClass.MINUS_THETA
    return LimitClass.ZERO


def run(
    init: ABState,
    model: MixtureModel,
    stop: StopRule = StopRule(),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> Trajectory:
    """Iterate the free-means population step until the concatenated step
    size drops to ``stop.step_tol`` or the budget runs out.

    Records cover every iterate a step was taken from; a converged run's
    final state differs from the last record by at most step_tol and is
    exposed as ``Trajectory.final_state`` (a fixed-point init therefore
    yields a single record).  When the budget is exhausted, the last iterate
    is appended as a final record.
    """
    if init.dim != model.dim:
        raise DimensionMismatch(
            f"init has dimension {init.dim}, model has {model.dim}"
        )
    target = _sign_target(init, model)
    records: list[PopStepRecord] = []
    prev: Optional[PopStepRecord] = None
    state = init
    converged = False
    t = 0
    for t in range(stop.max_iters):
        new_state, p = _step_core(state, model, spec)
        rec = _make_record(t, state, p, prev, target, model)
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
        records.append(
            _make_record(stop.max_iters, state, posterior_mass(state, model, spec), prev, target, model)
        )
    return Trajectory(
        records=tuple(records),
        final_state=state,
        converged=converged,
        target=target,
    )


def run_model1(
    theta0,
    model: MixtureModel,
    stop: StopRule = StopRule(),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> np.ndarray:
    """Iterate the locked-means population step; returns the (k+1, d) array
    of all visited iterates including the final one."""
    theta = np.asarray(theta0, dtype=float)
    if theta.shape != (model.dim,):
        raise ValueError(f"theta0 must have shape ({model.dim},), got {theta.shape}")
    iterates = [theta.copy()]
    for _ in range(stop.max_iters):
        new = model1_step(theta, model, spec)
        iterates.append(new)
        step = float(np.linalg.norm(new - theta))
        theta = new
        if step <= stop.step_tol:
            break
    return np.array(iterates)


class APrioriBounds(NamedTuple):
    """Closed-form trajectory envelopes (norms of a and b stay below
    c_u1 and c_u3; c_u2 is the posterior-mass floor used to build c_u3)."""

    c_u1: float
    c_u2: float
    c_u3: float


def a_priori_bounds(init: ABState, model: MixtureModel) -> APrioriBounds:
    """Envelope constants from the initial state and the true separation."""
    norm_a0 = float(np.linalg.norm(init.a))
    norm_b0 = float(np.linalg.norm(init.b))
    norm_t = model.norm_theta
    c1_sq = max(
        norm_a0 * norm_a0,
        2.0 / math.pi + 0.5 * norm_t * norm_t,
        16.0 / 9.0 + (73.0 / 36.0) * norm_t * norm_t,
    )
    c_u1 = math.sqrt(c1_sq)
    # upper tail as Phi(-x): 1 - Phi(x) rounds to 0 beyond x ~ 9 and would
    # divide by zero below; the erfc route stays positive until ~ x = 37
    c_u2 = 0.25 * float(std_normal_cdf(-(c_u1 + norm_t)))
    if c_u2 > 0.0:
        c3_sq = max(
            norm_b0 * norm_b0,
            norm_t * norm_t
            + (1.0 + norm_t * norm_t) / (4.0 * c_u2 * c_u2 * (1.0 - c_u2) * (1.0 - c_u2)),
        )
    else:
        c3_sq = float("inf")  # vacuous but honest envelope for huge inits
    return APrioriBounds(c_u1, c_u2, math.sqrt(c3_sq))
