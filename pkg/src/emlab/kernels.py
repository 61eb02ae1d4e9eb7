"""Scalar kernels: the one-dimensional integrals through which every
population update factors.

All kernels integrate the soft assignment weight

    w(u, x_b) = 0.5 * (1 + tanh(u * x_b))

(the posterior probability of the positive component for a point at signed
distance u along the separation direction, written in tanh form so it cannot
overflow) against the mixture density p(y, x_theta), its signed counterpart
Delta(y, x_theta), or a single Gaussian lobe:

    P(x_a, x_b, x_theta)     = int w(y - x_a, x_b) p(y, x_theta) dy
    Gamma(x_a, x_b, x_theta) = int w(y - x_a, x_b) y p(y, x_theta) dy
    S(x_a, x_b, x_theta)     = int w(y - x_a, x_b) Delta(y, x_theta) dy
    R(x_b, x)                = 0.5 * int w(y - x, x_b) y phi(y) dy
    F(x_b, x_theta)          = int tanh(u x_b) u phi(u - x_theta) du
    K(x, x_b)                = int 0.5 tanh(y x_b) phi(y - x) dy

The module-level kernel_* functions accept any finite real x_a / x_theta
(the integrals are well defined there, and the planar reduction of the
population step needs the signed values); the eval_* wrappers take the
validated non-negative KernelArgs bundle, which is the canonical domain
(P and Gamma are even in x_theta, S is odd, and x_a < 0 mirrors through
w(-u, x_b) = 1 - w(u, x_b)).

The auxiliary scalar bounds used by the kernel inequalities are collected in
eval_aux_bounds: for x > 0,

    l(x)         = x (1 - 2 Phi(-x)) + 2 phi(x)        (= E|Z + x|)
    W(x)         = phi(x) - x (1 - Phi(x))             (= E (Z - x)_+)
    J(x)         = 0.5 (x - l(x) (1 - 2 Phi(-x)))
    mills_gap(x) = (x + sqrt(2/pi)) (1 - Phi(x)) - phi(x)

J and mills_gap are strictly positive on x > 0; mills_gap is the slack in
the Mills-ratio bound phi(x)/(1 - Phi(x)) < x + sqrt(2/pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    integrate_against_gaussian,
    integrate_against_mixture,
    integrate_against_mixture_diff,
    std_normal_cdf,
    std_normal_pdf,
)

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def weight_1d(u, x_b):
    """Soft assignment weight 0.5*(1 + tanh(u * x_b)); broadcasts."""
    return 0.5 * (1.0 + np.tanh(u * x_b))


@dataclass(frozen=True)
class KernelArgs:
    """Canonical (non-negative) argument bundle for the kernel evaluators."""

    x_a: float
    x_b: float
    x_theta: float

    def __post_init__(self) -> None:
        for name in ("x_a", "x_b", "x_theta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            if value < 0.0:
                raise DomainError(f"{name} must be >= 0, got {value!r}")


def kernel_p(x_a: float, x_b: float, x_theta: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int w(y - x_a, x_b) p(y, x_theta) dy."""
    return integrate_against_mixture(lambda y: weight_1d(y - x_a, x_b), x_theta, spec)


def kernel_gamma(x_a: float, x_b: float, x_theta: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int w(y - x_a, x_b) * y * p(y, x_theta) dy."""
    return integrate_against_mixture(
        lambda y: weight_1d(y - x_a, x_b) * y, x_theta, spec
    )


def kernel_s(x_a: float, x_b: float, x_theta: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int w(y - x_a, x_b) Delta(y, x_theta) dy; exactly 0.0 at x_theta == 0."""
    return integrate_against_mixture_diff(
        lambda y: weight_1d(y - x_a, x_b), x_theta, spec
    )


def kernel_r(x_b: float, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """0.5 * int w(y - x, x_b) * y * phi(y) dy; even in x, zero at x_b == 0."""
    return 0.5 * integrate_against_gaussian(
        lambda y: weight_1d(y - x, x_b) * y, 0.0, spec
    )


def kernel_f(x_b: float, x_theta: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int tanh(u * x_b) * u * phi(u - x_theta) du; exactly 0.0 at x_b == 0."""
    return integrate_against_gaussian(lambda u: np.tanh(u * x_b) * u, x_theta, spec)


def kernel_k(x: float, x_b: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int 0.5 * tanh(y * x_b) * phi(y - x) dy; exactly 0.0 at x_b == 0."""
    return integrate_against_gaussian(lambda y: 0.5 * np.tanh(y * x_b), x, spec)


def eval_P(args: KernelArgs, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return kernel_p(args.x_a, args.x_b, args.x_theta, spec)


def eval_Gamma(args: KernelArgs, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return kernel_gamma(args.x_a, args.x_b, args.x_theta, spec)


def eval_S(args: KernelArgs, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return kernel_s(args.x_a, args.x_b, args.x_theta, spec)


def eval_R(x_b: float, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return kernel_r(x_b, x, spec)


def eval_F(x_b: float, x_theta: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return kernel_f(x_b, x_theta, spec)


def eval_K(x: float, x_b: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return kernel_k(x, x_b, spec)


class AuxBounds(NamedTuple):
    """Closed-form scalar bound functions at a single x > 0."""

    l: float
    W: float
    J: float
    mills_gap: float


def eval_aux_bounds(x: float) -> AuxBounds:
    """Evaluate (l, W, J, mills_gap) at x; DomainError unless x > 0."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be a finite real, got {x!r}")
    if x <= 0.0:
        raise DomainError(f"x must be strictly positive, got {x!r}")
    phi = float(std_normal_pdf(x))
    upper_tail = float(std_normal_cdf(-x))  # 1 - Phi(x)
    central = 1.0 - 2.0 * upper_tail  # 1 - 2 Phi(-x)
    l = x * central + 2.0 * phi
    w = phi - x * upper_tail
    j = 0.5 * (x - l * central)
    mills_gap = (x + SQRT_2_OVER_PI) * upper_tail - phi
    return AuxBounds(l=l, W=w, J=j, mills_gap=mills_gap)


def tabulate(
    values_a, values_b, values_theta, spec: QuadratureSpec = DEFAULT_SPEC
) -> list[tuple[float, float, float, float, float, float, float, float]]:
    """Evaluate (P, Gamma, S, F, K) on the Cartesian grid of the three axes.

    Returns rows (x_a, x_b, x_theta, P, Gamma, S, F, K) in row-major order,
    matching the CSV layout of the command-line tabulator.
    """
    rows = []
    for x_a in values_a:
        for x_b in values_b:
            for x_theta in values_theta:
                rows.append(
                    (
                        float(x_a),
                        float(x_b),
                        float(x_theta),
                        kernel_p(x_a, x_b, x_theta, spec),
                        kernel_gamma(x_a, x_b, x_theta, spec),
                        kernel_s(x_a, x_b, x_theta, spec),
                        kernel_f(x_b, x_theta, spec),
                        kernel_k(x_a, x_b, spec),
                    )
                )
    return rows
