"""Quantitative error bounds for snapshot fitting.

For a generator with Lipschitz constant eta observed through N uniform
snapshots over total time T, the per-interval map error and the
accumulated snapshot error admit closed-form leading bounds, and the
bound on the step between consecutive fitted generators supplies the
principled default for the fitter's ball radius.  Only the final bound
expressions are evaluated here, with their stated leading terms; the
dropped higher-order remainders motivate the constant-factor slack used
by the empirical checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BoundInputs",
    "theta_error_bound",
    "snapshot_error_bound",
    "beta_default",
    "estimate_magnus_remainder",
]

#: Lower clamp keeping the suggested ball radius strictly positive for
#: the solver even when the inputs make the bound vanish.
BETA_FLOOR = 1e-12


@dataclass(frozen=True)
class BoundInputs:
    """Scales entering the error bounds.

    ``magnus_remainder`` is the per-interval error of truncating the
    Magnus series of the interval propagator at first order; see
    :func:`estimate_magnus_remainder` for a heuristic when no better
    estimate is available.
    """

    eta: float
    t_total: float
    n_snapshots: int
    dim: int
    magnus_remainder: float = 0.0

    def __post_init__(self) -> None:
        if self.eta < 0 or self.t_total <= 0 or self.magnus_remainder < 0:
            raise ValueError("eta and magnus_remainder must be nonnegative, t_total positive")
        if self.n_snapshots < 1 or self.dim < 2:
            raise ValueError("need n_snapshots >= 1 and dim >= 2")


def theta_error_bound(inputs: BoundInputs) -> float:
    """Leading bound on ||Theta_p - exp(L_p)||: eta^2 T^4 / N^3."""
    return inputs.eta**2 * inputs.t_total**4 / inputs.n_snapshots**3


def snapshot_error_bound(inputs: BoundInputs) -> float:
    """Leading bound on ||M_p - reconstruction||:
    sqrt(d) * (exp(sqrt(d) eta^2 T^4 / N^2) - 1)."""
    root = math.sqrt(inputs.dim)
    return root * math.expm1(
        root * inputs.eta**2 * inputs.t_total**4 / inputs.n_snapshots**2
    )


def beta_default(inputs: BoundInputs) -> float:
    """Suggested ball radius: eta T^2 / N^2 + 4 R, floored at 1e-12.

    This is the step bound between consecutive best-fit generators with a
    uniform per-interval Magnus remainder R: integrating the Lipschitz
    rate over one interval of length T/N and comparing adjacent interval
    averages gives the quadratic 1/N^2 factor.
    """
    value = (
        inputs.eta * inputs.t_total**2 / inputs.n_snapshots**2
        + 4.0 * inputs.magnus_remainder
    )
    return max(value, BETA_FLOOR)


def estimate_magnus_remainder(
    eta: float, generator_norm: float, t_total: float, n_snapshots: int
) -> float:
    """Heuristic first-order Magnus truncation error per interval.

    Uses the scale of the leading dropped commutator term,
    eta * ||L||_avg * (T/N)^3; override with a sharper estimate when one
    is available.
    """
    if eta < 0 or generator_norm < 0 or t_total <= 0 or n_snapshots < 1:
        raise ValueError("invalid bound inputs")
    return eta * generator_norm * (t_total / n_snapshots) ** 3
