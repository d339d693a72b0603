"""Orthogonal projections onto the Lindbladian constraint sets and a
Dykstra solver for their intersection.

Every constraint of the fitting program admits a closed-form Frobenius
projection on the real Hilbert space of hermitian matrices (inner
product Re Tr[X^dag Y]):

  * hermitian matrices: (X + X^dag)/2,
  * {omega_perp X omega_perp >= 0}: clip the negative spectral part of
    the compressed block, leaving the blocks that touch |omega> alone,
  * {Tr_1[X] = 0}: subtract (1/d) * 1 (x) Tr_1[X],
  * a Frobenius ball around a previous generator: radial scaling.

Dykstra's alternating projections with per-set corrections then converge
to the exact nearest point in the intersection, which is the whole
convex program of the fitter: minimizing ||X - G|| subject to the three
generator conditions and the step bound.  Because the objective splits
over hermitian and anti-hermitian parts and all feasible points are
hermitian, the target is hermitized once up front without changing the
minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import hilbert_dim, omega_perp, partial_trace_first
from .lindblad import ConditionReport, check_lindblad_conditions

__all__ = [
    "ConstraintSpec",
    "ProjectionResult",
    "project_hermitian",
    "project_ccp",
    "project_tracefree",
    "project_ball",
    "dykstra_nearest",
]


def project_hermitian(matrix: np.ndarray) -> np.ndarray:
    """Nearest hermitian matrix, (X + X^dag)/2."""
    return (matrix + matrix.conj().T) / 2


def project_ccp(choi: np.ndarray, d: int | None = None) -> np.ndarray:
    """Project a hermitian Choi matrix onto conditional complete positivity.

    Subtracts the negative spectral part of omega_perp X omega_perp.
    Since the compression is an orthogonal coordinate split, this is the
    exact Frobenius projection onto {X hermitian : the compressed block
    is positive semidefinite}; the row/column through |omega> is left
    untouched.
    """
    choi = np.asarray(choi)
    d = hilbert_dim(choi, d)
    scale = float(np.linalg.norm(choi))
    if np.linalg.norm(choi - choi.conj().T) > 1e-10 * max(scale, 1e-300):
        raise ValueError("project_ccp expects a hermitian matrix")
    perp = omega_perp(d)
    block = perp @ choi @ perp
    block = (block + block.conj().T) / 2
    eigenvalues, vectors = np.linalg.eigh(block)
    negative = eigenvalues < 0
    if not np.any(negative):
        return np.array(choi, copy=True)
    clipped = (vectors[:, negative] * eigenvalues[negative]) @ (
        vectors[:, negative].conj().T
    )
    return choi - clipped


def project_tracefree(choi: np.ndarray, d: int | None = None) -> np.ndarray:
    """Project onto the kernel of the first partial trace.

    X - (1/d) * 1 (x) Tr_1[X] has first partial trace exactly zero, and
    the subtracted term is orthogonal to every trace-free matrix.
    """
    choi = np.asarray(choi)
    d = hilbert_dim(choi, d)
    return choi - np.kron(np.eye(d), partial_trace_first(choi, d)) / d


def project_ball(
    matrix: np.ndarray, center: np.ndarray, radius: float
) -> np.ndarray:
    """Project onto the Frobenius ball ||X - center|| <= radius."""
    if radius <= 0:
        raise ValueError("ball radius must be positive")
    offset = matrix - center
    distance = float(np.linalg.norm(offset))
    if distance <= radius:
        return np.array(matrix, copy=True)
    return center + offset * (radius / distance)


@dataclass(frozen=True)
class ConstraintSpec:
    """Constraint set for one interval of the fit.

    ``previous`` is the Choi-form generator of the preceding interval;
    when present, the solution is kept within Frobenius distance ``beta``
    of it.  ``previous`` must itself satisfy the generator conditions, so
    the intersection is never empty.
    """

    dim: int
    previous: np.ndarray | None = None
    beta: float | None = None
    tol: float = 1e-9
    max_iters: int = 50_000

    def __post_init__(self) -> None:
        if self.tol <= 0 or self.max_iters <= 0:
            raise ValueError("tol and max_iters must be positive")
        if self.previous is not None:
            if self.beta is None or self.beta <= 0:
                raise ValueError("beta must be positive when previous is set")
            prev = np.asarray(self.previous, dtype=complex)
            hilbert_dim(prev, self.dim)
            object.__setattr__(self, "previous", prev)


@dataclass(frozen=True)
class ProjectionResult:
    """Outcome of one constrained projection.

    ``final_change`` is the Frobenius distance between the last two
    Dykstra cycles; ``ball_slack`` is beta - ||X - previous|| (infinite
    when no ball constraint was active).
    """

    point: np.ndarray
    iterations: int
    final_change: float
    feasibility: ConditionReport
    ball_slack: float
    converged: bool


def dykstra_nearest(target: np.ndarray, spec: ConstraintSpec) -> ProjectionResult:
    """Frobenius-nearest generator-form Choi matrix to ``target``.

    Runs Dykstra's algorithm over the conditional-complete-positivity
    cone, the trace-free subspace and (when configured) the step ball,
    starting from the hermitian part of the target.  Iteration stops when
    the cycle-to-cycle change drops below ``spec.tol`` and the iterate is
    feasible within 10 * tol (cycle change alone can undershoot the
    distance to the limit); hitting ``spec.max_iters`` first yields a
    result flagged as non-converged but still carrying its feasibility
    report.
    """
    d = spec.dim
    target = np.asarray(target, dtype=complex)
    hilbert_dim(target, d)
    x = project_hermitian(target)

    perp = omega_perp(d)
    eye = np.eye(d, dtype=complex)

    def ccp(z: np.ndarray) -> np.ndarray:
        block = perp @ z @ perp
        block = (block + block.conj().T) / 2
        eigenvalues, vectors = np.linalg.eigh(block)
        negative = eigenvalues < 0
        if not np.any(negative):
            return z
        return z - (vectors[:, negative] * eigenvalues[negative]) @ (
            vectors[:, negative].conj().T
        )

    def tracefree(z: np.ndarray) -> np.ndarray:
        return z - np.kron(eye, partial_trace_first(z, d)) / d

    projectors = [ccp, tracefree]
    if spec.previous is not None:
        prev, beta = spec.previous, float(spec.beta)

        def ball(z: np.ndarray) -> np.ndarray:
            offset = z - prev
            distance = float(np.linalg.norm(offset))
            if distance <= beta:
                return z
            return prev + offset * (beta / distance)

        projectors.append(ball)

    def slack(z: np.ndarray) -> float:
        if spec.previous is None:
            return math.inf
        return float(spec.beta) - float(np.linalg.norm(z - spec.previous))

    feasible_tol = 10 * spec.tol

    corrections = [np.zeros_like(x) for _ in projectors]
    previous_cycle = x.copy()
    change = math.inf
    iterations = 0
    converged = False
    feasibility = None
    # once the cycle change collapses far below the requested tolerance the
    # iteration sits at a floating-point fixed point and cannot improve the
    # residuals any further
    stall_floor = max(1e-3 * spec.tol, 1e-14)
    for iterations in range(1, spec.max_iters + 1):
        for i, proj in enumerate(projectors):
            shifted = x - corrections[i]
            x = proj(shifted)
            corrections[i] = x - shifted
        change = float(np.linalg.norm(x - previous_cycle))
        if change <= spec.tol:
            feasibility = check_lindblad_conditions(x, tol=feasible_tol, d=d)
            if feasibility.passed and slack(x) >= -feasible_tol:
                converged = True
                break
            if change <= stall_floor:
                break
        previous_cycle = x.copy()

    if feasibility is None:
        feasibility = check_lindblad_conditions(x, tol=feasible_tol, d=d)
    ball_slack = slack(x)
    return ProjectionResult(
        point=x,
        iterations=iterations,
        final_change=change,
        feasibility=feasibility,
        ball_slack=ball_slack,
        converged=converged,
    )
