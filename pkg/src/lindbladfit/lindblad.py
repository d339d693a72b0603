"""Generators in GKLS form and the three Lindbladian conditions.

A matrix L (transfer form) generates a quantum Markov semigroup exactly
when its Choi form X = gamma_involution(L) satisfies

    (i)   X is hermitian,
    (ii)  omega_perp X omega_perp >= 0  (conditional complete positivity),
    (iii) Tr_1[X] = 0,

which this module measures as residuals.  The sign convention for the
Hamiltonian part is d(rho)/dt = -i [H, rho] + dissipators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import hilbert_dim, omega_perp, partial_trace_first

__all__ = [
    "GKLSParams",
    "ConditionReport",
    "gkls_to_transfer",
    "check_lindblad_conditions",
    "random_gkls",
]

#: Default residual tolerance for exact (synthetic) generators.  Noisy
#: tomographic data needs a user-chosen looser value.
DEFAULT_CONDITION_TOL = 1e-8


@dataclass(frozen=True)
class GKLSParams:
    """Hamiltonian, jump operators and nonnegative decoherence rates."""

    dim: int
    hamiltonian: np.ndarray
    jumps: tuple[tuple[np.ndarray, float], ...] = ()

    def __post_init__(self) -> None:
        h = np.asarray(self.hamiltonian, dtype=complex)
        if h.shape != (self.dim, self.dim):
            raise ValueError(f"hamiltonian must be {self.dim}x{self.dim}")
        if np.linalg.norm(h - h.conj().T) > 1e-12 * max(1.0, np.linalg.norm(h)):
            raise ValueError("hamiltonian must be hermitian")
        object.__setattr__(self, "hamiltonian", h)
        jumps = []
        for op, rate in self.jumps:
            op = np.asarray(op, dtype=complex)
            if op.shape != (self.dim, self.dim):
                raise ValueError(f"jump operators must be {self.dim}x{self.dim}")
            if rate < 0:
                raise ValueError(f"decoherence rate {rate} is negative")
            jumps.append((op, float(rate)))
        object.__setattr__(self, "jumps", tuple(jumps))


@dataclass(frozen=True)
class ConditionReport:
    """Residuals of the three Lindbladian conditions at a given tolerance.

    ``trace_residual`` is the entrywise 1-norm of Tr_1[X] and
    ``ccp_min_eigenvalue`` the smallest eigenvalue of the hermitian part
    of omega_perp X omega_perp (nonnegative for a valid generator).
    """

    hermiticity_residual: float
    ccp_min_eigenvalue: float
    trace_residual: float
    tol: float
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        ok = (
            self.hermiticity_residual <= self.tol
            and self.ccp_min_eigenvalue >= -self.tol
            and self.trace_residual <= self.tol
        )
        object.__setattr__(self, "passed", ok)


def gkls_to_transfer(params: GKLSParams) -> np.ndarray:
    """Transfer matrix of the GKLS generator.

    Builds -i(H (x) 1 - 1 (x) conj(H)) plus, for each jump J with rate g,
    g*(J (x) conj(J) - (J^dag J (x) 1 + 1 (x) (J^dag J)^T)/2).  The rate
    stays an explicit prefactor rather than being folded into the jump
    normalization.
    """
    d = params.dim
    eye = np.eye(d, dtype=complex)
    h = params.hamiltonian
    transfer = -1j * (np.kron(h, eye) - np.kron(eye, h.conj()))
    for op, rate in params.jumps:
        k = op.conj().T @ op
        transfer += rate * (
            np.kron(op, op.conj())
            - 0.5 * (np.kron(k, eye) + np.kron(eye, k.T))
        )
    return transfer


def check_lindblad_conditions(
    choi: np.ndarray, tol: float = DEFAULT_CONDITION_TOL, d: int | None = None
) -> ConditionReport:
    """Measure the three Lindbladian conditions on a Choi-form generator."""
    choi = np.asarray(choi, dtype=complex)
    d = hilbert_dim(choi, d)
    hermiticity = float(np.linalg.norm(choi - choi.conj().T))
    perp = omega_perp(d)
    compressed = perp @ choi @ perp
    compressed = (compressed + compressed.conj().T) / 2
    ccp_min = float(np.linalg.eigvalsh(compressed)[0])
    trace_residual = float(np.abs(partial_trace_first(choi, d)).sum())
    return ConditionReport(
        hermiticity_residual=hermiticity,
        ccp_min_eigenvalue=ccp_min,
        trace_residual=trace_residual,
        tol=tol,
    )


def random_gkls(
    d: int, n_jumps: int, rate_scale: float, seed: int | np.random.Generator
) -> GKLSParams:
    """Random GKLS parameters, deterministic in the seed.

    The Hamiltonian is the hermitian part of a complex-normal matrix,
    jumps have independent complex-normal entries, and rates are uniform
    on [0, rate_scale].
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if n_jumps < 0:
        raise ValueError("n_jumps must be nonnegative")
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    hamiltonian = (raw + raw.conj().T) / 2
    jumps = []
    for _ in range(n_jumps):
        op = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
        jumps.append((op, float(rng.uniform(0.0, rate_scale))))
    return GKLSParams(dim=d, hamiltonian=hamiltonian, jumps=tuple(jumps))
