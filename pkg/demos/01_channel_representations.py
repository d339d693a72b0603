#!/usr/bin/env python3
"""Transfer and Choi forms of channels and generators.

Walks through the vectorization convention, the reshuffle between the
two superoperator forms, and the three conditions that single out valid
Markovian generators.
"""

import numpy as np
from scipy.linalg import expm

from lindbladfit import (
    GKLSParams,
    check_lindblad_conditions,
    gamma_involution,
    gkls_to_transfer,
    omega_vector,
    partial_trace_first,
    sandwich_transfer,
    unvec,
    vec,
)

# A channel acts on vectorized density matrices: rho -> U rho U^dag for a
# Hadamard becomes a 4x4 matrix under vec(V)[j*d+k] = V[j,k].
hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
channel = sandwich_transfer(hadamard)

rho = np.array([[0.75, 0.2 + 0.1j], [0.2 - 0.1j, 0.25]])
rho_out = unvec(channel @ vec(rho), 2)
print("U rho U^dag via the transfer matrix:")
print(np.round(rho_out, 6))
print("direct computation agrees:",
      np.allclose(rho_out, hadamard @ rho @ hadamard.conj().T))

# The Choi form is an index reshuffle of the transfer form.  For the
# identity channel it is d times the maximally entangled projector.
tau = gamma_involution(np.eye(4), 2)
omega = omega_vector(2)
print("\nChoi of the identity equals 2|omega><omega|:",
      np.allclose(tau, 2 * np.outer(omega, omega.conj())))
print("the reshuffle is an involution:",
      np.allclose(gamma_involution(tau, 2), np.eye(4)))

# Generators in GKLS form: a dephasing qubit with a weak drive.
sz = np.diag([1.0, -1.0]).astype(complex)
params = GKLSParams(dim=2, hamiltonian=0.3 * sz, jumps=((sz, 0.25),))
generator = gkls_to_transfer(params)
print("\ndephasing + drive generator (transfer form):")
print(np.round(generator, 4))

# Its Choi form satisfies the three generator conditions: hermitian,
# conditionally completely positive, and trace annihilating.
report = check_lindblad_conditions(gamma_involution(generator, 2), tol=1e-10)
print("\ncondition report:")
print("  hermiticity residual ", report.hermiticity_residual)
print("  ccp minimum eigenvalue", report.ccp_min_eigenvalue)
print("  trace residual       ", report.trace_residual)
print("  passed               ", report.passed)

# Exponentiating gives a channel: completely positive (Choi PSD) and
# trace preserving (first partial trace of the Choi equals the identity).
snapshot = expm(generator)
snapshot_choi = gamma_involution(snapshot, 2)
print("\nexp(L) is a channel:")
print("  smallest Choi eigenvalue",
      np.linalg.eigvalsh((snapshot_choi + snapshot_choi.conj().T) / 2)[0])
print("  Tr_1[Choi] == identity  ",
      np.allclose(partial_trace_first(snapshot_choi, 2), np.eye(2)))
