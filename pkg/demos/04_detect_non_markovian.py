#!/usr/bin/env python3
"""Certify non-Markovianity from a recoherence series.

A channel that first dephases strongly and then returns to the identity
cannot be divisible: the second inter-snapshot map is the inverse of a
contraction, so its Choi matrix has a large negative eigenvalue and no
generator chain can reproduce it.
"""

import numpy as np
from scipy.linalg import expm

from lindbladfit import (
    FitConfig,
    GKLSParams,
    SnapshotSeries,
    compute_thetas,
    fit,
    gamma_involution,
    gkls_to_transfer,
)

sz = np.diag([1.0, -1.0]).astype(complex)
dephasing = gkls_to_transfer(GKLSParams(2, np.zeros((2, 2)), ((sz, 1.0),)))

strong = expm(dephasing * 2.0)      # coherences decay to e^-4
series = SnapshotSeries(dim=2, snapshots=(strong, np.eye(4)))
print("snapshot 1: strong dephasing, coherences at", np.round(strong[1, 1], 4))
print("snapshot 2: identity (full recoherence)")

# Theta_2 = M_2 M_1^{-1} blows the coherences back up; its Choi matrix
# is far from positive semidefinite
thetas = compute_thetas(series)
choi = gamma_involution(thetas[1], 2)
min_eig = np.linalg.eigvalsh((choi + choi.conj().T) / 2)[0]
print(f"\nTheta_2 Choi minimum eigenvalue: {min_eig:.3f} (CPT needs >= 0)")

result = fit(series, FitConfig(m_max=1, markov_threshold=1e-3))
print(f"\nfit verdict: {result.verdict}")
print(f"total distance: {result.total_distance:.3f}")
print("distance per enumerated branch:")
for branch, total in result.branch_distances:
    print(f"  m = {branch.indices}: {total:.3f}")
print("\nno branch comes close: the series is incompatible with any")
print("time-dependent Markovian model at this tolerance.")
