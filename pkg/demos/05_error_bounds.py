#!/usr/bin/env python3
"""Per-interval error against the theoretical bound as N grows.

For a Lipschitz generator observed through N uniform snapshots, the gap
between each inter-snapshot map and its best time-independent
approximation is bounded by eta^2 T^4 / N^3.  This script measures the
gap on a linear trajectory and compares it with the bound and with the
suggested step bound beta(eta).
"""

import numpy as np

from lindbladfit import (
    BoundInputs,
    FitConfig,
    GeneratorTrajectory,
    GKLSParams,
    beta_default,
    emit_snapshots,
    estimate_magnus_remainder,
    fit,
    gkls_to_transfer,
    measure_lipschitz,
    snapshot_error_bound,
    theta_error_bound,
)

sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
sz = np.diag([1.0, -1.0]).astype(complex)
lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)

trajectory = GeneratorTrajectory.linear(
    gkls_to_transfer(GKLSParams(2, 0.4 * sz, ((lower, 0.8),))),
    gkls_to_transfer(GKLSParams(2, 0.4 * sx, ((sx, 0.9),))),
    t_total=1.0,
)
eta = measure_lipschitz(trajectory, 64)
scale = float(np.mean([np.linalg.norm(trajectory.value(t))
                       for t in np.linspace(0, 1, 33)]))
print(f"eta = {eta:.3f}, mean generator norm = {scale:.3f}\n")
print(f"{'N':>4} {'max gap':>12} {'bound':>12} {'snap bound':>12} {'beta':>10}")

previous = None
for n in (4, 8, 16):
    inputs = BoundInputs(
        eta=eta, t_total=1.0, n_snapshots=n, dim=2,
        magnus_remainder=estimate_magnus_remainder(eta, scale, 1.0, n),
    )
    beta = beta_default(inputs)
    series = emit_snapshots(trajectory, n, 1.0)
    result = fit(series, FitConfig(m_max=1, beta=beta))
    gap = max(result.per_interval_distance)
    print(f"{n:>4} {gap:12.3e} {theta_error_bound(inputs):12.3e} "
          f"{snapshot_error_bound(inputs):12.3e} {beta:10.4f}")
    if previous is not None:
        print(f"     per-doubling shrink factor: {previous / gap:.1f}")
    previous = gap

print("\nthe observed gap stays well under the bound and shrinks by a")
print("factor near the cubic prediction each time N doubles.")
