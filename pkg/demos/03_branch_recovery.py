#!/usr/bin/env python3
"""Why the matrix-log branch search matters.

A qubit rotating about z by 3*pi/2 per interval while dephasing produces
a snapshot whose principal log corresponds to a rotation by -pi/2: a
perfectly valid generator that reproduces the snapshot exactly but whose
Hamiltonian is wrong by a full winding.  Only the branch search can tell
the difference, and only against ground truth, because the aliasing is
exact at the channel level.
"""

import numpy as np

from lindbladfit import branch_recovery_selfcheck

report = branch_recovery_selfcheck()

print("true generator (transfer form, one interval):")
print(np.round(report.true_generator, 4))

print("\nmap distance ||M - exp(L_fit)|| per branch (all exact -- aliasing):")
for branch, distance in report.map_distances:
    print(f"  m = {branch.indices}: {distance:.2e}")

print("\ngenerator recovery error per branch:")
for branch, error in report.generator_errors:
    marker = "  <-- true branch" if error <= 1e-6 else ""
    print(f"  m = {branch.indices}: {error:.3e}{marker}")

print(f"\nprincipal branch alone misses by {report.principal_generator_error:.3f}")
print(f"branch search at m_max=1 recovers to {report.best_generator_error:.2e}")
print(f"winning branch: {report.best_branch.indices} "
      f"(-1 on the positively rotating eigenvalue, +1 on its conjugate)")
