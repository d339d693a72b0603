"""Eigendecomposition of general complex matrices and matrix-log branches.

A diagonalizable matrix M = sum_j lam_j |r_j><l_j| has countably many
logarithms: the principal one, obtained from the principal scalar log of
each eigenvalue, plus integer multiples of 2*pi*i on each spectral
projector.  This module produces the biorthogonal eigensystem, groups
near-degenerate eigenvalues into clusters, restores the conjugate-pair
structure that a hermiticity-preserving map must have, and enumerates
the branch index vectors compatible with that structure.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channels import flip_operator, hermiticity_preserving_residual

__all__ = [
    "SpectralDecomposition",
    "BranchVector",
    "NonDiagonalizableError",
    "SingularChannelError",
    "BranchCutWarning",
    "decompose",
    "principal_log",
    "branch_log",
    "enumerate_branches",
]

#: Relative residual below which a map is treated as hermiticity preserving
#: when deciding whether to repair conjugate-pair bases.
_HP_REPAIR_RTOL = 1e-3


class NonDiagonalizableError(np.linalg.LinAlgError):
    """Eigenvector matrix is too ill conditioned to invert reliably."""


class SingularChannelError(np.linalg.LinAlgError):
    """Matrix has a (numerically) zero eigenvalue, so no logarithm exists."""


class BranchCutWarning(RuntimeWarning):
    """An eigenvalue sits on the negative real axis, the log branch cut."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Biorthogonal eigensystem with cluster and conjugate-pair metadata.

    ``right_vectors[:, j]`` is the right eigenvector r_j and
    ``left_vectors[j, :]`` the matching left eigenvector l_j, normalized
    so that left_vectors @ right_vectors is the identity.  Eigenvalues
    within the clustering tolerance of each other share a ``cluster_ids``
    label; ``pair_partner[j]`` is the index of the eigenvalue paired with
    j under complex conjugation, or j itself when the eigenvalue is real
    (or no partner exists).
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    cluster_ids: tuple[int, ...]
    pair_partner: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.eigenvalues.size

    def projector(self, j: int) -> np.ndarray:
        """Spectral projector |r_j><l_j| of the j-th eigenvalue."""
        return np.outer(self.right_vectors[:, j], self.left_vectors[j, :])

    def reconstruct(self) -> np.ndarray:
        """Rebuild sum_j lam_j |r_j><l_j|."""
        return (self.right_vectors * self.eigenvalues) @ self.left_vectors


@dataclass(frozen=True)
class BranchVector:
    """Integer branch indices, one per eigenvalue, symmetric under pairing.

    For every conjugate pair (j, j') the indices satisfy m[j'] == -m[j].
    Self-paired (real or unpaired) eigenvalues carry no constraint at the
    type level; :func:`enumerate_branches` additionally pins them to 0 so
    that shifted logarithms of hermiticity-preserving maps stay
    hermiticity preserving.
    """

    indices: tuple[int, ...]
    pair_partner: tuple[int, ...]

    def __post_init__(self) -> None:
        for j, partner in enumerate(self.pair_partner):
            if partner != j and self.indices[j] != -self.indices[partner]:
                raise ValueError(
                    f"branch indices not conjugate-symmetric at position {j}"
                )


def _union_find_clusters(values: np.ndarray, tol: float) -> list[int]:
    """Group values whose pairwise distance chains below ``tol``."""
    n = values.size
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    labels: dict[int, int] = {}
    out = []
    for i in range(n):
        root = find(i)
        if root not in labels:
            labels[root] = len(labels)
        out.append(labels[root])
    return out


def decompose(
    matrix: np.ndarray,
    cluster_tol: float | None = None,
    cond_cap: float = 1e12,
) -> SpectralDecomposition:
    """Diagonalize a general complex matrix with cluster-aware repairs.

    Eigenvalues are sorted by (real, imaginary) part; those within
    ``cluster_tol`` of each other (default 1e-6 times the Frobenius norm)
    share a cluster.  Within each multi-member cluster the right
    eigenvectors are re-orthonormalized, and when the input is (close to)
    hermiticity preserving, mirror clusters are rebuilt from the
    conjugated, flip-rotated basis of their partner so that the spectral
    projectors satisfy P_{j'} = F conj(P_j) F exactly.  Left eigenvectors
    come from the inverse of the right-eigenvector matrix, which makes
    the system biorthogonal by construction.

    Raises :class:`NonDiagonalizableError` when the right-eigenvector
    matrix has condition number above ``cond_cap``; callers treat this as
    a cannot-assess outcome rather than an invalid input.
    """
    matrix = np.asarray(matrix, dtype=complex)
    n = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    scale = float(np.linalg.norm(matrix))
    if cluster_tol is None:
        cluster_tol = 1e-6 * scale

    eigenvalues, right = np.linalg.eig(matrix)
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    eigenvalues = eigenvalues[order]
    right = right[:, order]

    cluster_ids = _union_find_clusters(eigenvalues, cluster_tol)
    members: dict[int, list[int]] = {}
    for j, c in enumerate(cluster_ids):
        members.setdefault(c, []).append(j)

    for idx in members.values():
        if len(idx) > 1:
            block = right[:, idx]
            block = block / np.linalg.norm(block, axis=0)
            # nearly parallel eigenvectors inside one cluster mean the
            # eigenspace is deficient (a Jordan block, not a degeneracy);
            # re-orthonormalizing would silently break reconstruction
            if np.linalg.svd(block, compute_uv=False)[-1] < 1e-7:
                raise NonDiagonalizableError(
                    "eigenvectors of a degenerate cluster are linearly "
                    "dependent; matrix treated as defective"
                )
            q, _ = np.linalg.qr(block)
            right[:, idx] = q

    pair_partner = _pair_clusters(eigenvalues, members, cluster_tol, scale)

    if _is_perfect_square(n) and all(
        pair_partner[j] != j or abs(eigenvalues[j].imag) <= _pair_tol(cluster_tol, scale)
        for j in range(n)
    ):
        hp_residual = hermiticity_preserving_residual(matrix)
        if hp_residual <= _HP_REPAIR_RTOL * max(scale, 1e-300):
            eigenvalues, right = _restore_conjugate_bases(
                eigenvalues, right, pair_partner, math.isqrt(n)
            )

    if np.linalg.cond(right) > cond_cap:
        raise NonDiagonalizableError(
            "eigenvector matrix condition number exceeds "
            f"{cond_cap:g}; matrix treated as defective"
        )
    left = np.linalg.inv(right)

    return SpectralDecomposition(
        eigenvalues=eigenvalues,
        right_vectors=right,
        left_vectors=left,
        cluster_ids=tuple(cluster_ids),
        pair_partner=tuple(pair_partner),
    )


def _is_perfect_square(n: int) -> bool:
    r = math.isqrt(n)
    return r * r == n


def _pair_tol(cluster_tol: float, scale: float) -> float:
    return max(10.0 * cluster_tol, 1e-10 * max(scale, 1e-300))


def _pair_clusters(
    eigenvalues: np.ndarray,
    members: dict[int, list[int]],
    cluster_tol: float,
    scale: float,
) -> list[int]:
    """Match each complex cluster with the cluster of conjugated eigenvalues."""
    n = eigenvalues.size
    partner = list(range(n))
    tol = _pair_tol(cluster_tol, scale)
    means = {c: complex(np.mean(eigenvalues[idx])) for c, idx in members.items()}
    done: set[int] = set()
    for c, idx in members.items():
        if c in done:
            continue
        mu = means[c]
        if abs(mu.imag) <= tol:
            done.add(c)
            continue  # real cluster: every member self-paired
        best, best_dist = None, math.inf
        for c2, mu2 in means.items():
            if c2 == c or c2 in done:
                continue
            dist = abs(mu2 - mu.conjugate())
            if dist < best_dist:
                best, best_dist = c2, dist
        if best is None or best_dist > tol or len(members[best]) != len(idx):
            done.add(c)
            continue  # unpaired complex cluster: members stay self-paired
        mirror = members[best]
        by_real = sorted(idx, key=lambda j: (eigenvalues[j].real, eigenvalues[j].imag))
        mirror_by_real = sorted(
            mirror, key=lambda j: (eigenvalues[j].real, -eigenvalues[j].imag)
        )
        for j, k in zip(by_real, mirror_by_real):
            partner[j] = k
            partner[k] = j
        done.update((c, best))
    return partner


def _restore_conjugate_bases(
    eigenvalues: np.ndarray,
    right: np.ndarray,
    partner: list[int],
    d: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Force mirror eigenvectors to F conj(r_j) and eigenvalues to conjugates.

    For a hermiticity-preserving transfer matrix, F conj(r) is an exact
    eigenvector for the conjugated eigenvalue, so this replaces one
    numerically independent basis with its mirror image and makes every
    branch shift hermiticity preserving by construction.
    """
    eigenvalues = eigenvalues.copy()
    right = right.copy()
    flip = flip_operator(d)
    for j, k in enumerate(partner):
        if k != j and eigenvalues[j].imag > 0:
            right[:, k] = flip @ right[:, j].conj()
            eigenvalues[k] = eigenvalues[j].conjugate()
    return eigenvalues, right


def principal_log(decomposition: SpectralDecomposition) -> np.ndarray:
    """Principal matrix logarithm sum_j Log(lam_j) |r_j><l_j|.

    Log is the principal scalar logarithm with imaginary part in
    (-pi, pi].  Raises :class:`SingularChannelError` on a numerically
    zero eigenvalue and emits :class:`BranchCutWarning` when an
    eigenvalue lies on the negative real axis (the resulting log is then
    not hermiticity preserving; downstream fitting relies on the convex
    stage to pull it back to a valid generator).
    """
    lam = decomposition.eigenvalues
    largest = float(np.abs(lam).max(initial=0.0))
    if largest == 0.0 or np.abs(lam).min() <= 1e-14 * largest:
        raise SingularChannelError("matrix has a (numerically) zero eigenvalue")
    on_cut = (lam.real < 0) & (np.abs(lam.imag) <= 1e-14 * np.abs(lam))
    if np.any(on_cut):
        warnings.warn(
            "eigenvalue on the negative real axis; principal log takes "
            "ln|lam| + i*pi there",
            BranchCutWarning,
            stacklevel=2,
        )
    return (decomposition.right_vectors * np.log(lam)) @ decomposition.left_vectors


def branch_log(
    log0: np.ndarray,
    decomposition: SpectralDecomposition,
    branch: BranchVector,
) -> np.ndarray:
    """Shift a principal log onto the branch m: L_0 + 2*pi*i sum_j m_j P_j."""
    indices = np.asarray(branch.indices)
    if indices.size != decomposition.size:
        raise ValueError(
            f"branch vector length {indices.size} does not match "
            f"decomposition size {decomposition.size}"
        )
    hot = np.nonzero(indices)[0]
    if hot.size == 0:
        return np.array(log0, copy=True)
    shift = (decomposition.right_vectors[:, hot] * indices[hot]) @ (
        decomposition.left_vectors[hot, :]
    )
    return log0 + 2j * np.pi * shift


def enumerate_branches(
    decomposition: SpectralDecomposition, m_max: int
) -> list[BranchVector]:
    """All conjugate-symmetric branch vectors with entries in [-m_max, m_max].

    One free integer per conjugate pair (carried by the eigenvalue with
    positive imaginary part, its partner receiving the negated value);
    real and unpaired eigenvalues are fixed to 0, since a lone 2*pi*i
    shift has no conjugate counterpart and would break hermiticity
    preservation.  The list is ordered lexicographically over the free
    indices and always contains the all-zero vector.
    """
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    n = decomposition.size
    partner = decomposition.pair_partner
    slots = [
        j
        for j in range(n)
        if partner[j] != j and decomposition.eigenvalues[j].imag > 0
    ]
    out = []
    for assignment in itertools.product(
        range(-m_max, m_max + 1), repeat=len(slots)
    ):
        indices = [0] * n
        for j, value in zip(slots, assignment):
            indices[j] = value
            indices[partner[j]] = -value
        out.append(BranchVector(tuple(indices), partner))
    return out
