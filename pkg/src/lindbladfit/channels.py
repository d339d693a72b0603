"""Superoperator representations on the elementary (natural) basis.

A linear map acting on d x d matrices is stored as a d^2 x d^2 complex
matrix applied to row-major vectorized operators: the matrix V becomes
the vector v with v[j*d + k] = V[j, k].  Under this convention the map
rho -> A rho B^dag has transfer matrix kron(A, conj(B)), composition of
maps is plain matrix multiplication, and the transfer-matrix element at
row (j, k), column (l, m) equals Tr[|e_k><e_j| C(|e_l><e_m|)].

The Choi form of a superoperator is the image of its transfer matrix
under the index reshuffle (j,k),(l,m) -> (j,l),(k,m).  The reshuffle is
a linear involution and a Frobenius isometry; complete positivity,
hermiticity preservation and trace preservation of the map all become
spectral or linear statements on the Choi form.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "vec",
    "unvec",
    "sandwich_transfer",
    "gamma_involution",
    "omega_vector",
    "omega_perp",
    "flip_operator",
    "partial_trace_first",
    "hermiticity_preserving_residual",
    "hilbert_dim",
]


def hilbert_dim(matrix: np.ndarray, d: int | None = None) -> int:
    """Return the Hilbert-space dimension d for a d^2 x d^2 superoperator.

    Validates that the matrix is square with a perfect-square side (and,
    when ``d`` is given, that the side equals d^2).
    """
    side = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != side:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if d is None:
        d = math.isqrt(side)
    if d < 1 or d * d != side:
        raise ValueError(f"matrix side {side} is not d^2 for d={d}")
    return d


def vec(operator: np.ndarray) -> np.ndarray:
    """Row-major vectorization: V -> v with v[j*d + k] = V[j, k]."""
    return np.asarray(operator).reshape(-1)


def unvec(vector: np.ndarray, d: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec` for a length-d^2 vector."""
    vector = np.asarray(vector)
    if d is None:
        d = math.isqrt(vector.size)
    if d * d != vector.size:
        raise ValueError(f"vector length {vector.size} is not a perfect square")
    return vector.reshape(d, d)


def sandwich_transfer(a: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    """Transfer matrix of rho -> A rho B^dag (B defaults to A).

    This is the convention anchor for the whole package: with row-major
    vectorization, vec(A rho B^dag) = kron(A, conj(B)) @ vec(rho).
    """
    a = np.asarray(a, dtype=complex)
    b = a if b is None else np.asarray(b, dtype=complex)
    return np.kron(a, b.conj())


def gamma_involution(matrix: np.ndarray, d: int | None = None) -> np.ndarray:
    """Reshuffle between transfer and Choi forms of a superoperator.

    Maps the entry at row (j,k), column (l,m) to row (j,l), column (k,m).
    Applying it twice is the identity, and it preserves the Frobenius
    norm.  The Choi matrix of a channel C is gamma_involution(C), equal
    to d * (C (x) Id) applied to the maximally entangled projector.
    """
    matrix = np.asarray(matrix)
    d = hilbert_dim(matrix, d)
    return (
        matrix.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    )


def omega_vector(d: int) -> np.ndarray:
    """Maximally entangled state sum_j |e_j, e_j> / sqrt(d) as a d^2 vector."""
    if d < 1:
        raise ValueError("dimension must be positive")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / math.sqrt(d)
    return v


def omega_perp(d: int) -> np.ndarray:
    """Projector onto the orthogonal complement of the maximally entangled state."""
    w = omega_vector(d)
    return np.eye(d * d, dtype=complex) - np.outer(w, w.conj())


def flip_operator(d: int) -> np.ndarray:
    """Permutation matrix swapping the tensor factors: F|e_j, e_k> = |e_k, e_j>."""
    f = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for k in range(d):
            f[k * d + j, j * d + k] = 1.0
    return f


def partial_trace_first(choi: np.ndarray, d: int | None = None) -> np.ndarray:
    """Trace out the first subsystem of a bipartite d^2 x d^2 matrix.

    Returns the d x d matrix with entries sum_a X[(a,k),(a,m)].  For the
    Choi matrix of a channel this equals the identity exactly when the
    channel is trace preserving; for the Choi form of a generator it is
    zero exactly when the generator annihilates the trace.
    """
    choi = np.asarray(choi)
    d = hilbert_dim(choi, d)
    return np.einsum("akam->km", choi.reshape(d, d, d, d))


def hermiticity_preserving_residual(transfer: np.ndarray, d: int | None = None) -> float:
    """Frobenius norm of the anti-hermitian part of the Choi form.

    Zero exactly when the map sends hermitian matrices to hermitian
    matrices, which is also equivalent to the flip-conjugation relation
    C F conj(v) = F conj(C v) on the transfer matrix.
    """
    choi = gamma_involution(transfer, d)
    return float(np.linalg.norm(choi - choi.conj().T))
