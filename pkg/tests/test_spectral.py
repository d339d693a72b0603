"""Eigensystem, clusters, matrix-log branches and their enumeration."""

import numpy as np
import pytest
from scipy.linalg import expm

from lindbladfit.channels import hermiticity_preserving_residual
from lindbladfit.lindblad import gkls_to_transfer, random_gkls
from lindbladfit.spectral import (
    BranchCutWarning,
    BranchVector,
    NonDiagonalizableError,
    SingularChannelError,
    SpectralDecomposition,
    branch_log,
    decompose,
    enumerate_branches,
    principal_log,
)


def random_complex(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def test_decompose_hand_example():
    s = decompose(np.array([[1.0, 1.0], [0.0, 2.0]]))
    assert np.allclose(sorted(s.eigenvalues.real), [1.0, 2.0])
    # projectors are scale free: P(1) = [[1,-1],[0,0]], P(2) = [[0,1],[0,1]]
    j1 = int(np.argmin(s.eigenvalues.real))
    j2 = 1 - j1
    assert np.allclose(s.projector(j1), [[1, -1], [0, 0]], atol=1e-12)
    assert np.allclose(s.projector(j2), [[0, 1], [0, 1]], atol=1e-12)
    assert np.allclose(s.reconstruct(), [[1, 1], [0, 2]], atol=1e-12)


def test_decompose_clusters_exact_degeneracy():
    s = decompose(np.diag([1.0, np.exp(-1), np.exp(-1), 1.0]))
    ids = np.asarray(s.cluster_ids)
    groups = {c: s.eigenvalues[ids == c] for c in set(s.cluster_ids)}
    assert len(groups) == 2
    sizes = sorted(len(v) for v in groups.values())
    assert sizes == [2, 2]


def test_decompose_identity_single_cluster():
    s = decompose(np.eye(5))
    assert len(set(s.cluster_ids)) == 1
    assert np.allclose(s.reconstruct(), np.eye(5), atol=1e-12)


def test_decompose_rejects_defective_matrix():
    # a Jordan block has no biorthogonal eigensystem; the rank-1 spectral
    # sum cannot represent it, so the contract is an error, not a value
    with pytest.raises(NonDiagonalizableError):
        decompose(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_biorthogonality_and_reconstruction_random():
    rng = np.random.default_rng(5)
    for n in (3, 4, 9):
        m = random_complex(rng, n)
        s = decompose(m)
        assert np.allclose(
            s.left_vectors @ s.right_vectors, np.eye(n), atol=1e-8
        )
        assert np.linalg.norm(s.reconstruct() - m) <= 1e-8 * np.linalg.norm(m)


def test_principal_log_diagonal_examples():
    s = decompose(np.diag([np.e, np.e**2]))
    assert np.allclose(principal_log(s), np.diag([1.0, 2.0]), atol=1e-12)
    s4 = decompose(np.diag([1.0, np.exp(-1), np.exp(-1), 1.0]))
    assert np.allclose(
        principal_log(s4), np.diag([0.0, -1.0, -1.0, 0.0]), atol=1e-12
    )


def test_principal_log_zero_eigenvalue_raises():
    with pytest.raises(SingularChannelError):
        principal_log(decompose(np.diag([1.0, 0.0])))


def test_principal_log_negative_real_warns():
    with pytest.warns(BranchCutWarning):
        log = principal_log(decompose(np.diag([-1.0, 2.0])))
    assert np.isclose(log[0, 0], 1j * np.pi)


def test_branch_log_zero_vector_is_identity():
    rng = np.random.default_rng(6)
    m = random_complex(rng, 4)
    s = decompose(m)
    log0 = principal_log(s)
    zero = BranchVector((0,) * 4, s.pair_partner)
    assert np.array_equal(branch_log(log0, s, zero), log0)


def test_branch_log_scalar_shift():
    s = decompose(np.array([[np.exp(1j * np.pi / 2)]]))
    log0 = principal_log(s)
    shifted = branch_log(log0, s, BranchVector((-1,), (0,)))
    assert np.isclose(shifted[0, 0], -3j * np.pi / 2)


def test_branch_vector_requires_pair_symmetry():
    with pytest.raises(ValueError):
        BranchVector((1, 1), (1, 0))
    BranchVector((1, -1), (1, 0))  # valid
    BranchVector((2,), (0,))  # self-paired index unconstrained


def test_exp_of_every_branch_reproduces_matrix():
    rng = np.random.default_rng(7)
    for d in (2, 3):
        m = expm(gkls_to_transfer(random_gkls(d, 2, 0.4, rng)))
        s = decompose(m)
        log0 = principal_log(s)
        for branch in enumerate_branches(s, 1):
            reproduced = expm(branch_log(log0, s, branch))
            assert np.linalg.norm(reproduced - m) <= 1e-7 * np.linalg.norm(m)


def test_branches_stay_hermiticity_preserving():
    rng = np.random.default_rng(8)
    for d in (2, 3):
        m = expm(gkls_to_transfer(random_gkls(d, 1, 0.6, rng)))
        s = decompose(m)
        log0 = principal_log(s)
        for branch in enumerate_branches(s, 1):
            assert (
                hermiticity_preserving_residual(branch_log(log0, s, branch), d)
                <= 1e-7
            )


def test_enumerate_m_max_zero():
    rng = np.random.default_rng(9)
    s = decompose(random_complex(rng, 3))
    branches = enumerate_branches(s, 0)
    assert len(branches) == 1
    assert all(i == 0 for i in branches[0].indices)


def _pair_count(s: SpectralDecomposition) -> int:
    return sum(
        1
        for j in range(s.size)
        if s.pair_partner[j] != j and s.eigenvalues[j].imag > 0
    )


def test_enumerate_counts():
    # one conjugate pair, two distinct positive reals -> 3 branch vectors
    theta = np.pi / 3
    m1 = np.diag([0.5, 1.0, 0.8 * np.exp(1j * theta), 0.8 * np.exp(-1j * theta)])
    s1 = decompose(m1)
    assert _pair_count(s1) == 1
    assert len(enumerate_branches(s1, 1)) == 3

    # two conjugate pairs -> 9
    m2 = np.diag(
        [
            0.9 * np.exp(1j * 0.4),
            0.9 * np.exp(-1j * 0.4),
            0.7 * np.exp(1j * 1.1),
            0.7 * np.exp(-1j * 1.1),
        ]
    )
    s2 = decompose(m2)
    assert _pair_count(s2) == 2
    branches = enumerate_branches(s2, 1)
    assert len(branches) == 9
    zero_count = sum(1 for b in branches if all(i == 0 for i in b.indices))
    assert zero_count == 1


def test_enumerate_count_formula_random():
    rng = np.random.default_rng(10)
    for d in (2, 3):
        s = decompose(expm(gkls_to_transfer(random_gkls(d, 2, 0.5, rng))))
        for m_max in (0, 1, 2):
            assert len(enumerate_branches(s, m_max)) == (2 * m_max + 1) ** (
                _pair_count(s)
            )


def test_enumeration_is_lexicographic_and_deterministic():
    m = np.diag(
        [
            0.9 * np.exp(1j * 0.4),
            0.9 * np.exp(-1j * 0.4),
            0.7 * np.exp(1j * 1.1),
            0.7 * np.exp(-1j * 1.1),
        ]
    )
    s = decompose(m)
    once = [b.indices for b in enumerate_branches(s, 1)]
    twice = [b.indices for b in enumerate_branches(s, 1)]
    assert once == twice
    slots = [
        j for j in range(4) if s.pair_partner[j] != j and s.eigenvalues[j].imag > 0
    ]
    frees = [tuple(b.indices[j] for j in slots) for b in enumerate_branches(s, 1)]
    assert frees == sorted(frees)


def test_degenerate_complex_pair_repair():
    # two identical rotation blocks: degenerate complex pair, where the
    # conjugate-basis repair must keep every branch hermiticity preserving
    theta = 0.7
    rot = np.array(
        [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
    )
    from lindbladfit.channels import sandwich_transfer

    m = sandwich_transfer(rot)  # unitary conjugation channel, d = 2
    s = decompose(m)
    log0 = principal_log(s)
    for branch in enumerate_branches(s, 1):
        shifted = branch_log(log0, s, branch)
        assert hermiticity_preserving_residual(shifted, 2) <= 1e-7
        assert np.linalg.norm(expm(shifted) - m) <= 1e-7
