"""GKLS construction and the three generator conditions."""

import numpy as np
import pytest
from scipy.linalg import expm

from lindbladfit.channels import (
    gamma_involution,
    omega_perp,
    partial_trace_first,
)
from lindbladfit.lindblad import (
    GKLSParams,
    check_lindblad_conditions,
    gkls_to_transfer,
    random_gkls,
)

SZ = np.diag([1.0, -1.0]).astype(complex)


def test_dephasing_transfer():
    params = GKLSParams(dim=2, hamiltonian=np.zeros((2, 2)), jumps=((SZ, 0.5),))
    assert np.allclose(
        gkls_to_transfer(params), np.diag([0.0, -1.0, -1.0, 0.0]), atol=1e-14
    )


def test_no_jumps_no_hamiltonian_is_zero():
    params = GKLSParams(dim=2, hamiltonian=np.zeros((2, 2)))
    assert np.allclose(gkls_to_transfer(params), np.zeros((4, 4)))


def test_hamiltonian_only_transfer():
    params = GKLSParams(dim=2, hamiltonian=0.5 * SZ)
    assert np.allclose(
        gkls_to_transfer(params), np.diag([0.0, -1j, 1j, 0.0]), atol=1e-14
    )


def test_rejects_invalid_params():
    with pytest.raises(ValueError):
        GKLSParams(dim=2, hamiltonian=np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        GKLSParams(dim=2, hamiltonian=np.zeros((2, 2)), jumps=((SZ, -0.1),))


def test_check_conditions_zero_matrix():
    report = check_lindblad_conditions(np.zeros((4, 4)), tol=1e-10)
    assert report.passed
    assert report.hermiticity_residual == 0.0
    assert report.trace_residual == 0.0


def test_check_conditions_dephasing_choi():
    x = np.zeros((4, 4))
    x[0, 3] = x[3, 0] = -1.0
    report = check_lindblad_conditions(x, tol=1e-10)
    assert report.passed
    assert np.isclose(report.ccp_min_eigenvalue, 0.0, atol=1e-12)
    # spectrum of the compressed block is {1, 0, 0, 0}
    perp = omega_perp(2)
    block = perp @ x @ perp
    assert np.allclose(
        np.sort(np.linalg.eigvalsh((block + block.conj().T) / 2)),
        [0.0, 0.0, 0.0, 1.0],
        atol=1e-12,
    )


def test_check_conditions_trace_violation():
    w = np.zeros(4)
    w[0] = w[3] = 1 / np.sqrt(2)
    x = np.zeros((4, 4))
    x[0, 3] = x[3, 0] = 1.0
    x = x + np.outer(w, w)
    assert np.abs(partial_trace_first(x, 2)).sum() > 0.1
    report = check_lindblad_conditions(x, tol=1e-8)
    assert report.trace_residual > 0.1
    assert not report.passed


def test_random_gkls_deterministic_in_seed():
    a = random_gkls(3, 2, 0.5, seed=11)
    b = random_gkls(3, 2, 0.5, seed=11)
    assert np.array_equal(a.hamiltonian, b.hamiltonian)
    for (ja, ra), (jb, rb) in zip(a.jumps, b.jumps):
        assert np.array_equal(ja, jb)
        assert ra == rb


def test_random_gkls_pipeline_passes_conditions():
    for seed, d in ((0, 2), (1, 3)):
        params = random_gkls(d, 2, 0.8, seed=seed)
        choi = gamma_involution(gkls_to_transfer(params), d)
        assert check_lindblad_conditions(choi, tol=1e-9).passed


def test_pure_hamiltonian_generator_antihermitian_action():
    params = random_gkls(2, 0, 0.0, seed=2)
    transfer = gkls_to_transfer(params)
    # unitary part: exp(t L) is an isometry on vectorized operators
    assert np.allclose(
        transfer + transfer.conj().T, np.zeros_like(transfer), atol=1e-12
    )


def test_gkls_choi_conditions_tight():
    rng = np.random.default_rng(3)
    for d in (2, 3):
        for _ in range(5):
            params = random_gkls(d, 3, 1.0, rng)
            choi = gamma_involution(gkls_to_transfer(params), d)
            report = check_lindblad_conditions(choi, tol=1e-10)
            assert report.passed, report


def test_exponential_is_cpt():
    rng = np.random.default_rng(4)
    for d in (2, 3):
        transfer = gkls_to_transfer(random_gkls(d, 2, 0.5, rng))
        for t in (0.1, 1.0, 10.0):
            choi = gamma_involution(expm(t * transfer), d)
            hermitian = (choi + choi.conj().T) / 2
            assert np.linalg.eigvalsh(hermitian)[0] >= -1e-9
            assert np.allclose(
                partial_trace_first(choi, d), np.eye(d), atol=1e-9
            )


def test_dissipator_linearity():
    rng = np.random.default_rng(5)
    d = 2
    h = np.zeros((d, d))
    j1 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    j2 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    both = gkls_to_transfer(GKLSParams(d, h, ((j1, 0.3), (j2, 0.7))))
    first = gkls_to_transfer(GKLSParams(d, h, ((j1, 0.3),)))
    second = gkls_to_transfer(GKLSParams(d, h, ((j2, 0.7),)))
    assert np.allclose(both, first + second, atol=1e-12)
