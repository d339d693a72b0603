"""Closed-form error-bound evaluation."""

import numpy as np
import pytest

from lindbladfit.bounds import (
    BETA_FLOOR,
    BoundInputs,
    beta_default,
    estimate_magnus_remainder,
    snapshot_error_bound,
    theta_error_bound,
)


def test_theta_error_bound_value():
    inputs = BoundInputs(eta=1.0, t_total=1.0, n_snapshots=10, dim=2)
    assert np.isclose(theta_error_bound(inputs), 1e-3)


def test_theta_error_bound_zero_eta():
    inputs = BoundInputs(eta=0.0, t_total=1.0, n_snapshots=5, dim=2)
    assert theta_error_bound(inputs) == 0.0


def test_theta_error_bound_doubling():
    a = BoundInputs(eta=0.7, t_total=2.0, n_snapshots=6, dim=2)
    b = BoundInputs(eta=0.7, t_total=2.0, n_snapshots=12, dim=2)
    assert np.isclose(theta_error_bound(a) / theta_error_bound(b), 8.0)


def test_snapshot_error_bound_values():
    assert snapshot_error_bound(BoundInputs(0.0, 1.0, 4, 2)) == 0.0
    inputs = BoundInputs(eta=1.0, t_total=1.0, n_snapshots=10, dim=2)
    expected = np.sqrt(2) * (np.exp(np.sqrt(2) / 100) - 1)
    assert np.isclose(snapshot_error_bound(inputs), expected)
    assert np.isclose(snapshot_error_bound(inputs), 0.02014, atol=2e-5)


def test_snapshot_error_bound_monotone_in_n():
    values = [
        snapshot_error_bound(BoundInputs(1.3, 1.5, n, 3)) for n in (4, 8, 16, 32)
    ]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))


def test_beta_default_value():
    inputs = BoundInputs(eta=1.0, t_total=1.0, n_snapshots=10, dim=2)
    assert np.isclose(beta_default(inputs), 0.01)


def test_beta_default_floor():
    inputs = BoundInputs(eta=0.0, t_total=1.0, n_snapshots=4, dim=2)
    assert beta_default(inputs) == BETA_FLOOR


def test_beta_default_quadratic_scaling():
    a = BoundInputs(eta=2.0, t_total=1.0, n_snapshots=4, dim=2)
    b = BoundInputs(eta=2.0, t_total=1.0, n_snapshots=16, dim=2)
    assert np.isclose(beta_default(a) / beta_default(b), 16.0)


def test_beta_default_includes_magnus_term():
    inputs = BoundInputs(
        eta=1.0, t_total=1.0, n_snapshots=10, dim=2, magnus_remainder=0.25
    )
    assert np.isclose(beta_default(inputs), 0.01 + 1.0)


def test_estimate_magnus_remainder():
    assert np.isclose(
        estimate_magnus_remainder(2.0, 0.5, 1.0, 10), 2.0 * 0.5 * 1e-3
    )
    with pytest.raises(ValueError):
        estimate_magnus_remainder(-1.0, 0.5, 1.0, 10)


def test_bound_inputs_validation():
    with pytest.raises(ValueError):
        BoundInputs(eta=-1.0, t_total=1.0, n_snapshots=4, dim=2)
    with pytest.raises(ValueError):
        BoundInputs(eta=1.0, t_total=0.0, n_snapshots=4, dim=2)
    with pytest.raises(ValueError):
        BoundInputs(eta=1.0, t_total=1.0, n_snapshots=0, dim=2)
