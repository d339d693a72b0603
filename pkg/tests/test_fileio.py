"""Snapshot-file and report serialization."""

import json

import numpy as np
import pytest
from scipy.linalg import expm

import lindbladfit.fileio as fileio
from lindbladfit.fitter import FitConfig, SnapshotSeries, fit
from lindbladfit.lindblad import gkls_to_transfer, random_gkls


def random_series(seed, n=3, with_times=True, d=2):
    rng = np.random.default_rng(seed)
    snapshots = tuple(
        rng.normal(size=(d * d, d * d)) + 1j * rng.normal(size=(d * d, d * d))
        for _ in range(n)
    )
    times = tuple(float(t) for t in np.sort(rng.uniform(0.1, 5.0, size=n)))
    return SnapshotSeries(
        dim=d, snapshots=snapshots, timestamps=times if with_times else None
    )


def test_matrix_pair_round_trip():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    pairs = fileio.matrix_to_pairs(m)
    back = fileio.pairs_to_matrix(pairs, 4, "matrix")
    assert np.array_equal(back, m)


@pytest.mark.parametrize("with_times", [True, False])
def test_snapshot_file_round_trip(tmp_path, with_times):
    series = random_series(1, with_times=with_times)
    path = tmp_path / "snaps.json"
    fileio.write_snapshots(path, series)
    back = fileio.read_snapshots(path)
    assert back.dim == series.dim
    assert back.timestamps == series.timestamps
    for a, b in zip(back.snapshots, series.snapshots):
        assert np.array_equal(a, b)


def test_snapshot_file_deterministic_bytes(tmp_path):
    series = random_series(2)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    fileio.write_snapshots(p1, series)
    fileio.write_snapshots(p2, series)
    assert p1.read_bytes() == p2.read_bytes()


def test_schema_diagnostics(tmp_path):
    path = tmp_path / "bad.json"

    path.write_text("not json at all")
    with pytest.raises(fileio.SchemaError, match="JSON"):
        fileio.read_snapshots(path)

    path.write_text(json.dumps({"format_version": "1", "d": 2, "snapshots": []}))
    with pytest.raises(fileio.SchemaError, match="snapshots"):
        fileio.read_snapshots(path)

    payload = {
        "format_version": "1",
        "d": 2,
        "snapshots": [{"matrix": [[[0.0, 0.0]] * 3] * 4}],
    }
    path.write_text(json.dumps(payload))
    with pytest.raises(fileio.SchemaError, match=r"snapshots\[0\].matrix row 0"):
        fileio.read_snapshots(path)

    payload = {"format_version": "7", "d": 2, "snapshots": [{"matrix": []}]}
    path.write_text(json.dumps(payload))
    with pytest.raises(fileio.SchemaError, match="format_version"):
        fileio.read_snapshots(path)

    # mixed presence of timestamps
    m = fileio.matrix_to_pairs(np.eye(4))
    payload = {
        "format_version": "1",
        "d": 2,
        "snapshots": [{"matrix": m, "t": 1.0}, {"matrix": m}],
    }
    path.write_text(json.dumps(payload))
    with pytest.raises(fileio.SchemaError, match="every snapshot"):
        fileio.read_snapshots(path)

    payload = {
        "format_version": "1",
        "d": 2,
        "snapshots": [{"matrix": m, "t": 2.0}, {"matrix": m, "t": 1.0}],
    }
    path.write_text(json.dumps(payload))
    with pytest.raises(fileio.SchemaError, match="increasing"):
        fileio.read_snapshots(path)


def test_report_round_trip(tmp_path):
    generator = gkls_to_transfer(random_gkls(2, 1, 0.5, seed=3))
    series = SnapshotSeries(
        dim=2, snapshots=(expm(generator * 0.4), expm(generator * 0.8))
    )
    cfg = FitConfig(m_max=1, beta=0.5)
    result = fit(series, cfg)
    payload = fileio.report_from_fit(result, cfg)
    path = tmp_path / "report.json"
    fileio.write_report(path, payload)
    back = fileio.read_report(path)
    assert back == json.loads(json.dumps(payload))
    assert back["verdict"] == result.verdict
    assert back["chosen_branch"] == list(result.chosen_branch.indices)
    fitted = fileio.pairs_to_matrix(back["lindbladians"][0], 4, "lindbladian")
    assert np.array_equal(fitted, result.lindbladians[0])


def test_report_handles_skipped_intervals(tmp_path):
    singular = np.diag([1.0, 0.0, 0.0, 1.0])
    series = SnapshotSeries(dim=2, snapshots=(singular,))
    cfg = FitConfig()
    result = fit(series, cfg)
    payload = fileio.report_from_fit(result, cfg)
    assert payload["total_distance"] is None
    assert payload["intervals"][0]["distance"] is None
    assert payload["intervals"][0]["skipped"] is not None
    path = tmp_path / "report.json"
    fileio.write_report(path, payload)
    assert fileio.read_report(path) == json.loads(json.dumps(payload))
