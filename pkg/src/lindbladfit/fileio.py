"""Snapshot files and fit reports as structured JSON.

Complex matrices are stored as row-major nested lists of [re, im] pairs,
which keeps the files diff-able and readable by lab tooling at the small
dimensions this package targets.  Writing is deterministic: the same
data produces byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from ._version import __version__
from .fitter import FitConfig, FitResult, SnapshotSeries

__all__ = [
    "SchemaError",
    "FORMAT_VERSION",
    "matrix_to_pairs",
    "pairs_to_matrix",
    "write_snapshots",
    "read_snapshots",
    "report_from_fit",
    "write_report",
    "read_report",
]

FORMAT_VERSION = "1"


class SchemaError(ValueError):
    """Input file does not match the snapshot-file schema."""


def matrix_to_pairs(matrix: np.ndarray) -> list[list[list[float]]]:
    """Complex matrix -> row-major nested [re, im] pairs."""
    return [
        [[float(entry.real), float(entry.imag)] for entry in row]
        for row in np.asarray(matrix, dtype=complex)
    ]


def pairs_to_matrix(rows: Any, side: int, where: str) -> np.ndarray:
    """Nested [re, im] pairs -> complex matrix, validating shape."""
    if not isinstance(rows, list) or len(rows) != side:
        raise SchemaError(f"{where}: expected {side} rows, got "
                          f"{len(rows) if isinstance(rows, list) else type(rows).__name__}")
    out = np.empty((side, side), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != side:
            raise SchemaError(f"{where} row {i}: expected {side} entries")
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) for x in pair)
            ):
                raise SchemaError(
                    f"{where} row {i} column {j}: expected an [re, im] pair"
                )
            out[i, j] = complex(pair[0], pair[1])
    return out


def write_snapshots(path: str, series: SnapshotSeries) -> None:
    """Write a snapshot series to ``path``."""
    snapshots = []
    for index, matrix in enumerate(series.snapshots):
        record: dict[str, Any] = {"matrix": matrix_to_pairs(matrix)}
        if series.timestamps is not None:
            record["t"] = series.timestamps[index]
        snapshots.append(record)
    payload = {
        "format_version": FORMAT_VERSION,
        "d": series.dim,
        "snapshots": snapshots,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=1)
        handle.write("\n")


def read_snapshots(path: str) -> SnapshotSeries:
    """Read and validate a snapshot file.

    Raises :class:`SchemaError` with a field-level diagnostic on any
    structural problem.
    """
    with open(path, "r", encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as err:
            raise SchemaError(f"not valid JSON: {err}") from err
    if not isinstance(payload, dict):
        raise SchemaError("top level must be an object")
    if payload.get("format_version") != FORMAT_VERSION:
        raise SchemaError(
            f"format_version: expected {FORMAT_VERSION!r}, "
            f"got {payload.get('format_version')!r}"
        )
    dim = payload.get("d")
    if not isinstance(dim, int) or dim < 2:
        raise SchemaError(f"d: expected an integer >= 2, got {dim!r}")
    records = payload.get("snapshots")
    if not isinstance(records, list) or not records:
        raise SchemaError("snapshots: expected a nonempty list")
    side = dim * dim
    matrices = []
    timestamps = []
    with_time = 0
    for index, record in enumerate(records):
        where = f"snapshots[{index}]"
        if not isinstance(record, dict) or "matrix" not in record:
            raise SchemaError(f"{where}: expected an object with a 'matrix' field")
        matrices.append(pairs_to_matrix(record["matrix"], side, f"{where}.matrix"))
        t = record.get("t")
        if t is not None:
            if not isinstance(t, (int, float)):
                raise SchemaError(f"{where}.t: expected a number")
            timestamps.append(float(t))
            with_time += 1
    if with_time not in (0, len(records)):
        raise SchemaError("t: either every snapshot carries a timestamp or none does")
    if with_time and any(
        t2 <= t1 for t1, t2 in zip(timestamps, timestamps[1:])
    ):
        raise SchemaError("t: timestamps must be strictly increasing")
    try:
        return SnapshotSeries(
            dim=dim,
            snapshots=tuple(matrices),
            timestamps=tuple(timestamps) if with_time else None,
        )
    except ValueError as err:
        raise SchemaError(str(err)) from err


def _float_or_none(value: float | None) -> float | None:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return float(value)


def report_from_fit(
    result: FitResult,
    cfg: FitConfig,
    bounds_block: dict[str, float] | None = None,
    beta_sweep: list[tuple[float, float, str]] | None = None,
) -> dict[str, Any]:
    """Assemble the machine-readable report of one fit."""
    intervals = []
    for p in range(len(result.per_interval_distance)):
        report = result.condition_reports[p]
        intervals.append(
            {
                "distance": _float_or_none(result.per_interval_distance[p]),
                "snapshot_error": _float_or_none(result.snapshot_errors[p]),
                "converged": result.converged[p],
                "skipped": result.skipped[p],
                "hermiticity_residual": report.hermiticity_residual if report else None,
                "ccp_min_eigenvalue": report.ccp_min_eigenvalue if report else None,
                "trace_residual": report.trace_residual if report else None,
                "conditions_passed": report.passed if report else None,
            }
        )
    payload: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "tool": {"name": "lindbladfit", "version": __version__},
        "config": {
            "m_max": cfg.m_max,
            "beta": cfg.beta,
            "markov_threshold": cfg.markov_threshold,
            "inversion_condition_cap": cfg.inversion_condition_cap,
            "tol": cfg.tol,
            "max_iters": cfg.max_iters,
            "independent_branches": cfg.independent_branches,
        },
        "verdict": result.verdict,
        "beta_used": result.beta_used,
        "chosen_branch": list(result.chosen_branch.indices)
        if result.chosen_branch is not None
        else None,
        "total_distance": _float_or_none(result.total_distance),
        "intervals": intervals,
        "lindbladians": [
            matrix_to_pairs(generator) if generator is not None else None
            for generator in result.lindbladians
        ],
        "branch_distances": [
            [list(branch.indices), total]
            for branch, total in result.branch_distances
        ],
    }
    if bounds_block is not None:
        payload["bounds"] = bounds_block
    if beta_sweep is not None:
        payload["beta_sweep"] = [
            {"beta": beta, "total_distance": total, "verdict": verdict}
            for beta, total, verdict in beta_sweep
        ]
    return payload


def write_report(path: str, payload: dict[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=1)
        handle.write("\n")


def read_report(path: str) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)
