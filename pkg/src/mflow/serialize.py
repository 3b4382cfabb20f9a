"""File formats: matrix / pattern / contracted-point / polygon JSON and the
trajectory CSV.

All writers are atomic (temp file + rename) and floats round-trip exactly
through JSON. Loaders raise ParseError with field context on malformed input.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile

import numpy as np

from .contraction import ContractedPoint
from .errors import ParseError
from .flow import FlowTrajectory
from .gelfand_tsetlin import GTPattern
from .matrices import as_complex_matrix
from .polygons import PolygonConfig

__all__ = [
    "matrix_to_json", "matrix_from_json", "save_matrix", "load_matrix",
    "pattern_to_json", "pattern_from_json", "save_pattern", "load_pattern",
    "contracted_to_json", "polygon_to_json", "polygon_from_json",
    "save_polygon", "load_polygon", "save_trajectory", "atomic_write_text",
]


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mflow-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc


def matrix_to_json(M) -> dict:
    A = as_complex_matrix(M)
    return {
        "n": int(A.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in A],
    }


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: expected fields 'n' and 'entries'") from exc
    if len(entries) != n or any(len(row) != n for row in entries):
        raise ParseError(f"{where}: entries are not an {n}x{n} array")
    try:
        M = np.array([[complex(re, im) for re, im in row] for row in entries])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: entries must be [re, im] pairs") from exc
    return M


def save_matrix(path: str, M) -> None:
    atomic_write_text(path, json.dumps(matrix_to_json(M)) + "\n")


def load_matrix(path: str) -> np.ndarray:
    return matrix_from_json(_load_json(path), where=path)


def pattern_to_json(P: GTPattern) -> dict:
    return {"rows": [[float(v) for v in row] for row in P.rows]}


def pattern_from_json(obj, where: str = "pattern") -> GTPattern:
    try:
        rows = obj["rows"]
        return GTPattern(tuple(tuple(float(v) for v in row) for row in rows))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: expected triangular 'rows'") from exc


def save_pattern(path: str, P: GTPattern) -> None:
    atomic_write_text(path, json.dumps(pattern_to_json(P)) + "\n")


def load_pattern(path: str) -> GTPattern:
    return pattern_from_json(_load_json(path), where=path)


def contracted_to_json(cp: ContractedPoint) -> dict:
    """Blocks are serialized as 1-based inclusive [lo, hi] index ranges."""
    return {
        "w": [float(v) for v in cp.w],
        "g": matrix_to_json(cp.g),
        "blocks": [[lo + 1, hi] for lo, hi in cp.partition.blocks],
    }


def polygon_to_json(P: PolygonConfig) -> dict:
    return {"edges": [[float(x) for x in e] for e in P.edges]}


def polygon_from_json(obj, where: str = "polygon") -> PolygonConfig:
    try:
        edges = np.array(obj["edges"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: expected an 'edges' list of 3-vectors") from exc
    return PolygonConfig(edges)


def save_polygon(path: str, P: PolygonConfig) -> None:
    atomic_write_text(path, json.dumps(polygon_to_json(P)) + "\n")


def load_polygon(path: str) -> PolygonConfig:
    return polygon_from_json(_load_json(path), where=path)


def save_trajectory(path: str, traj: FlowTrajectory, samples: int | None = None) -> None:
    """Write a flow trajectory as CSV.

    Columns: t, re_ij/im_ij row-major, det_re, det_im, mu_drift (max-norm
    drift of the traceless right momentum from t = 0). Rows are the accepted
    steps, or a uniform resampling when `samples` is given; the final row is
    always the snapped terminal at the nominal end time.
    """
    B0 = traj.samples[0][1]
    n = B0.shape[0]
    from .matrices import traceless
    base_mu = traceless(B0.conj().T @ B0)
    d0 = float(np.linalg.det(B0).real)
    t_end = d0 ** (1.0 / traj.config.m)

    header = ["t"]
    for i in range(n):
        for j in range(n):
            header += [f"re_{i}{j}", f"im_{i}{j}"]
    header += ["det_re", "det_im", "mu_drift"]

    def row_of(t, B):
        det = complex(np.linalg.det(B))
        drift = float(np.max(np.abs(traceless(B.conj().T @ B) - base_mu)))
        flat = []
        for z in B.ravel():
            flat += [z.real, z.imag]
        return [t, *flat, det.real, det.imag, drift]

    if samples is None:
        points = [(t, B) for t, B in traj.samples]
    else:
        ts = np.linspace(0.0, traj.samples[-1][0], int(samples))
        points = [(float(t), traj.at(float(t))) for t in ts]

    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mflow-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for t, B in points:
                writer.writerow(row_of(t, B))
            writer.writerow(row_of(t_end, traj.terminal))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
