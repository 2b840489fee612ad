"""Matrix file I/O: Matrix Market (.mtx) and plain CSV.

Values are written with 17 significant digits so that a write/read round trip
reproduces every float64 exactly.
"""
from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .matcore import as_matrix

__all__ = ["read_matrix", "write_matrix", "read_mtx", "write_mtx", "read_csv", "write_csv"]

_PRECISION = 17


def read_mtx(path) -> np.ndarray:
    """Read a dense matrix from Matrix Market array or coordinate format."""
    if not Path(path).is_file():
        # mmread reports a missing file as a malformed one
        raise FileNotFoundError(f"no such file: {path}")
    data = scipy.io.mmread(str(path))
    if scipy.sparse.issparse(data):
        data = data.toarray()
    return as_matrix(data, str(path))


def write_mtx(path, M) -> None:
    """Write ``M`` in Matrix Market array format."""
    M = as_matrix(M)
    buf = io.StringIO()
    buf.write("%%MatrixMarket matrix array real general\n")
    buf.write(f"{M.shape[0]} {M.shape[1]}\n")
    # array format is column-major
    for value in M.ravel(order="F"):
        buf.write(f"{_fmt(value)}\n")
    Path(path).write_text(buf.getvalue())


def read_csv(path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    return as_matrix(data, str(path))


def write_csv(path, M) -> None:
    M = as_matrix(M)
    lines = [",".join(_fmt(v) for v in row) for row in M]
    Path(path).write_text("\n".join(lines) + "\n")


def _fmt(value: float) -> str:
    # -0.0 would otherwise make byte-level output depend on solver noise
    if value == 0.0:
        return "0"
    return f"{value:.{_PRECISION}g}"


def read_matrix(path) -> np.ndarray:
    """Dispatch on file suffix (``.mtx`` or ``.csv``)."""
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return read_csv(path)
    return read_mtx(path)


def write_matrix(path, M) -> None:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        write_csv(path, M)
    else:
        write_mtx(path, M)
