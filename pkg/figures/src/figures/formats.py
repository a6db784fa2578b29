"""Readers for the two artifact formats the plots consume.

NFLD files carry one real scalar field: a 16-byte header — the magic
``NFLD``, the grid size n, and two reserved words, all little-endian
u32 — followed by n*n float64 values in x-major order. Error series are
CSV with header ``t,rel_l2,rel_linf`` plus any number of trailing
``rel_l2_region_<i>`` columns.
"""

import csv
import struct
from pathlib import Path

import numpy as np

_NFLD_MAGIC = b"NFLD"
_HEADER = struct.Struct("<4sIII")
_SERIES_COLUMNS = ("t", "rel_l2", "rel_linf")


class FormatError(Exception):
    """An input file does not match the format it claims to be."""


def read_field(path) -> np.ndarray:
    """Load an NFLD file as an (n, n) float array indexed [x, y]."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated NFLD header")
    magic, n, _, _ = _HEADER.unpack_from(raw)
    if magic != _NFLD_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}, expected NFLD")
    body = raw[_HEADER.size:]
    if len(body) != 8 * n * n:
        raise FormatError(
            f"{path}: expected {8 * n * n} payload bytes for n = {n}, "
            f"got {len(body)}"
        )
    return np.frombuffer(body, dtype="<f8").reshape(n, n)


def read_error_series(path):
    """Load an errors.csv file; returns (column_names, rows array).

    The first three columns must be t, rel_l2, rel_linf; any further
    columns must be the per-region error columns. Rows come back as a
    float array of shape (n_rows, n_columns).
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if tuple(header[:3]) != _SERIES_COLUMNS or len(header) < 3:
            raise FormatError(
                f"{path}: header {','.join(header)!r} does not start with "
                f"{','.join(_SERIES_COLUMNS)!r}"
            )
        for i, name in enumerate(header[3:]):
            if name != f"rel_l2_region_{i}":
                raise FormatError(f"{path}: unexpected column {name!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise FormatError(
                    f"{path}:{lineno}: expected {len(header)} fields, "
                    f"got {len(row)}"
                )
            try:
                rows.append([float(x) for x in row])
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return list(header), np.array(rows, dtype=float)
