"""On-disk formats: NFLD snapshots, NCKP checkpoints, PBM masks, CSV series.

NFLD: 16-byte header (magic "NFLD", u32 n, u32 reserved = 0, 4 zero pad
bytes, little endian) followed by n*n float64 nodal values, row major;
values start at byte offset 16.

NCKP: header (magic "NCKP", u32 version = 1, u32 n, u64 step, f64 time,
f64 nu, f64 dt, u64 seed) followed by three full spectra (vorticity, then
the two history right-hand sides, newest first) stored as interleaved
re/im float64, row major, little endian. Missing history slots (bootstrap)
are stored as zeros; the resume logic keeps min(step, 2) of them.

CSV columns: diagnostics "t,energy,enstrophy,palinstrophy,gevrey"; errors
"t,rel_l2,rel_linf,rel_l2_region_0,...". Floats are written with repr
(shortest round-trip form), so identical runs produce identical bytes.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

from .errors import FormatError
from .observe import Mask
from .solver import SolverState
from .spectral import Grid, SpectralField

__all__ = [
    "ExperimentManifest",
    "load_checkpoint",
    "error_header",
    "read_error_series_csv",
    "read_nfld",
    "read_pbm",
    "save_checkpoint",
    "sha256_file",
    "write_diag_row",
    "write_error_row",
    "write_manifest",
    "write_nfld",
    "write_pbm",
]

_NFLD_MAGIC = b"NFLD"
_NCKP_MAGIC = b"NCKP"
_NCKP_VERSION = 1


def write_nfld(path, values: np.ndarray):
    n = values.shape[0]
    if values.shape != (n, n):
        raise ValueError(f"snapshot must be square, got {values.shape}")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIII", _NFLD_MAGIC, n, 0, 0))
        fh.write(np.ascontiguousarray(values, dtype="<f8").tobytes())


def read_nfld(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) != 16:
            raise FormatError(f"{path}: truncated NFLD header")
        magic, n, _reserved, _pad = struct.unpack("<4sIII", header)
        if magic != _NFLD_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected NFLD")
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != n * n:
        raise FormatError(f"{path}: expected {n * n} values, found {data.size}")
    return data.reshape(n, n).copy()


def _pack_spectrum(coeffs: np.ndarray) -> bytes:
    inter = np.empty(coeffs.size * 2, dtype="<f8")
    flat = coeffs.ravel()
    inter[0::2] = flat.real
    inter[1::2] = flat.imag
    return inter.tobytes()


def _unpack_spectrum(buf: bytes, n: int) -> np.ndarray:
    inter = np.frombuffer(buf, dtype="<f8")
    return (inter[0::2] + 1j * inter[1::2]).reshape(n, n).copy()


def save_checkpoint(path, state: SolverState, nu: float, dt: float, seed: int):
    """Write a resumable solver checkpoint (bit-exact state round trip)."""
    n = state.omega.grid.n
    zeros = np.zeros((n, n), dtype=np.complex128)
    h = list(state.history) + [zeros, zeros]
    with open(path, "wb") as fh:
        fh.write(
            struct.pack(
                "<4sIIQdddQ", _NCKP_MAGIC, _NCKP_VERSION, n,
                state.step_count, state.time, nu, dt, seed,
            )
        )
        fh.write(_pack_spectrum(state.omega.coeffs))
        fh.write(_pack_spectrum(h[0]))
        fh.write(_pack_spectrum(h[1]))


def load_checkpoint(path) -> tuple:
    """Read a checkpoint; returns (SolverState, header dict)."""
    with open(path, "rb") as fh:
        raw = fh.read(struct.calcsize("<4sIIQdddQ"))
        if len(raw) != struct.calcsize("<4sIIQdddQ"):
            raise FormatError(f"{path}: truncated NCKP header")
        magic, version, n, step, time, nu, dt, seed = struct.unpack("<4sIIQdddQ", raw)
        if magic != _NCKP_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected NCKP")
        if version != _NCKP_VERSION:
            raise FormatError(f"{path}: unsupported checkpoint version {version}")
        spectra = []
        for _ in range(3):
            buf = fh.read(16 * n * n)
            if len(buf) != 16 * n * n:
                raise FormatError(f"{path}: truncated spectrum block")
            spectra.append(_unpack_spectrum(buf, n))
    grid = Grid(n)
    keep = min(step, 2)
    history = tuple(spectra[1 : 1 + keep])
    state = SolverState(
        omega=SpectralField(grid, spectra[0]),
        history=history,
        time=time,
        step_count=step,
    )
    header = {"n": n, "step": step, "time": time, "nu": nu, "dt": dt, "seed": seed}
    return state, header


def write_pbm(path, mask: Mask):
    """Plain (P1) bitmap of a mask; rows are written y-descending."""
    bits = mask.bits
    n = mask.grid.n
    lines = [b"P1", f"{n} {n}".encode()]
    for j in range(n - 1, -1, -1):
        lines.append(" ".join("1" if bits[i, j] else "0" for i in range(n)).encode())
    with open(path, "wb") as fh:
        fh.write(b"\n".join(lines) + b"\n")


def read_pbm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        tokens = fh.read().split()
    if not tokens or tokens[0] != b"P1":
        raise FormatError(f"{path}: not a plain PBM file")
    w, h = int(tokens[1]), int(tokens[2])
    flat = np.array([int(tok) for tok in tokens[3 : 3 + w * h]], dtype=bool)
    if flat.size != w * h:
        raise FormatError(f"{path}: expected {w * h} bits, found {flat.size}")
    rows = flat.reshape(h, w)  # written y-descending
    bits = np.empty((w, h), dtype=bool)
    for r in range(h):
        bits[:, h - 1 - r] = rows[r]
    return bits


DIAG_HEADER = "t,energy,enstrophy,palinstrophy,gevrey"
ERROR_HEADER_PREFIX = "t,rel_l2,rel_linf"


def error_header(region_count: int) -> str:
    cols = [ERROR_HEADER_PREFIX] + [
        f"rel_l2_region_{i}" for i in range(region_count)
    ]
    return ",".join(cols) if region_count else ERROR_HEADER_PREFIX


def write_diag_row(fh, t: float, rec) -> None:
    fh.write(
        f"{t!r},{rec.energy!r},{rec.enstrophy!r},{rec.palinstrophy!r},{rec.gevrey!r}\n"
    )


def write_error_row(fh, row) -> None:
    cells = [repr(row.t), repr(row.rel_l2), repr(row.rel_linf)]
    cells += [repr(v) for v in row.rel_l2_regions]
    fh.write(",".join(cells) + "\n")


def read_error_series_csv(path):
    """Rows of (t, rel_l2, rel_linf, regions...) from an errors CSV."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if not header.startswith(ERROR_HEADER_PREFIX):
            raise FormatError(f"{path}: unexpected header {header!r}")
        rows = []
        for line in fh:
            parts = line.strip().split(",")
            rows.append(tuple(float(x) for x in parts))
    return rows


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class ExperimentManifest:
    """Everything needed to audit a run; written after all other outputs."""

    command: str
    version: str
    seed: int
    config_text: str
    started: str
    finished: str
    files: list  # (relative path, sha256)


def write_manifest(path, manifest: ExperimentManifest):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"command = {manifest.command}\n")
        fh.write(f"version = {manifest.version}\n")
        fh.write(f"seed = {manifest.seed}\n")
        fh.write(f"started = {manifest.started}\n")
        fh.write(f"finished = {manifest.finished}\n")
        fh.write("[config]\n")
        for line in manifest.config_text.strip().splitlines():
            fh.write(f"  {line}\n")
        fh.write("[files]\n")
        for rel, digest in manifest.files:
            fh.write(f"  {digest}  {rel}\n")
