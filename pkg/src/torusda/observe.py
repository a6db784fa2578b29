"""Local observation operators: subdomain masks, coarse sampling, smoothing.

The observation map used by the nudging term is

    J = FFT o chi_Omega o K_p o sample_{2^p} o FFT^{-1}

evaluated on the difference spectrum: move to physical space, keep every
2^p-th node, rebuild a full-resolution field with the recursive midpoint
smoother K_p, zero everything outside the subdomain Omega(t), and return
to spectral space (optionally truncating above a cutoff). A volume-average
variant replaces sampling + smoothing by per-cell means of chi_Omega * f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMaskError
from .spectral import (
    BOX_LENGTH,
    Grid,
    PhysicalField,
    SpectralField,
    _forward_raw,
    _inverse_raw,
)

__all__ = [
    "CoarseLattice",
    "Mask",
    "ObservationConfig",
    "SubdomainSpec",
    "disk_mask",
    "mask_at",
    "mask_from_bits",
    "nodal_interpolant",
    "observe",
    "smoother_kp",
    "spectral_project",
    "subsample",
    "trajectory_quarter",
    "trajectory_sixteenth",
    "volume_average_interpolant",
]

_KINDS = ("static", "mobile_quarter", "mobile_sixteenth", "full")
_INTERPOLANTS = ("nodal_smooth", "volume_average")


@dataclass(frozen=True)
class SubdomainSpec:
    """Observation subdomain: a static square, a mobile square, or the box.

    side_fraction is the linear side as a fraction of the box side (static
    only; the square must fit inside the box around `center`). Mobile
    squares have a fixed side of n/2 (quarter area) or n/4 (1/16 area)
    nodes and traverse their loop once per `period` time units.
    """

    kind: str
    side_fraction: float | None = None
    center: tuple = (np.pi, np.pi)
    period: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown subdomain kind {self.kind!r}; expected {_KINDS}")
        if self.kind == "static":
            s = self.side_fraction
            if s is None or not (0.0 < s <= 1.0):
                raise ValueError(f"static subdomain needs side_fraction in (0, 1], got {s}")
            cx, cy = self.center
            half = s * BOX_LENGTH / 2.0
            if cx - half < 0 or cx + half > BOX_LENGTH or cy - half < 0 or cy + half > BOX_LENGTH:
                raise ValueError("static square must lie fully inside the box")
        if self.period <= 0:
            raise ValueError(f"period must be positive, got {self.period}")


@dataclass(frozen=True)
class Mask:
    """Boolean node-membership array for a subdomain; never empty."""

    grid: Grid
    bits: np.ndarray

    def __post_init__(self):
        if self.bits.shape != self.grid.shape:
            raise ValueError(
                f"mask shape {self.bits.shape} does not match grid {self.grid.shape}"
            )
        bits = np.asarray(self.bits, dtype=bool)
        if not bits.any():
            raise DegenerateMaskError("mask selects no nodes")
        object.__setattr__(self, "bits", bits)

    @property
    def node_fraction(self) -> float:
        return float(self.bits.mean())


def mask_from_bits(grid: Grid, bits: np.ndarray) -> Mask:
    return Mask(grid, bits)


def disk_mask(grid: Grid, center: tuple = (np.pi, np.pi), radius: float = 1.0) -> Mask:
    """Disk subdomain (periodic distance), for inequality experiments."""
    x = grid.x
    dx_ = np.minimum(np.abs(x - center[0]), BOX_LENGTH - np.abs(x - center[0]))
    dy_ = np.minimum(np.abs(x - center[1]), BOX_LENGTH - np.abs(x - center[1]))
    bits = (dx_[:, None] ** 2 + dy_[None, :] ** 2) <= radius**2
    return Mask(grid, bits)


def trajectory_quarter(t: float, n: int) -> tuple:
    """Lower-left corner (node units) of the quarter-area square at time t.

    Period-1 counterclockwise loop: the corner ramps linearly
    (0,0) -> (n/2,0) -> (n/2,n/2) -> (0,n/2) -> (0,0) over equal quarters;
    the y ramp is the x ramp delayed by a quarter period.
    """

    def ramp(tau: float) -> float:
        tau = tau % 1.0
        if tau < 0.25:
            return (n / 2.0) * (4.0 * tau)
        if tau < 0.5:
            return n / 2.0
        if tau < 0.75:
            return (n / 2.0) * (3.0 - 4.0 * tau)
        return 0.0

    return ramp(t), ramp(t - 0.25)


def trajectory_sixteenth(t: float, n: int) -> tuple:
    """Corner (node units) of the 1/16-area square: serpentine tile scan.

    Four rows at y = 0, n/4, n/2, 3n/4, a quarter period each; x sweeps
    its tile positions 0..3n/4 left-to-right on even rows and back on odd
    rows, while y jumps between rows (the periodic extension of y(t) is
    discontinuous).
    """
    tau = t % 1.0
    row = int(tau * 4.0)  # 0..3
    s = 4.0 * tau - row
    x = 0.75 * n * (s if row % 2 == 0 else 1.0 - s)
    return x, row * n / 4.0


def _window_bits(n: int, corner: float, side: int) -> np.ndarray:
    start = int(round(corner)) % n
    idx = (start + np.arange(side)) % n
    bits = np.zeros(n, dtype=bool)
    bits[idx] = True
    return bits


def mask_at(spec: SubdomainSpec, grid: Grid, t: float = 0.0) -> Mask:
    """Node-membership mask of the subdomain at time t.

    Static squares: node (i, j) belongs to Omega iff its cell center
    ((i + 1/2) dx, (j + 1/2) dx) lies in the closed square, so the set-node
    fraction tracks side_fraction^2 to O(1/n). Mobile squares place an
    n/2- or n/4-node window at the trajectory corner (rounded to the
    nearest node) with periodic wraparound.
    """
    n = grid.n
    if spec.kind == "full":
        return Mask(grid, np.ones(grid.shape, dtype=bool))
    if spec.kind == "static":
        half = spec.side_fraction * BOX_LENGTH / 2.0
        centers = grid.x + grid.dx / 2.0
        inx = np.abs(centers - spec.center[0]) <= half
        iny = np.abs(centers - spec.center[1]) <= half
        return Mask(grid, inx[:, None] & iny[None, :])
    phase = (t % spec.period) / spec.period
    if spec.kind == "mobile_quarter":
        cx, cy = trajectory_quarter(phase, n)
        side = n // 2
    else:
        cx, cy = trajectory_sixteenth(phase, n)
        side = n // 4
    return Mask(grid, _window_bits(n, cx, side)[:, None] & _window_bits(n, cy, side)[None, :])


@dataclass(frozen=True)
class ObservationConfig:
    """How the observed difference is sampled and interpolated.

    stride_p = p gives observation spacing h = 2^p dx; 2^p must divide n.
    spectral_cutoff, when set, truncates the observed spectrum to
    max(|kx|, |ky|) <= cutoff after the forward transform.
    """

    subdomain: SubdomainSpec
    stride_p: int = 0
    interpolant: str = "nodal_smooth"
    spectral_cutoff: int | None = None

    def __post_init__(self):
        if self.stride_p < 0:
            raise ValueError(f"stride_p must be >= 0, got {self.stride_p}")
        if self.interpolant not in _INTERPOLANTS:
            raise ValueError(
                f"unknown interpolant {self.interpolant!r}; expected {_INTERPOLANTS}"
            )
        if self.spectral_cutoff is not None and self.spectral_cutoff < 0:
            raise ValueError("spectral_cutoff must be >= 0")


def _check_stride(n: int, p: int):
    if p < 0 or (n % (1 << p)) != 0:
        raise ValueError(f"stride 2^{p} does not divide n = {n}")


@dataclass(frozen=True)
class CoarseLattice:
    """Values on every 2^p-th node of a grid."""

    grid: Grid
    p: int
    values: np.ndarray

    def __post_init__(self):
        m = self.grid.n >> self.p
        if self.values.shape != (m, m):
            raise ValueError(
                f"coarse lattice shape {self.values.shape} does not match "
                f"n/2^p = {m} for n = {self.grid.n}, p = {self.p}"
            )


def subsample(field: PhysicalField, p: int) -> CoarseLattice:
    """Keep every 2^p-th node per axis (stride-aligned with node 0)."""
    _check_stride(field.grid.n, p)
    s = 1 << p
    return CoarseLattice(field.grid, p, field.values[::s, ::s].copy())


def smoother_kp(coarse: CoarseLattice, p: int) -> PhysicalField:
    """Recursive midpoint refinement K_p back to the full grid.

    Each of the p steps halves the lattice spacing: new edge nodes get the
    mean of their two endpoints, new cell centers the mean of the four
    corners, existing nodes are unchanged; all with periodic wraparound.
    Constants are preserved exactly.
    """
    if p != coarse.p:
        raise ValueError(f"smoother order {p} does not match lattice stride 2^{coarse.p}")
    v = coarse.values
    for _ in range(p):
        m = v.shape[0]
        out = np.empty((2 * m, 2 * m), dtype=np.float64)
        right = np.roll(v, -1, axis=0)
        up = np.roll(v, -1, axis=1)
        upright = np.roll(right, -1, axis=1)
        out[0::2, 0::2] = v
        out[1::2, 0::2] = 0.5 * (v + right)
        out[0::2, 1::2] = 0.5 * (v + up)
        out[1::2, 1::2] = 0.25 * (v + right + up + upright)
        v = out
    return PhysicalField(coarse.grid, v)


def _cell_reduce(values: np.ndarray, s: int) -> np.ndarray:
    m = values.shape[0] // s
    return values.reshape(m, s, m, s)


def volume_average_interpolant(field: PhysicalField, p: int, mask: Mask) -> PhysicalField:
    """Piecewise-constant cell means of chi_Omega * f, masked to Omega.

    The box is split into squares of side h = 2^p dx; inside each square
    the output is the mean of field * chi_Omega over the full square
    (|S_i| normalization), and the output is zero outside Omega.
    """
    _check_stride(field.grid.n, p)
    s = 1 << p
    fm = field.values * mask.bits
    means = _cell_reduce(fm, s).mean(axis=(1, 3))
    filled = np.repeat(np.repeat(means, s, axis=0), s, axis=1)
    return PhysicalField(field.grid, filled * mask.bits)


def nodal_interpolant(field: PhysicalField, p: int, mask: Mask) -> PhysicalField:
    """Piecewise-constant fill with the value at each cell's center node.

    Cell [m h, (m+1) h) has its center at node m 2^p + 2^{p-1} (the node
    itself for p = 0); the sampled value is chi_Omega(x_i) f(x_i) and the
    output is masked to S_i intersect Omega.
    """
    _check_stride(field.grid.n, p)
    s = 1 << p
    off = s // 2
    centers = (field.values * mask.bits)[off::s, off::s]
    filled = np.repeat(np.repeat(centers, s, axis=0), s, axis=1)
    return PhysicalField(field.grid, filled * mask.bits)


def spectral_project(field: SpectralField, cutoff: int) -> SpectralField:
    """Zero all modes with max(|kx|, |ky|) > cutoff. Idempotent."""
    g = field.grid
    keep = (np.abs(g.kx) <= cutoff) & (np.abs(g.ky) <= cutoff)
    return SpectralField(g, field.coeffs * keep)


def observe(diff: SpectralField, config: ObservationConfig, t: float = 0.0) -> SpectralField:
    """Apply the observation operator J to a difference spectrum at time t.

    Linear in the input; with the full-domain mask, p = 0 and no cutoff it
    is the identity up to transform round-off.
    """
    grid = diff.grid
    _check_stride(grid.n, config.stride_p)
    mask = mask_at(config.subdomain, grid, t)
    phys = PhysicalField(grid, _inverse_raw(diff.coeffs))
    if config.interpolant == "nodal_smooth":
        smooth = smoother_kp(subsample(phys, config.stride_p), config.stride_p)
        masked = smooth.values * mask.bits
    else:
        masked = volume_average_interpolant(phys, config.stride_p, mask).values
    out = SpectralField(grid, _forward_raw(masked))
    if config.spectral_cutoff is not None:
        out = spectral_project(out, config.spectral_cutoff)
    return out
