"""Spectral core for the periodic box Omega_0 = [0, 2pi]^2.

Conventions, fixed once and relied on everywhere else:

* Physical fields are real n x n arrays with ``values[i, j] = f(x_i, y_j)``,
  x along axis 0, y along axis 1, nodes x_i = i * dx, dx = 2pi / n.
* Spectral fields store the full complex spectrum in numpy FFT ordering.
  ``forward`` divides by n^2, so coefficients are Fourier-series amplitudes:
  f(x) = sum_k coeff_k exp(i k.x), and coeff(0,0) is the mean of f.
* Parseval with these weights: l2_norm(f) = L * sqrt(sum |coeff|^2), L = 2pi.
* Dealiasing is the 2/3 rule on the square: coefficients with
  max(|kx|, |ky|) >= n/3 are zeroed.
* On the zero-mean torus the smallest Stokes eigenvalue is LAMBDA1 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMaskError, HermitianSymmetryError, NonZeroMeanError

__all__ = [
    "BOX_LENGTH",
    "LAMBDA1",
    "Grid",
    "PhysicalField",
    "SpectralField",
    "dealias",
    "forward",
    "hermitian_defect",
    "inverse",
    "l2_norm",
    "linf_norm",
    "masked_l2_norm",
    "nonlinear_term",
    "project_zero_mean",
    "solve_poisson",
    "spectral_l2_norm",
    "velocity_from_vorticity",
]

BOX_LENGTH = 2.0 * np.pi
LAMBDA1 = 1.0

_SYMMETRY_RTOL = 1e-12
_MEAN_TOL = 1e-14


@dataclass(frozen=True)
class Grid:
    """Uniform n x n grid on [0, 2pi]^2 with precomputed wavenumber arrays.

    n must be a power of two, n >= 8, so that dx * n reproduces the box
    length exactly and every subsampling stride 2^p divides n.
    """

    n: int

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)):
            raise ValueError(f"grid size must be an integer, got {n!r}")
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"grid size must be a power of two >= 8, got {n}")
        k1 = np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)
        kx = k1[:, None]
        ky = k1[None, :]
        k2 = (kx * kx + ky * ky).astype(np.float64)
        inv_k2 = np.zeros_like(k2)
        inv_k2[k2 > 0] = 1.0 / k2[k2 > 0]
        cutoff = n / 3.0
        object.__setattr__(self, "dx", BOX_LENGTH / n)
        object.__setattr__(self, "x", np.arange(n) * (BOX_LENGTH / n))
        object.__setattr__(self, "k1", k1)
        object.__setattr__(self, "kx", kx)
        object.__setattr__(self, "ky", ky)
        object.__setattr__(self, "k2", k2)
        object.__setattr__(self, "inv_k2", inv_k2)
        object.__setattr__(
            self,
            "dealias_mask",
            (np.abs(kx) < cutoff) & (np.abs(ky) < cutoff),
        )

    def __eq__(self, other):
        return isinstance(other, Grid) and other.n == self.n

    def __hash__(self):
        return hash(("Grid", self.n))

    @property
    def shape(self) -> tuple:
        return (self.n, self.n)


def _check_shape(grid: Grid, arr: np.ndarray, what: str):
    if arr.shape != grid.shape:
        raise ValueError(f"{what} shape {arr.shape} does not match grid {grid.shape}")


@dataclass(frozen=True)
class PhysicalField:
    """Real nodal values on a Grid. Values must be finite."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        _check_shape(self.grid, self.values, "physical field")
        if not np.isfinite(self.values).all():
            raise ValueError("physical field contains non-finite values")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))


@dataclass(frozen=True)
class SpectralField:
    """Full complex spectrum on a Grid, numpy FFT mode ordering."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        _check_shape(self.grid, self.coeffs, "spectral field")
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=np.complex128))

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())


# raw-array kernels; the public ops wrap these with validation


def _forward_raw(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    return np.fft.fft2(values) / (n * n)


def _inverse_raw(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[0]
    return np.fft.ifft2(coeffs).real * (n * n)


def _conj_reflect(coeffs: np.ndarray) -> np.ndarray:
    """conj(coeff(-k)) on the periodic index lattice."""
    return np.conj(np.roll(coeffs[::-1, ::-1], shift=1, axis=(0, 1)))


def hermitian_defect(field: SpectralField) -> float:
    """Max |coeff(k) - conj(coeff(-k))| relative to the largest coefficient."""
    c = field.coeffs
    scale = np.abs(c).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(c - _conj_reflect(c)).max() / scale)


def forward(field: PhysicalField) -> SpectralField:
    """Transform nodal values to Fourier coefficients (amplitude normalized)."""
    return SpectralField(field.grid, _forward_raw(field.values))


def inverse(field: SpectralField) -> PhysicalField:
    """Transform coefficients back to nodal values.

    The spectrum must be conjugate-symmetric (a real field) to relative
    tolerance 1e-12; the residual imaginary part is discarded.
    """
    defect = hermitian_defect(field)
    if defect > _SYMMETRY_RTOL:
        raise HermitianSymmetryError(
            f"spectrum is not conjugate-symmetric: relative defect {defect:.3e}"
        )
    return PhysicalField(field.grid, _inverse_raw(field.coeffs))


def project_zero_mean(field: SpectralField) -> SpectralField:
    """Return the field with coeff(0,0) set to zero."""
    c = field.coeffs.copy()
    c[0, 0] = 0.0
    return SpectralField(field.grid, c)


def dealias(field: SpectralField) -> SpectralField:
    """2/3-rule truncation: zero all modes with max(|kx|, |ky|) >= n/3."""
    return SpectralField(field.grid, field.coeffs * field.grid.dealias_mask)


def _require_zero_mean(coeffs: np.ndarray):
    scale = max(1.0, float(np.abs(coeffs).max()))
    if abs(coeffs[0, 0]) > _MEAN_TOL * scale:
        raise NonZeroMeanError(
            f"field has nonzero mean {coeffs[0, 0]:.3e}; "
            "Poisson inversion needs a zero-mean source"
        )


def solve_poisson(omega: SpectralField) -> SpectralField:
    """Streamfunction of a vorticity field: psi_hat = omega_hat / |k|^2.

    The k = 0 mode of psi is fixed to zero (zero-mean gauge); the source
    must be zero-mean.
    """
    _require_zero_mean(omega.coeffs)
    psi = omega.coeffs * omega.grid.inv_k2
    psi[0, 0] = 0.0
    return SpectralField(omega.grid, psi)


def velocity_from_vorticity(omega: SpectralField) -> tuple:
    """(u, v) spectra with u = d(psi)/dy, v = -d(psi)/dx.

    Divergence-free by construction: k . u_hat = 0 mode by mode.
    """
    psi = solve_poisson(omega).coeffs
    g = omega.grid
    u = 1j * g.ky * psi
    v = -1j * g.kx * psi
    return SpectralField(g, u), SpectralField(g, v)


def _nonlinear_raw(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Dealiased spectrum of u . grad(omega) from a vorticity spectrum."""
    n = grid.n
    c = coeffs * grid.dealias_mask
    psi = c * grid.inv_k2
    batch = np.stack(
        [
            1j * grid.ky * psi,  # u
            -1j * grid.kx * psi,  # v
            1j * grid.kx * c,  # d(omega)/dx
            1j * grid.ky * c,  # d(omega)/dy
        ]
    )
    u, v, wx, wy = np.fft.ifft2(batch, axes=(-2, -1)).real * (n * n)
    adv = u * wx + v * wy
    out = _forward_raw(adv) * grid.dealias_mask
    out[0, 0] = 0.0
    return out


def nonlinear_term(omega: SpectralField) -> SpectralField:
    """Advection term u . grad(omega), dealiased.

    Inputs are truncated by the 2/3 rule before moving to physical space,
    so retained modes equal the exact convolution of the truncated spectra.
    """
    _require_zero_mean(omega.coeffs)
    return SpectralField(omega.grid, _nonlinear_raw(omega.coeffs, omega.grid))


def l2_norm(field: PhysicalField) -> float:
    """Discrete L2 norm over the box: sqrt(sum values^2 * dx^2)."""
    return float(np.sqrt(np.sum(field.values**2)) * field.grid.dx)


def linf_norm(field: PhysicalField) -> float:
    return float(np.abs(field.values).max())


def masked_l2_norm(field: PhysicalField, mask_bits: np.ndarray) -> float:
    """L2 norm restricted to the nodes where mask_bits is set."""
    _check_shape(field.grid, mask_bits, "mask")
    if not mask_bits.any():
        raise DegenerateMaskError("mask selects no nodes")
    return float(np.sqrt(np.sum(field.values[mask_bits] ** 2)) * field.grid.dx)


def spectral_l2_norm(field: SpectralField) -> float:
    """Parseval partner of l2_norm: L * sqrt(sum |coeff|^2)."""
    return float(BOX_LENGTH * np.sqrt(np.sum(np.abs(field.coeffs) ** 2)))
