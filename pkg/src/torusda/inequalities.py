"""Empirical checks of the spectral and interpolant inequalities.

Two families:

* thickness/spectral: for band-limited f, the energy ratio
  ||f||^2_{L2(box)} / ||f||^2_{L2(Omega)} stays finite on a thick set and
  its worst case grows with the band limit K; `fit_spectral_constant`
  estimates the growth by max over random samples per K (a lower bound on
  the true constant, which solves an eigenvalue problem per K).
* approximation: cell-interpolant error against h ||f||_H1 (volume means)
  or h^2 ||f||_H2 (nodal values), tabulated across strides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMaskError
from .observe import Mask, nodal_interpolant, volume_average_interpolant
from .spectral import (
    BOX_LENGTH,
    Grid,
    PhysicalField,
    SpectralField,
    _inverse_raw,
    masked_l2_norm,
)

__all__ = [
    "ApproxRow",
    "FitResult",
    "fit_spectral_constant",
    "sample_bandlimited",
    "sobolev_norm",
    "thickness_ratio",
    "verify_approx_inequality",
]

_RATIO_FLAG = 1e15


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of log(max ratio) against K."""

    slope: float
    intercept: float
    r_squared: float
    max_ratio_observed: float
    samples: int


def sample_bandlimited(K: int, seed, grid: Grid) -> SpectralField:
    """Random real field supported on 0 < max(|kx|, |ky|) <= K, unit L2 norm.

    Complex amplitudes are unit-variance Gaussian, conjugate-mirrored for
    realness; deterministic per seed (row-major order over the half band).
    """
    if K < 1:
        raise ValueError(f"band limit must be >= 1, got {K}")
    if K >= grid.n / 2:
        raise ValueError(f"band limit {K} does not fit on an n = {grid.n} grid")
    kx, ky = grid.kx, grid.ky
    band = (np.maximum(np.abs(kx), np.abs(ky)) <= K) & (grid.k2 > 0)
    half = band & ((ky > 0) | ((ky == 0) & (kx > 0)))
    m = int(half.sum())
    rng = np.random.default_rng(seed)
    amps = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
    c = np.zeros(grid.shape, dtype=np.complex128)
    c[half] = amps
    ix, iy = np.nonzero(half)
    c[(-ix) % grid.n, (-iy) % grid.n] = np.conj(amps)
    norm = BOX_LENGTH * np.sqrt(np.sum(np.abs(c) ** 2))
    return SpectralField(grid, c / norm)


def thickness_ratio(f: SpectralField, mask: Mask) -> float:
    """||f||^2 over the box divided by ||f||^2 over the masked nodes."""
    values = _inverse_raw(f.coeffs)
    total = float(np.sum(values**2))
    local = float(np.sum(values[mask.bits] ** 2))
    if local == 0.0:
        raise DegenerateMaskError("field carries no energy on the mask")
    ratio = total / local
    if ratio > _RATIO_FLAG:
        raise DegenerateMaskError(
            f"thickness ratio {ratio:.3e} exceeds {_RATIO_FLAG:.0e}; "
            "masked energy is at round-off level"
        )
    return ratio


def fit_spectral_constant(
    mask: Mask, k_list, samples_per_k: int, seed: int
) -> tuple:
    """Fit log(max thickness ratio) against K over random band-limited fields.

    Per-sample seeds derive from (seed, K, index), so runs are reproducible
    and samples at different K are independent. Returns (FitResult, table)
    where table rows are (K, max_ratio).
    """
    grid = mask.grid
    k_list = list(k_list)
    if len(k_list) < 2:
        raise ValueError("need at least two band limits to fit a slope")
    if samples_per_k < 1:
        raise ValueError("need at least one sample per band limit")
    table = []
    for K in k_list:
        best = 0.0
        for i in range(samples_per_k):
            f = sample_bandlimited(K, np.random.SeedSequence((seed, K, i)), grid)
            best = max(best, thickness_ratio(f, mask))
        table.append((int(K), best))
    k_arr = np.array([row[0] for row in table], dtype=float)
    logr = np.log(np.array([row[1] for row in table]))
    slope, intercept = np.polyfit(k_arr, logr, 1)
    resid = logr - (slope * k_arr + intercept)
    ss_tot = float(np.sum((logr - logr.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    fit = FitResult(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=float(r2),
        max_ratio_observed=float(max(row[1] for row in table)),
        samples=len(k_list) * samples_per_k,
    )
    return fit, table


def sobolev_norm(f: SpectralField, order: int) -> float:
    """H^s norm computed spectrally: L * sqrt(sum (1 + |k|^2)^s |c_k|^2)."""
    weight = (1.0 + f.grid.k2) ** order
    return float(BOX_LENGTH * np.sqrt(np.sum(weight * np.abs(f.coeffs) ** 2)))


@dataclass(frozen=True)
class ApproxRow:
    p: int
    h: float
    max_ratio: float


def verify_approx_inequality(
    kind: str,
    p_list,
    mask: Mask,
    seed: int,
    *,
    band_k: int = 8,
    ensemble: int = 20,
) -> tuple:
    """Tabulate interpolant-error ratios across strides on a random ensemble.

    kind = "volume": ratio = ||I_h f - f||_{L2(Omega)} / (h ||f||_H1)
    kind = "nodal":  ratio = ||I_h f - f||_{L2(Omega)} / (h^2 ||f||_H2)

    Returns (rows, c0_empirical) with one ApproxRow per p holding the max
    ratio over the ensemble; c0_empirical is the overall max.
    """
    if kind not in ("volume", "nodal"):
        raise ValueError(f"unknown inequality kind {kind!r}")
    grid = mask.grid
    fields = [
        sample_bandlimited(band_k, np.random.SeedSequence((seed, i)), grid)
        for i in range(ensemble)
    ]
    rows = []
    for p in p_list:
        h = (1 << p) * grid.dx
        worst = 0.0
        for f in fields:
            phys = PhysicalField(grid, _inverse_raw(f.coeffs))
            if kind == "volume":
                approx = volume_average_interpolant(phys, p, mask)
                denom = h * sobolev_norm(f, 1)
            else:
                approx = nodal_interpolant(phys, p, mask)
                denom = h * h * sobolev_norm(f, 2)
            err_field = PhysicalField(grid, approx.values - phys.values)
            err = masked_l2_norm(err_field, mask.bits)
            worst = max(worst, err / denom)
        rows.append(ApproxRow(p=int(p), h=float(h), max_ratio=float(worst)))
    return rows, max(r.max_ratio for r in rows)
