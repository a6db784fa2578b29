"""Nudging-based continuous data assimilation and twin experiments.

The assimilated copy evolves under the reference dynamics plus the feedback
term -mu * J(omega_tilde - omega), where J is the local observation
operator. Twin experiments advance reference and assimilated states in
lockstep from a shared clock and record relative errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BlowUpError,
    DegenerateReferenceError,
    ParameterOverflowError,
    SaturatedSeriesError,
    StateMismatchError,
)
from .observe import Mask, ObservationConfig, mask_at, observe
from .solver import SolverConfig, SolverState, build_forcing, rhs_explicit, zero_state, _advance
from .spectral import LAMBDA1, SpectralField, _inverse_raw

__all__ = [
    "AdvisedParameters",
    "ErrorSample",
    "ErrorSeries",
    "NudgingParams",
    "TwinExperiment",
    "advise_parameters",
    "error_metrics",
    "fit_rate",
    "nudged_step",
    "run_twin",
]


@dataclass(frozen=True)
class NudgingParams:
    """Feedback gain and the observation operator it acts through."""

    mu: float
    observation: ObservationConfig

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"nudging gain must be >= 0, got {self.mu}")


@dataclass(frozen=True)
class TwinExperiment:
    """A reference run shadowed by an assimilated copy started from zero."""

    config: SolverConfig
    reference: SolverState
    nudging: NudgingParams
    horizon: float
    sample_interval: float = 0.5


@dataclass(frozen=True)
class ErrorSample:
    t: float
    rel_l2: float
    rel_linf: float
    rel_l2_regions: tuple = ()


@dataclass
class ErrorSeries:
    """Relative-error rows sampled over an assimilation run."""

    rows: list = field(default_factory=list)
    region_count: int = 0

    def append(self, row: ErrorSample):
        self.rows.append(row)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.rows])

    @property
    def rel_l2(self) -> np.ndarray:
        return np.array([r.rel_l2 for r in self.rows])

    def first_time_below(self, threshold: float) -> float | None:
        for r in self.rows:
            if r.rel_l2 < threshold:
                return r.t
        return None


def _check_lockstep(ref: SolverState, assim: SolverState):
    if ref.omega.grid != assim.omega.grid:
        raise StateMismatchError(
            f"grid mismatch: reference n = {ref.omega.grid.n}, "
            f"assimilated n = {assim.omega.grid.n}"
        )
    if ref.time != assim.time:
        raise StateMismatchError(
            f"clock mismatch: reference t = {ref.time!r}, assimilated t = {assim.time!r}"
        )


def nudged_step(
    ref: SolverState,
    assim: SolverState,
    params: NudgingParams,
    config: SolverConfig,
    forcing: SpectralField,
) -> tuple:
    """Advance both states one dt; the assimilated one feels the nudge.

    The feedback -mu J(omega_tilde - omega) is evaluated with both fields
    at the step's start time and enters the explicit right-hand side, so
    mu = 0 reproduces the unnudged scheme bit for bit. Like every other
    right-hand-side term, the feedback is projected onto the solver's
    Galerkin space (the dealiased band), so the evolved states never
    acquire modes the advection cannot see.
    """
    _check_lockstep(ref, assim)
    grid = ref.omega.grid
    rhs_ref = rhs_explicit(ref, forcing)
    rhs_assim = rhs_explicit(assim, forcing)
    if params.mu != 0.0:
        diff = SpectralField(grid, assim.omega.coeffs - ref.omega.coeffs)
        nudge = observe(diff, params.observation, t=ref.time)
        rhs_assim = rhs_assim - params.mu * (nudge.coeffs * grid.dealias_mask)
    return _advance(ref, rhs_ref, config), _advance(assim, rhs_assim, config)


def error_metrics(
    ref: SpectralField, assim: SpectralField, region_masks: tuple = ()
) -> tuple:
    """(rel_l2, rel_linf, per-region rel_l2) between two vorticity spectra.

    Relative errors are nodal: global L2 and Linf over the box, and for
    each region the masked L2 of the difference over the masked L2 of the
    reference.
    """
    wr = _inverse_raw(ref.coeffs)
    wa = _inverse_raw(assim.coeffs)
    diff = wa - wr
    den = math.sqrt(float(np.sum(wr * wr)))
    if den == 0.0:
        raise DegenerateReferenceError("reference field is zero; relative error undefined")
    rel_l2 = math.sqrt(float(np.sum(diff * diff))) / den
    rel_linf = float(np.abs(diff).max()) / float(np.abs(wr).max())
    regions = []
    for m in region_masks:
        bits = m.bits if isinstance(m, Mask) else m
        dloc = math.sqrt(float(np.sum(diff[bits] ** 2)))
        rloc = math.sqrt(float(np.sum(wr[bits] ** 2)))
        if rloc == 0.0:
            raise DegenerateReferenceError("reference is zero on a requested region")
        regions.append(dloc / rloc)
    return rel_l2, rel_linf, tuple(regions)


def run_twin(
    exp: TwinExperiment,
    *,
    regions: tuple = (),
    error_sink=None,
    snapshot_times: tuple = (),
    snapshot_sink=None,
    mask_interval: float | None = None,
    mask_sink=None,
    stop_below: float | None = None,
) -> ErrorSeries:
    """Run the twin experiment and return the sampled error series.

    The assimilated state starts from zero vorticity on the reference's
    clock, so the t = 0 row has rel_l2 = 1 exactly. Times in the series are
    elapsed time since the start of assimilation. Optional sinks receive
    error rows, (t, ref, assim, diff) physical snapshots at the requested
    elapsed times, and subdomain masks every mask_interval. stop_below ends
    the run early once the sampled global rel_l2 drops under the threshold;
    partial output is flushed either way.
    """
    config = exp.config
    grid = config.grid
    dt = config.dt
    forcing = build_forcing(config.forcing, grid)
    ref = exp.reference
    assim = zero_state(grid)
    assim.time = ref.time
    t0 = ref.time
    n_steps = int(round(exp.horizon / dt))
    sample_every = max(1, int(round(exp.sample_interval / dt)))
    mask_every = max(1, int(round(mask_interval / dt))) if mask_interval else None
    snap_steps = {int(round(ts / dt)) for ts in snapshot_times}
    region_masks = tuple(mask_at(spec, grid, t0) for spec in regions)

    series = ErrorSeries(region_count=len(regions))

    def emit(elapsed: float):
        l2, linf, reg = error_metrics(ref.omega, assim.omega, region_masks)
        row = ErrorSample(elapsed, l2, linf, reg)
        series.append(row)
        if error_sink is not None:
            error_sink(row)
        return l2

    def snapshot(elapsed: float):
        wr = _inverse_raw(ref.omega.coeffs)
        wa = _inverse_raw(assim.omega.coeffs)
        snapshot_sink(elapsed, wr, wa, wa - wr)

    emit(0.0)
    if 0 in snap_steps and snapshot_sink is not None:
        snapshot(0.0)
    if mask_sink is not None and mask_every:
        mask_sink(0.0, mask_at(exp.nudging.observation.subdomain, grid, t0))
    for i in range(1, n_steps + 1):
        ref, assim = nudged_step(ref, assim, exp.nudging, config, forcing)
        if not (
            np.isfinite(assim.omega.coeffs).all() and np.isfinite(ref.omega.coeffs).all()
        ):
            raise BlowUpError(i, ref.time)
        elapsed = i * dt
        if i in snap_steps and snapshot_sink is not None:
            snapshot(elapsed)
        if mask_sink is not None and mask_every and i % mask_every == 0:
            mask_sink(elapsed, mask_at(exp.nudging.observation.subdomain, grid, ref.time))
        if i % sample_every == 0 or i == n_steps:
            l2 = emit(elapsed)
            if stop_below is not None and l2 < stop_below:
                break
    return series


def fit_rate(series: ErrorSeries, window: tuple) -> tuple:
    """Least-squares exponential rate on log(rel_l2) over a time window.

    Returns (lam, r_squared) with rel_l2 ~ C exp(-lam t). Requires at least
    8 samples in the window, all strictly positive; a constant series fits
    exactly with lam = 0.
    """
    t0, t1 = window
    pts = [(r.t, r.rel_l2) for r in series.rows if t0 <= r.t <= t1]
    if len(pts) < 8:
        raise SaturatedSeriesError(
            f"rate fit needs >= 8 samples in [{t0}, {t1}], found {len(pts)}"
        )
    t = np.array([p[0] for p in pts])
    e = np.array([p[1] for p in pts])
    if np.any(e <= 0.0):
        raise SaturatedSeriesError("window contains non-positive errors (series at floor)")
    y = np.log(e)
    slope, intercept = np.polyfit(t, y, 1)
    resid = y - (slope * t + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot <= 1e-24 * float(np.sum(y * y)):
        # constant up to round-off: the flat fit is perfect, but ss_tot is
        # not exactly zero because the mean of identical doubles rounds
        r2 = 1.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return float(-slope), float(r2)


@dataclass(frozen=True)
class AdvisedParameters:
    mu: float
    h_star: float
    sigma_star: float


def advise_parameters(
    nu: float,
    grashof: float,
    constants: tuple = (1.0, 1.0),
    n_modes: float = 0.0,
    epsilon: float = 1.0,
    c0: float = 1.0,
) -> AdvisedParameters:
    """Sufficient nudging parameters from the synchronization estimates.

    constants = (C, C_Omega) are the absolute constant of the decay
    estimate and the subdomain's spectral constant. Returns

        mu      = 2 C nu lambda1 G^2 C_Omega exp(C_Omega sqrt(N))
        h_star  = sqrt(nu / (4 C mu c0))
        sigma_star = C_Omega  (scale below which Gevrey tracking holds)

    N is the observed-band size that the caller selected for accuracy
    epsilon; epsilon itself does not enter the closed forms. Doubling G
    quadruples mu and halves h_star.
    """
    big_c, c_omega = constants
    for name, val in [
        ("nu", nu),
        ("grashof", grashof),
        ("C", big_c),
        ("C_Omega", c_omega),
        ("epsilon", epsilon),
        ("c0", c0),
    ]:
        if val <= 0:
            raise ValueError(f"{name} must be positive, got {val}")
    if n_modes < 0:
        raise ValueError(f"n_modes must be >= 0, got {n_modes}")
    exponent = c_omega * math.sqrt(n_modes)
    if exponent > 700.0:
        raise ParameterOverflowError(exponent)
    mu = 2.0 * big_c * nu * LAMBDA1 * grashof**2 * c_omega * math.exp(exponent)
    h_star = math.sqrt(nu / (4.0 * big_c * mu * c0))
    return AdvisedParameters(mu=mu, h_star=h_star, sigma_star=c_omega)
