"""Tests for forcing construction, time stepping, and diagnostics.

Closed forms used as oracles:
- a single-shell vorticity has zero advection, so with zero forcing each
  mode must decay exactly like exp(-nu |k|^2 t) (the integrating factor
  is exact, not approximate);
- a single-mode constant forcing drives the linear ODE
  c' = -nu k^2 c + F whose solution (F/nu k^2)(1 - exp(-nu k^2 t)) the
  scheme must track to its own order;
- omega = 2 sin x sin y has enstrophy 4 pi^2, energy pi^2, palinstrophy
  8 pi^2 under the box-integral definitions used throughout.
"""

import numpy as np
import pytest

from torusda import (
    DiagnosticsRecord,
    ForcingSpec,
    Grid,
    SolverConfig,
    SpectralField,
    build_forcing,
    diagnostics,
    forward,
    grashof,
    PhysicalField,
    spectral_l2_norm,
    spinup,
    step,
    zero_state,
)
from torusda.errors import BlowUpError, GevreyOverflowError
from torusda.solver import rhs_explicit

from oracles import advection_convolution, random_dealiased_spectrum

TWO_PI = 2.0 * np.pi


def single_mode_state(grid, kx, ky, amplitude=1.0):
    """Zero state with a conjugate pair at (+-kx, +-ky) (a real cosine)."""
    state = zero_state(grid)
    c = state.omega.coeffs
    c[kx, ky] = amplitude / 2.0
    c[-kx, -ky] = amplitude / 2.0
    return state


def quiet_config(grid, nu=1e-2, dt=0.01, grashof_number=0.0, seed=0, sigma=0.0):
    # Band 2..3 fits every grid used in these tests (the 10..12 default
    # needs n large enough that the annulus survives dealiasing).
    spec = ForcingSpec(grashof=grashof_number, nu=nu, seed=seed, band_lo=2, band_hi=3)
    return SolverConfig(grid=grid, nu=nu, dt=dt, forcing=spec, gevrey_sigma=sigma)


class TestForcing:
    """Band-limited forcing with exact Grashof normalization."""

    def test_norm_matches_grashof(self):
        grid = Grid(128)
        spec = ForcingSpec(grashof=1e6, nu=1e-4, seed=11)
        f = build_forcing(spec, grid)
        assert spectral_l2_norm(f) == pytest.approx(1e6 * 1e-8, rel=1e-13)
        assert grashof(f, 1e-4) == pytest.approx(1e6, rel=1e-13)

    def test_support_is_the_annulus(self):
        grid = Grid(128)
        f = build_forcing(ForcingSpec(grashof=1e5, nu=1e-3, seed=3), grid)
        k2 = grid.k2
        on = np.abs(f.coeffs) > 0
        assert np.all(k2[on] >= 100)
        assert np.all(k2[on] <= 144)
        # Independent lattice count of 100 <= kx^2 + ky^2 <= 144.
        count = sum(
            1
            for kx in range(-12, 13)
            for ky in range(-12, 13)
            if 100 <= kx * kx + ky * ky <= 144
        )
        assert count == 136
        assert int(on.sum()) == count

    def test_equal_amplitudes(self):
        grid = Grid(128)
        f = build_forcing(ForcingSpec(grashof=1e5, nu=1e-3, seed=3), grid)
        mags = np.abs(f.coeffs[np.abs(f.coeffs) > 0])
        assert np.max(mags) - np.min(mags) < 1e-18

    def test_real_and_zero_mean(self):
        grid = Grid(64)
        f = build_forcing(ForcingSpec(grashof=1e5, nu=1e-3, seed=9), grid)
        assert f.coeffs[0, 0] == 0.0
        c = f.coeffs
        mirrored = np.conj(np.roll(c[::-1, ::-1], 1, axis=(0, 1)))
        assert np.max(np.abs(c - mirrored)) < 1e-15

    def test_seed_determinism(self):
        grid = Grid(64)
        a = build_forcing(ForcingSpec(grashof=1e5, nu=1e-3, seed=5), grid)
        b = build_forcing(ForcingSpec(grashof=1e5, nu=1e-3, seed=5), grid)
        c = build_forcing(ForcingSpec(grashof=1e5, nu=1e-3, seed=6), grid)
        assert np.array_equal(a.coeffs, b.coeffs)
        assert not np.array_equal(a.coeffs, c.coeffs)

    def test_band_must_fit_grid(self):
        with pytest.raises(ValueError):
            SolverConfig(
                grid=Grid(16),
                nu=1e-3,
                dt=0.01,
                forcing=ForcingSpec(grashof=1e5, nu=1e-3, seed=0),
            )


class TestPureDecay:
    """Unforced single modes follow the heat kernel exactly."""

    def test_integrating_factor_is_exact(self):
        grid = Grid(16)
        config = quiet_config(grid, nu=5e-3, dt=0.02)
        state = single_mode_state(grid, 2, 3, amplitude=1.0)
        c0 = state.omega.coeffs.copy()
        f = build_forcing(config.forcing, grid)
        for _ in range(200):
            state = step(state, config, f)
        k2 = 2 * 2 + 3 * 3
        decay = np.exp(-5e-3 * k2 * 0.02 * 200)
        expect = c0 * decay
        err = np.abs(state.omega.coeffs - expect)
        assert np.max(err) / np.max(np.abs(expect)) < 1e-12

    def test_forced_single_mode_tracks_closed_form(self):
        # c' = -nu k^2 c + F with constant F: the scheme's error against the
        # closed form stays far below the mode magnitude for nu k^2 dt << 1.
        grid = Grid(16)
        nu, dt = 1e-3, 0.01
        config = quiet_config(grid, nu=nu, dt=dt)
        forcing = SpectralField(grid, np.zeros((16, 16), dtype=np.complex128))
        F = 0.25
        forcing.coeffs[1, 1] = F / 2.0
        forcing.coeffs[-1, -1] = F / 2.0
        state = zero_state(grid)
        steps = 500
        for _ in range(steps):
            state = step(state, config, forcing)
        k2 = 2.0
        t = steps * dt
        closed = (F / 2.0 / (nu * k2)) * (1.0 - np.exp(-nu * k2 * t))
        got = state.omega.coeffs[1, 1]
        assert got.imag == pytest.approx(0.0, abs=1e-15)
        # The dominant discretization error is the single first-order
        # startup step, of relative size ~ nu k^2 dt^2 / 2 ~ 1e-7.
        assert got.real == pytest.approx(closed, rel=1e-6)


class TestNonlinearTerm:
    """Dealiased pseudospectral product vs direct convolution."""

    def test_matches_convolution_on_random_field(self):
        grid = Grid(16)
        c = random_dealiased_spectrum(16, seed=100)
        state = zero_state(grid)
        state.omega = SpectralField(grid, c)
        zero_forcing = SpectralField(grid, np.zeros((16, 16), dtype=np.complex128))
        rhs = rhs_explicit(state, zero_forcing)
        expect = -advection_convolution(c)
        assert np.max(np.abs(rhs - expect)) < 1e-12


class TestStepBookkeeping:
    """History, clocks, and blow-up detection."""

    def test_history_grows_then_saturates(self):
        grid = Grid(16)
        config = quiet_config(grid)
        state = zero_state(grid)
        assert len(state.history) == 0
        state = step(state, config, build_forcing(config.forcing, grid))
        assert len(state.history) == 1
        state = step(state, config, build_forcing(config.forcing, grid))
        assert len(state.history) == 2
        state = step(state, config, build_forcing(config.forcing, grid))
        assert len(state.history) == 2
        assert state.step_count == 3
        assert state.time == pytest.approx(0.03)

    def test_mean_mode_stays_zero(self):
        grid = Grid(32)
        config = quiet_config(grid, grashof_number=1e4, nu=1e-2)
        state = zero_state(grid)
        f = build_forcing(config.forcing, grid)
        for _ in range(20):
            state = step(state, config, f)
        assert state.omega.coeffs[0, 0] == 0.0

    def test_high_modes_stay_dealiased(self):
        grid = Grid(32)
        config = quiet_config(grid, grashof_number=1e4, nu=1e-2)
        state = zero_state(grid)
        f = build_forcing(config.forcing, grid)
        for _ in range(10):
            state = step(state, config, f)
        outside = ~grid.dealias_mask
        assert np.max(np.abs(state.omega.coeffs[outside])) == 0.0

    def test_blow_up_raises_with_step_index(self):
        grid = Grid(16)
        config = quiet_config(grid)
        state = single_mode_state(grid, 1, 1, amplitude=1e308)
        f = build_forcing(config.forcing, grid)
        with pytest.raises(BlowUpError) as info:
            for _ in range(10):
                state = step(state, config, f)
                if not np.isfinite(state.omega.coeffs).all():
                    raise BlowUpError(state.step_count, state.time)
        assert info.value.step >= 1


class TestDiagnostics:
    """Box-integral diagnostics against hand-computed values."""

    def test_single_shell_values(self):
        grid = Grid(32)
        config = quiet_config(grid, sigma=0.0)
        state = zero_state(grid)
        xx = grid.x[:, None]
        yy = grid.x[None, :]
        w = forward(PhysicalField(grid, 2.0 * np.sin(xx) * np.sin(yy)))
        state.omega = w
        rec = diagnostics(state, config)
        assert isinstance(rec, DiagnosticsRecord)
        assert rec.enstrophy == pytest.approx(4.0 * np.pi**2, rel=1e-12)
        assert rec.energy == pytest.approx(np.pi**2, rel=1e-12)
        assert rec.palinstrophy == pytest.approx(8.0 * np.pi**2, rel=1e-12)
        # sigma = 0 reduces the weighted norm to the plain L2 norm.
        assert rec.gevrey == pytest.approx(TWO_PI, rel=1e-12)

    def test_gevrey_weight(self):
        grid = Grid(32)
        config = quiet_config(grid, sigma=0.5)
        state = zero_state(grid)
        xx = grid.x[:, None]
        yy = grid.x[None, :]
        state.omega = forward(PhysicalField(grid, 2.0 * np.sin(xx) * np.sin(yy)))
        rec = diagnostics(state, config)
        expect = TWO_PI * np.exp(0.5 * np.sqrt(2.0))
        assert rec.gevrey == pytest.approx(expect, rel=1e-12)

    def test_gevrey_overflow_signalled(self):
        grid = Grid(32)
        config = quiet_config(grid, sigma=1e5)
        state = single_mode_state(grid, 8, 0)
        with pytest.raises(GevreyOverflowError):
            diagnostics(state, config)


class TestSpinup:
    """Driver bookkeeping: cadence, checkpoints, determinism."""

    def test_row_cadence(self):
        grid = Grid(16)
        config = quiet_config(grid, dt=0.1)
        rows = []
        spinup(config, 1.0, sample_interval=0.5,
               diagnostics_sink=lambda t, r: rows.append(t))
        assert len(rows) == 3
        assert rows[0] == 0.0
        assert rows[1] == pytest.approx(0.5)
        assert rows[2] == pytest.approx(1.0)

    def test_zero_duration_emits_initial_row_only(self):
        grid = Grid(16)
        config = quiet_config(grid)
        rows = []
        final = spinup(config, 0.0, diagnostics_sink=lambda t, r: rows.append(t))
        assert rows == [0.0]
        assert final.step_count == 0
        assert np.all(final.omega.coeffs == 0)

    def test_checkpoint_cadence(self):
        grid = Grid(16)
        config = quiet_config(grid, dt=0.1)
        marks = []
        spinup(config, 1.0, checkpoint_interval=0.4,
               checkpoint_writer=lambda s: marks.append(s.step_count))
        assert marks == [4, 8, 10]

    def test_determinism(self):
        grid = Grid(32)
        config = quiet_config(grid, grashof_number=1e4, nu=1e-2)
        a = spinup(config, 0.5)
        b = spinup(config, 0.5)
        assert np.array_equal(a.omega.coeffs, b.omega.coeffs)

    def test_forced_run_reaches_nontrivial_state(self):
        grid = Grid(32)
        config = quiet_config(grid, grashof_number=1e4, nu=1e-2)
        state = spinup(config, 1.0)
        assert spectral_l2_norm(state.omega) > 0.0
        assert np.isfinite(state.omega.coeffs).all()
