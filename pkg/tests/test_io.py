"""Tests for the on-disk formats: NFLD, NCKP, PBM, CSV, manifests.

Round trips must be bit-exact; the resume test checks that a run split by
a checkpoint reproduces an unbroken run exactly, which is what makes the
determinism guarantees of the experiment harness possible.
"""

import hashlib
import io
import struct
from types import SimpleNamespace

import numpy as np
import pytest

from torusda import (
    ErrorSample,
    ForcingSpec,
    Grid,
    SolverConfig,
    SpectralField,
    build_forcing,
    load_checkpoint,
    mask_from_bits,
    read_nfld,
    save_checkpoint,
    sha256_file,
    step,
    write_nfld,
    write_pbm,
    zero_state,
)
from torusda.errors import FormatError
from torusda.io import (
    DIAG_HEADER,
    ERROR_HEADER_PREFIX,
    ExperimentManifest,
    error_header,
    read_error_series_csv,
    read_pbm,
    write_diag_row,
    write_error_row,
    write_manifest,
)

from oracles import random_dealiased_spectrum


def small_config(n=16, nu=1e-2, dt=0.01, seed=3):
    spec = ForcingSpec(grashof=500.0, nu=nu, seed=seed, band_lo=2, band_hi=3)
    return SolverConfig(grid=Grid(n), nu=nu, dt=dt, forcing=spec)


def stepped_state(config, steps, forcing=None):
    forcing = forcing if forcing is not None else build_forcing(config.forcing, config.grid)
    state = zero_state(config.grid)
    state.omega = SpectralField(config.grid, random_dealiased_spectrum(config.grid.n, seed=9))
    for _ in range(steps):
        state = step(state, config, forcing)
    return state


class TestNfld:
    def test_round_trip_bit_exact(self, tmp_path):
        values = np.random.default_rng(0).standard_normal((16, 16))
        path = tmp_path / "field.nfld"
        write_nfld(path, values)
        assert np.array_equal(read_nfld(path), values)

    def test_header_layout(self, tmp_path):
        values = np.zeros((8, 8))
        path = tmp_path / "field.nfld"
        write_nfld(path, values)
        raw = path.read_bytes()
        assert raw[:16] == struct.pack("<4sIII", b"NFLD", 8, 0, 0)
        assert len(raw) == 16 + 8 * 8 * 8

    def test_values_start_at_offset_16(self, tmp_path):
        values = np.arange(4.0).reshape(2, 2)
        path = tmp_path / "field.nfld"
        write_nfld(path, values)
        raw = path.read_bytes()
        assert np.frombuffer(raw[16:], dtype="<f8").tolist() == [0.0, 1.0, 2.0, 3.0]

    def test_non_square_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="square"):
            write_nfld(tmp_path / "x.nfld", np.zeros((4, 8)))

    def test_truncated_header_rejected(self, tmp_path):
        path = tmp_path / "short.nfld"
        path.write_bytes(b"NFLD\x01")
        with pytest.raises(FormatError, match="truncated"):
            read_nfld(path)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.nfld"
        path.write_bytes(struct.pack("<4sIII", b"XXXX", 8, 0, 0) + b"\0" * 512)
        with pytest.raises(FormatError, match="bad magic"):
            read_nfld(path)

    def test_size_mismatch_rejected(self, tmp_path):
        path = tmp_path / "short_body.nfld"
        path.write_bytes(struct.pack("<4sIII", b"NFLD", 8, 0, 0) + b"\0" * 64)
        with pytest.raises(FormatError, match="expected 64 values"):
            read_nfld(path)


class TestCheckpoint:
    @pytest.mark.parametrize("steps", [0, 1, 2, 7])
    def test_round_trip_state(self, tmp_path, steps):
        config = small_config()
        state = stepped_state(config, steps)
        path = tmp_path / "run.nckp"
        save_checkpoint(path, state, config.nu, config.dt, seed=12345)
        loaded, header = load_checkpoint(path)
        assert np.array_equal(loaded.omega.coeffs, state.omega.coeffs)
        assert len(loaded.history) == len(state.history) == min(steps, 2)
        for got, expect in zip(loaded.history, state.history):
            assert np.array_equal(got, expect)
        assert loaded.time == state.time
        assert loaded.step_count == state.step_count == steps
        assert header == {
            "n": 16,
            "step": steps,
            "time": state.time,
            "nu": config.nu,
            "dt": config.dt,
            "seed": 12345,
        }

    def test_resume_matches_unbroken_run(self, tmp_path):
        # 7 steps, checkpoint, 5 more must equal 12 straight steps bitwise.
        config = small_config()
        forcing = build_forcing(config.forcing, config.grid)
        state = stepped_state(config, 7, forcing)
        path = tmp_path / "mid.nckp"
        save_checkpoint(path, state, config.nu, config.dt, seed=0)
        resumed, _ = load_checkpoint(path)
        for _ in range(5):
            resumed = step(resumed, config, forcing)
        straight = stepped_state(config, 12, forcing)
        assert np.array_equal(resumed.omega.coeffs, straight.omega.coeffs)
        assert resumed.time == straight.time
        assert resumed.step_count == straight.step_count

    def test_truncated_header_rejected(self, tmp_path):
        path = tmp_path / "short.nckp"
        path.write_bytes(b"NCKP")
        with pytest.raises(FormatError, match="truncated NCKP header"):
            load_checkpoint(path)

    def test_bad_magic_rejected(self, tmp_path):
        config = small_config()
        path = tmp_path / "bad.nckp"
        save_checkpoint(path, stepped_state(config, 1), config.nu, config.dt, seed=0)
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(bytes(raw))
        with pytest.raises(FormatError, match="bad magic"):
            load_checkpoint(path)

    def test_unsupported_version_rejected(self, tmp_path):
        config = small_config()
        path = tmp_path / "v9.nckp"
        save_checkpoint(path, stepped_state(config, 1), config.nu, config.dt, seed=0)
        raw = bytearray(path.read_bytes())
        raw[4:8] = struct.pack("<I", 9)
        path.write_bytes(bytes(raw))
        with pytest.raises(FormatError, match="version"):
            load_checkpoint(path)

    def test_truncated_spectrum_rejected(self, tmp_path):
        config = small_config()
        path = tmp_path / "cut.nckp"
        save_checkpoint(path, stepped_state(config, 1), config.nu, config.dt, seed=0)
        raw = path.read_bytes()
        path.write_bytes(raw[:-8])
        with pytest.raises(FormatError, match="truncated spectrum"):
            load_checkpoint(path)


class TestPbm:
    def test_golden_layout(self, tmp_path):
        # Rows are written y-descending: the first data row is j = n-1.
        grid = Grid(8)
        bits = np.zeros((8, 8), dtype=bool)
        bits[:2, 4:] = True
        path = tmp_path / "mask.pbm"
        write_pbm(path, mask_from_bits(grid, bits))
        lines = path.read_bytes().decode().splitlines()
        assert lines[0] == "P1"
        assert lines[1] == "8 8"
        assert lines[2] == "1 1 0 0 0 0 0 0"  # j = 7
        assert lines[5] == "1 1 0 0 0 0 0 0"  # j = 4
        assert lines[6] == "0 0 0 0 0 0 0 0"  # j = 3
        assert len(lines) == 10

    def test_round_trip(self, tmp_path):
        grid = Grid(16)
        bits = np.random.default_rng(4).random((16, 16)) < 0.5
        bits[0, 0] = True
        path = tmp_path / "mask.pbm"
        write_pbm(path, mask_from_bits(grid, bits))
        assert np.array_equal(read_pbm(path), bits)

    def test_rejects_other_formats(self, tmp_path):
        path = tmp_path / "gray.pgm"
        path.write_bytes(b"P2\n2 2\n255\n0 0 0 0\n")
        with pytest.raises(FormatError, match="not a plain PBM"):
            read_pbm(path)


class TestCsv:
    def test_diag_row_uses_repr_floats(self):
        rec = SimpleNamespace(energy=0.1, enstrophy=1.0 / 3.0, palinstrophy=2.0, gevrey=1e-17)
        buf = io.StringIO()
        write_diag_row(buf, 0.30000000000000004, rec)
        assert buf.getvalue() == "0.30000000000000004,0.1,0.3333333333333333,2.0,1e-17\n"

    def test_error_row_includes_regions(self):
        row = ErrorSample(1.5, 0.25, 0.5, (0.125, 0.0625))
        buf = io.StringIO()
        write_error_row(buf, row)
        assert buf.getvalue() == "1.5,0.25,0.5,0.125,0.0625\n"

    def test_error_header_shapes(self):
        assert error_header(0) == "t,rel_l2,rel_linf"
        assert error_header(2) == "t,rel_l2,rel_linf,rel_l2_region_0,rel_l2_region_1"
        assert DIAG_HEADER == "t,energy,enstrophy,palinstrophy,gevrey"

    def test_error_series_round_trip_exact(self, tmp_path):
        path = tmp_path / "errors.csv"
        rows = [
            ErrorSample(0.0, 1.0, 1.0, (0.1,)),
            ErrorSample(0.1, 1.0 / 3.0, 1e-300, (0.30000000000000004,)),
        ]
        with open(path, "w", encoding="ascii") as fh:
            fh.write(error_header(1) + "\n")
            for row in rows:
                write_error_row(fh, row)
        parsed = read_error_series_csv(path)
        for row, got in zip(rows, parsed):
            assert got == (row.t, row.rel_l2, row.rel_linf) + row.rel_l2_regions

    def test_error_series_header_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("time,value\n0,1\n")
        with pytest.raises(FormatError, match="unexpected header"):
            read_error_series_csv(path)


class TestSha256:
    def test_known_answer_empty_file(self, tmp_path):
        path = tmp_path / "empty"
        path.write_bytes(b"")
        assert (
            sha256_file(path)
            == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        )

    def test_chunked_read_matches_whole_digest(self, tmp_path):
        data = np.random.default_rng(1).bytes(2 * (1 << 20) + 3)
        path = tmp_path / "big"
        path.write_bytes(data)
        assert sha256_file(path) == hashlib.sha256(data).hexdigest()


class TestManifest:
    def test_layout(self, tmp_path):
        manifest = ExperimentManifest(
            command="spinup",
            version="0.1.0",
            seed=42,
            config_text="grid.n = 16\nsolver.nu = 0.01\n",
            started="2026-01-01T00:00:00",
            finished="2026-01-01T00:05:00",
            files=[("diag.csv", "a" * 64), ("checkpoint.nckp", "b" * 64)],
        )
        path = tmp_path / "manifest.txt"
        write_manifest(path, manifest)
        lines = path.read_text().splitlines()
        assert lines[0] == "command = spinup"
        assert lines[1] == "version = 0.1.0"
        assert lines[2] == "seed = 42"
        assert lines[3] == "started = 2026-01-01T00:00:00"
        assert lines[4] == "finished = 2026-01-01T00:05:00"
        assert lines[5] == "[config]"
        assert lines[6] == "  grid.n = 16"
        assert lines[7] == "  solver.nu = 0.01"
        assert lines[8] == "[files]"
        assert lines[9] == f"  {'a' * 64}  diag.csv"
        assert lines[10] == f"  {'b' * 64}  checkpoint.nckp"
