"""Command-line front end.

Subcommands: ``spinup`` (forced reference run from rest), ``assimilate``
(twin experiment continuing a checkpoint), ``verify`` (inequality suites),
``advise`` (parameter scalings), ``bench`` (step throughput). One command
is one process; a run is fully determined by its config file, and every
run directory ends with a ``manifest.txt`` inventory written last.

Exit codes: 0 ok, 2 config/input error, 3 numerical failure. Errors are
reported as a single ``error: <category>: <reason>`` line on stderr. The
``TORUSDA_OUT_DIR`` environment variable overrides ``--out``.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
import time
import zlib
from pathlib import Path

import numpy as np

from . import __version__
from . import io as tio
from .assimilate import NudgingParams, TwinExperiment, advise_parameters, run_twin
from .config import Config
from .errors import (
    BlowUpError,
    ConfigError,
    DegenerateMaskError,
    DegenerateReferenceError,
    FormatError,
    GevreyOverflowError,
    HermitianSymmetryError,
    NonZeroMeanError,
    ParameterOverflowError,
    SaturatedSeriesError,
    StateMismatchError,
)
from .inequalities import fit_spectral_constant, verify_approx_inequality
from .observe import ObservationConfig, SubdomainSpec, disk_mask, mask_at
from .solver import ForcingSpec, SolverConfig, spinup, zero_state, step, build_forcing
from .spectral import Grid

__all__ = ["main", "component_seed"]

OUT_DIR_ENV = "TORUSDA_OUT_DIR"

_CONFIG_EXC = (ConfigError, FormatError, StateMismatchError, FileNotFoundError, ValueError)
_NUMERICAL_EXC = (
    BlowUpError,
    GevreyOverflowError,
    ParameterOverflowError,
    SaturatedSeriesError,
    DegenerateMaskError,
    DegenerateReferenceError,
    NonZeroMeanError,
    HermitianSymmetryError,
    FloatingPointError,
    OverflowError,
)


def component_seed(master: int, component: str) -> int:
    """Stable per-component seed derived from the single master seed."""
    tag = zlib.crc32(component.encode("ascii"))
    ss = np.random.SeedSequence([int(master), tag])
    return int(ss.generate_state(1, np.uint64)[0])


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _fmt_time(t: float) -> str:
    text = f"{t:.6f}".rstrip("0").rstrip(".")
    return text if text else "0"


def _resolve_out(args) -> Path:
    out = os.environ.get(OUT_DIR_ENV) or getattr(args, "out", None)
    if not out:
        raise ConfigError(
            f"no output directory: pass --out or set {OUT_DIR_ENV}"
        )
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _finish_manifest(out: Path, command: str, seed: int, config_text: str,
                     started: str, files: list) -> None:
    inventory = [(rel, tio.sha256_file(out / rel)) for rel in sorted(files)]
    manifest = tio.ExperimentManifest(
        command=command,
        version=__version__,
        seed=seed,
        config_text=config_text,
        started=started,
        finished=_now(),
        files=inventory,
    )
    tio.write_manifest(out / "manifest.txt", manifest)


def _solver_config(cfg: Config) -> tuple:
    """Shared solver/forcing block: returns (SolverConfig, master_seed)."""
    grid = Grid(cfg.get_int("grid.n"))
    nu = cfg.get_float("solver.nu")
    dt = cfg.get_float("solver.dt")
    sigma = cfg.get_float("solver.gevrey_sigma", 0.0)
    master = cfg.get_int("seed.master")
    forcing = ForcingSpec(
        grashof=cfg.get_float("forcing.grashof"),
        nu=nu,
        seed=component_seed(master, "forcing"),
        band_lo=cfg.get_int("forcing.band_lo", 10),
        band_hi=cfg.get_int("forcing.band_hi", 12),
    )
    return SolverConfig(grid=grid, nu=nu, dt=dt, forcing=forcing,
                        gevrey_sigma=sigma), master


def _subdomain(cfg: Config) -> SubdomainSpec:
    kind = cfg.get_str("observe.kind")
    side = cfg.get_float("observe.side_fraction", 1.0)
    center = (
        cfg.get_float("observe.center_x", math.pi),
        cfg.get_float("observe.center_y", math.pi),
    )
    period = cfg.get_float("observe.period", 1.0)
    if kind == "static" and "observe.side_fraction" not in cfg:
        raise ConfigError(
            f"{cfg.source}: missing required key 'observe.side_fraction'"
            " (static subdomains need a size)"
        )
    return SubdomainSpec(kind=kind, side_fraction=side, center=center, period=period)


def cmd_spinup(args) -> int:
    cfg = Config.from_file(args.config)
    out = _resolve_out(args)
    started = _now()
    config, master = _solver_config(cfg)
    duration = cfg.get_float("solver.duration")
    sample_interval = cfg.get_float("output.sample_interval", 1.0)
    ck_interval = cfg.get_float("output.checkpoint_interval", 0.0) or None
    cfg.check_fully_used()

    ck_path = out / "checkpoint.nckp"
    fseed = config.forcing.seed

    def write_ck(state):
        tio.save_checkpoint(ck_path, state, nu=config.nu, dt=config.dt, seed=fseed)

    with open(out / "diag.csv", "w", encoding="ascii", newline="") as fh:
        fh.write(tio.DIAG_HEADER + "\n")
        final = spinup(
            config,
            duration,
            sample_interval=sample_interval,
            diagnostics_sink=lambda t, rec: tio.write_diag_row(fh, t, rec),
            checkpoint_interval=ck_interval,
            checkpoint_writer=write_ck if ck_interval else None,
        )
    write_ck(final)
    _finish_manifest(out, "spinup", master, cfg.text, started,
                     ["diag.csv", "checkpoint.nckp"])
    return 0


def cmd_assimilate(args) -> int:
    cfg = Config.from_file(args.config)
    out = _resolve_out(args)
    started = _now()
    config, master = _solver_config(cfg)
    subdomain = _subdomain(cfg)
    observation = ObservationConfig(
        subdomain=subdomain,
        stride_p=cfg.get_int("observe.stride_p", 0),
        interpolant=cfg.get_str("observe.interpolant", "nodal_smooth"),
        spectral_cutoff=cfg.get_int("observe.spectral_cutoff", 0) or None,
    )
    nudging = NudgingParams(mu=cfg.get_float("nudging.mu"), observation=observation)
    horizon = cfg.get_float("nudging.horizon")
    sample_interval = cfg.get_float("nudging.sample_interval", 0.5)
    stop_below = cfg.get_float("nudging.stop_below", 0.0) or None
    track = cfg.get_bool("errors.track_subdomain", False)
    snapshot_times = cfg.get_float_list("output.snapshot_times", ())
    mask_interval = cfg.get_float("output.mask_interval", 0.0) or None
    cfg.check_fully_used()

    reference, header = tio.load_checkpoint(args.checkpoint)
    if header["n"] != config.grid.n:
        raise StateMismatchError(
            f"checkpoint grid n = {header['n']} does not match config grid.n"
            f" = {config.grid.n}"
        )
    for key, want in (("nu", config.nu), ("dt", config.dt)):
        if header[key] != want:
            raise StateMismatchError(
                f"checkpoint {key} = {header[key]!r} does not match config"
                f" {key} = {want!r}"
            )
    if header["seed"] != config.forcing.seed:
        raise StateMismatchError(
            "checkpoint forcing seed does not match the one derived from"
            " seed.master; reference and twin would see different forcing"
        )
    try:
        mask_at(subdomain, config.grid, reference.time)
    except DegenerateMaskError as exc:
        raise ConfigError(f"{cfg.source}: {exc}") from None

    exp = TwinExperiment(
        config=config,
        reference=reference,
        nudging=nudging,
        horizon=horizon,
        sample_interval=sample_interval,
    )
    files = ["errors.csv"]
    regions = (subdomain,) if track else ()

    snap_dir = out / "snapshots"
    mask_dir = out / "masks"

    def snapshot_sink(t, ref_w, assim_w, diff_w):
        snap_dir.mkdir(exist_ok=True)
        stem = _fmt_time(t)
        for tag, field in (("ref", ref_w), ("assim", assim_w), ("diff", diff_w)):
            rel = f"snapshots/{stem}_{tag}.nfld"
            tio.write_nfld(out / rel, field)
            files.append(rel)

    def mask_sink(t, mask):
        mask_dir.mkdir(exist_ok=True)
        rel = f"masks/{_fmt_time(t)}.pbm"
        tio.write_pbm(out / rel, mask)
        files.append(rel)

    with open(out / "errors.csv", "w", encoding="ascii", newline="") as fh:
        fh.write(tio.error_header(len(regions)) + "\n")
        run_twin(
            exp,
            regions=regions,
            error_sink=lambda row: tio.write_error_row(fh, row),
            snapshot_times=snapshot_times,
            snapshot_sink=snapshot_sink if snapshot_times else None,
            mask_interval=mask_interval,
            mask_sink=mask_sink if mask_interval else None,
            stop_below=stop_below,
        )
    _finish_manifest(out, "assimilate", master, cfg.text, started, files)
    return 0


def _verify_mask(cfg: Config, grid: Grid):
    kind = cfg.get_str("verify.mask_kind", "square")
    try:
        if kind == "square":
            spec = SubdomainSpec(
                kind="static", side_fraction=cfg.get_float("verify.mask_fraction")
            )
            return mask_at(spec, grid)
        if kind == "disk":
            return disk_mask(grid, radius=cfg.get_float("verify.mask_radius"))
    except DegenerateMaskError as exc:
        raise ConfigError(f"{cfg.source}: {exc}") from None
    raise ConfigError(
        f"{cfg.source}: verify.mask_kind must be 'square' or 'disk', got {kind!r}"
    )


def cmd_verify(args) -> int:
    cfg = Config.from_file(args.config)
    out = _resolve_out(args)
    started = _now()
    grid = Grid(cfg.get_int("grid.n"))
    master = cfg.get_int("seed.master")
    suite = cfg.get_str("verify.suite")
    mask = _verify_mask(cfg, grid)
    seed = component_seed(master, f"verify.{suite}")

    if suite == "spectral_fit":
        k_list = cfg.get_int_list("verify.k_list")
        samples = cfg.get_int("verify.samples_per_k", 20)
        cfg.check_fully_used()
        fit, table = fit_spectral_constant(mask, k_list, samples, seed)
        with open(out / "fit.csv", "w", encoding="ascii", newline="") as fh:
            fh.write("K,max_ratio,log_max_ratio\n")
            for k, ratio in table:
                fh.write(f"{k},{ratio!r},{math.log(ratio)!r}\n")
        summary = {
            "suite": suite,
            "slope": fit.slope,
            "intercept": fit.intercept,
            "r_squared": fit.r_squared,
            "max_ratio_observed": fit.max_ratio_observed,
            "samples": fit.samples,
        }
        files = ["fit.csv", "summary.json"]
    elif suite in ("approx_volume", "approx_nodal"):
        kind = suite.split("_", 1)[1]
        p_list = cfg.get_int_list("verify.p_list")
        band_k = cfg.get_int("verify.band_k", 8)
        ensemble = cfg.get_int("verify.ensemble", 20)
        cfg.check_fully_used()
        for p in p_list:
            if p < 0 or grid.n % (1 << max(p, 0)) or grid.n // (1 << p) < 2:
                raise ConfigError(
                    f"stride 2^{p} leaves fewer than two sample nodes per"
                    f" axis on an n = {grid.n} grid"
                )
        rows, c0 = verify_approx_inequality(
            kind, p_list, mask, seed, band_k=band_k, ensemble=ensemble
        )
        with open(out / "approx.csv", "w", encoding="ascii", newline="") as fh:
            fh.write("p,h,max_ratio\n")
            for row in rows:
                fh.write(f"{row.p},{row.h!r},{row.max_ratio!r}\n")
        summary = {"suite": suite, "kind": kind, "c0_empirical": c0}
        files = ["approx.csv", "summary.json"]
    else:
        raise ConfigError(
            f"{cfg.source}: verify.suite must be one of spectral_fit,"
            f" approx_volume, approx_nodal; got {suite!r}"
        )

    with open(out / "summary.json", "w", encoding="ascii") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _finish_manifest(out, "verify", master, cfg.text, started, files)
    return 0


def cmd_advise(args) -> int:
    advised = advise_parameters(
        nu=args.nu,
        grashof=args.grashof,
        constants=(args.c_nudge, args.c_omega),
        n_modes=args.n_modes,
        epsilon=args.epsilon,
        c0=args.c0,
    )
    print("advised parameters (scaling guidance, order-one constants):")
    print(f"  mu         = {advised.mu!r}")
    print(f"  h_star     = {advised.h_star!r}")
    print(f"  sigma_star = {advised.sigma_star!r}")
    print(
        "note: the constants behind these formulas are not pinned by theory;"
        " treat the outputs as scalings, not certified thresholds."
    )
    return 0


def cmd_bench(args) -> int:
    grid = Grid(args.n)
    forcing_spec = ForcingSpec(
        grashof=args.grashof, nu=args.nu, seed=args.seed
    )
    config = SolverConfig(grid=grid, nu=args.nu, dt=args.dt, forcing=forcing_spec)
    forcing = build_forcing(forcing_spec, grid)
    state = zero_state(grid)
    for _ in range(args.warmup):
        state = step(state, config, forcing)
    t0 = time.perf_counter()
    for _ in range(args.steps):
        state = step(state, config, forcing)
    wall = time.perf_counter() - t0
    rate = args.steps / wall if wall > 0 else float("inf")
    print(
        f"n={args.n} steps={args.steps} wall={wall:.3f}s"
        f" throughput={rate:.1f} steps/s"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusda",
        description="Forced 2D vorticity solver with nudging-based twin experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spinup", help="integrate the reference flow from rest")
    sp.add_argument("--config", required=True, help="flat key-value config file")
    sp.add_argument("--out", help=f"output directory (or ${OUT_DIR_ENV})")
    sp.set_defaults(func=cmd_spinup)

    sa = sub.add_parser("assimilate", help="run a nudged twin from a checkpoint")
    sa.add_argument("--config", required=True, help="flat key-value config file")
    sa.add_argument("--checkpoint", required=True, help="reference checkpoint (.nckp)")
    sa.add_argument("--out", help=f"output directory (or ${OUT_DIR_ENV})")
    sa.set_defaults(func=cmd_assimilate)

    sv = sub.add_parser("verify", help="run an inequality suite")
    sv.add_argument("--config", required=True, help="flat key-value config file")
    sv.add_argument("--out", help=f"output directory (or ${OUT_DIR_ENV})")
    sv.set_defaults(func=cmd_verify)

    sd = sub.add_parser("advise", help="print scaling-based parameter suggestions")
    sd.add_argument("--nu", type=float, required=True, help="viscosity")
    sd.add_argument("--grashof", type=float, required=True, help="Grashof number")
    sd.add_argument("--n-modes", type=float, default=0.0,
                    help="band size N entering the exponential factor")
    sd.add_argument("--epsilon", type=float, default=1.0)
    sd.add_argument("--c-nudge", type=float, default=1.0,
                    help="order-one constant multiplying the gain")
    sd.add_argument("--c-omega", type=float, default=1.0,
                    help="order-one geometric constant of the subdomain")
    sd.add_argument("--c0", type=float, default=1.0,
                    help="interpolant approximation constant")
    sd.set_defaults(func=cmd_advise)

    sb = sub.add_parser("bench", help="time raw step throughput")
    sb.add_argument("--n", type=int, default=128)
    sb.add_argument("--steps", type=int, default=100)
    sb.add_argument("--warmup", type=int, default=5)
    sb.add_argument("--dt", type=float, default=0.01)
    sb.add_argument("--nu", type=float, default=1e-3)
    sb.add_argument("--grashof", type=float, default=5e4)
    sb.add_argument("--seed", type=int, default=0)
    sb.set_defaults(func=cmd_bench)
    return parser


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split()) or exc.__class__.__name__


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _NUMERICAL_EXC as exc:
        print(f"error: numerical: {_one_line(exc)}", file=sys.stderr)
        return 3
    except _CONFIG_EXC as exc:
        print(f"error: config: {_one_line(exc)}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
