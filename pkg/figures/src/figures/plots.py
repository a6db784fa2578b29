"""Figure builders: error-series overlays and field triptychs.

Each builder returns the prepared data alongside the matplotlib figure,
so the scaling decisions (what was plotted, over which color range) are
inspectable without rendering pixels.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .formats import read_error_series, read_field  # noqa: E402


@dataclass(frozen=True)
class SeriesCurve:
    label: str
    t: np.ndarray
    rel_l2: np.ndarray


@dataclass(frozen=True)
class Triptych:
    """The three panels and the color ranges they were drawn with."""

    reference: np.ndarray
    assimilated: np.ndarray
    difference: np.ndarray
    field_scale: float
    difference_scale: float


def load_curves(paths) -> list:
    """Read each errors.csv into a labeled (t, rel_l2) curve.

    Labels are the runs' directory names (the file name itself is always
    errors.csv), falling back to the file stem for loose files.
    """
    curves = []
    for path in paths:
        p = Path(path)
        header, rows = read_error_series(p)
        label = p.parent.name if p.name == "errors.csv" and p.parent.name else p.stem
        curves.append(SeriesCurve(label=label, t=rows[:, 0], rel_l2=rows[:, 1]))
    return curves


def render_series(curves, out_path) -> None:
    """Overlay relative-error curves on a log axis and write a PNG."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for curve in curves:
        positive = curve.rel_l2 > 0
        ax.semilogy(curve.t[positive], curve.rel_l2[positive], label=curve.label)
    ax.set_xlabel("t")
    ax.set_ylabel("relative L2 error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def build_triptych(reference: np.ndarray, assimilated: np.ndarray) -> Triptych:
    """Compute the difference panel and the two color scales.

    The reference and assimilated panels share one symmetric scale so
    they are visually comparable; the difference panel gets its own
    symmetric scale (otherwise a small mismatch would be invisible).
    The difference of identical inputs is exactly the zero field.
    """
    if reference.shape != assimilated.shape:
        raise ValueError(
            f"field shapes differ: {reference.shape} vs {assimilated.shape}"
        )
    difference = assimilated - reference
    field_scale = float(max(np.abs(reference).max(), np.abs(assimilated).max()))
    difference_scale = float(np.abs(difference).max())
    return Triptych(
        reference=reference,
        assimilated=assimilated,
        difference=difference,
        field_scale=field_scale or 1.0,
        difference_scale=difference_scale or 1.0,
    )


def render_triptych(triptych: Triptych, out_path, titles=("reference", "assimilated", "difference")) -> None:
    """Draw the three panels side by side and write a PNG."""
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 4.2))
    panels = (
        (triptych.reference, triptych.field_scale),
        (triptych.assimilated, triptych.field_scale),
        (triptych.difference, triptych.difference_scale),
    )
    for ax, title, (field, scale) in zip(axes, titles, panels):
        # fields are indexed [x, y]; transpose so x runs right, y up
        im = ax.imshow(
            field.T,
            origin="lower",
            cmap="RdBu_r",
            vmin=-scale,
            vmax=scale,
            extent=(0.0, 2.0 * np.pi, 0.0, 2.0 * np.pi),
        )
        ax.set_title(title)
        fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def triptych_from_files(ref_path, assim_path) -> Triptych:
    return build_triptych(read_field(ref_path), read_field(assim_path))
