"""Plotting companion for twin-experiment runs.

Consumes the solver's on-disk artifacts directly — `errors.csv` series
and NFLD field snapshots — through its own readers, so it can render
runs from any producer of those formats.
"""

from .formats import FormatError, read_error_series, read_field
from .plots import SeriesCurve, Triptych, render_series, render_triptych

__all__ = [
    "FormatError",
    "SeriesCurve",
    "Triptych",
    "read_error_series",
    "read_field",
    "render_series",
    "render_triptych",
]
