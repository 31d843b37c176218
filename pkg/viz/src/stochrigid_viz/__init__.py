"""Static renderers for stochrigid CSV files.

The only coupling to the simulation package is the two documented CSV
formats; nothing here imports simulation code or reads simulation state.
"""

from .formats import read_histogram_csv, read_sweep_csv
from .render import render_snapshot, render_sweep

__all__ = [
    "read_histogram_csv",
    "read_sweep_csv",
    "render_snapshot",
    "render_sweep",
]
