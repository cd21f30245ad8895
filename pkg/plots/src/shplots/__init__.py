"""Offline figure generation from shflow output files (trace CSV, order
CSV, SHF1 snapshots).  Reads only the documented formats; never imports the
solver."""

__version__ = "0.1.0"

from .figures import FIGURE_KINDS, FigureJob, fit_slope, plot
from .readers import ParseError, Snapshot, read_order, read_shf1, read_trace
