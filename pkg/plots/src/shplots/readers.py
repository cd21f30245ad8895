"""Parsers for the solver's on-disk formats.

These re-implement the documented formats from scratch; this package never
imports the solver.  Errors always name the offending file and the line or
byte offset.

Formats:
  trace CSV   header ``step,t,E,Ec,Ee,l2,linf``, one sample per row
  order CSV   header ``tau,error,included`` from a convergence sweep
  SHF1        one ASCII line ``SHF1 <N> <L> <t>`` then N*N little-endian
              float64 values, row-major
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

TRACE_COLUMNS = ("step", "t", "E", "Ec", "Ee", "l2", "linf")
ORDER_COLUMNS = ("tau", "error", "included")


class ParseError(ValueError):
    """Malformed input file; message carries file and offset context."""


def _read_csv(path: str | Path, columns: tuple[str, ...]) -> dict[str, np.ndarray]:
    path = Path(path)
    try:
        lines = path.read_text().strip().splitlines()
    except OSError as err:
        raise ParseError(f"{path}: {err.strerror}") from err
    if not lines or tuple(lines[0].split(",")) != columns:
        raise ParseError(f"{path}: line 1: expected header {','.join(columns)}")
    data: dict[str, list[float]] = {c: [] for c in columns}
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(columns):
            raise ParseError(f"{path}: line {lineno}: expected {len(columns)} cells, got {len(cells)}")
        for name, cell in zip(columns, cells):
            try:
                data[name].append(float(cell))
            except ValueError:
                raise ParseError(f"{path}: line {lineno}: bad number {cell!r}") from None
    return {name: np.asarray(vals) for name, vals in data.items()}


def read_trace(path: str | Path) -> dict[str, np.ndarray]:
    return _read_csv(path, TRACE_COLUMNS)


def read_order(path: str | Path) -> dict[str, np.ndarray]:
    cols = _read_csv(path, ORDER_COLUMNS)
    cols["included"] = cols["included"].astype(bool)
    return cols


@dataclass(frozen=True)
class Snapshot:
    N: int
    L: float
    t: float
    values: np.ndarray


def read_shf1(path: str | Path) -> Snapshot:
    path = Path(path)
    with open(path, "rb") as fh:
        header = fh.readline()
        body = fh.read()
    parts = header.decode("ascii", errors="replace").split()
    if len(parts) != 4 or parts[0] != "SHF1":
        raise ParseError(f"{path}: byte 0: not an SHF1 header ({header[:20]!r})")
    try:
        N, L, t = int(parts[1]), float(parts[2]), float(parts[3])
    except ValueError:
        raise ParseError(f"{path}: byte 0: malformed SHF1 header fields {parts[1:]}") from None
    expected = N * N * 8
    if len(body) != expected:
        raise ParseError(
            f"{path}: byte {len(header)}: payload is {len(body)} bytes, header implies {expected}"
        )
    values = np.frombuffer(body, dtype="<f8").reshape(N, N)
    return Snapshot(N=N, L=L, t=t, values=values)
