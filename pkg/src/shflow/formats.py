"""On-disk formats owned by the CLI: SHF1 field snapshots, trace and report
CSVs, and the JSON run manifest.

SHF1 is one ASCII header line ``SHF1 <N> <L> <t>`` followed by N*N
little-endian 64-bit floats in row-major order; it round-trips doubles
exactly.  All CSV floats are written with 17 significant digits so repeated
runs with the same seed produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .energy import TRACE_COLUMNS, EnergyTrace
from .grid import Grid, RealField

SHF1_MAGIC = "SHF1"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_shf1(path: str | Path, field: RealField, t: float) -> None:
    g = field.grid
    header = f"{SHF1_MAGIC} {g.N} {_fmt(g.L)} {_fmt(t)}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_shf1(path: str | Path) -> tuple[RealField, float]:
    """Parse a snapshot; truncated or malformed files raise ValueError."""
    with open(path, "rb") as fh:
        header = fh.readline()
        body = fh.read()
    parts = header.decode("ascii", errors="replace").split()
    if len(parts) != 4 or parts[0] != SHF1_MAGIC:
        raise ValueError(f"{path}: not an SHF1 file (header {header!r})")
    N, L, t = int(parts[1]), float(parts[2]), float(parts[3])
    expected = N * N * 8
    if len(body) != expected:
        raise ValueError(
            f"{path}: payload holds {len(body)} bytes at offset {len(header)}, expected {expected}"
        )
    values = np.frombuffer(body, dtype="<f8").reshape(N, N)
    return RealField(Grid(L, N), values.copy()), t


def write_trace_csv(path: str | Path, trace: EnergyTrace) -> None:
    lines = [",".join(TRACE_COLUMNS)]
    for step, t, E, Ec, Ee, l2, linf in trace.rows():
        lines.append(f"{step},{_fmt(t)},{_fmt(E)},{_fmt(Ec)},{_fmt(Ee)},{_fmt(l2)},{_fmt(linf)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace_csv(path: str | Path) -> dict[str, np.ndarray]:
    text = Path(path).read_text().strip().splitlines()
    if not text or text[0].split(",") != list(TRACE_COLUMNS):
        raise ValueError(f"{path}: line 1: expected header {','.join(TRACE_COLUMNS)}")
    columns = {name: [] for name in TRACE_COLUMNS}
    for lineno, line in enumerate(text[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(TRACE_COLUMNS):
            raise ValueError(f"{path}: line {lineno}: expected {len(TRACE_COLUMNS)} cells")
        for name, cell in zip(TRACE_COLUMNS, cells):
            columns[name].append(float(cell))
    return {
        name: np.asarray(vals, dtype=np.int64 if name == "step" else np.float64)
        for name, vals in columns.items()
    }


def write_order_csv(path: str | Path, report) -> None:
    lines = ["tau,error,included"]
    for tau, err, inc in report.rows():
        lines.append(f"{_fmt(tau)},{_fmt(err)},{inc}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_violations_csv(path: str | Path, reports) -> None:
    lines = ["check,cell,sample,margin,detail"]
    for report in reports:
        for check, cell, sample, margin, detail in report.rows():
            lines.append(f"{check},{cell},{sample},{_fmt(margin)},{detail}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_manifest(path: str | Path, manifest: dict) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
