"""Secondary acceptance: desk-scale artifacts from the solver CLI feed all
three entry points; the convergence annotation matches the report's fit.

The solver is driven strictly through its command-line interface in a
subprocess; this package never imports it.
"""

import json
import subprocess
import sys

import pytest

from shplots.cli import main_convergence, main_energy, main_field
from shplots.figures import FigureJob, build_convergence


def _shflow(*args) -> None:
    proc = subprocess.run(
        [sys.executable, "-m", "shflow.cli", *args],
        capture_output=True, text=True, timeout=300,
    )
    assert proc.returncode == 0, proc.stderr


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory):
    root = tmp_path_factory.mktemp("artifacts")
    run_dir, conv_dir = root / "run", root / "conv"
    _shflow("run", "--scenario", "energy_stability", "--out", str(run_dir),
            "--N", "64", "--T", "2", "--tau", "0.1", "--snapshot-every", "10",
            "--seed", "1")
    _shflow("converge", "--scheme", "erk22", "--out", str(conv_dir),
            "--N", "32", "--T", "1",
            "--tau", "0.1", "0.05", "0.025", "0.0125",
            "--ref-tau", "0.0015625")
    return {
        "trace": run_dir / "trace.csv",
        "snapshot": run_dir / "snapshot_00000010.shf1",
        "order": conv_dir / "order.csv",
        "manifest": conv_dir / "manifest.json",
    }


def test_plot_energy_nonzero(artifacts, tmp_path):
    out = tmp_path / "energy.png"
    assert main_energy([str(artifacts["trace"]), "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_plot_field_nonzero(artifacts, tmp_path):
    out = tmp_path / "field.png"
    assert main_field([str(artifacts["snapshot"]), "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_plot_convergence_nonzero_and_slope_matches_report(artifacts, tmp_path):
    out = tmp_path / "conv.png"
    assert main_convergence([str(artifacts["order"]), "--out", str(out)]) == 0
    assert out.stat().st_size > 0
    _, meta = build_convergence(
        FigureJob(inputs=(str(artifacts["order"]),), kind="convergence", out=str(out)))
    reported = json.loads(artifacts["manifest"].read_text())["slope"]
    assert abs(meta["slope"] - reported) <= 0.01
