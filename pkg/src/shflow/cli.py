"""Command-line entry point.

Subcommands:

    shflow run       one scenario -> trace.csv, SHF1 snapshots, manifest.json
    shflow converge  tau-halving sweep + order fit -> order.csv, manifest.json
    shflow verify    full inequality/verification suite -> reports + exit code

Exit codes: 0 clean, 2 configuration error, 3 solver blow-up.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .energy import check_monotone
from .formats import (
    write_manifest,
    write_order_csv,
    write_shf1,
    write_trace_csv,
    write_violations_csv,
)
from .grid import Grid
from .scenarios import (
    RNG_NAME,
    SCENARIOS,
    ScenarioConfig,
    initial_data,
    preset,
    with_overrides,
)
from .schemes import SCHEMES, BlowUpError, SchemeConfig, run
from .verify import (
    SweepSpec,
    check_lipschitz,
    check_prop31,
    check_prop32,
    check_prop33,
    estimate_sobolev_constant,
    measure_order,
)
from .operators import h1, h2

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


class ConfigError(ValueError):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _versions() -> dict:
    return {
        "shflow": __version__,
        "numpy": np.__version__,
        "python": sys.version.split()[0],
        "rng": RNG_NAME,
    }


def _load_scenario_config(args) -> ScenarioConfig:
    if args.config:
        data = json.loads(Path(args.config).read_text())
        config = ScenarioConfig.from_dict(data)
    else:
        if not args.scenario:
            raise ConfigError("either --config or --scenario is required")
        config = preset(args.scenario, args.preset)
    overrides = {
        key: getattr(args, key)
        for key in ("L", "N", "epsilon", "kappa", "tau", "T", "scheme",
                    "snapshot_every", "trace_every", "seed")
    }
    if overrides.get("kappa") is not None and overrides["kappa"] != "auto":
        overrides["kappa"] = float(overrides["kappa"])
    return with_overrides(config, **overrides)


def cmd_run(args) -> int:
    config = _load_scenario_config(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = Grid(config.L, config.N)
    u0 = initial_data(config.scenario, grid, config.seed)
    kappa = config.resolved_kappa()
    scheme_cfg = SchemeConfig(
        scheme=config.scheme, kappa=kappa, epsilon=config.epsilon, tau=config.tau, c1=config.c1
    )
    result = run(
        u0, scheme_cfg, config.T,
        trace_every=config.trace_every,
        snapshot_every=config.snapshot_every,
    )

    trace_path = outdir / "trace.csv"
    write_trace_csv(trace_path, result.trace)
    artifacts = {"trace.csv": _sha256(trace_path)}
    for t, field in result.snapshots:
        name = f"snapshot_{field_step(t, config.tau):08d}.shf1"
        write_shf1(outdir / name, field, t)
        artifacts[name] = _sha256(outdir / name)

    monotone = check_monotone(result.trace, rel_tol=1e-10) if len(result.trace) > 1 else None
    manifest = {
        "command": "run",
        "config": config.to_dict(),
        "resolved_kappa": kappa,
        "versions": _versions(),
        "artifacts": artifacts,
        "results": {
            "steps": result.state.step_index,
            "final_time": result.state.t,
            "stage_linf_max": result.trace.stage_linf_max,
            "energy_monotone": None if monotone is None else monotone.dissipative,
        },
    }
    write_manifest(outdir / "manifest.json", manifest)
    print(f"wrote {outdir}/trace.csv ({result.state.step_index} steps, "
          f"{len(result.snapshots)} snapshots)")
    return EXIT_OK


def field_step(t: float, tau: float) -> int:
    return int(round(t / tau))


def cmd_converge(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.preset == "paper":
        L, N, T = 32.0, 256, 5.0
        taus = [2.0**-k for k in range(1, 10)]
        ref_tau = 0.1 * 2.0**-9
    else:
        L, N, T = 32.0, 64, 5.0
        taus = [2.0**-k for k in range(2, 8)]
        ref_tau = 2.0**-10
    if args.tau:
        taus = sorted((float(t) for t in args.tau), reverse=True)
    grid = Grid(args.L or L, args.N or N)
    u0 = initial_data("convergence", grid, args.seed)
    report = measure_order(
        args.scheme, u0, args.T or T, taus,
        kappa=float(args.kappa), epsilon=args.epsilon, ref_tau=args.ref_tau or ref_tau,
    )
    write_order_csv(outdir / "order.csv", report)
    manifest = {
        "command": "converge",
        "scheme": args.scheme,
        "grid": {"L": grid.L, "N": grid.N},
        "T": args.T or T,
        "kappa": float(args.kappa),
        "epsilon": args.epsilon,
        "seed": args.seed,
        "taus": report.taus,
        "ref_tau": args.ref_tau or ref_tau,
        "slope": report.slope,
        "interval_slopes": report.interval_slopes,
        "ref_error_estimate": report.ref_error_estimate,
        "blowups": report.blowups,
        "versions": _versions(),
        "artifacts": {"order.csv": _sha256(outdir / "order.csv")},
    }
    write_manifest(outdir / "manifest.json", manifest)
    print(f"{args.scheme}: fitted order {report.slope:.3f} "
          f"(intervals {[round(s, 3) for s in report.interval_slopes]})")
    return EXIT_OK


def cmd_verify(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if not args.Ns or not args.kappas or not args.taus:
        raise ConfigError("sweep lists must be non-empty")
    sweep = SweepSpec(
        Ns=tuple(args.Ns), kappas=tuple(args.kappas), taus=tuple(args.taus),
        fields_per_cell=args.fields, seed=args.seed,
    )
    reports = [check_prop31(sweep), check_prop32(sweep), check_prop33(sweep),
               check_lipschitz(sweep, beta=args.beta, epsilon=args.epsilon)]

    zs = np.logspace(-10, 4, 10_000)
    h1_ok = bool(np.all(np.asarray(h1(zs)) < 0))
    h2_ok = bool(np.all(np.asarray(h2(zs)) <= 0))
    sobolev = estimate_sobolev_constant(sweep)

    write_violations_csv(outdir / "violations.csv", reports)
    lines = [r.summary() for r in reports]
    lines.append(f"h1<0 on log grid: {'ok' if h1_ok else 'FAILED'}")
    lines.append(f"h2<=0 on log grid: {'ok' if h2_ok else 'FAILED'}")
    lines.append(f"empirical sup-norm constant: {sobolev.c_hat:.6f} over {sobolev.n_samples} fields")
    summary = "\n".join(lines) + "\n"
    (outdir / "summary.txt").write_text(summary)
    print(summary, end="")

    ok = all(r.passed for r in reports) and h1_ok and h2_ok
    manifest = {
        "command": "verify",
        "sweep": {"Ns": list(sweep.Ns), "kappas": list(sweep.kappas),
                  "taus": list(sweep.taus), "fields_per_cell": sweep.fields_per_cell,
                  "seed": sweep.seed},
        "beta": args.beta,
        "epsilon": args.epsilon,
        "passed": ok,
        "sobolev_constant": sobolev.c_hat,
        "versions": _versions(),
    }
    write_manifest(outdir / "manifest.json", manifest)
    return EXIT_OK if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shflow", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and write artifacts")
    p_run.add_argument("--scenario", choices=SCENARIOS)
    p_run.add_argument("--config", help="JSON scenario config (overrides --scenario preset)")
    p_run.add_argument("--preset", choices=("desk", "paper"), default="desk")
    p_run.add_argument("--out", default="out")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--L", type=float, default=None)
    p_run.add_argument("--N", type=int, default=None)
    p_run.add_argument("--epsilon", type=float, default=None)
    p_run.add_argument("--kappa", default=None, help="number or 'auto'")
    p_run.add_argument("--tau", type=float, default=None)
    p_run.add_argument("--T", type=float, default=None)
    p_run.add_argument("--scheme", choices=SCHEMES, default=None)
    p_run.add_argument("--snapshot-every", dest="snapshot_every", type=int, default=None)
    p_run.add_argument("--trace-every", dest="trace_every", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_conv = sub.add_parser("converge", help="tau-halving sweep and order fit")
    p_conv.add_argument("--scheme", choices=SCHEMES, default="erk22")
    p_conv.add_argument("--preset", choices=("desk", "paper"), default="desk")
    p_conv.add_argument("--out", default="out")
    p_conv.add_argument("--seed", type=int, default=0)
    p_conv.add_argument("--L", type=float, default=None)
    p_conv.add_argument("--N", type=int, default=None)
    p_conv.add_argument("--T", type=float, default=None)
    p_conv.add_argument("--kappa", default=2.0)
    p_conv.add_argument("--epsilon", type=float, default=0.25)
    p_conv.add_argument("--tau", nargs="*", type=float, default=None,
                        help="explicit halving tau list (largest first)")
    p_conv.add_argument("--ref-tau", dest="ref_tau", type=float, default=None)
    p_conv.set_defaults(func=cmd_converge)

    p_ver = sub.add_parser("verify", help="run the inequality verification suite")
    p_ver.add_argument("--out", default="out")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--fields", type=int, default=100)
    p_ver.add_argument("--Ns", nargs="*", type=int, default=[8, 16, 32])
    p_ver.add_argument("--kappas", nargs="*", type=float, default=[1.0, 2.0, 10.0])
    p_ver.add_argument("--taus", nargs="*", type=float, default=[1e-3, 1e-1, 1.0])
    p_ver.add_argument("--beta", type=float, default=1.0)
    p_ver.add_argument("--epsilon", type=float, default=0.25)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BlowUpError as err:
        print(f"error: blow-up at step {err.step_index} (t={err.t}): {err}", file=sys.stderr)
        return EXIT_BLOWUP
    except (ConfigError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"error: {err.filename or ''}: {err.strerror or err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
