"""Executable oracles for the proved operator inequalities, the Lipschitz
estimate, the discrete Sobolev ratio, and empirical temporal-order
measurement.

Checkers sweep a grid of (N, kappa, tau) cells with seeded random fields and
report violations instead of raising; a clean report is the pass criterion.
Inequality slack combines an absolute floor of 1e-12 with 1e-11 times the
larger side, since both sides are sums of O(N^2) floating products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .energy import kappa_rule
from .grid import (
    Grid,
    RealField,
    apply_laplacian,
    apply_symbol,
    inner,
    norm_l2,
    norm_linf,
)
from .operators import GFamily, make_lkappa
from .schemes import BlowUpError, SchemeConfig, run

ABS_SLACK = 1e-12
REL_SLACK = 1e-11


@dataclass(frozen=True)
class SweepSpec:
    """Cell grid for the inequality sweeps, deterministic under ``seed``."""

    Ns: tuple[int, ...] = (8, 16, 32)
    kappas: tuple[float, ...] = (1.0, 2.0, 10.0)
    taus: tuple[float, ...] = (1e-3, 1e-1, 1.0)
    fields_per_cell: int = 100
    seed: int = 0
    L: float = 2.0 * math.pi

    def __post_init__(self) -> None:
        if not self.Ns or not self.kappas or not self.taus:
            raise ValueError("sweep lists must be non-empty")
        if self.fields_per_cell < 1:
            raise ValueError("at least one field per cell is required")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.seed))


def band_limited_fields(grid: Grid, count: int, rng: np.random.Generator) -> list[RealField]:
    """Unit-variance random fields with the top third of mode magnitudes zeroed."""
    cutoff = grid.N // 3
    keep = (np.abs(grid.kx) <= cutoff) & (np.abs(grid.ky) <= cutoff)
    out = []
    for _ in range(count):
        coeffs = np.fft.fft2(rng.standard_normal(grid.shape)) * keep
        values = np.fft.ifft2(coeffs).real
        std = values.std()
        if std > 0:
            values = values / std
        out.append(RealField(grid, values))
    return out


def white_fields(grid: Grid, count: int, rng: np.random.Generator) -> list[RealField]:
    return [RealField(grid, rng.standard_normal(grid.shape)) for _ in range(count)]


def smooth_fields(grid: Grid, count: int, rng: np.random.Generator, cutoff: int = 5) -> list[RealField]:
    """Random fields with a resolution-independent spectral band.

    The fixed cutoff keeps ||Delta f||_2 comparable across N, which is what
    the sup-norm ratio estimate needs (refining the grid must not change the
    field class being sampled).
    """
    keep = (np.abs(grid.kx) <= cutoff) & (np.abs(grid.ky) <= cutoff)
    out = []
    for _ in range(count):
        coeffs = np.fft.fft2(rng.standard_normal(grid.shape)) * keep
        values = np.fft.ifft2(coeffs).real
        std = values.std()
        if std > 0:
            values = values / std
        out.append(RealField(grid, values))
    return out


@dataclass(frozen=True)
class Violation:
    cell: str
    sample: str
    margin: float
    detail: str = ""


@dataclass
class CheckReport:
    """Outcome of one checker: sample count, violations, worst signed margin.

    ``margin`` is LHS - RHS plus the allowed slack; negative means the
    inequality failed beyond tolerance.
    """

    name: str
    n_samples: int = 0
    worst_margin: float = math.inf
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, cell: str, sample: str, lhs: float, rhs: float, detail: str = "") -> None:
        slack = ABS_SLACK + REL_SLACK * max(abs(lhs), abs(rhs))
        margin = lhs - rhs + slack
        self.n_samples += 1
        self.worst_margin = min(self.worst_margin, margin)
        if margin < 0:
            self.violations.append(Violation(cell, sample, margin, detail))

    def summary(self) -> str:
        status = "ok" if self.passed else f"{len(self.violations)} violation(s)"
        return (
            f"{self.name}: {status} over {self.n_samples} samples"
            f" (worst margin {self.worst_margin:.3e})"
        )

    def rows(self):
        """Machine-readable rows: (check, cell, sample, margin)."""
        for v in self.violations:
            yield (self.name, v.cell, v.sample, v.margin, v.detail)


def _cells(sweep: SweepSpec):
    rng = sweep.rng()
    for N in sweep.Ns:
        grid = Grid(sweep.L, N)
        for kappa in sweep.kappas:
            for tau in sweep.taus:
                cell = f"N={N},kappa={kappa},tau={tau}"
                fields = band_limited_fields(grid, sweep.fields_per_cell, rng)
                if N == min(sweep.Ns):
                    fields += white_fields(grid, sweep.fields_per_cell, rng)
                yield grid, kappa, tau, cell, fields


def check_prop31(sweep: SweepSpec) -> CheckReport:
    """Half-power stage operators are L2 contractions."""
    report = CheckReport("prop31")
    for grid, kappa, tau, cell, fields in _cells(sweep):
        fam = GFamily(make_lkappa(grid, kappa), tau)
        for j, f in enumerate(fields):
            nf = norm_l2(f)
            for tag in ("g1_half", "g2_half", "g12_half"):
                report.record(cell, f"{j}:{tag}", nf, norm_l2(fam.apply(tag, f)), tag)
    return report


def _prop32_sides(fam: GFamily, kappa: float, f: RealField, half_tag: str,
                  star_tag: str, dstar_tag: str) -> tuple[float, float]:
    lap = apply_laplacian(f)
    lap2 = apply_laplacian(lap)
    lhs = norm_l2(fam.apply(star_tag, f)) ** 2 + norm_l2(fam.apply(dstar_tag, f)) ** 2
    n0 = norm_l2(fam.apply(half_tag, f)) ** 2
    n1 = norm_l2(fam.apply(half_tag, lap)) ** 2
    n2 = norm_l2(fam.apply(half_tag, lap2)) ** 2
    rhs = 0.25 * (n1 + n2) + (kappa - 1.0) * (n0 + n1) + (2.0 / 3.0) * (n0 + n1)
    return lhs, rhs


def check_prop32(sweep: SweepSpec) -> CheckReport:
    """Star-operator lower bounds (needs kappa >= 1), plus the per-mode
    symbol bound Lambda >= lam^2/4 + 2/3 + (kappa - 1) checked exactly."""
    if min(sweep.kappas) < 1.0:
        raise ValueError("prop32 requires kappa >= 1 throughout the sweep")
    report = CheckReport("prop32")
    for N in sweep.Ns:
        grid = Grid(sweep.L, N)
        for kappa in sweep.kappas:
            sym = make_lkappa(grid, kappa)
            bound = 0.25 * grid.lam**2 + 2.0 / 3.0 + (kappa - 1.0)
            per_mode = float(np.min(sym.Lambda - bound))
            report.n_samples += 1
            report.worst_margin = min(report.worst_margin, per_mode)
            if per_mode < 0:
                report.violations.append(
                    Violation(f"N={N},kappa={kappa}", "per-mode", per_mode, "symbol bound")
                )
    for grid, kappa, tau, cell, fields in _cells(sweep):
        fam = GFamily(make_lkappa(grid, kappa), tau)
        for j, f in enumerate(fields):
            for i in (1, 2):
                lhs, rhs = _prop32_sides(fam, kappa, f, f"g{i}_half", f"g{i}_star", f"g{i}_dstar")
                report.record(cell, f"{j}:i={i}", lhs, rhs, "stage bound")
            lhs, rhs = _prop32_sides(fam, kappa, f, "g12_half", "g_star", "g_dstar")
            report.record(cell, f"{j}:product", lhs, rhs, "product bound")
    return report


def check_prop33(sweep: SweepSpec) -> CheckReport:
    """Semigroup cross-term bounds for independent field pairs (f, g)."""
    report = CheckReport("prop33")
    for grid, kappa, tau, cell, fields in _cells(sweep):
        lk = make_lkappa(grid, kappa)
        fam = GFamily(lk, tau)
        pairs = list(zip(fields[0::2], fields[1::2]))
        for j, (f, g) in enumerate(pairs):
            g1l_f = apply_symbol(fam.symbol("g1") * lk.Lambda, f)
            for i, ci in ((1, 0.5), (2, 1.0)):
                expi = np.exp(-ci * tau * lk.Lambda)
                gl_f = apply_symbol(fam.symbol(f"g{i}") * lk.Lambda, f)
                sg_f = apply_symbol(expi, f)
                resid = RealField(grid, g.values - sg_f.values)
                # (1): plain pairing
                lhs = tau * inner(gl_f, sg_f) + norm_l2(resid) ** 2
                rhs = tau * norm_l2(fam.apply(f"g{i}_star", g)) ** 2
                report.record(cell, f"{j}:i={i}:1", lhs, rhs)
                # (2): biharmonic weighting
                lap_sg = apply_laplacian(apply_laplacian(sg_f))
                lhs = tau * inner(gl_f, lap_sg) + norm_l2(apply_laplacian(resid)) ** 2
                rhs = tau * norm_l2(fam.apply(f"g{i}_dstar", g)) ** 2
                report.record(cell, f"{j}:i={i}:2", lhs, rhs)
                # (3)/(4): product-stage versions, first-stage pairing fixed
                lhs = tau * inner(g1l_f, fam.apply("g2", sg_f)) + norm_l2(fam.apply("g2_half", resid)) ** 2
                rhs = tau * norm_l2(fam.apply("g_star", g)) ** 2
                report.record(cell, f"{j}:i={i}:3", lhs, rhs)
                lap2_sg = fam.apply("g2", lap_sg)
                lhs = tau * inner(g1l_f, lap2_sg) + norm_l2(fam.apply("g2_half", apply_laplacian(resid))) ** 2
                rhs = tau * norm_l2(fam.apply("g_dstar", g)) ** 2
                report.record(cell, f"{j}:i={i}:4", lhs, rhs)
    return report


def check_lipschitz(sweep: SweepSpec, beta: float, epsilon: float) -> CheckReport:
    """||N_kappa(u) - N_kappa(v)||_2 <= 3 kappa ||u - v||_2 on clipped pairs."""
    kappa = kappa_rule(beta, epsilon)
    report = CheckReport("lipschitz")
    rng = sweep.rng()
    c = kappa + epsilon
    for N in sweep.Ns:
        grid = Grid(sweep.L, N)
        cell = f"N={N},beta={beta}"
        for j in range(sweep.fields_per_cell):
            u = np.clip(rng.standard_normal(grid.shape), -beta, beta)
            v = np.clip(rng.standard_normal(grid.shape), -beta, beta)
            nu = c * u - u**3
            nv = c * v - v**3
            lhs = 3.0 * kappa * norm_l2(RealField(grid, u - v))
            rhs = norm_l2(RealField(grid, nu - nv))
            report.record(cell, str(j), lhs, rhs)
    return report


@dataclass
class SobolevReport:
    c_hat: float
    per_N: dict[int, float]
    n_samples: int


def sobolev_ratio(f: RealField) -> float:
    """||f||_inf / (||f||_2 + ||Delta f||_2); nan for the zero field."""
    denom = norm_l2(f) + norm_l2(apply_laplacian(f))
    if denom == 0.0:
        return math.nan
    return norm_linf(f) / denom


def estimate_sobolev_constant(sweep: SweepSpec) -> SobolevReport:
    """Empirical constant for the sup-norm interpolation bound: the max
    observed ratio over smooth band-limited fields (zero fields skipped)."""
    rng = sweep.rng()
    per_N: dict[int, float] = {}
    n = 0
    for N in sweep.Ns:
        grid = Grid(sweep.L, N)
        best = 0.0
        for f in smooth_fields(grid, sweep.fields_per_cell, rng):
            r = sobolev_ratio(f)
            if math.isnan(r):
                continue
            n += 1
            best = max(best, r)
        per_N[N] = best
    return SobolevReport(max(per_N.values()), per_N, n)


@dataclass
class OrderReport:
    """Temporal self-convergence measurement against a fine-tau reference."""

    taus: list[float]
    errors: list[float]
    slope: float
    interval_slopes: list[float]
    included: list[bool]
    ref_error_estimate: float
    blowups: list[float] = field(default_factory=list)
    scheme: str = ""

    def __post_init__(self) -> None:
        if len(self.taus) != len(self.errors) or len(self.taus) < 3:
            raise ValueError("order report needs matching tau/error lists of length >= 3")
        if any(a <= b for a, b in zip(self.taus, self.taus[1:])):
            raise ValueError("taus must be strictly decreasing")

    def rows(self):
        for tau, err, inc in zip(self.taus, self.errors, self.included):
            yield (tau, err, int(inc))


def fit_order(taus, errors) -> float:
    """Least-squares slope of log(error) against log(tau)."""
    lt, le = np.log(np.asarray(taus, dtype=float)), np.log(np.asarray(errors, dtype=float))
    slope, _ = np.polyfit(lt, le, 1)
    return float(slope)


def measure_order(
    scheme: str,
    u0: RealField,
    T: float,
    tau_list,
    kappa: float,
    epsilon: float,
    ref_tau: float | None = None,
    ref_scheme: str = "erk22",
) -> OrderReport:
    """Errors at final time against a fine-step reference on the same grid.

    ``tau_list`` must be a halving sequence of at least four entries and the
    reference step at most an eighth of the smallest entry.  Entries whose
    error sits within 10x of the reference's own error estimate (measured by
    re-running the reference at twice its step) are excluded from the fit,
    as are blow-ups.
    """
    taus = [float(t) for t in tau_list]
    if len(taus) < 4:
        raise ValueError("need at least four tau entries")
    for a, b in zip(taus, taus[1:]):
        if abs(a / b - 2.0) > 1e-9:
            raise ValueError("tau list must halve between consecutive entries")
    if ref_tau is None:
        ref_tau = taus[-1] / 8.0
    if ref_tau > taus[-1] / 8.0 * (1 + 1e-12):
        raise ValueError("reference tau must be at most an eighth of the smallest entry")

    def final_values(sch: str, tau: float) -> np.ndarray:
        cfg = SchemeConfig(scheme=sch, kappa=kappa, epsilon=epsilon, tau=tau)
        return run(u0, cfg, T, trace_every=10**9).state.u.values

    grid = u0.grid
    ref = final_values(ref_scheme, ref_tau)
    ref_coarse = final_values(ref_scheme, 2.0 * ref_tau)
    ref_err = float(grid.h * np.linalg.norm(ref - ref_coarse))

    errors, included, blowups = [], [], []
    for tau in taus:
        try:
            err = float(grid.h * np.linalg.norm(final_values(scheme, tau) - ref))
        except BlowUpError:
            blowups.append(tau)
            errors.append(math.nan)
            included.append(False)
            continue
        errors.append(err)
        included.append(err >= 10.0 * ref_err)

    used = [(t, e) for t, e, inc in zip(taus, errors, included) if inc]
    if len(used) >= 2:
        slope = fit_order([t for t, _ in used], [e for _, e in used])
    else:
        slope = math.nan
    interval = [
        math.log(e0 / e1) / math.log(t0 / t1)
        for (t0, e0), (t1, e1) in zip(used, used[1:])
    ]
    return OrderReport(taus, errors, slope, interval, included, ref_err, blowups, scheme)
