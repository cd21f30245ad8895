"""Energy functional, stabilization rules, bound constants, trace checks."""

import math

import numpy as np
import pytest

from shflow.energy import (
    EnergyParts,
    EnergyTrace,
    check_monotone,
    energy,
    kappa_rule,
    stability_bounds,
)
from shflow.grid import Grid, RealField, apply_laplacian, inner

from conftest import random_field


def test_energy_zero_field(grid16):
    parts = energy(RealField(grid16, np.zeros(grid16.shape)), epsilon=0.25)
    assert parts == EnergyParts(0.0, 0.0, 0.0)


def test_energy_constant_field_unit_square():
    # (Delta + I) 1 = 1, so E_op = L^2/2; grid quadrature gives the rest
    g = Grid(1.0, 16)
    parts = energy(RealField(g, np.ones(g.shape)), epsilon=0.25)
    assert parts.operator == pytest.approx(0.5, rel=1e-13)
    assert parts.potential == pytest.approx(0.125, rel=1e-13)
    assert parts.total == pytest.approx(0.625, rel=1e-13)


def test_energy_single_mode_closed_form():
    # E_op for a*cos(2 pi x / L) is a^2 L^2 (1 - 4 pi^2/L^2)^2 / 4 by Parseval
    g = Grid(7.0, 32)
    a = 0.37
    X, _ = g.coords()
    parts = energy(RealField(g, a * np.cos(2 * np.pi * X / g.L)), epsilon=0.25)
    expected = 0.25 * a**2 * g.L**2 * (1.0 - 4 * np.pi**2 / g.L**2) ** 2
    assert parts.operator == pytest.approx(expected, rel=1e-12)


def test_energy_split_consistency(grid16, rng):
    for _ in range(20):
        parts = energy(random_field(grid16, rng), epsilon=0.25)
        assert parts.total == pytest.approx(parts.operator + parts.potential, rel=1e-12)


def test_energy_spectral_matches_physical(grid16, rng):
    """E_op equals <u, (Delta+I)^2 u>/2 via two physical operator applications."""
    f = random_field(grid16, rng)
    parts = energy(f, epsilon=0.25)
    shifted = RealField(grid16, apply_laplacian(f).values + f.values)
    twice = RealField(grid16, apply_laplacian(shifted).values + shifted.values)
    physical = 0.5 * inner(f, twice)
    assert parts.operator == pytest.approx(physical, rel=1e-11)


def test_kappa_rule_values():
    assert kappa_rule(1.0, 0.25) == pytest.approx(1.375, rel=1e-15)
    assert kappa_rule(0.0, 0.25) == 1.0
    assert kappa_rule(1.0, 6.0) == pytest.approx(3.0, rel=1e-15)


def test_kappa_rule_rejects_bad_input():
    with pytest.raises(ValueError):
        kappa_rule(-0.1, 0.25)
    with pytest.raises(ValueError):
        kappa_rule(1.0, 0.0)


def test_stability_bounds_simple():
    b = stability_bounds(E0=0.0, domain_area=1.0, C_hat=1.0, epsilon=0.25)
    assert b.C0 == pytest.approx(2.0)
    assert b.C0t == pytest.approx(4.0)
    assert b.C1t == pytest.approx(4.0 * math.sqrt(2.0))
    assert b.C2t == pytest.approx(4.0 * math.sqrt(3.0))
    assert b.C2t >= b.C1t >= b.C0t
    assert b.kappa >= 1.0
    assert b.tau_max <= 1.0 / 256.0


def test_stability_bounds_dual_implementation():
    """Cross-check against an independent straight-line transcription."""
    E0, area, c_hat, eps = 10.0, 1024.0, 1.0, 0.25
    b = stability_bounds(E0, area, c_hat, eps)

    c0 = 2.0 * (E0 + area) ** 0.5
    c2t = 2.0 * 3.0**0.5 * c_hat * c0
    kap = max(abs(3.0 * c2t**2 - eps) / 2.0, 1.0)
    c1t = 2.0 * 2.0**0.5 * c_hat * c0
    c0t = 2.0 * c_hat * c0
    tau_max = min(1 / 256, 1 / (64 * c1t**4), 1 / (64 * kap) ** 0.5, 1 / (4 * c0t**2 * kap**0.5))

    assert b.kappa == pytest.approx(kap, rel=1e-14)
    assert b.tau_max == pytest.approx(tau_max, rel=1e-14)


def test_stability_bounds_rejects_nonpositive():
    for kwargs in (
        dict(E0=0.0, domain_area=0.0, C_hat=1.0, epsilon=0.25),
        dict(E0=0.0, domain_area=1.0, C_hat=0.0, epsilon=0.25),
        dict(E0=0.0, domain_area=1.0, C_hat=1.0, epsilon=0.0),
    ):
        with pytest.raises(ValueError):
            stability_bounds(**kwargs)


def _trace_from_energies(energies):
    trace = EnergyTrace(scheme="test")
    for i, e in enumerate(energies):
        trace.append(i, float(i), EnergyParts(e, e, 0.0), 0.0, 0.0)
    return trace


def test_check_monotone_clean():
    report = check_monotone(_trace_from_energies([5.0, 4.0, 2.5, 2.5 - 1e-12]), rel_tol=1e-10)
    assert report.dissipative
    assert report.violations == ()


def test_check_monotone_flags_single_uptick():
    report = check_monotone(_trace_from_energies([5.0, 4.0, 4.5, 3.0]), rel_tol=1e-10)
    assert len(report.violations) == 1
    v = report.violations[0]
    assert v.index == 2
    assert v.jump == pytest.approx(0.5)


def test_check_monotone_needs_two_samples():
    with pytest.raises(ValueError):
        check_monotone(_trace_from_energies([1.0]))


def test_trace_requires_increasing_time():
    trace = _trace_from_energies([1.0, 0.5])
    with pytest.raises(ValueError):
        trace.append(5, 0.5, EnergyParts(0.1, 0.1, 0.0), 0.0, 0.0)


def test_trace_columns():
    trace = _trace_from_energies([3.0, 2.0, 1.0])
    np.testing.assert_array_equal(trace.column("step"), [0, 1, 2])
    np.testing.assert_allclose(trace.column("E"), [3.0, 2.0, 1.0])
    assert len(trace) == 3


def test_trajectory_respects_energy_norm_bound():
    """Along a dissipative run, ||u||_2 and ||Delta u||_2 stay below
    2*sqrt(E(u0) + |domain|)."""
    from shflow.grid import norm_l2
    from shflow.scenarios import initial_data
    from shflow.schemes import SchemeConfig, run

    g = Grid(100.0, 64)
    u0 = initial_data("energy_stability", g)
    eps = 0.25
    C0 = 2.0 * np.sqrt(energy(u0, eps).total + g.area)
    result = run(u0, SchemeConfig(scheme="erk22", kappa=2.0, epsilon=eps, tau=0.1),
                 T=5.0, snapshot_every=5)
    assert np.all(result.trace.column("l2") <= C0)
    for _, field in result.snapshots:
        assert norm_l2(field) <= C0
        assert norm_l2(apply_laplacian(field)) <= C0
