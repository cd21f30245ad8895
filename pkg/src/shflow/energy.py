"""Discrete energy functional, stabilization-parameter rules, and the
global-in-time bound calculators.

The energy splits as E = E_op + E_pot with

    E_op(u)  = 1/2 * ||(Delta + I) u||_2^2          (spectral quadrature)
    E_pot(u) = h^2 * sum(u^4/4 - eps*u^2/2)         (grid quadrature)

Both decrease along trajectories of every scheme in this package when the
stabilization constant is large enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .grid import RealField


class EnergyParts(NamedTuple):
    total: float
    operator: float
    potential: float


def energy(u: RealField, epsilon: float) -> EnergyParts:
    """Discrete free energy and its operator/potential split.

    Near a blow-up the quartic term can overflow to inf; that is reported
    in the result rather than warned about (the run loop aborts separately).
    """
    g = u.grid
    with np.errstate(over="ignore", invalid="ignore"):
        coeffs = np.fft.fft2(u.values) / g.N**2
        sym = (1.0 - g.lam) ** 2
        e_op = 0.5 * g.area * float(np.sum(sym * np.abs(coeffs) ** 2))
        v = u.values
        e_pot = float(g.h**2 * np.sum(0.25 * v**4 - 0.5 * epsilon * v**2))
    return EnergyParts(e_op + e_pot, e_op, e_pot)


def kappa_rule(beta: float, epsilon: float) -> float:
    """Stabilization constant max(max_{|s|<=beta} |3 s^2 - eps| / 2, 1).

    The inner maximum is attained at s = 0 or |s| = beta, so it reduces to
    max(|3 beta^2 - eps|, eps) / 2 in closed form.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return max(max(abs(3.0 * beta**2 - epsilon), epsilon) / 2.0, 1.0)


@dataclass(frozen=True)
class StabilityBounds:
    """Global-in-time constants derived from the initial energy.

    C0 bounds ||u||_2 and ||Delta u||_2 whenever E(u) <= C_e; the C-tilde
    chain bounds ||.||_inf at the three stage levels (C2t >= C1t >= C0t);
    kappa follows from the sup-norm rule at beta = C2t, and tau_max is the
    O(1) step-size constraint under which dissipation is unconditional.
    """

    C_e: float
    area: float
    C_hat: float
    epsilon: float
    C0: float = field(init=False)
    C0t: float = field(init=False)
    C1t: float = field(init=False)
    C2t: float = field(init=False)
    kappa: float = field(init=False)
    tau_max: float = field(init=False)

    def __post_init__(self) -> None:
        if self.area <= 0:
            raise ValueError("domain area must be positive")
        if self.C_hat <= 0:
            raise ValueError("the Sobolev constant must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.C_e + self.area <= 0:
            raise ValueError("initial energy bound must satisfy C_e + area > 0")
        C0 = 2.0 * math.sqrt(self.C_e + self.area)
        C0t = 2.0 * self.C_hat * C0
        C1t = 2.0 * math.sqrt(2.0) * self.C_hat * C0
        C2t = 2.0 * math.sqrt(3.0) * self.C_hat * C0
        kappa = kappa_rule(C2t, self.epsilon)
        tau_max = min(
            1.0 / 256.0,
            C1t**-4 / 64.0,
            (64.0 * kappa) ** -0.5,
            0.25 * C0t**-2 * kappa**-0.5,
        )
        for name, value in (
            ("C0", C0), ("C0t", C0t), ("C1t", C1t), ("C2t", C2t),
            ("kappa", kappa), ("tau_max", tau_max),
        ):
            object.__setattr__(self, name, value)


def stability_bounds(E0: float, domain_area: float, C_hat: float, epsilon: float) -> StabilityBounds:
    """Bound chain and step-size constraint from initial energy E0."""
    return StabilityBounds(float(E0), float(domain_area), float(C_hat), float(epsilon))


TRACE_COLUMNS = ("step", "t", "E", "Ec", "Ee", "l2", "linf")


class EnergyTrace:
    """Append-only time series of (t, E, Ec, Ee, l2, linf) samples.

    Also tracks the running maximum of the sup norm over all RK stages
    seen so far (``stage_linf_max``); the stabilization constant is not
    adapted mid-run, this is diagnostic only.
    """

    def __init__(self, scheme: str = "", config: dict | None = None):
        self.scheme = scheme
        self.config = dict(config or {})
        self.steps: list[int] = []
        self.samples: list[tuple[float, float, float, float, float, float]] = []
        self.stage_linf_max = 0.0

    def append(self, step: int, t: float, parts: EnergyParts, l2: float, linf: float) -> None:
        if self.samples and t <= self.samples[-1][0]:
            raise ValueError("trace times must be strictly increasing")
        self.steps.append(step)
        self.samples.append((t, parts.total, parts.operator, parts.potential, l2, linf))

    def __len__(self) -> int:
        return len(self.samples)

    def column(self, name: str) -> np.ndarray:
        if name == "step":
            return np.asarray(self.steps, dtype=np.int64)
        idx = {"t": 0, "E": 1, "Ec": 2, "Ee": 3, "l2": 4, "linf": 5}[name]
        return np.asarray([s[idx] for s in self.samples])

    def rows(self):
        for step, sample in zip(self.steps, self.samples):
            yield (step, *sample)


@dataclass(frozen=True)
class MonotoneViolation:
    index: int
    t: float
    previous: float
    current: float

    @property
    def jump(self) -> float:
        return self.current - self.previous


@dataclass(frozen=True)
class MonotoneReport:
    violations: tuple[MonotoneViolation, ...]
    rel_tol: float
    n_samples: int
    worst_jump: float

    @property
    def dissipative(self) -> bool:
        return not self.violations


def check_monotone(trace: EnergyTrace, rel_tol: float = 1e-10) -> MonotoneReport:
    """Flag every sample where the energy rises by more than rel_tol*max(1, |E|)."""
    if len(trace) < 2:
        raise ValueError("monotonicity check needs at least two samples")
    E = trace.column("E")
    t = trace.column("t")
    jumps = E[1:] - E[:-1]
    allowed = rel_tol * np.maximum(1.0, np.abs(E[:-1]))
    bad = np.nonzero(jumps > allowed)[0]
    violations = tuple(
        MonotoneViolation(int(i + 1), float(t[i + 1]), float(E[i]), float(E[i + 1])) for i in bad
    )
    return MonotoneReport(violations, rel_tol, len(trace), float(np.max(jumps)))
