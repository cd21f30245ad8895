"""Time-stepping integrators for the stabilized split

    du/dt = -L_kappa u + N_kappa(u),
    L_kappa = (Delta + I)^2 + kappa I,   N_kappa(u) = (kappa + eps) u - u^3.

Every scheme advances the same split; the nonlinear term is evaluated
pointwise on the collocation grid with no dealiasing.  Linear algebra is
diagonal in Fourier space, so a step costs a handful of FFTs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .energy import EnergyTrace, energy
from .grid import Grid, RealField, norm_l2, norm_linf
from .operators import phi

SCHEMES = ("erk22", "erk_general", "etd1", "etdrk2", "imex1", "imexrk22")
_EXPONENTIAL = frozenset({"erk22", "erk_general", "etd1", "etdrk2"})

# Ascher-Ruuth-Spiteri (2,2,2) pair: gamma is the smaller root of
# g^2 - 2g + 1/2 = 0.  The larger root is also L-stable but loses
# observable temporal order on stiff problems.
IMEX_GAMMA = (2.0 - math.sqrt(2.0)) / 2.0
IMEX_DELTA = 1.0 - 1.0 / (2.0 * IMEX_GAMMA)


class BlowUpError(RuntimeError):
    """Non-finite values appeared in the solution."""

    def __init__(self, message: str, step_index: int | None = None, t: float | None = None):
        super().__init__(message)
        self.step_index = step_index
        self.t = t


@dataclass(frozen=True)
class SchemeConfig:
    """Scheme identity plus the parameters every stepper needs.

    ``c1`` is the free stage fraction of the one-parameter exponential
    family and is only read by ``erk_general``.  ``nonlinear=False`` is a
    test hook that zeroes N_kappa, turning every exponential scheme into
    the exact semigroup and the IMEX schemes into their resolvents.
    """

    scheme: str
    kappa: float
    epsilon: float
    tau: float
    c1: float = 0.5
    nonlinear: bool = True

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.tau <= 0 or not np.isfinite(self.tau):
            raise ValueError("tau must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.scheme in _EXPONENTIAL:
            if self.kappa <= 0:
                raise ValueError("exponential schemes need kappa > 0")
        elif self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        if self.scheme == "erk_general" and not 0.0 < self.c1 <= 1.0:
            raise ValueError("c1 must lie in (0, 1]")


@dataclass(frozen=True, eq=False)
class SimState:
    """Solution snapshot; t always equals step_index * tau.

    ``uhat`` optionally caches ``np.fft.fft2(u.values)`` so the next step
    can skip one transform; steppers populate it and tolerate ``None``.
    """

    t: float
    step_index: int
    u: RealField
    uhat: np.ndarray | None = None


def n_kappa(u: RealField, kappa: float, epsilon: float) -> RealField:
    """Stabilized nonlinearity (kappa + eps) u - u^3, pointwise."""
    v = u.values
    return RealField(u.grid, (kappa + epsilon) * v - v**3)


class Stepper:
    """One-step integrator bound to a grid and a config.

    ``last_stage_linf`` holds the sup norm of the internal RK stages of the
    most recent step (the input and output states are tracked by the
    caller).
    """

    def __init__(self, grid: Grid, config: SchemeConfig):
        self.grid = grid
        self.config = config
        self.last_stage_linf = 0.0
        tau, kappa = config.tau, config.kappa
        Lambda = (grid.lam - 1.0) ** 2 + kappa
        self.Lambda = Lambda
        c = kappa + config.epsilon
        if config.nonlinear:
            self._n = lambda v: c * v - v**3
        else:
            self._n = lambda v: np.zeros_like(v)
        self._prepare(Lambda, tau)

    def _prepare(self, Lambda: np.ndarray, tau: float) -> None:
        raise NotImplementedError

    def _advance(self, v: np.ndarray, vh: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
        """Advance raw values one step; returns (values, their spectrum)."""
        raise NotImplementedError

    def step(self, state: SimState) -> SimState:
        # overflow is legitimate here: it is reported as a blow-up below
        with np.errstate(over="ignore", invalid="ignore"):
            out, out_hat = self._advance(state.u.values, state.uhat)
        if not np.all(np.isfinite(out)):
            raise BlowUpError(
                f"{self.config.scheme} produced non-finite values (tau={self.config.tau})"
            )
        step_index = state.step_index + 1
        return SimState(
            step_index * self.config.tau, step_index, RealField(self.grid, out), out_hat
        )

    # shorthands: forward/backward transforms on raw values
    @staticmethod
    def _fft(v):
        return np.fft.fft2(v)

    @staticmethod
    def _ifft(vh):
        return np.fft.ifft2(vh).real


class _ERK22(Stepper):
    def _prepare(self, Lambda, tau):
        self.E_half = np.exp(-0.5 * tau * Lambda)
        self.P_half = 0.5 * tau * phi(1, 0.5 * tau * Lambda)
        self.E_full = np.exp(-tau * Lambda)
        self.P_full = tau * phi(1, tau * Lambda)

    def _advance(self, v, vh):
        if vh is None:
            vh = self._fft(v)
        nh = self._fft(self._n(v))
        u1 = self._ifft(self.E_half * vh + self.P_half * nh)
        self.last_stage_linf = float(np.max(np.abs(u1)))
        n1h = self._fft(self._n(u1))
        out_hat = self.E_full * vh + self.P_full * n1h
        return self._ifft(out_hat), out_hat


class _ERKGeneral(Stepper):
    def _prepare(self, Lambda, tau):
        c1 = self.config.c1
        self.E_stage = np.exp(-c1 * tau * Lambda)
        self.P_stage = c1 * tau * phi(1, c1 * tau * Lambda)
        self.E_full = np.exp(-tau * Lambda)
        phi1_full = tau * phi(1, tau * Lambda)
        self.W0 = (1.0 - 0.5 / c1) * phi1_full
        self.W1 = (0.5 / c1) * phi1_full

    def _advance(self, v, vh):
        if vh is None:
            vh = self._fft(v)
        nh = self._fft(self._n(v))
        u1 = self._ifft(self.E_stage * vh + self.P_stage * nh)
        self.last_stage_linf = float(np.max(np.abs(u1)))
        n1h = self._fft(self._n(u1))
        out_hat = self.E_full * vh + self.W0 * nh + self.W1 * n1h
        return self._ifft(out_hat), out_hat


class _ETD1(Stepper):
    def _prepare(self, Lambda, tau):
        self.E_full = np.exp(-tau * Lambda)
        self.P_full = tau * phi(1, tau * Lambda)

    def _advance(self, v, vh):
        self.last_stage_linf = 0.0
        if vh is None:
            vh = self._fft(v)
        nh = self._fft(self._n(v))
        out_hat = self.E_full * vh + self.P_full * nh
        return self._ifft(out_hat), out_hat


class _ETDRK2(Stepper):
    def _prepare(self, Lambda, tau):
        self.E_full = np.exp(-tau * Lambda)
        z = tau * Lambda
        self.P1 = tau * phi(1, z)
        self.P2 = tau * phi(2, z)

    def _advance(self, v, vh):
        if vh is None:
            vh = self._fft(v)
        nh = self._fft(self._n(v))
        a1 = self._ifft(self.E_full * vh + self.P1 * nh)
        self.last_stage_linf = float(np.max(np.abs(a1)))
        n1h = self._fft(self._n(a1))
        out_hat = self.E_full * vh + (self.P1 - self.P2) * nh + self.P2 * n1h
        return self._ifft(out_hat), out_hat


class _IMEX1(Stepper):
    def _prepare(self, Lambda, tau):
        self.R = 1.0 / (1.0 + tau * Lambda)

    def _advance(self, v, vh):
        self.last_stage_linf = 0.0
        if vh is None:
            vh = self._fft(v)
        nh = self._fft(self._n(v))
        out_hat = self.R * (vh + self.config.tau * nh)
        return self._ifft(out_hat), out_hat


class _IMEXRK22(Stepper):
    def _prepare(self, Lambda, tau):
        self.R = 1.0 / (1.0 + IMEX_GAMMA * tau * Lambda)
        self.tau_Lambda = tau * Lambda

    def _advance(self, v, vh):
        tau = self.config.tau
        if vh is None:
            vh = self._fft(v)
        nh = self._fft(self._n(v))
        u2h = self.R * (vh + IMEX_GAMMA * tau * nh)
        u2 = self._ifft(u2h)
        self.last_stage_linf = float(np.max(np.abs(u2)))
        n2h = self._fft(self._n(u2))
        rhs = vh - (1.0 - IMEX_GAMMA) * self.tau_Lambda * u2h \
            + tau * (IMEX_DELTA * nh + (1.0 - IMEX_DELTA) * n2h)
        out_hat = self.R * rhs
        return self._ifft(out_hat), out_hat


_STEPPERS = {
    "erk22": _ERK22,
    "erk_general": _ERKGeneral,
    "etd1": _ETD1,
    "etdrk2": _ETDRK2,
    "imex1": _IMEX1,
    "imexrk22": _IMEXRK22,
}


@lru_cache(maxsize=64)
def make_stepper(grid: Grid, config: SchemeConfig) -> Stepper:
    return _STEPPERS[config.scheme](grid, config)


def step_erk22(state: SimState, config: SchemeConfig) -> SimState:
    return make_stepper(state.u.grid, replace(config, scheme="erk22")).step(state)


def step_erk_general(state: SimState, config: SchemeConfig) -> SimState:
    return make_stepper(state.u.grid, replace(config, scheme="erk_general")).step(state)


def step_etd1(state: SimState, config: SchemeConfig) -> SimState:
    return make_stepper(state.u.grid, replace(config, scheme="etd1")).step(state)


def step_etdrk2(state: SimState, config: SchemeConfig) -> SimState:
    return make_stepper(state.u.grid, replace(config, scheme="etdrk2")).step(state)


def step_imex1(state: SimState, config: SchemeConfig) -> SimState:
    return make_stepper(state.u.grid, replace(config, scheme="imex1")).step(state)


def step_imexrk22(state: SimState, config: SchemeConfig) -> SimState:
    return make_stepper(state.u.grid, replace(config, scheme="imexrk22")).step(state)


def num_steps(T: float, tau: float) -> int:
    """ceil(T/tau) with a guard against one-ulp overshoot of exact ratios."""
    if T < 0:
        raise ValueError("final time must be nonnegative")
    return max(0, math.ceil(T / tau - 1e-12))


@dataclass
class RunResult:
    state: SimState
    trace: EnergyTrace
    snapshots: list[tuple[float, RealField]]


def run(
    initial: RealField,
    config: SchemeConfig,
    T: float,
    *,
    trace_every: int = 1,
    snapshot_every: int = 0,
) -> RunResult:
    """Advance ceil(T/tau) steps, sampling the energy trace every
    ``trace_every`` steps (initial and final samples always included) and
    keeping field snapshots every ``snapshot_every`` steps when positive.

    Deterministic: identical inputs give bit-identical traces.  Blow-up
    aborts with the offending step index attached.
    """
    if trace_every < 1:
        raise ValueError("trace cadence must be at least one step")
    # private stepper: concurrent runs must not share stage diagnostics
    stepper = _STEPPERS[config.scheme](initial.grid, config)
    n_steps = num_steps(T, config.tau)
    trace = EnergyTrace(scheme=config.scheme, config={
        "kappa": config.kappa, "epsilon": config.epsilon, "tau": config.tau,
        "c1": config.c1, "nonlinear": config.nonlinear, "T": T,
    })
    state = SimState(0.0, 0, initial)

    def record(s: SimState) -> None:
        parts = energy(s.u, config.epsilon)
        trace.append(s.step_index, s.t, parts, norm_l2(s.u), norm_linf(s.u))

    record(state)
    trace.stage_linf_max = norm_linf(initial)
    snapshots: list[tuple[float, RealField]] = []
    if snapshot_every > 0:
        snapshots.append((0.0, initial))
    for n in range(1, n_steps + 1):
        try:
            state = stepper.step(state)
        except BlowUpError as err:
            err.step_index = n
            err.t = n * config.tau
            raise
        trace.stage_linf_max = max(
            trace.stage_linf_max, stepper.last_stage_linf, norm_linf(state.u)
        )
        if n % trace_every == 0 or n == n_steps:
            record(state)
        if snapshot_every > 0 and (n % snapshot_every == 0 or n == n_steps):
            snapshots.append((state.t, state.u))
    return RunResult(state, trace, snapshots)
