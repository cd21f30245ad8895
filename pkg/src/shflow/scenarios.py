"""Built-in experiment scenarios and their initial data.

Three canonical setups ship with the solver: a smooth convergence test on
[0,32]^2, a pattern-formation energy test on [0,100]^2, and polycrystal
growth in a supercooled liquid on [0,500]^2 seeded by three perturbed
nuclei.  ``custom`` provides a seeded band-limited random start for ad-hoc
experiments.  Desk presets cap runtime at minutes; paper presets carry the
published resolutions and horizons.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from .energy import kappa_rule
from .grid import Grid, RealField
from .schemes import SCHEMES

SCENARIOS = ("convergence", "energy_stability", "polycrystal", "custom")

RNG_NAME = "philox4x64"  # counter-based, reproducible across platforms

# polycrystal nuclei: (center_x, center_y, perturbation amplitude), side 10
NUCLEI = ((375.0, 125.0, 0.1), (375.0, 375.0, 0.2), (125.0, 250.0, 0.4))
NUCLEUS_SIDE = 10.0
POLY_BACKGROUND = 0.287


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


@dataclass(frozen=True)
class ScenarioConfig:
    """Resolved run description; round-trips through ``to_dict``."""

    scenario: str
    L: float
    N: int
    epsilon: float
    kappa: float | str  # number, or "auto" to apply the sup-norm rule at beta
    tau: float
    T: float
    scheme: str = "erk22"
    c1: float = 0.5
    beta: float = 1.0
    snapshot_every: int = 0
    trace_every: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if isinstance(self.kappa, str) and self.kappa != "auto":
            raise ValueError("kappa must be a number or 'auto'")
        if self.T < 0 or self.tau <= 0:
            raise ValueError("need T >= 0 and tau > 0")

    def resolved_kappa(self) -> float:
        if self.kappa == "auto":
            return kappa_rule(self.beta, self.epsilon)
        return float(self.kappa)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        return cls(**data)


_DESK = {
    "convergence": dict(scenario="convergence", L=32.0, N=64, epsilon=0.25, kappa=2.0,
                        tau=0.125, T=5.0),
    "energy_stability": dict(scenario="energy_stability", L=100.0, N=128, epsilon=0.25,
                             kappa=2.0, tau=0.1, T=20.0),
    "polycrystal": dict(scenario="polycrystal", L=500.0, N=256, epsilon=0.25, kappa=2.0,
                        tau=0.5, T=20.0, snapshot_every=10),
    "custom": dict(scenario="custom", L=32.0, N=64, epsilon=0.25, kappa=2.0, tau=0.1, T=1.0),
}

_PAPER = {
    "convergence": dict(scenario="convergence", L=32.0, N=256, epsilon=0.25, kappa=2.0,
                        tau=0.125, T=5.0),
    "energy_stability": dict(scenario="energy_stability", L=100.0, N=256, epsilon=0.25,
                             kappa=2.0, tau=0.1, T=100.0),
    "polycrystal": dict(scenario="polycrystal", L=500.0, N=512, epsilon=0.25, kappa=2.0,
                        tau=0.5, T=160.0, snapshot_every=32),
    "custom": dict(scenario="custom", L=32.0, N=256, epsilon=0.25, kappa=2.0, tau=0.1, T=1.0),
}


def preset(scenario: str, mode: str = "desk") -> ScenarioConfig:
    """Shipping configurations; ``desk`` runs in minutes on a laptop."""
    table = {"desk": _DESK, "paper": _PAPER}.get(mode)
    if table is None:
        raise ValueError(f"unknown preset mode {mode!r}; expected 'desk' or 'paper'")
    if scenario not in table:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    return ScenarioConfig(**table[scenario])


def initial_data(scenario: str, grid: Grid, seed: int = 0) -> RealField:
    """Initial field for a scenario, exact to the published formulas."""
    X, Y = grid.coords()
    if scenario == "convergence":
        values = 0.01 * (
            np.cos(np.pi * X) + np.cos(np.pi * Y)
            + np.cos(0.25 * np.pi * X) + np.cos(0.25 * np.pi * Y)
        )
    elif scenario == "energy_stability":
        values = (
            0.1
            + 0.02 * np.cos(np.pi * X / 100.0) * np.sin(np.pi * Y / 100.0)
            + 0.05 * np.sin(np.pi * X / 20.0) * np.cos(np.pi * Y / 20.0)
        )
    elif scenario == "polycrystal":
        # uniform draws on [-1, 1] for the whole grid, applied inside the
        # three square nuclei only; the background stays exactly constant
        rand = rng_from_seed(seed).uniform(-1.0, 1.0, size=grid.shape)
        values = np.full(grid.shape, POLY_BACKGROUND)
        half = NUCLEUS_SIDE / 2.0
        for cx, cy, alpha in NUCLEI:
            mask = (np.abs(X - cx) <= half) & (np.abs(Y - cy) <= half)
            values = np.where(mask, POLY_BACKGROUND + alpha * rand, values)
    elif scenario == "custom":
        # seeded band-limited noise at modest amplitude
        cutoff = max(2, grid.N // 8)
        keep = (np.abs(grid.kx) <= cutoff) & (np.abs(grid.ky) <= cutoff)
        coeffs = np.fft.fft2(rng_from_seed(seed).standard_normal(grid.shape)) * keep
        raw = np.fft.ifft2(coeffs).real
        values = 0.1 * raw / max(raw.std(), 1e-300)
    else:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    return RealField(grid, values)


def with_overrides(config: ScenarioConfig, **overrides) -> ScenarioConfig:
    """Functional update that re-runs validation."""
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})
