"""Periodic 2-D collocation grid, discrete Fourier transform pair, and
spectral differential operators.

All operators are diagonal in Fourier space.  The transform convention is
fixed so that a constant field ``c`` has the single coefficient
``coeffs[0, 0] == c``: physical values are recovered as

    f[p, q] = sum_{l,m} coeffs[l, m] * exp(2*pi*1j*(l*p + m*q)/N),

i.e. ``coeffs = fft2(values) / N**2``.  Mode indices follow the numpy FFT
layout: index ``i`` along either axis holds integer wavenumber ``i`` for
``i < N/2`` and ``i - N`` for ``i >= N/2`` (even ``N``; the Nyquist mode is
stored at ``-N/2``).  Axis 0 is x, axis 1 is y, so ``values[p, q]`` sits at
the point ``(p*h, q*h)`` with ``h = L/N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class GridError(ValueError):
    """Invalid grid construction parameters."""


class GridMismatchError(GridError):
    """Fields from different grids were combined."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, L]^2 with N points per direction.

    Derived arrays (set once, then read-only):

    modes
        1-D integer wavenumbers in FFT layout.
    lam
        Laplacian eigenvalue magnitudes, lam[l, m] = (4 pi^2 / L^2)(l^2 + m^2).
    dx_symbol, dy_symbol
        First-derivative symbols i*(2 pi / L)*l per direction, with the
        Nyquist mode zeroed (standard real-transform convention; every
        solver operator has an even symbol, so only the gradient sees this).
    """

    L: float
    N: int

    def __post_init__(self) -> None:
        if not isinstance(self.N, (int, np.integer)) or self.N < 4:
            raise GridError(f"N must be an integer >= 4, got {self.N!r}")
        if not np.isfinite(self.L) or self.L <= 0:
            raise GridError(f"L must be positive and finite, got {self.L!r}")
        object.__setattr__(self, "h", self.L / self.N)

        modes = np.fft.fftfreq(self.N, d=1.0 / self.N).astype(np.int64)
        kx, ky = np.meshgrid(modes, modes, indexing="ij")
        lam = (4.0 * np.pi**2 / self.L**2) * (kx**2 + ky**2).astype(np.float64)

        scale = 2.0 * np.pi / self.L
        dx_modes = modes.astype(np.float64)
        if self.N % 2 == 0:
            dx_modes[self.N // 2] = 0.0  # Nyquist has no signed direction
        dx = 1j * scale * dx_modes
        for name, value in (
            ("modes", modes),
            ("kx", kx),
            ("ky", ky),
            ("lam", lam),
            ("dx_symbol", dx[:, None] * np.ones(self.N)[None, :]),
            ("dy_symbol", np.ones(self.N)[:, None] * dx[None, :]),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.N, self.N)

    @property
    def area(self) -> float:
        return self.L * self.L

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid (X, Y) of collocation points, X[p, q] = p*h."""
        x = self.h * np.arange(self.N)
        return np.meshgrid(x, x, indexing="ij")


def make_grid(L: float, N: int) -> Grid:
    """Build a periodic grid; rejects N < 4 and non-positive L."""
    return Grid(float(L), int(N))


@dataclass(frozen=True, eq=False)
class RealField:
    """Real-valued grid function on the N x N collocation points."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise GridError(f"field shape {v.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Complex Fourier coefficients of a grid function, FFT mode layout."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != self.grid.shape:
            raise GridError(f"coeffs shape {c.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "coeffs", c)


def _require_same_grid(*fields) -> Grid:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError(
                f"fields live on different grids: (L={grid.L}, N={grid.N}) vs (L={f.grid.L}, N={f.grid.N})"
            )
    return grid


def forward(f: RealField) -> SpectralField:
    """Forward transform; a constant field maps to coeffs[0, 0] alone."""
    coeffs = np.fft.fft2(f.values) / f.grid.N**2
    return SpectralField(f.grid, coeffs)


def inverse(F: SpectralField) -> RealField:
    """Inverse transform, discarding the rounding-level imaginary part."""
    values = (np.fft.ifft2(F.coeffs) * F.grid.N**2).real
    return RealField(F.grid, values)


def multiply_symbol(symbol: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Apply a diagonal Fourier-space operator to raw physical values."""
    return np.fft.ifft2(symbol * np.fft.fft2(values)).real


def apply_symbol(symbol: np.ndarray, f: RealField) -> RealField:
    """Apply a diagonal Fourier-space operator to a field."""
    return RealField(f.grid, multiply_symbol(symbol, f.values))


def apply_laplacian(f: RealField) -> RealField:
    return apply_symbol(-f.grid.lam, f)


def apply_gradient(f: RealField) -> tuple[RealField, RealField]:
    g = f.grid
    return apply_symbol(g.dx_symbol, f), apply_symbol(g.dy_symbol, f)


def apply_divergence(fx: RealField, fy: RealField) -> RealField:
    g = _require_same_grid(fx, fy)
    values = multiply_symbol(g.dx_symbol, fx.values) + multiply_symbol(g.dy_symbol, fy.values)
    return RealField(g, values)


def inner(f: RealField, g: RealField) -> float:
    """Discrete L2 inner product h^2 * sum(f*g)."""
    grid = _require_same_grid(f, g)
    return float(grid.h**2 * np.sum(f.values * g.values))


def norm_l2(f: RealField) -> float:
    return float(f.grid.h * np.linalg.norm(f.values))


def norm_linf(f: RealField) -> float:
    return float(np.max(np.abs(f.values)))
