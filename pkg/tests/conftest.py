import numpy as np
import pytest

from shflow.grid import Grid, RealField


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=20240901))


def random_field(grid: Grid, rng: np.random.Generator, *, nyquist_free: bool = False) -> RealField:
    """White random field; optionally projected off the Nyquist row/column.

    The gradient zeroes the first-derivative symbol at the Nyquist mode
    (even N), so identities that pair the gradient with the full Laplacian
    only hold on the Nyquist-free subspace.
    """
    values = rng.standard_normal(grid.shape)
    if nyquist_free and grid.N % 2 == 0:
        coeffs = np.fft.fft2(values)
        coeffs[grid.N // 2, :] = 0.0
        coeffs[:, grid.N // 2] = 0.0
        values = np.fft.ifft2(coeffs).real
    return RealField(grid, values)


@pytest.fixture
def grid8():
    return Grid(2 * np.pi, 8)


@pytest.fixture
def grid16():
    return Grid(2 * np.pi, 16)
