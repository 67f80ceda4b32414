"""Shared fixtures: standard grids, matched radial profiles, parameter sets."""

import numpy as np
import pytest

from invsqwave import make_log_grid, RadialFunction, make_params

# standard resolved band used throughout: Gaussian-type data is fully
# contained and both transform directions stay on the grid
BAND = dict(r_min=1e-4, r_max=40.0, n=1400)

# the four (d, a) pairs exercised by the acceptance battery
PARAM_PAIRS = ((3, 1.0), (3, -0.2), (4, -1.0), (2, 4.0))


@pytest.fixture(scope="session")
def grid3():
    return make_log_grid(d=3, **BAND)


@pytest.fixture(scope="session")
def grid2():
    return make_log_grid(d=2, **BAND)


@pytest.fixture(scope="session")
def grid4():
    return make_log_grid(d=4, **BAND)


@pytest.fixture(scope="session")
def params31():
    return make_params(3, 1.0)


@pytest.fixture(scope="session")
def params30():
    return make_params(3, 0.0)


def gaussian(grid):
    return RadialFunction(grid=grid, values=np.exp(-grid.r ** 2 / 2.0))


def matched_profile(grid, order):
    """r^(order - lambda0) e^{-r^2/2}: self-reciprocal under the order-`order`
    transform, hence fully resolved on a finite band."""
    lam0 = (grid.d - 2) / 2.0
    return RadialFunction(
        grid=grid,
        values=grid.r ** (order - lam0) * np.exp(-grid.r ** 2 / 2.0))
