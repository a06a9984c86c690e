"""Shared fixtures and independent oracles.

The oracles evaluate spherical harmonics with scipy rather than the package's
own recursion, and rotate functions by rotating sample points in 3-D.
"""

import math

import numpy as np
import pytest
from scipy.special import sph_harm_y

from siftsphere import GridSignal, HarmonicCoefficients
from siftsphere.rotation import rotation_matrix
from siftsphere.sht import degrees_orders


@pytest.fixture
def rng():
    return np.random.default_rng(20200323)


def random_coeffs(rng, L, real=False):
    values = rng.standard_normal(L * L) + 1j * rng.standard_normal(L * L)
    f = HarmonicCoefficients(L, values)
    if real:
        from siftsphere import enforce_reality

        f = enforce_reality(f)
    return f


def scipy_ylm_matrix(L, theta, phi):
    """``Y[..., k]`` for every flat mode ``k`` via scipy."""
    theta = np.asarray(theta, dtype=float)[..., None]
    phi = np.asarray(phi, dtype=float)[..., None]
    ell, m = degrees_orders(L)
    return sph_harm_y(ell, m, theta, phi)


def scipy_synthesize(f, theta, phi):
    return scipy_ylm_matrix(f.bandlimit, theta, phi) @ f.values


def rotated_preimage(rho, theta, phi):
    """Angles of ``R^-1 w`` for each ``w = (theta, phi)``, pole-safe."""
    R = rotation_matrix(rho.alpha, rho.beta, rho.gamma)
    st = np.sin(theta)
    v = np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)
    u = v @ R  # rows of R^T v
    t = np.arctan2(np.hypot(u[..., 0], u[..., 1]), u[..., 2])
    p = np.arctan2(u[..., 1], u[..., 0])
    return t, p


def real_space_rotated(f, rho, grid):
    """Samples of ``(R_rho f)(w) = f(R^-1 w)`` on ``grid``."""
    theta, phi = grid.points()
    t, p = rotated_preimage(rho, theta, phi)
    return GridSignal(grid, scipy_synthesize(f, t, p))


def quadrature(grid, a, b):
    """Integral of ``a * conj(b)`` for sample arrays on ``grid``."""
    rows = np.sum(a * np.conj(b), axis=1)
    return np.dot(grid.weights, rows) * (2.0 * math.pi / grid.n_phi)


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects one status line per acceptance criterion for the summary."""
    return request.config.stash.setdefault(ACCEPTANCE_LINES, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
