"""Translation and spherical convolutions evaluated in harmonic space.

The sifting convolution and the translation are mode-wise products and cost
O(L^2). The isotropic and left convolutions are also products but need an
axisymmetric kernel. The directional and commutative anisotropic
convolutions are evaluated directly from their Wigner expansions (O(L^3)
per output colatitude); no fast SO(3) algorithm is attempted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import AxisymmetryError, BandlimitMismatchError
from .rotation import wigner_d_blocks
from .sht import (
    GridSignal,
    HarmonicCoefficients,
    SphereGrid,
    SpherePoint,
    TWO_PI,
    degrees_orders,
    flat_index,
    make_grid,
    ylm_all,
)

__all__ = [
    "SO3Signal",
    "AXISYMMETRY_TOL",
    "check_axisymmetric",
    "translate",
    "sift_convolve",
    "isotropic_convolve",
    "left_convolve",
    "directional_convolve",
    "default_so3_angles",
    "commutative_anisotropic_convolve",
    "conj_commutativity_check",
]

AXISYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SO3Signal:
    """Samples over a product grid of Euler angles, ``values[i, j, k]`` at ``(alphas[i], betas[j], gammas[k])``."""

    alphas: np.ndarray
    betas: np.ndarray
    gammas: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        shape = (len(self.alphas), len(self.betas), len(self.gammas))
        if np.shape(self.values) != shape:
            raise ValueError(f"values of shape {np.shape(self.values)} do not match angle grid {shape}")

    def table(self) -> np.ndarray:
        """Flat ``(alpha, beta, gamma, re, im)`` rows, alpha-major."""
        a, b, g = np.meshgrid(self.alphas, self.betas, self.gammas, indexing="ij")
        v = self.values
        return np.column_stack([a.ravel(), b.ravel(), g.ravel(), v.real.ravel(), v.imag.ravel()])


def _matched(f: HarmonicCoefficients, g: HarmonicCoefficients, pad: bool):
    if f.bandlimit == g.bandlimit:
        return f, g
    if not pad:
        raise BandlimitMismatchError(
            f"bandlimits differ ({f.bandlimit} vs {g.bandlimit}); pass pad=True to zero-pad the smaller"
        )
    L = max(f.bandlimit, g.bandlimit)
    return f.padded(L), g.padded(L)


def check_axisymmetric(g: HarmonicCoefficients, tol: float = AXISYMMETRY_TOL) -> None:
    ell, m = degrees_orders(g.bandlimit)
    off = np.where(m != 0, np.abs(g.values), 0.0)
    worst = int(np.argmax(off)) if off.size else 0
    if off.size and off[worst] >= tol:
        raise AxisymmetryError(int(ell[worst]), int(m[worst]), float(off[worst]))


def translate(f: HarmonicCoefficients, p: SpherePoint) -> HarmonicCoefficients:
    """Harmonic translation to ``p``: ``f_lm * Y_lm(p)``."""
    return f.replace(f.values * ylm_all(f.bandlimit, p.theta, p.phi))


def sift_convolve(f: HarmonicCoefficients, g: HarmonicCoefficients, pad: bool = False) -> HarmonicCoefficients:
    """Sifting convolution, ``f_lm * conj(g_lm)``.

    In real space this is the inner product of ``g`` with ``f`` translated to
    each output point. Swapping the operands conjugates the spectrum.
    """
    f, g = _matched(f, g, pad)
    return f.replace(f.values * np.conj(g.values))


def _axisymmetric_profile(f, g, pad):
    f, g = _matched(f, g, pad)
    check_axisymmetric(g)
    ell, _ = degrees_orders(f.bandlimit)
    g0 = g.values[flat_index(ell, 0)]
    return f, np.sqrt(4.0 * math.pi / (2.0 * ell + 1.0)), g0


def isotropic_convolve(f: HarmonicCoefficients, g: HarmonicCoefficients, pad: bool = False) -> HarmonicCoefficients:
    """``sqrt(4pi/(2l+1)) f_lm conj(g_l0)``; ``g`` must be axisymmetric."""
    f, scale, g0 = _axisymmetric_profile(f, g, pad)
    return f.replace(scale * f.values * np.conj(g0))


def left_convolve(f: HarmonicCoefficients, g: HarmonicCoefficients, pad: bool = False) -> HarmonicCoefficients:
    """``2pi sqrt(4pi/(2l+1)) f_lm g_l0``; ``g`` must be axisymmetric.

    Unlike the isotropic convolution the kernel is not conjugated.
    """
    f, scale, g0 = _axisymmetric_profile(f, g, pad)
    return f.replace(TWO_PI * scale * f.values * g0)


def default_so3_angles(bandlimit: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``2L-1`` uniform alphas, the ``L`` Gauss-Legendre colatitudes as betas, ``2L-1`` uniform gammas."""
    grid = make_grid(bandlimit)
    return grid.phis, grid.thetas.copy(), grid.phis


def _padded_rows(f: HarmonicCoefficients) -> np.ndarray:
    """``rows[l, m + L - 1] = f_lm``, zero where ``|m| > l``."""
    L = f.bandlimit
    rows = np.zeros((L, 2 * L - 1), dtype=np.complex128)
    ell, m = degrees_orders(L)
    rows[ell, m + L - 1] = f.values
    return rows


def _wigner_sum(f_rows: np.ndarray, g_rows: np.ndarray, beta: float) -> np.ndarray:
    """``sum_l f_rows[l, m] d^l_{mm'}(beta) g_rows[l, m']`` over the padded order plane."""
    lmax = f_rows.shape[0] - 1
    acc = np.zeros((2 * lmax + 1, 2 * lmax + 1), dtype=np.complex128)
    for ell, d in wigner_d_blocks(lmax, beta):
        acc += f_rows[ell][:, None] * d * g_rows[ell][None, :]
    return acc


def directional_convolve(
    f: HarmonicCoefficients,
    g: HarmonicCoefficients,
    alphas=None,
    betas=None,
    gammas=None,
    pad: bool = False,
) -> SO3Signal:
    """Directional convolution ``<f, R_rho g>`` sampled on an Euler-angle grid.

    Evaluated directly: for every beta the Wigner sum collapses to an order
    matrix, which is then contracted against the alpha and gamma phases.
    """
    f, g = _matched(f, g, pad)
    L = f.bandlimit
    da, db, dg = default_so3_angles(L)
    alphas = da if alphas is None else np.atleast_1d(np.asarray(alphas, dtype=float))
    betas = db if betas is None else np.atleast_1d(np.asarray(betas, dtype=float))
    gammas = dg if gammas is None else np.atleast_1d(np.asarray(gammas, dtype=float))
    if alphas.size == 0 or betas.size == 0 or gammas.size == 0:
        raise ValueError("Euler-angle sample arrays must be non-empty")
    ms = np.arange(-(L - 1), L)
    f_rows = _padded_rows(f)
    g_rows = np.conj(_padded_rows(g))
    e_alpha = np.exp(1j * np.outer(alphas, ms))
    e_gamma = np.exp(1j * np.outer(gammas, ms))
    values = np.empty((alphas.size, betas.size, gammas.size), dtype=np.complex128)
    for j, beta in enumerate(betas):
        M = _wigner_sum(f_rows, g_rows, float(beta))
        values[:, j, :] = e_alpha @ M @ e_gamma.T
    return SO3Signal(alphas, betas, gammas, values)


def commutative_anisotropic_convolve(
    f: HarmonicCoefficients,
    g: HarmonicCoefficients,
    grid: SphereGrid | None = None,
    pad: bool = False,
) -> GridSignal:
    """Commutative anisotropic convolution evaluated on a sphere grid.

    At ``w = (theta, phi)`` the value is the integral of
    ``(R_(phi, theta, pi - phi) f) * g``, with no conjugate on ``g``. That
    rotation is its own inverse, so the result does not depend on operand
    order. In harmonic space ``g`` enters as ``(-1)**m g_l(-m)``, which is
    ``conj(g_lm)`` when ``g`` is a real field.
    """
    f, g = _matched(f, g, pad)
    L = f.bandlimit
    if grid is None:
        grid = make_grid(L)
    ms = np.arange(-(L - 1), L)
    sign = (-1.0) ** (ms % 2)
    # exp(-i m' (pi - phi)) = (-1)^m' exp(i m' phi); the phi parts combine below
    f_rows = _padded_rows(f) * sign
    # integral of Y_lm g over the sphere
    g_rows = _padded_rows(g)[:, ::-1] * sign
    # diagonal k = m - m' carries exp(-i k phi)
    diff = (ms[:, None] - ms[None, :]).ravel() + 2 * (L - 1)
    ks = np.arange(-2 * (L - 1), 2 * (L - 1) + 1)
    phase = np.exp(-1j * np.outer(grid.phis, ks))
    samples = np.empty(grid.shape, dtype=np.complex128)
    for j, theta in enumerate(grid.thetas):
        A = _wigner_sum(g_rows, f_rows, float(theta))
        c = np.bincount(diff, weights=A.real.ravel(), minlength=ks.size) + 1j * np.bincount(
            diff, weights=A.imag.ravel(), minlength=ks.size
        )
        samples[j] = phase @ c
    return GridSignal(grid, samples)


def conj_commutativity_check(f: HarmonicCoefficients, g: HarmonicCoefficients) -> float:
    """``max |(g sift f)_lm - conj((f sift g)_lm)|``, zero up to rounding."""
    return float(np.max(np.abs(sift_convolve(g, f).values - np.conj(sift_convolve(f, g).values))))
