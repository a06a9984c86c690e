"""Spherical harmonics, Gauss-Legendre sphere grids and exact transforms.

Coefficients are stored flat, ell-major, at index ``ell * (ell + 1) + m``::

    00,
    1-1, 10, 11,
    2-2, 2-1, 20, 21, 22,
    ...

Harmonics are orthonormal and carry the Condon-Shortley phase, so that
``conj(Y_lm) == (-1)**m * Y_l(-m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

__all__ = [
    "SpherePoint",
    "HarmonicCoefficients",
    "SphereGrid",
    "GridSignal",
    "flat_index",
    "unflatten_index",
    "degrees_orders",
    "legendre",
    "legendre_rows",
    "ylm",
    "ylm_all",
    "make_grid",
    "inverse_sht",
    "forward_sht",
    "inner_product",
    "synthesize_at",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpherePoint:
    """A point on the unit sphere, colatitude ``theta`` and longitude ``phi``."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        theta = float(self.theta)
        phi = float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError(f"non-finite point ({theta}, {phi})")
        if theta < 0.0 or theta > math.pi:
            raise ValueError(f"colatitude {theta} outside [0, pi]")
        phi = math.fmod(phi, TWO_PI)
        if phi < 0.0:
            phi += TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def to_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    @classmethod
    def from_vector(cls, v) -> "SpherePoint":
        x, y, z = np.asarray(v, dtype=float) / np.linalg.norm(v)
        return cls(math.atan2(math.hypot(x, y), z), math.atan2(y, x))


def flat_index(ell, m):
    """Flat position of mode ``(ell, m)``; works elementwise on arrays."""
    return ell * (ell + 1) + m


def unflatten_index(index):
    ell = np.floor(np.sqrt(np.asarray(index, dtype=float))).astype(int)
    m = np.asarray(index) - ell * (ell + 1)
    if ell.ndim == 0:
        return int(ell), int(m)
    return ell, m


def degrees_orders(bandlimit: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays of ``ell`` and ``m`` for every flat index below ``bandlimit**2``."""
    ell, m = unflatten_index(np.arange(bandlimit * bandlimit))
    return np.atleast_1d(ell), np.atleast_1d(m)


@dataclass(frozen=True, eq=False)
class HarmonicCoefficients:
    """Bandlimited complex spectrum, ``values[ell*(ell+1)+m] = f_lm``."""

    bandlimit: int
    values: np.ndarray

    def __post_init__(self) -> None:
        L = int(self.bandlimit)
        if L < 1:
            raise ValueError(f"bandlimit must be positive, got {self.bandlimit}")
        values = np.array(self.values, dtype=np.complex128).ravel()
        if values.size != L * L:
            raise ValueError(f"expected {L * L} coefficients for bandlimit {L}, got {values.size}")
        values.setflags(write=False)
        object.__setattr__(self, "bandlimit", L)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, bandlimit: int) -> "HarmonicCoefficients":
        return cls(bandlimit, np.zeros(bandlimit * bandlimit, dtype=np.complex128))

    @classmethod
    def from_function(cls, bandlimit: int, func) -> "HarmonicCoefficients":
        """Build coefficients from ``func(ell, m)`` evaluated on index arrays."""
        ell, m = degrees_orders(bandlimit)
        return cls(bandlimit, np.broadcast_to(func(ell, m), ell.shape))

    def __getitem__(self, lm: tuple[int, int]) -> complex:
        ell, m = lm
        if not (0 <= ell < self.bandlimit and abs(m) <= ell):
            raise IndexError(f"mode ({ell}, {m}) outside bandlimit {self.bandlimit}")
        return complex(self.values[flat_index(ell, m)])

    def __len__(self) -> int:
        return self.values.size

    def replace(self, values) -> "HarmonicCoefficients":
        return HarmonicCoefficients(self.bandlimit, values)

    def padded(self, bandlimit: int) -> "HarmonicCoefficients":
        """Zero-pad (or reject truncation) to a larger bandlimit."""
        if bandlimit < self.bandlimit:
            raise ValueError(f"cannot pad bandlimit {self.bandlimit} down to {bandlimit}")
        out = np.zeros(bandlimit * bandlimit, dtype=np.complex128)
        out[: self.values.size] = self.values
        return HarmonicCoefficients(bandlimit, out)

    def truncated(self, bandlimit: int) -> "HarmonicCoefficients":
        return HarmonicCoefficients(bandlimit, self.values[: bandlimit * bandlimit])

    def degree_power(self) -> np.ndarray:
        """``sum_m |f_lm|**2`` for each degree."""
        ell, _ = degrees_orders(self.bandlimit)
        return np.bincount(ell, weights=np.abs(self.values) ** 2, minlength=self.bandlimit)

    def is_conjugate_symmetric(self, atol: float = 1e-12) -> bool:
        """True when the spectrum is that of a real field."""
        ell, m = degrees_orders(self.bandlimit)
        partner = self.values[flat_index(ell, -m)]
        return bool(np.all(np.abs(np.conj(self.values) - (-1.0) ** m * partner) <= atol))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Gauss-Legendre colatitudes times ``n_phi`` uniform longitudes."""

    bandlimit: int
    thetas: np.ndarray
    weights: np.ndarray
    n_phi: int

    @property
    def phis(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_phi) / self.n_phi

    @property
    def shape(self) -> tuple[int, int]:
        return (self.thetas.size, self.n_phi)

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid ``(theta, phi)`` arrays of the sample shape."""
        return np.meshgrid(self.thetas, self.phis, indexing="ij")

    def compatible(self, other: "SphereGrid") -> bool:
        return (
            self.n_phi == other.n_phi
            and self.thetas.shape == other.thetas.shape
            and np.array_equal(self.thetas, other.thetas)
        )


@dataclass(frozen=True, eq=False)
class GridSignal:
    """Complex samples of a function on a :class:`SphereGrid`."""

    grid: SphereGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.shape != self.grid.shape:
            raise ValueError(f"samples of shape {samples.shape} do not match grid shape {self.grid.shape}")
        object.__setattr__(self, "samples", samples)


def _check_legendre_args(ell, m, x) -> None:
    if ell < 0 or m < 0 or m > ell:
        raise ValueError(f"need 0 <= m <= ell, got ell={ell}, m={m}")
    if np.any(np.abs(x) > 1.0):
        raise ValueError("legendre argument outside [-1, 1]")


def legendre_rows(lmax: int, x) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(ell, P)`` with ``P[m]`` the normalised Legendre values, ``0 <= m <= ell``.

    ``P[m]`` is the theta part of ``Y_lm`` (orthonormal, Condon-Shortley phase)
    at ``x = cos(theta)``. Diagonal terms come from the closed-form product in
    ``sin(theta)``; off-diagonal terms from the three-term recurrence in ell.
    Only the two previous degrees are kept in memory.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    diag = np.full(x.shape, 1.0 / math.sqrt(4.0 * math.pi))
    prev2 = None
    prev = diag[np.newaxis].copy()
    yield 0, prev
    for ell in range(1, lmax + 1):
        cur = np.empty((ell + 1,) + x.shape)
        if ell >= 2:
            m = np.arange(ell - 1).reshape((-1,) + (1,) * x.ndim)
            a = np.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
            b = np.sqrt(((ell - 1.0) ** 2 - m * m) / (4.0 * (ell - 1.0) ** 2 - 1.0))
            cur[: ell - 1] = a * (x * prev[: ell - 1] - b * prev2[: ell - 1])
        cur[ell - 1] = math.sqrt(2.0 * ell + 1.0) * x * prev[ell - 1]
        diag = -math.sqrt((2.0 * ell + 1.0) / (2.0 * ell)) * s * diag
        cur[ell] = diag
        prev2, prev = prev, cur
        yield ell, cur


def legendre(ell: int, m: int, x: float) -> float:
    """Normalised associated Legendre function (theta part of ``Y_lm``)."""
    _check_legendre_args(ell, m, x)
    for degree, row in legendre_rows(ell, float(x)):
        if degree == ell:
            return float(row[m])
    raise AssertionError("unreachable")


def ylm_all(bandlimit: int, theta, phi) -> np.ndarray:
    """All ``Y_lm`` up to ``bandlimit``; shape ``broadcast(theta, phi).shape + (L**2,)``."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    out = np.empty(theta.shape + (bandlimit * bandlimit,), dtype=np.complex128)
    for ell, row in legendre_rows(bandlimit - 1, np.cos(theta)):
        m = np.arange(ell + 1)
        pos = np.moveaxis(row, 0, -1) * np.exp(1j * phi[..., None] * m)
        out[..., flat_index(ell, m)] = pos
        out[..., flat_index(ell, -m[1:])] = (-1.0) ** m[1:] * np.conj(pos[..., 1:])
    return out


def ylm(ell: int, m: int, p: SpherePoint) -> complex:
    """Orthonormal spherical harmonic ``Y_lm`` at ``p``."""
    if ell < 0 or abs(m) > ell:
        raise ValueError(f"need |m| <= ell, got ell={ell}, m={m}")
    value = legendre(ell, abs(m), math.cos(p.theta)) * complex(math.cos(abs(m) * p.phi), math.sin(abs(m) * p.phi))
    if m < 0:
        value = (-1.0) ** m * value.conjugate()
    return value


def make_grid(bandlimit: int) -> SphereGrid:
    """Gauss-Legendre grid integrating products of two bandlimit-L signals exactly."""
    L = int(bandlimit)
    if L < 1:
        raise ValueError(f"bandlimit must be positive, got {bandlimit}")
    nodes, weights = _gauss_legendre(L)
    # north pole first
    return SphereGrid(L, np.arccos(nodes[::-1]).astype(float), weights[::-1].astype(float), 2 * L - 1)


def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    # numpy's weights lose ~1e-11 relative accuracy near x = +-1 at n ~ 128;
    # polish nodes and recompute weights in extended precision
    x = np.polynomial.legendre.leggauss(n)[0].astype(np.longdouble)

    def bonnet(x):
        p0, p1 = np.ones_like(x), x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        return p0, p1

    for _ in range(3):
        p0, p1 = bonnet(x)
        x = x - p1 * (1 - x) * (1 + x) / (n * (p0 - x * p1))
    p0, _ = bonnet(x)
    return x, 2 * (1 - x) * (1 + x) / (n * p0) ** 2


def _fourier_rows(f: HarmonicCoefficients, grid: SphereGrid) -> np.ndarray:
    """Per-colatitude azimuthal Fourier coefficients ``F[j, m mod n_phi]``."""
    L = f.bandlimit
    n = grid.n_phi
    F = np.zeros((grid.thetas.size, n), dtype=np.complex128)
    vals = f.values
    for ell, row in legendre_rows(L - 1, np.cos(grid.thetas)):
        m = np.arange(ell + 1)
        F[:, m] += row.T * vals[flat_index(ell, m)]
        if ell:
            mn = m[1:]
            F[:, (-mn) % n] += ((-1.0) ** mn * row[1:].T) * vals[flat_index(ell, -mn)]
    return F


def inverse_sht(f: HarmonicCoefficients, grid: SphereGrid | None = None) -> GridSignal:
    """Synthesise ``sum_lm f_lm Y_lm`` on the grid (defaults to ``make_grid(L)``)."""
    if grid is None:
        grid = make_grid(f.bandlimit)
    if grid.bandlimit < f.bandlimit:
        raise ValueError(f"grid bandlimit {grid.bandlimit} below coefficient bandlimit {f.bandlimit}")
    F = _fourier_rows(f, grid)
    return GridSignal(grid, np.fft.ifft(F, axis=1) * grid.n_phi)


def forward_sht(signal: GridSignal) -> HarmonicCoefficients:
    """Analyse grid samples into coefficients at the grid's bandlimit."""
    grid = signal.grid
    samples = np.asarray(signal.samples)
    if samples.shape != grid.shape:
        raise ValueError(f"samples of shape {samples.shape} do not match grid shape {grid.shape}")
    L = grid.bandlimit
    n = grid.n_phi
    G = np.fft.fft(samples, axis=1) * (TWO_PI / n)
    G *= grid.weights[:, None]
    out = np.empty(L * L, dtype=np.complex128)
    for ell, row in legendre_rows(L - 1, np.cos(grid.thetas)):
        m = np.arange(ell + 1)
        out[flat_index(ell, m)] = np.einsum("mj,jm->m", row, G[:, m])
        if ell:
            mn = m[1:]
            out[flat_index(ell, -mn)] = (-1.0) ** mn * np.einsum("mj,jm->m", row[1:], G[:, (-mn) % n])
    return HarmonicCoefficients(L, out)


def inner_product(f: GridSignal, g: GridSignal) -> complex:
    """Quadrature value of the integral of ``f * conj(g)`` over the sphere."""
    if not f.grid.compatible(g.grid) or f.samples.shape != g.samples.shape:
        raise ValueError("signals live on different grids")
    grid = f.grid
    rows = np.sum(f.samples * np.conj(g.samples), axis=1)
    return complex(np.dot(grid.weights, rows) * (TWO_PI / grid.n_phi))


def synthesize_at(f: HarmonicCoefficients, theta, phi) -> np.ndarray:
    """Direct evaluation of the expansion at arbitrary points."""
    return ylm_all(f.bandlimit, theta, phi) @ f.values
