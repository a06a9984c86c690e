"""Wigner matrices and harmonic-space rotation.

Euler angles follow the zyz convention: rotate by ``gamma`` about z, then
``beta`` about y, then ``alpha`` about z, so the rotation matrix is
``Rz(alpha) @ Ry(beta) @ Rz(gamma)``. Rotating a function means
``(R f)(w) = f(R^-1 w)``; in particular the rotation ``(alpha, beta, gamma)``
carries the north pole to ``(theta, phi) = (beta, alpha)``.

``D^l_{m'm}(alpha, beta, gamma) = exp(-i m' alpha) d^l_{m'm}(beta) exp(-i m gamma)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.special import gammaln

from .sht import TWO_PI, HarmonicCoefficients, SpherePoint, flat_index

__all__ = [
    "EulerAngles",
    "WignerBlock",
    "wigner_d",
    "wigner_d_blocks",
    "wigner_D",
    "rotate",
    "compose",
    "rotation_matrix",
]


def _wrap(angle: float) -> float:
    angle = math.fmod(float(angle), TWO_PI)
    if angle < 0.0:
        angle += TWO_PI
    return 0.0 if angle >= TWO_PI else angle


@dataclass(frozen=True)
class EulerAngles:
    """A rotation ``(alpha, beta, gamma)``, canonicalised to ``[0,2pi) x [0,pi] x [0,2pi)``."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self) -> None:
        alpha, beta, gamma = float(self.alpha), float(self.beta), float(self.gamma)
        if not all(map(math.isfinite, (alpha, beta, gamma))):
            raise ValueError("non-finite Euler angle")
        beta = math.remainder(beta, TWO_PI)
        if beta < 0.0:
            # Ry(-b) = Rz(pi) Ry(b) Rz(pi)
            alpha, beta, gamma = alpha + math.pi, -beta, gamma + math.pi
        object.__setattr__(self, "alpha", _wrap(alpha))
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", _wrap(gamma))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def matrix(self) -> np.ndarray:
        return rotation_matrix(self.alpha, self.beta, self.gamma)

    @classmethod
    def from_matrix(cls, R) -> "EulerAngles":
        R = np.asarray(R, dtype=float)
        # atan2 keeps full precision near the poles, where acos does not
        beta = math.atan2(math.hypot(R[0, 2], R[1, 2]), R[2, 2])
        if math.sin(beta) > 1e-12:
            alpha = math.atan2(R[1, 2], R[0, 2])
            gamma = math.atan2(R[2, 1], -R[2, 0])
        elif R[2, 2] > 0:
            # gimbal lock: only alpha + gamma is defined
            alpha, beta, gamma = math.atan2(R[1, 0], R[0, 0]), 0.0, 0.0
        else:
            alpha, beta, gamma = math.atan2(-R[1, 0], -R[0, 0]), math.pi, 0.0
        return cls(alpha, beta, gamma)

    def inverse(self) -> "EulerAngles":
        return EulerAngles(math.pi - self.gamma, self.beta, math.pi - self.alpha)

    def apply(self, p: SpherePoint) -> SpherePoint:
        """Image of a point under the rotation."""
        return SpherePoint.from_vector(self.matrix() @ p.to_vector())


def rotation_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    def rz(a):
        c, s = math.cos(a), math.sin(a)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    c, s = math.cos(beta), math.sin(beta)
    ry = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return rz(alpha) @ ry @ rz(gamma)


def compose(outer: EulerAngles, inner: EulerAngles) -> EulerAngles:
    """Euler angles of ``outer`` applied after ``inner``."""
    return EulerAngles.from_matrix(outer.matrix() @ inner.matrix())


@dataclass(frozen=True, eq=False)
class WignerBlock:
    """``entries[m' + l, m + l] = d^l_{m'm}(beta)``."""

    degree: int
    entries: np.ndarray

    def __getitem__(self, mm: tuple[int, int]) -> float:
        mp, m = mm
        return float(self.entries[mp + self.degree, m + self.degree])


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (0.0 <= beta <= math.pi):
        raise ValueError(f"beta = {beta} outside [0, pi]")
    return beta


def wigner_d_blocks(lmax: int, beta: float) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(l, d)`` for ``l = 0..lmax``.

    ``d`` is a padded ``(2 lmax + 1)**2`` view indexed ``[m' + lmax, m + lmax]``
    and is zero wherever ``max(|m'|, |m|) > l``. Each entry starts from its
    closed form at ``l = max(|m'|, |m|)`` and then follows the three-term
    recursion in degree; only two degrees are held at once.
    """
    beta = _check_beta(beta)
    size = 2 * lmax + 1
    mp, m = np.meshgrid(np.arange(-lmax, lmax + 1), np.arange(-lmax, lmax + 1), indexing="ij")
    start = np.maximum(np.abs(mp), np.abs(m))
    cb = math.cos(beta)
    # log of cos(beta/2) and sin(beta/2); -inf is fine for zero powers
    with np.errstate(divide="ignore"):
        lc, ls = np.log(math.cos(beta / 2.0)), np.log(math.sin(beta / 2.0))
    prev = np.zeros((size, size))
    cur = np.zeros((size, size))
    for ell in range(lmax + 1):
        nxt = np.zeros((size, size))
        if ell > 1:
            # from degree j = ell - 1 to ell
            j = ell - 1.0
            grow = start < ell
            gm, gmp = m[grow].astype(float), mp[grow].astype(float)
            denom = np.sqrt((ell * ell - gm * gm) * (ell * ell - gmp * gmp))
            a = ell * (2.0 * j + 1.0) / denom
            b = ell * np.sqrt((j * j - gm * gm) * (j * j - gmp * gmp)) / (j * denom)
            nxt[grow] = a * (cb - gm * gmp / (j * ell)) * cur[grow] - b * prev[grow]
        elif ell == 1:
            nxt[lmax, lmax] = cb
        edge = start == ell
        nxt[edge] = _edge_values(ell, mp[edge], m[edge], lc, ls)
        prev, cur = cur, nxt
        yield ell, cur


def _edge_values(ell: int, mp: np.ndarray, m: np.ndarray, lc: float, ls: float) -> np.ndarray:
    """``d^l_{m'm}`` where ``max(|m'|, |m|) = l``."""
    # rows m' = +-l in closed form; columns |m| = l via d_{m'm} = (-1)^(m'-m) d_{mm'}
    row = np.abs(mp) == ell
    outer = np.where(row, mp, m)
    inner = np.where(row, m, mp)
    sign_flip = np.where(row, 1.0, (-1.0) ** ((mp - m) % 2))
    logc = 0.5 * (gammaln(2 * ell + 1) - gammaln(ell + inner + 1) - gammaln(ell - inner + 1))
    top = outer > 0
    pc = np.where(top, ell + inner, ell - inner)
    ps = np.where(top, ell - inner, ell + inner)
    sign = np.where(top, (-1.0) ** ((ell - inner) % 2), 1.0)
    with np.errstate(invalid="ignore"):
        mag = np.exp(logc + np.where(pc > 0, pc * lc, 0.0) + np.where(ps > 0, ps * ls, 0.0))
    return sign_flip * sign * mag


def wigner_d(ell: int, beta: float) -> WignerBlock:
    """Small-d matrix of degree ``ell`` at ``beta``."""
    if ell < 0:
        raise ValueError(f"degree must be non-negative, got {ell}")
    beta = _check_beta(beta)
    if beta == 0.0:
        return WignerBlock(ell, np.eye(2 * ell + 1))
    for degree, d in wigner_d_blocks(ell, beta):
        if degree == ell:
            return WignerBlock(ell, d.copy())
    raise AssertionError("unreachable")


def wigner_D(ell: int, rho: EulerAngles) -> np.ndarray:
    """Full ``D^l_{m'm}(rho)`` as a complex ``(2l+1)**2`` array."""
    ms = np.arange(-ell, ell + 1)
    d = wigner_d(ell, rho.beta).entries
    return np.exp(-1j * ms * rho.alpha)[:, None] * d * np.exp(-1j * ms * rho.gamma)[None, :]


def rotate(f: HarmonicCoefficients, rho: EulerAngles) -> HarmonicCoefficients:
    """Coefficients of ``f`` rotated by ``rho``: ``sum_m' D^l_{mm'}(rho) f_lm'``."""
    L = f.bandlimit
    if rho.alpha == 0.0 and rho.beta == 0.0 and rho.gamma == 0.0:
        return f.replace(f.values.copy())
    lmax = L - 1
    out = np.empty(L * L, dtype=np.complex128)
    if rho.beta == 0.0:
        blocks = ((ell, None) for ell in range(L))
    else:
        blocks = wigner_d_blocks(lmax, rho.beta)
    for ell, d in blocks:
        ms = np.arange(-ell, ell + 1)
        coeffs = f.values[flat_index(ell, ms)] * np.exp(-1j * ms * rho.gamma)
        if d is not None:
            coeffs = d[lmax - ell : lmax + ell + 1, lmax - ell : lmax + ell + 1] @ coeffs
        out[flat_index(ell, ms)] = np.exp(-1j * ms * rho.alpha) * coeffs
    return HarmonicCoefficients(L, out)
