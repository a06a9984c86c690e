"""Harmonic-space kernels: the harmonic Gaussian and the bandlimited Dirac delta."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sht import HarmonicCoefficients, SpherePoint, degrees_orders, flat_index, ylm_all

__all__ = ["HarmonicGaussianSpec", "harmonic_gaussian", "dirac_delta", "enforce_reality"]


@dataclass(frozen=True)
class HarmonicGaussianSpec:
    sigma_ell: float
    sigma_m: float
    bandlimit: int

    def __post_init__(self) -> None:
        for name in ("sigma_ell", "sigma_m"):
            value = float(getattr(self, name))
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if int(self.bandlimit) < 1:
            raise ValueError(f"bandlimit must be positive, got {self.bandlimit}")


def harmonic_gaussian(spec: HarmonicGaussianSpec) -> HarmonicCoefficients:
    """Gaussian in degree modulated by a Gaussian in order.

    ``f_lm = exp(-(l**2 / (2 sigma_ell**2) + m**2 / (2 sigma_m**2)))``. The
    coefficients are real and positive but are not conjugate symmetric, so the
    field they describe is complex; see :func:`enforce_reality`.
    """
    ell, m = degrees_orders(spec.bandlimit)
    exponent = ell**2 / (2.0 * spec.sigma_ell**2) + m**2 / (2.0 * spec.sigma_m**2)
    return HarmonicCoefficients(spec.bandlimit, np.exp(-exponent))


def dirac_delta(bandlimit: int, p: SpherePoint) -> HarmonicCoefficients:
    """Bandlimited delta centred on ``p``: ``conj(Y_lm(p))``."""
    return HarmonicCoefficients(bandlimit, np.conj(ylm_all(bandlimit, p.theta, p.phi)))


def enforce_reality(f: HarmonicCoefficients) -> HarmonicCoefficients:
    """Keep ``m >= 0`` and rebuild ``m < 0`` as ``(-1)**m conj(f_l|m|)``.

    The imaginary part of each ``m = 0`` mode is dropped as well, since a real
    field cannot carry one.
    """
    values = f.values.copy()
    ell, m = degrees_orders(f.bandlimit)
    neg = m < 0
    values[neg] = (-1.0) ** m[neg] * np.conj(values[flat_index(ell[neg], -m[neg])])
    # m = 0 of a real field is real
    zero = m == 0
    values[zero] = values[zero].real
    return f.replace(values)
