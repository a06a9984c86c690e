"""Sifting convolution and related spherical convolutions in harmonic space."""

__version__ = "0.1.0"

from .exceptions import AxisymmetryError, BandlimitMismatchError, CoefficientFormatError, SiftsphereError
from .kernels import HarmonicGaussianSpec, dirac_delta, enforce_reality, harmonic_gaussian
from .operators import (
    SO3Signal,
    commutative_anisotropic_convolve,
    conj_commutativity_check,
    directional_convolve,
    isotropic_convolve,
    left_convolve,
    sift_convolve,
    translate,
)
from .rotation import EulerAngles, WignerBlock, compose, rotate, wigner_d
from .sht import (
    GridSignal,
    HarmonicCoefficients,
    SphereGrid,
    SpherePoint,
    forward_sht,
    inner_product,
    inverse_sht,
    legendre,
    make_grid,
    ylm,
)

__all__ = [
    "AxisymmetryError",
    "BandlimitMismatchError",
    "CoefficientFormatError",
    "EulerAngles",
    "GridSignal",
    "HarmonicCoefficients",
    "HarmonicGaussianSpec",
    "SO3Signal",
    "SiftsphereError",
    "SphereGrid",
    "SpherePoint",
    "WignerBlock",
    "commutative_anisotropic_convolve",
    "compose",
    "conj_commutativity_check",
    "dirac_delta",
    "directional_convolve",
    "enforce_reality",
    "forward_sht",
    "harmonic_gaussian",
    "inner_product",
    "inverse_sht",
    "isotropic_convolve",
    "left_convolve",
    "legendre",
    "make_grid",
    "rotate",
    "sift_convolve",
    "translate",
    "wigner_d",
    "ylm",
]
