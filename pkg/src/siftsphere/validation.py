"""Input validation for the estimator API.

scikit-learn's ``check_array`` rejects complex input, so spectra and grid
samples get their own checks here. Batches are 2-D: one signal per row.
"""

from __future__ import annotations

import math

import numpy as np

from .sht import HarmonicCoefficients, SphereGrid

__all__ = [
    "bandlimit_from_size",
    "bandlimit_from_samples",
    "check_coefficient_batch",
    "check_sample_batch",
    "as_coefficients",
]


def bandlimit_from_size(n_coefficients: int) -> int:
    L = math.isqrt(int(n_coefficients))
    if L < 1 or L * L != n_coefficients:
        raise ValueError(f"{n_coefficients} coefficients is not a square number L**2")
    return L


def bandlimit_from_samples(n_samples: int) -> int:
    """Solve ``L * (2L - 1) = n_samples`` for the Gauss-Legendre grid."""
    L = int(round((1.0 + math.sqrt(1.0 + 8.0 * n_samples)) / 4.0))
    if L < 1 or L * (2 * L - 1) != n_samples:
        raise ValueError(f"{n_samples} samples does not match any L x (2L - 1) grid")
    return L


def _batch(X, name: str) -> np.ndarray:
    X = np.asarray(X)
    if X.dtype == object or not (np.issubdtype(X.dtype, np.number) or X.dtype == bool):
        raise TypeError(f"{name} must be numeric, got dtype {X.dtype}")
    if X.ndim == 1:
        raise ValueError(f"{name} must be 2-D (n_signals, n_features); reshape a single signal with X.reshape(1, -1)")
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {X.ndim} dimensions")
    if X.shape[0] == 0:
        raise ValueError(f"{name} has no rows")
    X = X.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains NaN or infinity")
    return X


def check_coefficient_batch(X, bandlimit: int | None = None) -> tuple[np.ndarray, int]:
    """Validate rows of flat spectra; returns ``(X, L)``."""
    X = _batch(X, "coefficient batch")
    L = bandlimit_from_size(X.shape[1])
    if bandlimit is not None and L != bandlimit:
        raise ValueError(f"expected {bandlimit * bandlimit} coefficients per row (L={bandlimit}), got {X.shape[1]}")
    return X, L


def check_sample_batch(X, grid: SphereGrid | None = None) -> tuple[np.ndarray, int]:
    """Validate rows of flattened grid samples; returns ``(X, L)``."""
    X = _batch(X, "sample batch")
    L = bandlimit_from_samples(X.shape[1])
    if grid is not None and L != grid.bandlimit:
        raise ValueError(f"expected {grid.shape[0] * grid.shape[1]} samples per row for L={grid.bandlimit}, got {X.shape[1]}")
    return X, L


def as_coefficients(obj, name: str = "kernel") -> HarmonicCoefficients:
    if isinstance(obj, HarmonicCoefficients):
        return obj
    values = np.asarray(obj)
    if values.ndim != 1:
        raise ValueError(f"{name} must be HarmonicCoefficients or a flat array of length L**2")
    return HarmonicCoefficients(bandlimit_from_size(values.size), values)
