"""scikit-learn compatible transformers.

Signals travel as 2-D arrays with one signal per row: flattened grid samples
of shape ``(n, L * (2L - 1))`` or flat spectra of shape ``(n, L**2)``. The
transformers therefore drop into :class:`sklearn.pipeline.Pipeline`, e.g.
``make_pipeline(HarmonicTransform(), SphericalConvolution(kernel))``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import operators
from .sht import GridSignal, HarmonicCoefficients, SpherePoint, forward_sht, inverse_sht, make_grid, ylm_all
from .validation import as_coefficients, check_coefficient_batch, check_sample_batch

__all__ = ["HarmonicTransform", "SphericalConvolution", "SphereTranslation"]


class HarmonicTransform(TransformerMixin, BaseEstimator):
    """Forward transform of grid samples; ``inverse_transform`` synthesises them back.

    Parameters
    ----------
    bandlimit : int or None
        Grid bandlimit. ``None`` infers it from the row length in ``fit``.
    """

    def __init__(self, bandlimit=None):
        self.bandlimit = bandlimit

    def fit(self, X, y=None):
        X, L = check_sample_batch(X)
        if self.bandlimit is not None and L != self.bandlimit:
            raise ValueError(f"rows hold an L={L} grid but bandlimit={self.bandlimit}")
        self.bandlimit_ = L
        self.grid_ = make_grid(L)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X, _ = check_sample_batch(X, self.grid_)
        shape = self.grid_.shape
        return np.stack([forward_sht(GridSignal(self.grid_, row.reshape(shape))).values for row in X])

    def inverse_transform(self, X):
        check_is_fitted(self, "grid_")
        X, _ = check_coefficient_batch(X, self.bandlimit_)
        L = self.bandlimit_
        return np.stack([inverse_sht(HarmonicCoefficients(L, row), self.grid_).samples.ravel() for row in X])


class SphericalConvolution(TransformerMixin, BaseEstimator):
    """Convolve each spectrum with a fixed kernel.

    Parameters
    ----------
    kernel : HarmonicCoefficients or array of length L**2
    method : {"sifting", "isotropic", "left"}
        Sphere-to-sphere convolutions that return a spectrum. The isotropic and
        left methods reject kernels with any ``m != 0`` content at ``fit``.
    pad : bool
        Zero-pad the smaller bandlimit instead of raising on a mismatch.
    """

    _methods = {
        "sifting": operators.sift_convolve,
        "isotropic": operators.isotropic_convolve,
        "left": operators.left_convolve,
    }

    def __init__(self, kernel=None, method="sifting", pad=False):
        self.kernel = kernel
        self.method = method
        self.pad = pad

    def fit(self, X=None, y=None):
        if self.method not in self._methods:
            raise ValueError(f"method must be one of {sorted(self._methods)}, got {self.method!r}")
        if self.kernel is None:
            raise ValueError("a kernel is required")
        kernel = as_coefficients(self.kernel)
        if self.method != "sifting":
            operators.check_axisymmetric(kernel)
        self.kernel_ = kernel
        if X is not None:
            X, L = check_coefficient_batch(X)
            self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "kernel_")
        X, L = check_coefficient_batch(X)
        op = self._methods[self.method]
        return np.stack([op(HarmonicCoefficients(L, row), self.kernel_, pad=self.pad).values for row in X])


class SphereTranslation(TransformerMixin, BaseEstimator):
    """Harmonic translation of each spectrum to ``(theta, phi)``."""

    def __init__(self, theta=0.0, phi=0.0):
        self.theta = theta
        self.phi = phi

    def fit(self, X=None, y=None):
        self.point_ = SpherePoint(self.theta, self.phi)
        if X is not None:
            X, _ = check_coefficient_batch(X)
            self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "point_")
        X, L = check_coefficient_batch(X)
        return X * ylm_all(L, self.point_.theta, self.point_.phi)[None, :]
