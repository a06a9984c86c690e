"""Equirectangular rendering of grid signals and view recentring."""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .rotation import EulerAngles, rotate, rotation_matrix
from .sht import TWO_PI, GridSignal, HarmonicCoefficients, SpherePoint

__all__ = ["PARTS", "COLORMAPS", "RasterImage", "render", "recenter_view", "view_rotation"]

PARTS = ("real", "imag", "abs")
COLORMAPS = ("viridis", "gray")


@dataclass(frozen=True, eq=False)
class RasterImage:
    """8-bit RGB raster, ``pixels[row, col]`` with row 0 at the north pole."""

    pixels: np.ndarray = field(repr=False)
    colormap: str
    vmin: float
    vmax: float

    def __post_init__(self) -> None:
        h, w, c = self.pixels.shape
        if c != 3 or w != 2 * h or self.pixels.dtype != np.uint8:
            raise ValueError(f"expected uint8 RGB with width = 2 x height, got {self.pixels.shape} {self.pixels.dtype}")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def to_png(self) -> bytes:
        from PIL import Image

        buf = io.BytesIO()
        Image.fromarray(self.pixels, mode="RGB").save(buf, format="PNG", optimize=False)
        return buf.getvalue()

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_png())


def _lut(name: str) -> np.ndarray:
    if name == "gray":
        ramp = np.arange(256, dtype=np.uint8)
        return np.stack([ramp, ramp, ramp], axis=1)
    if name == "viridis":
        from matplotlib import colormaps

        rgba = colormaps["viridis"](np.linspace(0.0, 1.0, 256))
        return np.round(rgba[:, :3] * 255.0).astype(np.uint8)
    raise ValueError(f"unknown colormap {name!r}; expected one of {COLORMAPS}")


def _select(samples: np.ndarray, part: str) -> np.ndarray:
    if part == "real":
        return samples.real
    if part == "imag":
        return samples.imag
    if part == "abs":
        return np.abs(samples)
    raise ValueError(f"unknown part {part!r}; expected one of {PARTS}")


def _resample(signal: GridSignal, values: np.ndarray, width: int, height: int) -> np.ndarray:
    """Bilinear interpolation onto equirectangular pixel centres."""
    grid = signal.grid
    thetas = grid.thetas
    theta_px = (np.arange(height) + 0.5) * math.pi / height
    phi_px = (np.arange(width) + 0.5) * TWO_PI / width

    # colatitude: clamp outside the first/last node
    if thetas.size == 1:
        r0 = r1 = np.zeros(height, dtype=int)
        tr = np.zeros(height)
    else:
        r1 = np.clip(np.searchsorted(thetas, theta_px), 1, thetas.size - 1)
        r0 = r1 - 1
        tr = np.clip((theta_px - thetas[r0]) / (thetas[r1] - thetas[r0]), 0.0, 1.0)

    # longitude: periodic
    pos = phi_px / (TWO_PI / grid.n_phi)
    c0 = np.floor(pos).astype(int) % grid.n_phi
    c1 = (c0 + 1) % grid.n_phi
    tc = pos - np.floor(pos)

    top = values[r0][:, c0] * (1.0 - tc) + values[r0][:, c1] * tc
    bottom = values[r1][:, c0] * (1.0 - tc) + values[r1][:, c1] * tc
    return top * (1.0 - tr)[:, None] + bottom * tr[:, None]


def render(signal: GridSignal, part: str = "real", colormap: str = "viridis", width: int = 512) -> RasterImage:
    """Render one part of a signal, rescaled to ``[0, 1]`` over the image."""
    width = int(width)
    if width < 2 or width % 2:
        raise ValueError(f"width must be an even integer >= 2, got {width}")
    height = width // 2
    lut = _lut(colormap)
    image = _resample(signal, _select(signal.samples, part), width, height)
    vmin, vmax = float(image.min()), float(image.max())
    # interpolation leaves a few ulps of spread on a constant field
    if not vmax - vmin > 64 * np.finfo(float).eps * max(abs(vmin), abs(vmax)):
        warnings.warn("field is constant over the image; rendering uniform mid-value", stacklevel=2)
        scaled = np.full(image.shape, 0.5)
    else:
        scaled = (image - vmin) / (vmax - vmin)
    index = np.clip(np.round(scaled * 255.0), 0, 255).astype(np.uint8)
    return RasterImage(lut[index], colormap, vmin, vmax)


def view_rotation(center: SpherePoint) -> EulerAngles:
    """Rotation carrying ``center`` to the image centre ``(pi/2, pi)``."""
    R = rotation_matrix(math.pi, 0.0, 0.0) @ rotation_matrix(0.0, math.pi / 2.0 - center.theta, -center.phi)
    return EulerAngles.from_matrix(R)


def recenter_view(f: HarmonicCoefficients, center: SpherePoint, inverse: bool = False) -> HarmonicCoefficients:
    """Rotate ``f`` so ``center`` lands in the middle of an equirectangular image.

    ``inverse=True`` applies the opposite rotation and undoes a previous call.
    """
    rho = view_rotation(center)
    return rotate(f, rho.inverse() if inverse else rho)
