"""Coefficient files and ICGEM-style gravity-field ingestion.

The native format is plain text::

    SIFTSPHERE-COEFF v1 L=<L> kind=<complex|real-symmetric>
    <l> <m> <real> <imag>
    ...

one record per mode, ell-major then ``m`` ascending, values written with 17
significant digits so a write/read round trip is bit-exact. ``real-symmetric``
files carry only ``m >= 0`` and are expanded on read with
``f_l(-m) = (-1)**m conj(f_lm)``.
"""

from __future__ import annotations

import math
import re
import warnings
from importlib import resources
from pathlib import Path

import numpy as np

from .exceptions import CoefficientFormatError
from .sht import HarmonicCoefficients, degrees_orders, flat_index

__all__ = [
    "KINDS",
    "write_coeffs",
    "read_coeffs",
    "save_coeffs",
    "load_coeffs",
    "ingest_gfc",
    "bundled_topography",
    "write_table",
]

MAGIC = "SIFTSPHERE-COEFF"
VERSION = "v1"
KINDS = ("complex", "real-symmetric")
_HEADER = re.compile(rf"^{MAGIC}\s+(\S+)\s+L=(\d+)\s+kind=(\S+)\s*$")


def _text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        return data.decode("ascii")
    return str(data)


def write_coeffs(f: HarmonicCoefficients, kind: str = "complex") -> bytes:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    ell, m = degrees_orders(f.bandlimit)
    if kind == "real-symmetric":
        if not f.is_conjugate_symmetric(atol=1e-12):
            raise ValueError("coefficients are not conjugate symmetric; cannot write kind=real-symmetric")
        keep = m >= 0
        ell, m = ell[keep], m[keep]
    values = f.values[flat_index(ell, m)]
    lines = [f"{MAGIC} {VERSION} L={f.bandlimit} kind={kind}"]
    lines.extend(f"{l} {mm} {v.real:.17g} {v.imag:.17g}" for l, mm, v in zip(ell.tolist(), m.tolist(), values))
    return ("\n".join(lines) + "\n").encode("ascii")


def read_coeffs(data) -> HarmonicCoefficients:
    lines = _text(data).splitlines()
    if not lines:
        raise CoefficientFormatError("empty coefficient file", 1)
    header = _HEADER.match(lines[0].strip())
    if header is None:
        raise CoefficientFormatError(f"bad header {lines[0]!r}; expected '{MAGIC} {VERSION} L=<L> kind=<kind>'", 1)
    version, L, kind = header.group(1), int(header.group(2)), header.group(3)
    if version != VERSION:
        raise CoefficientFormatError(f"unsupported format version {version!r}", 1)
    if kind not in KINDS:
        raise CoefficientFormatError(f"unknown kind {kind!r}", 1)
    if L < 1:
        raise CoefficientFormatError("bandlimit must be positive", 1)

    values = np.zeros(L * L, dtype=np.complex128)
    seen = np.zeros(L * L, dtype=bool)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise CoefficientFormatError(f"expected 'l m real imag', got {line!r}", lineno)
        try:
            ell, m = int(parts[0]), int(parts[1])
            value = complex(float(parts[2]), float(parts[3]))
        except ValueError:
            raise CoefficientFormatError(f"unparsable record {line!r}", lineno) from None
        if not (0 <= ell < L and abs(m) <= ell) or (kind == "real-symmetric" and m < 0):
            raise CoefficientFormatError(f"mode ({ell}, {m}) out of range for L={L}, kind={kind}", lineno)
        idx = flat_index(ell, m)
        if seen[idx]:
            raise CoefficientFormatError(f"duplicate mode ({ell}, {m})", lineno)
        seen[idx] = True
        values[idx] = value

    ells, ms = degrees_orders(L)
    expected = ms >= 0 if kind == "real-symmetric" else np.ones(L * L, dtype=bool)
    missing = np.flatnonzero(expected & ~seen)
    if missing.size:
        i = missing[0]
        raise CoefficientFormatError(f"missing mode ({ells[i]}, {ms[i]}) ({missing.size} missing in total)")
    if kind == "real-symmetric":
        neg = ms < 0
        values[neg] = (-1.0) ** ms[neg] * np.conj(values[flat_index(ells[neg], -ms[neg])])
    return HarmonicCoefficients(L, values)


def save_coeffs(path, f: HarmonicCoefficients, kind: str = "complex") -> None:
    Path(path).write_bytes(write_coeffs(f, kind))


def load_coeffs(path) -> HarmonicCoefficients:
    return read_coeffs(Path(path).read_bytes())


def _gfc_float(token: str) -> float:
    return float(token.replace("D", "E").replace("d", "e"))


def ingest_gfc(data, bandlimit: int, keys=("gfc", "gfct")) -> HarmonicCoefficients:
    """Convert a 4pi-normalised real (C, S) expansion to orthonormal complex coefficients.

    Data lines read ``<key> l m C S [...]``; everything up to ``end_of_head``
    and any line with another key is skipped. Degrees ``>= bandlimit`` are
    dropped. Records must be strictly increasing in either degree-major or
    order-major order. With geodetic Legendre functions carrying no
    Condon-Shortley phase, the conversion is ``f_l0 = sqrt(4pi) C_l0`` and
    ``f_lm = (-1)**m sqrt(4pi) (C_lm - i S_lm) / sqrt(2)`` for ``m > 0``; negative
    orders follow by conjugate symmetry, so the field is real.
    """
    L = int(bandlimit)
    if L < 1:
        raise ValueError(f"bandlimit must be positive, got {bandlimit}")
    lines = _text(data).splitlines()
    start = 0
    for i, line in enumerate(lines):
        if line.strip().startswith("end_of_head"):
            start = i + 1
            break
    for line in lines[:start]:
        tokens = line.split()
        if len(tokens) >= 2 and tokens[0] == "norm" and tokens[1] != "fully_normalized":
            raise CoefficientFormatError(f"unsupported normalisation {tokens[1]!r}; need fully_normalized")

    C = np.zeros((L, L))
    S = np.zeros((L, L))
    max_degree = -1
    prev = None
    broken = {"degree": None, "order": None}
    for lineno, line in enumerate(lines[start:], start=start + 1):
        tokens = line.split()
        if not tokens or tokens[0] not in keys:
            continue
        if len(tokens) < 5:
            raise CoefficientFormatError(f"expected '{tokens[0]} l m C S', got {line.strip()!r}", lineno)
        try:
            ell, m = int(tokens[1]), int(tokens[2])
            c, s = _gfc_float(tokens[3]), _gfc_float(tokens[4])
        except ValueError:
            raise CoefficientFormatError(f"unparsable record {line.strip()!r}", lineno) from None
        if ell < 0 or m < 0 or m > ell:
            raise CoefficientFormatError(f"degree/order ({ell}, {m}) out of range", lineno)
        if prev is not None:
            if broken["degree"] is None and not (ell, m) > prev:
                broken["degree"] = lineno
            if broken["order"] is None and not (m, ell) > prev[::-1]:
                broken["order"] = lineno
            if broken["degree"] is not None and broken["order"] is not None:
                raise CoefficientFormatError(
                    f"records not monotone in degree or order at ({ell}, {m})", max(broken.values())
                )
        prev = (ell, m)
        max_degree = max(max_degree, ell)
        if ell < L:
            C[ell, m], S[ell, m] = c, s

    if max_degree < 0:
        raise CoefficientFormatError("no coefficient records found")
    if max_degree + 1 < L:
        warnings.warn(
            f"file holds degrees up to {max_degree}; modes {max_degree + 1} <= l < {L} are zero-filled",
            stacklevel=2,
        )

    ell, m = degrees_orders(L)
    am = np.abs(m)
    cc, ss = C[ell, am], S[ell, am]
    root = math.sqrt(4.0 * math.pi)
    pos = (-1.0) ** am * root * (cc - 1j * ss) / math.sqrt(2.0)
    values = np.where(m > 0, pos, np.where(m < 0, root * (cc + 1j * ss) / math.sqrt(2.0), root * cc + 0j))
    return HarmonicCoefficients(L, values)


def bundled_topography() -> bytes:
    """The packaged low-degree synthetic topography in ICGEM layout."""
    return resources.files("siftsphere").joinpath("data/synthetic_topography_L32.gfc").read_bytes()


def write_table(path, header: str, rows: np.ndarray) -> None:
    """Whitespace-separated float table with a ``#`` header line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# {header}\n")
        np.savetxt(fh, rows, fmt="%.17g")
