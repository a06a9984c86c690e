class SiftsphereError(Exception):
    """Base class for errors raised by siftsphere."""


class BandlimitMismatchError(SiftsphereError, ValueError):
    pass


class AxisymmetryError(SiftsphereError, ValueError):
    """Kernel has a non-zero ``m != 0`` mode where only ``m = 0`` is allowed."""

    def __init__(self, ell: int, m: int, magnitude: float):
        self.ell, self.m, self.magnitude = ell, m, magnitude
        super().__init__(
            f"kernel is not axisymmetric: mode (l={ell}, m={m}) has magnitude {magnitude:.3e}"
        )


class CoefficientFormatError(SiftsphereError, ValueError):
    """Malformed coefficient file; ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
