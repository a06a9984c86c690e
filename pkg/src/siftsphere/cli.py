"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 validation or precondition error,
4 I/O error. Angles accept decimals or pi fractions such as ``pi/8``,
``3pi/4`` or ``-2*pi/3``.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import re
import sys
import time
import warnings
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import SiftsphereError
from .io import KINDS, bundled_topography, ingest_gfc, load_coeffs, save_coeffs, write_table
from .kernels import HarmonicGaussianSpec, dirac_delta, enforce_reality, harmonic_gaussian
from .operators import (
    commutative_anisotropic_convolve,
    default_so3_angles,
    directional_convolve,
    isotropic_convolve,
    left_convolve,
    sift_convolve,
    translate,
)
from .render import COLORMAPS, PARTS, recenter_view, render
from .sht import HarmonicCoefficients, SpherePoint, inverse_sht, make_grid

log = logging.getLogger("siftsphere")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO = 0, 2, 3, 4

METHODS = ("sifting", "isotropic", "left", "directional", "commutative-anisotropic")

# view of South America used for the topography figures
SOUTH_AMERICA = ("7pi/12", "5pi/3")

DEMO_FILES = (
    "kernel_elongated_translated.png",
    "kernel_symmetric_translated.png",
    "topography.png",
    "convolved_elongated.png",
    "convolved_symmetric.png",
)

_ANGLE = re.compile(
    r"""^\s*(?P<sign>[+-])?
    (?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*\*?\s*)?
    (?P<pi>pi)?
    (?:\s*/\s*(?P<den>\d+\.?\d*|\.\d+))?\s*$""",
    re.VERBOSE,
)


def parse_angle(text: str) -> float:
    """Parse ``0.3``, ``pi``, ``pi/8``, ``3pi/4``, ``-2*pi/3`` and the like."""
    match = _ANGLE.match(str(text))
    if match is None or (match.group("num") is None and match.group("pi") is None):
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}; use a number or a pi fraction like 3pi/4")
    value = float(match.group("num")) if match.group("num") is not None else 1.0
    if match.group("pi"):
        value *= math.pi
    if match.group("den") is not None:
        den = float(match.group("den"))
        if den == 0.0:
            raise argparse.ArgumentTypeError(f"zero denominator in {text!r}")
        value /= den
    return -value if match.group("sign") == "-" else value


def parse_angle_list(text: str) -> np.ndarray:
    return np.array([parse_angle(tok) for tok in text.split(",") if tok.strip()])


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def _load(path) -> HarmonicCoefficients:
    try:
        return load_coeffs(path)
    except FileNotFoundError:
        raise FileNotFoundError(f"no such coefficient file: {path}") from None


def cmd_kernel(args) -> int:
    if args.kernel == "harmonic-gaussian":
        f = harmonic_gaussian(HarmonicGaussianSpec(args.sigma_l, args.sigma_m, args.L))
        if args.real:
            f = enforce_reality(f)
    else:
        f = dirac_delta(args.L, SpherePoint(args.theta, args.phi))
    kind = "real-symmetric" if getattr(args, "real", False) else "complex"
    save_coeffs(args.output, f, kind)
    log.info("wrote %s kernel (L=%d) to %s", args.kernel, args.L, args.output)
    return EXIT_OK


def cmd_translate(args) -> int:
    f = _load(args.input)
    save_coeffs(args.output, translate(f, SpherePoint(args.theta, args.phi)))
    return EXIT_OK


def cmd_convolve(args) -> int:
    f, g = _load(args.f), _load(args.g)
    method = args.method
    if method == "directional":
        da, db, dg = default_so3_angles(max(f.bandlimit, g.bandlimit))
        so3 = directional_convolve(
            f,
            g,
            alphas=da if args.alphas is None else args.alphas,
            betas=db if args.betas is None else args.betas,
            gammas=dg if args.gammas is None else args.gammas,
            pad=args.pad,
        )
        write_table(args.output, "alpha beta gamma re im", so3.table())
    elif method == "commutative-anisotropic":
        signal = commutative_anisotropic_convolve(f, g, pad=args.pad)
        theta, phi = signal.grid.points()
        s = signal.samples
        rows = np.column_stack([theta.ravel(), phi.ravel(), s.real.ravel(), s.imag.ravel()])
        write_table(args.output, f"L={signal.grid.bandlimit} theta phi re im", rows)
    else:
        op = {"sifting": sift_convolve, "isotropic": isotropic_convolve, "left": left_convolve}[method]
        save_coeffs(args.output, op(f, g, pad=args.pad))
    return EXIT_OK


def cmd_verify_conjugate(args) -> int:
    a, b = _load(args.a), _load(args.b)
    if a.bandlimit != b.bandlimit:
        print(f"bandlimits differ: {a.bandlimit} vs {b.bandlimit}", file=sys.stderr)
        return EXIT_VALIDATION
    deviation = float(np.max(np.abs(a.values - np.conj(b.values))))
    ok = deviation <= args.tol
    print(f"max |a - conj(b)| = {deviation:.3e} ({'ok' if ok else 'FAIL'}, tol {args.tol:.1e})")
    return EXIT_OK if ok else EXIT_VALIDATION


def _render_coeffs(f, part, colormap, width, center=None):
    if center is not None:
        f = recenter_view(f, center)
    return render(inverse_sht(f), part, colormap, width)


def cmd_render(args) -> int:
    f = _load(args.input)
    center = None
    if args.center_theta is not None or args.center_phi is not None:
        center = SpherePoint(
            math.pi / 2.0 if args.center_theta is None else args.center_theta,
            math.pi if args.center_phi is None else args.center_phi,
        )
    image = _render_coeffs(f, args.part, args.colormap, args.width, center)
    image.save(args.output)
    return EXIT_OK


def cmd_ingest(args) -> int:
    data = Path(args.input).read_bytes()
    f = ingest_gfc(data, args.L)
    save_coeffs(args.output, f, args.kind)
    return EXIT_OK


def azimuthal_second_moment(samples: np.ndarray, grid) -> float:
    """Intensity-weighted mean squared longitude offset from the peak of ``|samples|``."""
    intensity = np.abs(samples)
    j, k = np.unravel_index(np.argmax(intensity), intensity.shape)
    dphi = np.angle(np.exp(1j * (grid.phis - grid.phis[k])))
    weight = grid.weights[:, None] * intensity
    return float(np.sum(weight * dphi[None, :] ** 2) / np.sum(weight))


def run_demo(
    out_dir,
    L=128,
    width=512,
    gfc=None,
    point=None,
    center=None,
    colormap="viridis",
    sigmas=((100.0, 10.0), (10.0, 10.0)),
) -> dict:
    """Translated kernels, the topography and both sifting-convolved maps."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    point = point or SpherePoint(math.pi / 8.0, 3.0 * math.pi / 4.0)
    center = center or SpherePoint(parse_angle(SOUTH_AMERICA[0]), parse_angle(SOUTH_AMERICA[1]))
    started = time.perf_counter()

    data = Path(gfc).read_bytes() if gfc else bundled_topography()
    with warnings.catch_warnings():
        # the bundled topography stops at degree 31; zero-fill is expected
        if gfc is None:
            warnings.simplefilter("ignore")
        earth = ingest_gfc(data, L)

    grid = make_grid(L)
    kernels = [harmonic_gaussian(HarmonicGaussianSpec(sl, sm, L)) for sl, sm in sigmas]
    moments = []
    for kernel, name in zip(kernels, DEMO_FILES[:2]):
        translated = inverse_sht(translate(kernel, point), grid)
        moments.append(azimuthal_second_moment(translated.samples, grid))
        render(translated, "real", colormap, width).save(out / name)
    _render_coeffs(earth, "real", colormap, width, center).save(out / DEMO_FILES[2])
    convolved = []
    for kernel, name in zip(kernels, DEMO_FILES[3:]):
        # earth first keeps the map in its own frame; swapping operands
        # conjugates the spectrum, which mirrors the map in longitude
        image = _render_coeffs(sift_convolve(earth, kernel), "real", colormap, width, center)
        image.save(out / name)
        convolved.append(image)

    return {
        "files": [str(out / name) for name in DEMO_FILES],
        "moments": moments,
        "moment_ratio": moments[0] / moments[1],
        "convolved_max_pixel_difference": int(
            np.max(np.abs(convolved[0].pixels.astype(int) - convolved[1].pixels.astype(int)))
        ),
        "seconds": time.perf_counter() - started,
    }


def cmd_demo_earth(args) -> int:
    summary = run_demo(
        args.out_dir,
        L=args.L,
        width=args.width,
        gfc=args.gfc,
        point=SpherePoint(args.theta, args.phi),
        center=SpherePoint(args.center_theta, args.center_phi),
        colormap=args.colormap,
    )
    for path in summary["files"]:
        print(path)
    print(
        f"azimuthal second moment: elongated {summary['moments'][0]:.4g}, "
        f"symmetric {summary['moments'][1]:.4g} (ratio {summary['moment_ratio']:.3g})"
    )
    print(f"max pixel difference between convolved maps: {summary['convolved_max_pixel_difference']}")
    print(f"done in {summary['seconds']:.1f} s")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siftsphere",
        description="Sifting convolution and other spherical convolutions in harmonic space.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("kernel", help="write kernel coefficients")
    ksub = p.add_subparsers(dest="kernel", required=True, metavar="KERNEL")
    hg = ksub.add_parser("harmonic-gaussian", help="Gaussian in degree modulated by a Gaussian in order")
    hg.add_argument("--L", type=positive_int, required=True, help="bandlimit")
    hg.add_argument("--sigma-l", type=positive_float, required=True, help="degree width")
    hg.add_argument("--sigma-m", type=positive_float, required=True, help="order width")
    hg.add_argument("--real", action="store_true", help="impose conjugate symmetry (real field)")
    hg.add_argument("-o", "--output", required=True, help="output coefficient file")
    hg.set_defaults(func=cmd_kernel)
    dd = ksub.add_parser("dirac-delta", help="bandlimited Dirac delta at a point")
    dd.add_argument("--L", type=positive_int, required=True, help="bandlimit")
    dd.add_argument("--theta", type=parse_angle, required=True, help="colatitude")
    dd.add_argument("--phi", type=parse_angle, required=True, help="longitude")
    dd.add_argument("-o", "--output", required=True, help="output coefficient file")
    dd.set_defaults(func=cmd_kernel)

    p = sub.add_parser("translate", help="harmonic translation of a coefficient file")
    p.add_argument("input", help="input coefficient file")
    p.add_argument("--theta", type=parse_angle, required=True, help="colatitude of the translation point")
    p.add_argument("--phi", type=parse_angle, required=True, help="longitude of the translation point")
    p.add_argument("-o", "--output", required=True, help="output coefficient file")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("convolve", help="convolve two coefficient files")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("f", help="signal coefficient file")
    p.add_argument("g", help="kernel coefficient file")
    p.add_argument("--pad", action="store_true", help="zero-pad the smaller bandlimit")
    p.add_argument("--alphas", type=parse_angle_list, help="directional only: comma-separated alpha samples")
    p.add_argument("--betas", type=parse_angle_list, help="directional only: comma-separated beta samples")
    p.add_argument("--gammas", type=parse_angle_list, help="directional only: comma-separated gamma samples")
    p.add_argument(
        "-o",
        "--output",
        required=True,
        help="coefficient file; a (alpha beta gamma re im) table for directional, "
        "a (theta phi re im) table for commutative-anisotropic",
    )
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("verify-conjugate", help="check that coefficient file A equals conj(B) mode by mode")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=float, default=1e-14, help="max allowed deviation (default 1e-14)")
    p.set_defaults(func=cmd_verify_conjugate)

    p = sub.add_parser("render", help="synthesise and render a coefficient file as an equirectangular PNG")
    p.add_argument("input", help="coefficient file")
    p.add_argument("--part", choices=PARTS, default="real")
    p.add_argument("--colormap", choices=COLORMAPS, default="viridis")
    p.add_argument("--width", type=positive_int, default=512, help="image width; height is width / 2")
    p.add_argument("--center-theta", type=parse_angle, help="colatitude to place at the image centre")
    p.add_argument("--center-phi", type=parse_angle, help="longitude to place at the image centre")
    p.add_argument("-o", "--output", required=True, help="output PNG")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("ingest", help="convert an ICGEM-style gfc file to a coefficient file")
    p.add_argument("input", help="gfc file")
    p.add_argument("--L", type=positive_int, required=True, help="bandlimit to keep")
    p.add_argument("--kind", choices=KINDS, default="real-symmetric")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("demo-earth", help="reproduce the translated-kernel, topography and convolved-map figures")
    p.add_argument("--out-dir", default="demo_output", help="directory for the five PNGs")
    p.add_argument("--L", type=positive_int, default=128, help="bandlimit (default 128)")
    p.add_argument("--width", type=positive_int, default=512)
    p.add_argument("--gfc", help="gfc file to use instead of the bundled synthetic topography")
    p.add_argument("--theta", type=parse_angle, default=parse_angle("pi/8"), help="kernel translation colatitude")
    p.add_argument("--phi", type=parse_angle, default=parse_angle("3pi/4"), help="kernel translation longitude")
    p.add_argument("--center-theta", type=parse_angle, default=parse_angle(SOUTH_AMERICA[0]))
    p.add_argument("--center-phi", type=parse_angle, default=parse_angle(SOUTH_AMERICA[1]))
    p.add_argument("--colormap", choices=COLORMAPS, default="viridis")
    p.set_defaults(func=cmd_demo_earth)
    return parser


def _thread_limit():
    value = os.environ.get("SIFTSPHERE_THREADS")
    if not value:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=max(1, int(value)))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if getattr(args, "width", 2) % 2:
        parser.error("--width must be even")
    try:
        with _thread_limit():
            return args.func(args)
    except OSError as exc:
        print(f"siftsphere: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SiftsphereError, ValueError) as exc:
        print(f"siftsphere: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
