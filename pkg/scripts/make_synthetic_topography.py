"""Regenerate the bundled synthetic topography (ICGEM layout, degrees 0..31).

Coefficients are seeded Gaussian draws with a red power-law spectrum so the
field has continent-sized structure; the file is not derived from real data.
"""

import argparse

import numpy as np

HEADER = """\
product_type          topography
unit                  km
modelname             siftsphere_synthetic_topography
radius                6378137.0
max_degree            {lmax}
norm                  fully_normalized
errors                no
key      L    M             C                      S                  sigma C     sigma S
end_of_head ==========================================================================
"""


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output")
    parser.add_argument("--lmax", type=int, default=31)
    parser.add_argument("--seed", type=int, default=20200323)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    lines = [HEADER.format(lmax=args.lmax)]
    for ell in range(args.lmax + 1):
        amplitude = 2.0 * (ell + 1.0) ** -1.6
        for m in range(ell + 1):
            c = amplitude * rng.standard_normal()
            s = 0.0 if m == 0 else amplitude * rng.standard_normal()
            if ell == 0:
                c = -2.4
            lines.append(f"gfc {ell:4d} {m:4d} {c: .12e} {s: .12e} 0.0000e+00 0.0000e+00\n")
    with open(args.output, "w", encoding="ascii") as fh:
        fh.writelines(lines)


if __name__ == "__main__":
    main()
