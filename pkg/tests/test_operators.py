import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import quadrature, random_coeffs, real_space_rotated, scipy_synthesize, scipy_ylm_matrix
from siftsphere import (
    AxisymmetryError,
    BandlimitMismatchError,
    EulerAngles,
    GridSignal,
    HarmonicCoefficients,
    HarmonicGaussianSpec,
    SO3Signal,
    SpherePoint,
    commutative_anisotropic_convolve,
    conj_commutativity_check,
    dirac_delta,
    directional_convolve,
    harmonic_gaussian,
    inverse_sht,
    isotropic_convolve,
    left_convolve,
    make_grid,
    rotate,
    sift_convolve,
    translate,
)
from siftsphere.operators import check_axisymmetric, default_so3_angles
from siftsphere.sht import degrees_orders, flat_index, synthesize_at


def axisymmetric(rng, L, complex_profile=False):
    ell, m = degrees_orders(L)
    profile = rng.standard_normal(L) + (1j * rng.standard_normal(L) if complex_profile else 0)
    return HarmonicCoefficients(L, np.where(m == 0, profile[ell], 0))


def single_mode(L, ell, m, value):
    values = np.zeros(L * L, complex)
    values[flat_index(ell, m)] = value
    return HarmonicCoefficients(L, values)


class TestTranslate:
    def test_north_pole(self, rng):
        L = 9
        f = random_coeffs(rng, L)
        out = translate(f, SpherePoint(0.0, 1.3))
        ell, m = degrees_orders(L)
        expected = np.where(m == 0, f.values * np.sqrt((2 * ell + 1) / (4 * math.pi)), 0)
        np.testing.assert_allclose(out.values, expected, atol=1e-15)

    def test_zeros(self):
        assert np.all(translate(HarmonicCoefficients.zeros(6), SpherePoint(1.0, 2.0)).values == 0)

    def test_double_sum_oracle(self, rng):
        L = 16
        f = random_coeffs(rng, L)
        p = SpherePoint(0.9, 2.4)
        signal = inverse_sht(translate(f, p))
        theta, phi = signal.grid.points()
        oracle = scipy_ylm_matrix(L, theta, phi) @ (f.values * scipy_ylm_matrix(L, p.theta, p.phi))
        np.testing.assert_allclose(signal.samples, oracle, atol=1e-11)

    def test_even_order_symmetry(self):
        # f_lm = f_l(-m) makes T f a function of phi + phi', hence mirror
        # symmetric about -phi' (not about phi' itself)
        L = 32
        f = harmonic_gaussian(HarmonicGaussianSpec(12.0, 3.0, L))
        p = SpherePoint(math.pi / 8, 3 * math.pi / 4)
        tf = translate(f, p)
        theta = np.linspace(0.05, 3.0, 9)[:, None]
        x = np.linspace(0.0, math.pi, 13)[None, :]
        left = np.abs(synthesize_at(tf, theta, -p.phi + x))
        right = np.abs(synthesize_at(tf, theta, -p.phi - x))
        assert np.max(np.abs(left - right)) < 1e-10

    def test_even_order_symmetry_on_grid(self):
        L = 24
        grid = make_grid(L)
        f = harmonic_gaussian(HarmonicGaussianSpec(10.0, 4.0, L))
        k = 7
        p = SpherePoint(1.0, grid.phis[k])
        a = np.abs(inverse_sht(translate(f, p), grid).samples)
        # column -k + j mirrors to -k - j
        cols = (-k + np.arange(grid.n_phi)) % grid.n_phi
        mirror = (-k - np.arange(grid.n_phi)) % grid.n_phi
        assert np.max(np.abs(a[:, cols] - a[:, mirror])) < 1e-10


class TestSifting:
    def test_single_mode_product(self):
        out = sift_convolve(single_mode(3, 2, -1, 2 + 1j), single_mode(3, 2, -1, 1 - 1j))
        assert out[2, -1] == pytest.approx(1 + 3j)
        assert np.count_nonzero(out.values) == 1

    def test_delta_gives_translation(self, rng):
        f = random_coeffs(rng, 20)
        p = SpherePoint(2.0, 5.0)
        assert np.max(np.abs(sift_convolve(f, dirac_delta(20, p)).values - translate(f, p).values)) < 1e-14

    def test_real_space_oracle(self, rng):
        L = 16
        f, g = random_coeffs(rng, L), random_coeffs(rng, L)
        grid = make_grid(L)
        theta, phi = grid.points()
        Y = scipy_ylm_matrix(L, theta.ravel(), phi.ravel())
        # column j holds T_w f sampled on the grid for output point w_j
        T = (Y * f.values) @ Y.T
        g_samples = scipy_synthesize(g, theta, phi).ravel()
        w = np.repeat(grid.weights, grid.n_phi) * (2 * math.pi / grid.n_phi)
        oracle = (w * np.conj(g_samples)) @ T
        ours = inverse_sht(sift_convolve(f, g), grid).samples.ravel()
        assert np.max(np.abs(ours - oracle)) < 1e-10

    def test_axisymmetric_kernel_zeros(self, rng):
        f = random_coeffs(rng, 8)
        g = axisymmetric(rng, 8)
        out = sift_convolve(f, g)
        _, m = degrees_orders(8)
        assert np.all(out.values[m != 0] == 0)
        np.testing.assert_array_equal(out.values, f.values * np.conj(g.values))

    def test_bandlimit_mismatch(self, rng):
        f, g = random_coeffs(rng, 6), random_coeffs(rng, 8)
        with pytest.raises(BandlimitMismatchError, match="pad"):
            sift_convolve(f, g)
        out = sift_convolve(f, g, pad=True)
        assert out.bandlimit == 8
        np.testing.assert_array_equal(out.values, f.padded(8).values * np.conj(g.values))


class TestConjugateCommutativity:
    def test_random_complex(self, rng):
        f, g = random_coeffs(rng, 32), random_coeffs(rng, 32)
        assert conj_commutativity_check(f, g) < 1e-14

    def test_self_is_real(self, rng):
        f = random_coeffs(rng, 12)
        out = sift_convolve(f, f).values
        assert np.max(np.abs(out.imag)) < 1e-15
        assert np.all(out.real >= 0)

    def test_real_fields_mirror(self, rng):
        f, g = random_coeffs(rng, 16, real=True), random_coeffs(rng, 16, real=True)
        assert conj_commutativity_check(f, g) < 1e-14
        ell, m = degrees_orders(16)
        fg, gf = sift_convolve(f, g).values, sift_convolve(g, f).values
        # swapped output is the unswapped one with m -> -m
        assert np.max(np.abs(gf - fg[flat_index(ell, -m)])) < 1e-14

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 40), st.integers(0, 2**32 - 1))
    def test_property(self, L, seed):
        rng = np.random.default_rng(seed)
        assert conj_commutativity_check(random_coeffs(rng, L), random_coeffs(rng, L)) < 1e-14


class TestIsotropic:
    def test_monopole_scale(self):
        out = isotropic_convolve(single_mode(1, 0, 0, 1.0), single_mode(1, 0, 0, 1.0))
        assert out[0, 0] == pytest.approx(3.5449077018, abs=1e-10)

    def test_identity_kernel(self, rng):
        L = 10
        f = random_coeffs(rng, L)
        ell, m = degrees_orders(L)
        g = HarmonicCoefficients(L, np.where(m == 0, np.sqrt((2 * ell + 1) / (4 * math.pi)), 0))
        np.testing.assert_allclose(isotropic_convolve(f, g).values, f.values, atol=1e-14)

    def test_real_space_oracle(self, rng):
        L = 8
        f, g = random_coeffs(rng, L), axisymmetric(rng, L, complex_profile=True)
        grid = make_grid(L)
        ours = inverse_sht(isotropic_convolve(f, g), grid).samples
        f_samples = inverse_sht(f, grid).samples
        oracle = np.empty(grid.shape, complex)
        for j, theta in enumerate(grid.thetas):
            for k, phi in enumerate(grid.phis):
                rg = real_space_rotated(g, EulerAngles(phi, theta, 0.0), grid).samples
                oracle[j, k] = quadrature(grid, f_samples, rg)
        assert np.max(np.abs(ours - oracle)) < 1e-10

    def test_rejects_directional(self, rng):
        g = harmonic_gaussian(HarmonicGaussianSpec(5.0, 2.0, 6))
        with pytest.raises(AxisymmetryError) as info:
            isotropic_convolve(random_coeffs(rng, 6), g)
        assert info.value.m != 0
        assert "m=" in str(info.value)

    def test_tolerance(self, rng):
        g = axisymmetric(rng, 6).values.copy()
        g[flat_index(3, 2)] = 1e-13
        isotropic_convolve(random_coeffs(rng, 6), HarmonicCoefficients(6, g))
        g[flat_index(3, 2)] = 1e-11
        with pytest.raises(AxisymmetryError, match=r"l=3, m=2"):
            check_axisymmetric(HarmonicCoefficients(6, g))


class TestLeft:
    def test_ratio(self, rng):
        L = 12
        f, g = random_coeffs(rng, L), axisymmetric(rng, L)
        ratio = left_convolve(f, g).values / isotropic_convolve(f, g).values
        _, m = degrees_orders(L)
        nonzero = np.abs(isotropic_convolve(f, g).values) > 0
        np.testing.assert_allclose(ratio[nonzero], 2 * math.pi, rtol=1e-13)

    def test_zeros(self, rng):
        out = left_convolve(HarmonicCoefficients.zeros(5), axisymmetric(rng, 5))
        assert np.all(out.values == 0)

    def test_complex_profile_not_conjugated(self, rng):
        L = 16
        f, g = random_coeffs(rng, L), axisymmetric(rng, L, complex_profile=True)
        expected = 2 * math.pi * isotropic_convolve(f, g.replace(np.conj(g.values))).values
        np.testing.assert_allclose(left_convolve(f, g).values, expected, atol=1e-13)

    def test_rejects_directional(self, rng):
        with pytest.raises(AxisymmetryError):
            left_convolve(random_coeffs(rng, 4), random_coeffs(rng, 4))


class TestDirectional:
    def test_default_angles(self):
        a, b, g = default_so3_angles(6)
        assert a.size == 11 and b.size == 6 and g.size == 11
        np.testing.assert_allclose(b, make_grid(6).thetas)

    def test_axisymmetric_reduction(self, rng):
        L = 8
        f, g = random_coeffs(rng, L), axisymmetric(rng, L)
        out = directional_convolve(f, g)
        iso = inverse_sht(isotropic_convolve(f, g)).samples
        # values[alpha, beta, gamma=0] against samples[theta=beta, phi=alpha]
        assert np.max(np.abs(out.values[:, :, 0].T - iso)) < 1e-10

    def test_identity_rotation(self, rng):
        f, g = random_coeffs(rng, 7), random_coeffs(rng, 7)
        out = directional_convolve(f, g, [0.0], [0.0], [0.0])
        assert out.values[0, 0, 0] == pytest.approx(np.sum(f.values * np.conj(g.values)), abs=1e-12)

    def test_autocorrelation_peak(self, rng):
        f = random_coeffs(rng, 6)
        out = directional_convolve(f, f, np.linspace(0, 2 * math.pi, 9), np.linspace(0, math.pi, 7), np.linspace(0, 2 * math.pi, 9))
        peak = out.values[0, 0, 0]
        assert abs(peak.imag) < 1e-12
        assert peak.real == pytest.approx(np.sum(np.abs(f.values) ** 2))
        assert np.max(np.abs(out.values)) <= peak.real + 1e-10

    def test_real_space_oracle(self, rng):
        L = 8
        f, g = random_coeffs(rng, L), random_coeffs(rng, L)
        grid = make_grid(L)
        alphas = np.linspace(0.1, 6.0, 5)
        betas = np.linspace(0.0, math.pi, 5)
        gammas = np.linspace(0.3, 5.5, 5)
        out = directional_convolve(f, g, alphas, betas, gammas)
        f_samples = inverse_sht(f, grid).samples
        worst = 0.0
        for i, a in enumerate(alphas):
            for j, b in enumerate(betas):
                for k, c in enumerate(gammas):
                    rg = real_space_rotated(g, EulerAngles(a, b, c), grid).samples
                    worst = max(worst, abs(out.values[i, j, k] - quadrature(grid, f_samples, rg)))
        assert worst < 1e-10

    def test_output_type(self, rng):
        out = directional_convolve(random_coeffs(rng, 4), random_coeffs(rng, 4), [0, 1], [0.5], [0, 1, 2])
        assert isinstance(out, SO3Signal)
        assert out.values.shape == (2, 1, 3)
        table = out.table()
        assert table.shape == (6, 5)
        np.testing.assert_allclose(table[:, 3] + 1j * table[:, 4], out.values.ravel())

    def test_empty_angles(self, rng):
        with pytest.raises(ValueError):
            directional_convolve(random_coeffs(rng, 3), random_coeffs(rng, 3), [], [0.0], [0.0])


class TestCommutativeAnisotropic:
    def oracle(self, f, g, grid):
        out = np.empty(grid.shape, complex)
        g_samples = inverse_sht(g, grid).samples
        for j, theta in enumerate(grid.thetas):
            for k, phi in enumerate(grid.phis):
                rf = real_space_rotated(f, EulerAngles(phi, theta, math.pi - phi), grid).samples
                # bilinear: the kernel is not conjugated
                out[j, k] = quadrature(grid, rf, np.conj(g_samples))
        return out

    def test_real_space_oracle(self, rng):
        L = 8
        f, g = random_coeffs(rng, L), random_coeffs(rng, L)
        out = commutative_anisotropic_convolve(f, g)
        assert isinstance(out, GridSignal)
        assert np.max(np.abs(out.samples - self.oracle(f, g, out.grid))) < 1e-10

    def test_rotation_is_involution(self):
        for theta, phi in [(0.3, 1.0), (2.0, 4.5)]:
            rho = EulerAngles(phi, theta, math.pi - phi)
            np.testing.assert_allclose(rho.matrix() @ rho.matrix(), np.eye(3), atol=1e-14)

    @pytest.mark.parametrize("real", [False, True])
    def test_commutative(self, rng, real):
        f, g = random_coeffs(rng, 8, real=real), random_coeffs(rng, 8, real=real)
        fg = commutative_anisotropic_convolve(f, g).samples
        gf = commutative_anisotropic_convolve(g, f).samples
        assert np.max(np.abs(fg - gf)) < 1e-10

    def test_real_kernel_expansion(self, rng):
        # for real g the kernel term is conj(g_lm)
        L = 6
        f, g = random_coeffs(rng, L), random_coeffs(rng, L, real=True)
        out = commutative_anisotropic_convolve(f, g)
        for j, theta in enumerate(out.grid.thetas[::2]):
            for k, phi in enumerate(out.grid.phis[::3]):
                rf = rotate(f, EulerAngles(phi, theta, math.pi - phi))
                expected = np.sum(rf.values * np.conj(g.values))
                assert abs(out.samples[2 * j, 3 * k] - expected) < 1e-12

    def test_zero(self, rng):
        out = commutative_anisotropic_convolve(HarmonicCoefficients.zeros(5), random_coeffs(rng, 5))
        assert np.all(np.abs(out.samples) < 1e-300)

    def test_monopole(self):
        f, g = single_mode(6, 0, 0, 2 - 1j), single_mode(6, 0, 0, 0.5 + 3j)
        out = commutative_anisotropic_convolve(f, g).samples
        np.testing.assert_allclose(out, (2 - 1j) * (0.5 + 3j), atol=1e-14)

    def test_accepts_directional(self):
        k = harmonic_gaussian(HarmonicGaussianSpec(3.0, 1.0, 5))
        out = commutative_anisotropic_convolve(k, k)
        assert out.grid.bandlimit == 5
