import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohsim.errors import (
    ConvergenceError,
    DomainError,
    RootNotFoundError,
    ShapeError,
)
from cohsim.numerics import (
    DEFAULT_QUADRATURE,
    Grid2D,
    QuadratureSpec,
    bessel_j1,
    fft2_centered,
    find_first_zero,
    integrate_1d,
    jinc,
)

from oracles import j1_series_oracle

# first positive zero of J1, frozen from the high-precision series oracle
# (bracketing bisection at 50 significant digits)
J1_FIRST_ZERO = 3.8317059702075147


class TestBesselJ1:
    def test_zero_at_origin(self):
        assert bessel_j1(0.0) == 0.0

    def test_leading_series_term(self):
        for x in (1e-8, 1e-6, 1e-4):
            assert bessel_j1(x) / x == pytest.approx(0.5, abs=1e-9)

    def test_first_zero_location(self):
        root = find_first_zero(lambda x: float(bessel_j1(x)), 0.5, tol=1e-13)
        assert root == pytest.approx(J1_FIRST_ZERO, abs=1e-9)

    def test_against_series_oracle(self):
        # relative accuracy <= 1e-12 for x <= 50 (envelope-scaled near zeros)
        xs = np.concatenate([
            np.linspace(0.05, 7.95, 37),
            np.linspace(8.05, 50.0, 41),
            [7.999, 8.0, 8.001],  # branch switch
        ])
        for x in xs:
            ref = j1_series_oracle(float(x))
            got = float(bessel_j1(float(x)))
            scale = max(abs(ref), math.sqrt(2.0 / (math.pi * x)))
            assert abs(got - ref) / scale < 1e-12, f"x={x}"

    def test_array_input(self):
        # batched recurrence shares an iteration count, so agreement with the
        # scalar path is to roundoff, not bit-exact
        xs = np.array([0.0, 1.0, 10.0, 40.0])
        vals = bessel_j1(xs)
        assert vals.shape == xs.shape
        for x, v in zip(xs, vals):
            assert v == pytest.approx(float(bessel_j1(float(x))), rel=1e-13, abs=1e-15)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bessel_j1(np.inf)
        with pytest.raises(DomainError):
            bessel_j1(-1.0)
        with pytest.raises(DomainError):
            bessel_j1(np.nan)


class TestJinc:
    def test_at_origin(self):
        assert jinc(0.0) == 1.0

    def test_vanishes_at_j1_zero(self):
        assert abs(jinc(J1_FIRST_ZERO)) < 1e-9

    def test_branch_consistency(self):
        from cohsim.numerics import _JINC_EPS as eps
        delta = 1e-3
        lo = jinc(eps * (1 - delta))
        hi = jinc(eps * (1 + delta))
        assert abs(lo - hi) <= 1e-12

    def test_series_branch_even(self):
        # the small-x branch is an even polynomial in x
        for x in (1e-7, 5e-6, 9.9e-6):
            assert jinc(x) == 1.0 - x * x / 8.0

    def test_matches_ratio_form(self):
        for x in (0.01, 0.5, 2.0, 11.0):
            assert jinc(x) == pytest.approx(2.0 * float(bessel_j1(x)) / x, rel=1e-13)


class TestIntegrate1D:
    def test_sin_over_half_period(self):
        res = integrate_1d(np.sin, 0.0, np.pi)
        assert res.value == pytest.approx(2.0, abs=1e-10)

    def test_peak_weight_integrals(self):
        # polynomial moments behind the broadband PSF peak values
        res_n = integrate_1d(lambda u: (1 + u) ** 2 / 4.0, -1.0, 1.0)
        assert res_n.value == pytest.approx(2.0 / 3.0, abs=1e-12)
        res_p = integrate_1d(lambda u: (1 - u * u) / 4.0, -1.0, 1.0)
        assert res_p.value == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_simpson_method(self):
        spec = QuadratureSpec(method="composite_simpson", rel_tol=1e-10, abs_tol=1e-13,
                              max_subdivisions=4000)
        res = integrate_1d(np.sin, 0.0, np.pi, spec)
        assert res.value == pytest.approx(2.0, abs=1e-9)

    def test_nonconvergence_carries_best_estimate(self):
        spec = QuadratureSpec(max_subdivisions=4, rel_tol=1e-14, abs_tol=1e-300)
        f = lambda x: np.abs(x - 1.0 / 3.0) ** 0.5 * np.sin(40 * x)
        with pytest.raises(ConvergenceError) as exc:
            integrate_1d(f, 0.0, 1.0, spec)
        assert exc.value.best_estimate is not None
        assert np.isfinite(exc.value.best_estimate)

    def test_scalar_callable_supported(self):
        res = integrate_1d(lambda x: math.exp(-x), 0.0, 3.0)
        assert res.value == pytest.approx(1.0 - math.exp(-3.0), abs=1e-12)

    def test_invalid_bounds(self):
        with pytest.raises(DomainError):
            integrate_1d(np.sin, 1.0, 0.0)

    def test_error_estimates_bound_actual(self):
        # randomized battery: polynomials, Gaussians, oscillatory products
        rng = np.random.default_rng(20260810)
        n_ok, n_tot = 0, 0
        for _ in range(100):
            coeffs = rng.uniform(-2, 2, size=rng.integers(2, 8))
            exact = np.polynomial.polynomial.Polynomial(coeffs).integ()
            res = integrate_1d(
                lambda x, c=coeffs: np.polynomial.polynomial.polyval(x, c), -1.0, 1.0)
            truth = exact(1.0) - exact(-1.0)
            n_tot += 1
            n_ok += abs(res.value - truth) <= res.err_est + 1e-14
        for _ in range(100):
            mu = rng.uniform(-0.5, 0.5)
            sig = rng.uniform(0.05, 0.5)
            res = integrate_1d(
                lambda x, m=mu, s=sig: np.exp(-((x - m) / s) ** 2), -1.0, 1.0)
            truth = sig * math.sqrt(math.pi) / 2 * (
                math.erf((1 - mu) / sig) + math.erf((1 + mu) / sig))
            n_tot += 1
            n_ok += abs(res.value - truth) <= res.err_est + 1e-14
        for _ in range(100):
            a = rng.uniform(1, 25)
            b = rng.uniform(1, 25)
            res = integrate_1d(lambda x, u=a, v=b: np.sin(u * x) * np.cos(v * x),
                               0.0, 2.0)
            if abs(a - b) < 1e-9:
                truth = (1 - math.cos(2 * a * 2.0)) / (4 * a)
            else:
                truth = ((1 - math.cos((a + b) * 2.0)) / (a + b)
                         + (1 - math.cos((a - b) * 2.0)) / (a - b)) / 2.0
            n_tot += 1
            n_ok += abs(res.value - truth) <= res.err_est + 1e-14
        assert n_ok / n_tot >= 0.99

    @given(st.lists(st.floats(-3, 3), min_size=1, max_size=5))
    @settings(max_examples=40, deadline=None)
    def test_polynomials_hypothesis(self, coeffs):
        poly = np.polynomial.polynomial.Polynomial(coeffs)
        truth = poly.integ()(2.0) - poly.integ()(-1.0)
        res = integrate_1d(lambda x: np.polynomial.polynomial.polyval(
            x, np.asarray(coeffs)), -1.0, 2.0)
        assert res.value == pytest.approx(truth, abs=1e-9, rel=1e-9)


class TestFindFirstZero:
    def test_j1_zero(self):
        root = find_first_zero(lambda x: float(bessel_j1(x)), 0.5, tol=1e-12)
        assert root == pytest.approx(J1_FIRST_ZERO, abs=1e-9)

    def test_cosine(self):
        root = find_first_zero(math.cos, 0.0, tol=1e-14)
        assert root == pytest.approx(math.pi / 2, abs=1e-12)

    def test_jinc_shares_j1_zero(self):
        root = find_first_zero(lambda x: float(jinc(x)), 0.1, tol=1e-12)
        assert root == pytest.approx(J1_FIRST_ZERO, abs=1e-9)

    def test_not_found(self):
        with pytest.raises(RootNotFoundError):
            find_first_zero(lambda x: 1.0 + x * x, 0.0, horizon=5.0)

    def test_requires_positive_start(self):
        with pytest.raises(DomainError):
            find_first_zero(lambda x: -1.0, 0.0)

    @given(st.floats(0.2, 2.0))
    @settings(max_examples=30, deadline=None)
    def test_shifted_cosine(self, scale):
        root = find_first_zero(lambda x: math.cos(scale * x), 0.0, tol=1e-13)
        assert root == pytest.approx(math.pi / (2 * scale), abs=1e-10)


class TestFFT2Centered:
    def test_center_impulse(self):
        n = 32
        f = np.zeros((n, n), complex)
        f[n // 2, n // 2] = 1.0
        F = fft2_centered(f)
        assert np.allclose(np.abs(F), 1.0 / n, atol=1e-14)

    def test_round_trip(self):
        rng = np.random.default_rng(7)
        f = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
        back = fft2_centered(fft2_centered(f), "inverse")
        assert np.max(np.abs(back - f)) / np.max(np.abs(f)) < 1e-12

    def test_parseval(self):
        rng = np.random.default_rng(8)
        f = rng.standard_normal((128, 128)) + 1j * rng.standard_normal((128, 128))
        F = fft2_centered(f)
        a = np.sum(np.abs(f) ** 2)
        b = np.sum(np.abs(F) ** 2)
        assert abs(a - b) / a < 1e-10

    def test_gaussian_conjugate_radius(self):
        # field e^{-rho^2/a^2} (1/e^2 intensity radius a) maps to 1/e^2
        # intensity radius 2/a in angular-frequency units
        grid = Grid2D(n=256, dx=1.0 / 16)
        a = 12 * grid.dx
        x = grid.coords()
        X, Y = np.meshgrid(x, x, indexing="ij")
        f = np.exp(-(X ** 2 + Y ** 2) / a ** 2)
        F = np.abs(fft2_centered(f)) ** 2
        k = grid.kcoords()
        KX, KY = np.meshgrid(k, k, indexing="ij")
        K2 = KX ** 2 + KY ** 2
        sel = (F > F.max() * 1e-6)
        slope = np.polyfit(K2[sel].ravel(), np.log(F[sel].ravel()), 1)[0]
        measured = math.sqrt(-2.0 / slope)
        assert measured == pytest.approx(2.0 / a, rel=0.01)

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            fft2_centered(np.zeros((32, 16)))
        with pytest.raises(ShapeError):
            fft2_centered(np.zeros((24, 24)))


class TestGrid2D:
    def test_extent(self):
        g = Grid2D(n=64, dx=0.5e-3)
        assert g.extent == pytest.approx(64 * 0.5e-3)
        assert len(g.coords()) == 64
        assert g.coords()[64 // 2] == 0.0

    def test_power_of_two_required(self):
        with pytest.raises(DomainError):
            Grid2D(n=48, dx=1.0)
        with pytest.raises(DomainError):
            Grid2D(n=8, dx=1.0)

    def test_kcoords_nyquist(self):
        g = Grid2D(n=32, dx=0.25)
        k = g.kcoords()
        assert k[0] == pytest.approx(-np.pi / g.dx)
        assert k[32 // 2] == 0.0


class TestQuadratureSpecValidation:
    def test_rejects_bad_tolerances(self):
        with pytest.raises(DomainError):
            QuadratureSpec(rel_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(max_subdivisions=0)
        with pytest.raises(DomainError):
            QuadratureSpec(method="romberg")

    def test_defaults(self):
        assert DEFAULT_QUADRATURE.method == "adaptive_gk"
        assert DEFAULT_QUADRATURE.rel_tol == 1e-10
        assert DEFAULT_QUADRATURE.abs_tol == 1e-14
        assert DEFAULT_QUADRATURE.max_subdivisions == 2000
