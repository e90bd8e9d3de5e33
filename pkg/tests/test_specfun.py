import math

import numpy as np
import pytest

from steklovlab.errors import InvalidArgument, OverflowSignal, PoleSignal
from steklovlab.specfun import (
    BesselKind,
    UltrasphericalSpec,
    bessel_eval,
    modified_wrapper_series,
    ultraspherical_eval,
    ultraspherical_scaled,
)

I, K = BesselKind.MODIFIED_FIRST, BesselKind.MODIFIED_SECOND
J, Y = BesselKind.ORDINARY_FIRST, BesselKind.ORDINARY_SECOND


def series_oracle(nu: float, z: float, terms: int = 40) -> float:
    """Independent power series sum_k (z/2)^(nu+2k) / (k! Gamma(nu+k+1))."""
    total = 0.0
    for k in range(terms):
        total += math.exp(
            (nu + 2 * k) * math.log(z / 2.0) - math.lgamma(k + 1) - math.lgamma(nu + k + 1)
        )
    return total


def ul(kind, l, N, d, z):
    return ultraspherical_eval(UltrasphericalSpec(kind, l, N, d), z)


class TestBesselEval:
    def test_small_argument_leading_term(self):
        # (z/2)^2 / 2! dominates for I_2 at z = 1e-4
        val = bessel_eval(I, 2.0, 1e-4)
        assert val == pytest.approx(1.25e-9, rel=1e-8)

    def test_half_integer_closed_form(self):
        want = math.sqrt(2.0 / math.pi) * math.sinh(1.0)
        assert bessel_eval(I, 0.5, 1.0) == pytest.approx(want, rel=1e-13)
        assert series_oracle(0.5, 1.0) == pytest.approx(want, rel=1e-13)

    def test_j0_at_origin_limit(self):
        assert abs(bessel_eval(J, 0.0, 1e-8) - 1.0) < 1e-15

    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.0, 7.0, 13.5, 31.0, 60.0])
    @pytest.mark.parametrize("z", [0.05, 0.7, 3.0, 14.0, 30.0])
    def test_series_oracle_agreement(self, nu, z):
        assert bessel_eval(I, nu, z) == pytest.approx(series_oracle(nu, z, 200), rel=1e-12)

    @pytest.mark.parametrize("nu", [0.0, 0.5, 3.0, 17.5, 42.0, 60.0])
    @pytest.mark.parametrize("z", [0.01, 1.0, 25.0, 120.0, 500.0])
    def test_full_range_against_mpmath(self, nu, z):
        import mpmath as mp

        mp.mp.dps = 30
        ref_i = float(mp.besseli(nu, z) * mp.exp(-z))
        assert bessel_eval(I, nu, z, scaled=True) == pytest.approx(ref_i, rel=1e-12)
        ref_k = float(mp.besselk(nu, z) * mp.exp(z))
        assert bessel_eval(K, nu, z, scaled=True) == pytest.approx(ref_k, rel=1e-12)
        # oscillatory kinds: accuracy is relative to the oscillation modulus
        # (straight relative error is unattainable arbitrarily close to zeros)
        ref_j, ref_y = float(mp.besselj(nu, z)), float(mp.bessely(nu, z))
        modulus = math.hypot(ref_j, ref_y)
        assert abs(bessel_eval(J, nu, z) - ref_j) <= 1e-12 * modulus
        if abs(ref_y) < 1e250:  # Y overflows the scale only at tiny z, high nu
            assert abs(bessel_eval(Y, nu, z) - ref_y) <= 1e-12 * max(modulus, abs(ref_y))

    def test_scaled_unscaled_consistency(self):
        for nu in (0.0, 1.5, 6.0):
            for z in (0.2, 1.0, 8.0, 40.0):
                unscaled = bessel_eval(I, nu, z)
                scaled = bessel_eval(I, nu, z, scaled=True)
                assert unscaled == pytest.approx(scaled * math.exp(z), rel=1e-13)
                unscaled_k = bessel_eval(K, nu, z)
                scaled_k = bessel_eval(K, nu, z, scaled=True)
                assert unscaled_k == pytest.approx(scaled_k * math.exp(-z), rel=1e-13)

    def test_overflow_signal_directs_to_scaled(self):
        with pytest.raises(OverflowSignal):
            bessel_eval(I, 0.0, 800.0)
        assert math.isfinite(bessel_eval(I, 0.0, 800.0, scaled=True))

    def test_invalid_inputs(self):
        with pytest.raises(InvalidArgument):
            bessel_eval(I, 1.0, -1.0)
        with pytest.raises(InvalidArgument):
            bessel_eval(I, -1.0, 1.0)
        with pytest.raises(InvalidArgument):
            bessel_eval(I, math.nan, 1.0)


class TestUltraspherical:
    def test_wrapper_identity_for_n2_l0(self):
        # z^(1-N/2) = 1 at N = 2, so i_0 is I_0 itself
        assert ul(I, 0, 2, 0, 1.0) == pytest.approx(1.2660658777520084, rel=1e-14)

    def test_first_recurrence_example(self):
        # i_2'(1) = 2 i_2(1) + i_3(1) in N = 3
        lhs = ul(I, 2, 3, 1, 1.0)
        rhs = 2.0 * ul(I, 2, 3, 0, 1.0) + ul(I, 3, 3, 0, 1.0)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    @pytest.mark.parametrize("z", [0.5, 2.0, 10.0])
    @pytest.mark.parametrize("d", [0, 1, 2, 3])
    def test_positivity_of_i_and_derivatives(self, z, d):
        assert ul(I, 3, 2, d, z) > 0.0

    def test_recurrence_residuals(self):
        # the ultraspherical derivative identities used by the eigenvalue formula
        rng = np.random.default_rng(11)
        for _ in range(80):
            l = int(rng.integers(0, 11))
            N = int(rng.choice([2, 3, 4]))
            tau = float(rng.uniform(0.1, 25.0))
            z = math.sqrt(tau)
            i = [ul(I, l + m, N, 0, z) for m in range(4)]
            r1 = (l / z) * i[0] + i[1]
            r2 = (l * (l - 1) / tau) * i[0] + ((2 * l + 1) / z) * i[1] + i[2]
            r3 = (
                l * (l - 1) * (l - 2) / (tau * z) * i[0]
                + 3 * l * l / tau * i[1]
                + 3 * (l + 1) / z * i[2]
                + i[3]
            )
            assert ul(I, l, N, 1, z) == pytest.approx(r1, rel=1e-10)
            assert ul(I, l, N, 2, z) == pytest.approx(r2, rel=1e-10)
            assert ul(I, l, N, 3, z) == pytest.approx(r3, rel=1e-10)

    def test_monotone_domination(self):
        for l in range(11):
            for z in (0.1, 0.8, 3.0, 9.0, 25.0):
                assert ul(I, l, 3, 0, z) >= ul(I, l + 1, 3, 0, z)

    def test_wronskian(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            nu = float(rng.uniform(0.0, 10.0))
            z = float(rng.uniform(0.1, 50.0))
            jv = bessel_eval(J, nu, z)
            yv = bessel_eval(Y, nu, z)
            djv = (nu / z) * jv - bessel_eval(J, nu + 1, z)
            dyv = (nu / z) * yv - bessel_eval(Y, nu + 1, z)
            assert jv * dyv - djv * yv == pytest.approx(2.0 / (math.pi * z), rel=1e-10)

    def test_pole_signal_near_zero(self):
        with pytest.raises(PoleSignal):
            ul(K, 2, 3, 0, 1e-300)

    def test_derivative_order_validation(self):
        with pytest.raises(InvalidArgument):
            UltrasphericalSpec(I, 1, 2, 4)

    def test_scaled_matches_unscaled(self):
        for l in (0, 2, 5):
            for d in range(4):
                z = 3.7
                assert ultraspherical_scaled(I, l, 3, d, z) * math.exp(z) == pytest.approx(
                    ul(I, l, 3, d, z), rel=1e-13
                )

    def test_series_matches_wrapper_small_z(self):
        for l in (0, 1, 3):
            for d in range(4):
                z = 0.25
                assert modified_wrapper_series(l, 3, z, d) == pytest.approx(
                    ul(I, l, 3, d, z), rel=1e-11
                )
