import math

import numpy as np
import pytest

from steklovlab.errors import InvalidArgument
from steklovlab.hadamard import (
    MultipletSpec,
    NormalSpeed,
    criticality_check,
    hadamard_derivative,
    neumann_multiplet,
    scaling_oracle,
    steklov_multiplet,
    surface_fields,
    volume_derivative,
)


class TestSurfaceFields:
    def test_linear_multiplet_values(self):
        # modes x/sqrt(pi), y/sqrt(pi): flat Hessian, unit-gradient sum
        m = steklov_multiplet(1, 2, 1.0)
        f = surface_fields(m, np.linspace(0.0, 2.0 * math.pi, 7))
        assert np.allclose(f["v2"], 1.0 / math.pi, rtol=1e-13)
        assert np.allclose(f["grad2"], 2.0 / math.pi, rtol=1e-13)
        assert np.allclose(f["hess2"], 0.0, atol=1e-25)

    def test_normal_derivative_relation_for_linear_modes(self):
        # v = r * angular, so d(v^2)/dn = 2 v^2 on the unit circle
        m = steklov_multiplet(1, 2, 3.0)
        th = np.linspace(0.0, 2.0 * math.pi, 11)
        f = surface_fields(m, th)
        assert np.allclose(f["dv2_dn"], 2.0 * f["v2"], rtol=1e-13)

    @pytest.mark.parametrize("l", [2, 3])
    @pytest.mark.parametrize("tau", [0.5, 2.0])
    def test_constancy_over_sampled_points(self, l, tau):
        m = steklov_multiplet(l, 2, tau)
        from steklovlab.harmonics import sphere_sample

        pts = sphere_sample(2, 1000, 1)
        th = np.arctan2(pts[:, 1], pts[:, 0])
        f = surface_fields(m, th)
        for key, arr in f.items():
            spread = arr.max() - arr.min()
            assert spread <= 1e-10 * max(abs(arr.mean()), 1e-30), key


class TestSteklovDerivatives:
    @pytest.mark.parametrize("tau", [0.5, 1.0, 5.0])
    def test_dilation_of_linear_multiplet_is_minus_2tau(self, tau):
        m = steklov_multiplet(1, 2, tau)
        d = hadamard_derivative(m, NormalSpeed.constant(1.0))
        assert d == pytest.approx(-2.0 * tau, rel=1e-12)

    @pytest.mark.parametrize("tau", [0.5, 1.0, 5.0])
    @pytest.mark.parametrize("l", [1, 2, 3])
    @pytest.mark.parametrize("s", [1, 2])
    def test_scaling_oracle_agreement(self, tau, l, s):
        m = steklov_multiplet(l, 2, tau, s=s)
        hd = hadamard_derivative(m, NormalSpeed.constant(1.0))
        so = scaling_oracle(m)
        assert hd == pytest.approx(so, rel=1e-6, abs=1e-9)

    def test_central_difference_order(self):
        m = steklov_multiplet(2, 2, 1.0)
        exact = hadamard_derivative(m, NormalSpeed.constant(1.0))
        e_coarse = abs(scaling_oracle(m, h=4e-3) - exact)
        e_fine = abs(scaling_oracle(m, h=2e-3) - exact)
        assert e_fine == pytest.approx(e_coarse / 4.0, rel=0.2)  # O(h^2)

    def test_linearity_in_speed(self):
        m = steklov_multiplet(2, 2, 1.0)
        d1 = hadamard_derivative(m, NormalSpeed.constant(1.0))
        d2 = hadamard_derivative(m, NormalSpeed.cosine(1))
        d12 = hadamard_derivative(m, NormalSpeed(lambda th: 1.0 + np.cos(th)))
        assert d12 == pytest.approx(d1 + d2, abs=1e-12 * max(abs(d1), 1.0))

    @pytest.mark.parametrize("l", [1, 2, 3])
    @pytest.mark.parametrize("mode", [1, 2, 3])
    def test_volume_preserving_speeds_are_critical(self, l, mode):
        m = steklov_multiplet(l, 2, 1.0)
        speed = NormalSpeed.cosine(mode)
        assert abs(volume_derivative(speed)) < 1e-12
        d = hadamard_derivative(m, speed)
        assert abs(d) <= 1e-9 * abs(m.lam) + 1e-12

    def test_symmetric_function_consistency(self):
        # for |F| = 2 the formula forces dL_{F,2} = lambda_F dL_{F,1}
        m1 = steklov_multiplet(2, 2, 1.0, s=1)
        m2 = steklov_multiplet(2, 2, 1.0, s=2)
        d1 = hadamard_derivative(m1, NormalSpeed.constant(1.0))
        d2 = hadamard_derivative(m2, NormalSpeed.constant(1.0))
        assert d2 == pytest.approx(m1.lam * d1, rel=1e-13)

    @pytest.mark.parametrize("l", [1, 2, 3])
    def test_criticality_certificate(self, l):
        m = steklov_multiplet(l, 2, 1.0)
        assert criticality_check(m) <= 1e-8


class TestNeumannDerivatives:
    @pytest.mark.parametrize("l", [1, 2])
    def test_scaling_oracle_agreement(self, l):
        m = neumann_multiplet(l, 2, 1.0)
        hd = hadamard_derivative(m, NormalSpeed.constant(1.0))
        so = scaling_oracle(m)
        assert hd == pytest.approx(so, rel=1e-6)

    def test_criticality(self):
        m = neumann_multiplet(2, 2, 1.0)
        assert criticality_check(m) <= 1e-6

    def test_volume_preserving(self):
        m = neumann_multiplet(1, 2, 1.0)
        d = hadamard_derivative(m, NormalSpeed.cosine(2))
        assert abs(d) <= 1e-9 * abs(m.lam) + 1e-12


class TestValidation:
    def test_multiplet_size_must_match(self):
        with pytest.raises(InvalidArgument):
            MultipletSpec(
                l=2, N=2, tau=1.0, problem="steklov", s=1, lam=9.2,
                indices=(0,), boundary_data=(1.0, 1.0, 0.0),
            )

    def test_s_range(self):
        with pytest.raises(InvalidArgument):
            steklov_multiplet(2, 2, 1.0, s=3)

    def test_problem_tag(self):
        with pytest.raises(InvalidArgument):
            MultipletSpec(
                l=1, N=2, tau=1.0, problem="dirichlet", s=1, lam=1.0,
                indices=(0, 1), boundary_data=(1.0, 1.0, 0.0),
            )

    def test_dimension_restriction(self):
        with pytest.raises(InvalidArgument):
            steklov_multiplet(1, 3, 1.0)

    def test_fd_step_window(self):
        m = steklov_multiplet(1, 2, 1.0)
        with pytest.raises(InvalidArgument):
            scaling_oracle(m, h=0.5)
