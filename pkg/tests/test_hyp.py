import math
import warnings

import numpy as np
import pytest

from weightlab.asymfit import fit_exponent
from weightlab.errors import DivergentAtBoundary, GammaPole, NotInConfiguration
from weightlab.hyp import (
    Hyp2F1Params,
    euler_factorization,
    gauss_value,
    hyp2f1,
    hyp2f1_derivative,
    indicial_exponents,
    theta_integral,
    theta_integral_quadrature,
)
from weightlab.scalars import pochhammer


class TestSeries:
    def test_value_at_origin(self):
        for p in (Hyp2F1Params(0.3, -0.7, 2.1), Hyp2F1Params(1 + 2j, -1j, 0.5)):
            assert hyp2f1(p, 0) == 1

    def test_terminating_series_by_direct_sum(self):
        p = Hyp2F1Params(-2, 0.25, 0.5)
        want = sum(pochhammer(-2.0, n) * pochhammer(0.25, n)
                   / (pochhammer(0.5, n) * math.factorial(n)) * 0.7 ** n
                   for n in range(3))
        assert abs(hyp2f1(p, 0.7) - want) < 1e-14

    def test_polynomial_valid_beyond_disc(self):
        p = Hyp2F1Params(-3, 1.5, 2.5)
        assert np.isfinite(hyp2f1(p, 4.0))

    def test_gamma_pole(self):
        with pytest.raises(GammaPole):
            hyp2f1(Hyp2F1Params(0.5, 0.7, -1), 0.3)

    def test_pole_after_truncation_is_fine(self):
        # alpha = -2 stops the series at degree 2, before gamma = -3 poles at term 4
        assert np.isfinite(hyp2f1(Hyp2F1Params(-2, 0.7, -3), 0.3).real)

    def test_truncation_after_pole_still_poles(self):
        with pytest.raises(GammaPole):
            hyp2f1(Hyp2F1Params(-5, 0.7, -3), 0.3)

    def test_divergent_at_boundary(self):
        with pytest.raises(DivergentAtBoundary):
            hyp2f1(Hyp2F1Params(1.3, 1.2, 1.0), 1.0)

    def test_outside_disc_rejected(self):
        with pytest.raises(ValueError):
            hyp2f1(Hyp2F1Params(0.3, 0.2, 1.0), 1.5)


class TestGaussValue:
    def test_against_direct_summation(self):
        # Re(gamma - alpha - beta) = 2.5 > 0: series converges at z = 1
        p = Hyp2F1Params(0.3, -0.7, 2.1)
        assert abs(hyp2f1(p, 1.0) - gauss_value(p)) < 1e-9

    def test_complex_parameters(self):
        p = Hyp2F1Params(0.3 + 0.2j, -0.7 - 0.2j, 2.1)
        assert abs(hyp2f1(p, 1.0) - gauss_value(p)) < 1e-9

    def test_chu_vandermonde(self):
        # alpha = -n: value (gamma - beta)_n / (gamma)_n
        for n, beta, gamma in ((2, 0.25, 0.5), (5, -0.3, 1.7), (3, 1 + 1j, 2.5)):
            p = Hyp2F1Params(-n, beta, gamma)
            want = pochhammer(complex(gamma - beta), n) / pochhammer(complex(gamma), n)
            assert abs(gauss_value(p) - want) < 1e-12
            assert abs(hyp2f1(p, 1.0) - want) < 1e-12

    def test_reciprocal_gamma_pole_gives_zero(self):
        # gamma - alpha = -1 in Z_{<=0}: 1/Gamma kills the closed form
        # (margin gamma - alpha - beta = 1.5 > 0 so the series converges there)
        p = Hyp2F1Params(3.1, -2.5, 2.1)
        assert gauss_value(p) == 0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # value -> 0: relative rule caps out
            assert abs(hyp2f1(p, 1.0)) < 1e-8

    def test_boundary_continuity(self):
        # values at z = 1 - 10^-j approach the Gauss value monotonically at
        # the O(1 - z) rate set by F'(1) (the margin here exceeds 1)
        p = Hyp2F1Params(0.3, -0.7, 2.1)
        target = gauss_value(p)
        errs = [abs(hyp2f1(p, 1 - 10.0 ** (-j)) - target) for j in range(2, 7)]
        assert all(errs[i + 1] <= 0.2 * errs[i] for i in range(4))
        assert errs[-1] < 1e-5


class TestBoundaryAsymptotics:
    def test_blowup_exponent(self):
        # Re(gamma - alpha - beta) < 0: 2F1 ~ C (1 - z)^(gamma - alpha - beta)
        for p in (Hyp2F1Params(1.3, 1.1, 1.0), Hyp2F1Params(0.9, 1.4, 0.8)):
            d = complex(p.gamma - p.alpha - p.beta).real
            ts = 1 - np.power(2.0, -np.arange(6, 13))
            vals = np.array([abs(hyp2f1(p, t)) for t in ts])
            slope = fit_exponent(1 - ts, np.log(vals))
            assert abs(slope - d) < 0.05

    def test_log_case(self):
        # gamma = alpha + beta: 2F1 ~ C log(1 - z): values at 1 - 10^-j scale like j
        p = Hyp2F1Params(0.7, 0.6, 1.3)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # the j = 6 evaluation caps out
            vals = [abs(hyp2f1(p, 1 - 10.0 ** (-j))) for j in range(3, 7)]
        for j, (v0, v1) in enumerate(zip(vals, vals[1:]), start=3):
            assert abs(v1 / v0 * j / (j + 1) - 1) < 0.1


class TestDerivative:
    def test_at_origin(self):
        p = Hyp2F1Params(0.4, -1.2, 0.9)
        assert abs(hyp2f1_derivative(p, 0) - (0.4 * -1.2 / 0.9)) < 1e-15

    def test_central_difference(self):
        p = Hyp2F1Params(0.4, -1.2, 0.9)
        h = 1e-5
        fd = (hyp2f1(p, 0.3 + h) - hyp2f1(p, 0.3 - h)) / (2 * h)
        assert abs(hyp2f1_derivative(p, 0.3) - fd) < 1e-6

    def test_termwise_differentiated_series(self):
        p = Hyp2F1Params(0.4, -1.2, 0.9)
        z = 0.5
        total = 0.0
        term = 1.0
        for n in range(200):
            total += n * term * z ** (n - 1) if n else 0.0
            term *= (0.4 + n) * (-1.2 + n) / ((0.9 + n) * (n + 1))
        assert abs(hyp2f1_derivative(p, z) - total) < 1e-9


class TestEulerFactorization:
    def test_degree_zero(self):
        # 2F1(gamma, beta; gamma; z) = (1 - z)^(-beta): exponent -beta, P_0 = 1
        fac = euler_factorization(Hyp2F1Params(1.3, 0.8, 1.3))
        assert fac.degree == 0
        assert abs(fac.exponent - (-0.8)) < 1e-14
        assert fac.value_at_1 == 1
        z = 0.77
        want = (1 - z) ** fac.exponent
        assert abs(hyp2f1(Hyp2F1Params(1.3, 0.8, 1.3), z) - want) < 1e-9 * abs(want)

    def test_degree_two_value(self):
        # alpha = gamma + 2: P_2(1) = beta (beta + 1) / (gamma (gamma + 1))
        beta, gamma = 0.45, 1.3
        fac = euler_factorization(Hyp2F1Params(gamma + 2, beta, gamma))
        assert fac.degree == 2
        want = beta * (beta + 1) / (gamma * (gamma + 1))
        assert abs(fac.value_at_1 - want) < 1e-13

    def test_numerical_factorization(self):
        # (1 - z)^(-exponent) 2F1 agrees with the degree-n polynomial
        beta, gamma, n = -0.35, 0.9, 3
        p = Hyp2F1Params(gamma + n, beta, gamma)
        fac = euler_factorization(p)
        zs = np.linspace(-0.5, 0.9, 8)
        poly_vals = [(1 - z) ** (-fac.exponent) * hyp2f1(p, z) for z in zs]
        fitted = np.polyfit(zs, np.real(poly_vals), n)
        recon = np.polyval(fitted, 0.9)
        direct = (1 - 0.9) ** (-fac.exponent) * hyp2f1(p, 0.9)
        assert abs(recon - direct) < 1e-7
        assert abs(np.polyval(fitted, 1.0) - fac.value_at_1) < 1e-7

    def test_beta_slot_normalized(self):
        fac = euler_factorization(Hyp2F1Params(0.45, 3.3, 1.3))
        assert fac.degree == 2

    def test_not_in_configuration(self):
        with pytest.raises(NotInConfiguration):
            euler_factorization(Hyp2F1Params(0.4, 0.8, 1.3))


class TestThetaIntegral:
    def test_at_zero(self):
        assert theta_integral(-0.3, 0.0) == 1.0
        assert theta_integral_quadrature(-0.3, 0.0) == 1.0

    def test_series_vs_quadrature_sample(self):
        got = theta_integral(-0.3, 0.7)
        oracle = theta_integral_quadrature(-0.3, 0.7, 10**4)
        assert abs(got - oracle) < 1e-10

    def test_series_vs_quadrature_grid(self):
        for nu in (-0.9, -0.5, -0.3, 0.2):
            for t in (0.1, 0.5, 0.9):
                got = theta_integral(nu, t)
                oracle = theta_integral_quadrature(nu, t, 10**4)
                assert abs(got - oracle) <= 1e-8, (nu, t)

    def test_blowup_exponent(self):
        # Re(1 + 2 nu) < 0: integral ~ C (1 - t^2)^(1 + 2 nu) as t -> 1
        nu = -0.8
        ts = 1 - np.power(2.0, -np.arange(5, 11))
        vals = np.array([theta_integral(nu, float(t)) for t in ts])
        slope = fit_exponent(1 - ts * ts, np.log(vals))
        assert abs(slope - (1 + 2 * nu)) < 0.05

    def test_domain(self):
        with pytest.raises(ValueError):
            theta_integral(-0.3, 1.0)


class TestIndicialExponents:
    def test_mu_zero(self):
        # roots (-s-3)/2 +- (1+s)/2 = {-1, -s-2}
        for s in (-0.95, -0.5, -0.1):
            plus, minus = indicial_exponents(s, 0)
            assert abs(plus - (-1)) < 1e-14
            assert abs(minus - (-s - 2)) < 1e-14

    def test_quarter_discriminant(self):
        s = -0.6
        mu = 0.25 - ((1 + s) / 2) ** 2
        plus, minus = indicial_exponents(s, mu)
        base = (-s - 3) / 2
        assert abs(plus - (base + 0.5)) < 1e-14
        assert abs(minus - (base - 0.5)) < 1e-14

    def test_resubstitution(self):
        for s, mu in ((-0.95, 0.003), (-1 - 0.2 + 2j, -0.4), (-2.4, 0.01)):
            for root in indicial_exponents(s, mu):
                resid = root * root + (3 + s) * root + (s + 2 - mu)
                assert abs(resid) < 1e-12
