"""Foundation layer: products, theta, shifted factorials, theta_1."""

import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ehv.core import (
    Moduli,
    TruncationPolicy,
    qpochhammer,
    theta,
    theta1,
    theta_factorial,
    theta_multi,
)
from ehv.errors import DomainError, NonConvergent, PoleHit, TruncationFailure


def direct_qpoch(z, b, terms=200):
    out = 1.0 + 0.0j
    w = complex(z)
    for _ in range(terms):
        out *= 1.0 - w
        w *= b
    return out


def direct_theta(z, p, terms=200):
    return direct_qpoch(z, p, terms) * direct_qpoch(p / z, p, terms)


class TestQPochhammer:
    def test_z_zero(self):
        assert qpochhammer(0.0, 0.5) == 1.0

    def test_b_zero_single_factor(self):
        assert qpochhammer(0.5, 0.0) == 0.5

    def test_half_half_against_direct_product(self):
        # frozen from the 200-term direct-product oracle
        val = qpochhammer(0.5, 0.5)
        assert val == pytest.approx(0.2887880950866024, rel=1e-15)
        assert abs(val - direct_qpoch(0.5, 0.5)) < 1e-16

    def test_complex_against_direct_product(self, rng, arg):
        for _ in range(50):
            z = arg(rng, 0.1, 3.0)
            b = arg(rng, 0.05, 0.7)
            got = qpochhammer(z, b)
            want = direct_qpoch(z, b)
            assert abs(got - want) <= 1e-13 * abs(want)

    def test_nonconvergent_base(self):
        with pytest.raises(NonConvergent):
            qpochhammer(0.5, 1.0)

    def test_truncation_failure(self):
        with pytest.raises(TruncationFailure):
            qpochhammer(0.5, 0.999, TruncationPolicy(eps=1e-16, max_terms=100))

    def test_truncation_stable_under_max_terms_increase(self):
        pol = TruncationPolicy(eps=1e-16, max_terms=1000)
        pol2 = TruncationPolicy(eps=1e-16, max_terms=1500)
        a = qpochhammer(0.7, 0.9, pol)
        b = qpochhammer(0.7, 0.9, pol2)
        assert abs(a - b) < pol.eps


class TestTheta:
    def test_unit_argument_is_exact_zero(self):
        assert theta(1.0, 0.3) == 0.0

    def test_p_zero(self):
        assert theta(0.4, 0.0) == pytest.approx(0.6)

    def test_against_direct_product_and_quasi_periodicity(self):
        z, p = 0.4 + 0.1j, 0.25
        val = theta(z, p)
        assert abs(val - direct_theta(z, p)) <= 1e-14 * abs(val)
        # theta(pz; p) = -theta(z; p)/z
        assert abs(theta(p * z, p) + val / z) <= 1e-13 * abs(val)

    def test_zero_lattice_exact(self):
        for p in (0.3, 0.25, 0.3 + 0.1j):
            for k in range(-3, 4):
                assert theta(p ** k, p) == 0.0

    def test_quasi_periodicity_annulus(self, rng, arg):
        worst = 0.0
        for _ in range(400):
            z = arg(rng, 0.1, 10.0)
            p = arg(rng, 0.05, 0.6)
            t = theta(z, p)
            if t == 0:
                continue
            worst = max(worst,
                        abs(theta(p * z, p) + t / z) / abs(t),
                        abs(theta(1.0 / z, p) + t / z) / abs(t))
        assert worst <= 1e-12

    def test_domain_error(self):
        with pytest.raises(DomainError):
            theta(0.0, 0.3)


class TestThetaMulti:
    def test_empty_product(self):
        assert theta_multi([], 0.2) == 1.0

    def test_annihilating_factor(self):
        assert theta_multi([1.0, 0.5], 0.2) == 0.0

    def test_factorizes(self):
        p = 0.2
        got = theta_multi([0.3, 0.7], p)
        assert got == pytest.approx(theta(0.3, p) * theta(0.7, p))

    def test_zero_entry_rejected(self):
        with pytest.raises(DomainError):
            theta_multi([0.3, 0.0], 0.2)


class TestThetaFactorial:
    def test_empty(self):
        assert theta_factorial(0.77 + 0.1j, 0.2, 0.3, 0) == 1.0

    def test_positive_direct(self):
        z, p, q = 0.5, 0.2, 0.3
        want = theta(z, p) * theta(z * q, p)
        assert theta_factorial(z, p, q, 2) == pytest.approx(want, rel=1e-14)

    def test_negative_index_convention(self):
        z, p, q = 0.5, 0.2, 0.3
        want = 1.0 / theta(z / q, p)
        assert theta_factorial(z, p, q, -1) == pytest.approx(want, rel=1e-14)

    def test_inversion_rule(self, rng, arg):
        p, q = 0.2, 0.3 + 0.05j
        for _ in range(30):
            z = arg(rng, 0.3, 2.0)
            m = rng.randint(-5, 5)
            prod = (theta_factorial(z, p, q, m)
                    * theta_factorial(z * q ** m, p, q, -m))
            assert abs(prod - 1.0) <= 1e-12

    @settings(max_examples=80, deadline=None)
    @given(m=st.integers(-4, 4), n=st.integers(-4, 4),
           seed=st.integers(0, 10 ** 6))
    def test_splitting(self, m, n, seed):
        import random

        rr = random.Random(seed)
        z = (0.3 + 1.5 * rr.random()) * cmath.exp(2j * cmath.pi * rr.random())
        p, q = 0.25, 0.31 + 0.04j
        lhs = theta_factorial(z, p, q, m + n)
        rhs = (theta_factorial(z, p, q, m)
               * theta_factorial(z * q ** m, p, q, n))
        assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))

    def test_pole_hit(self):
        # z q^-1 lands exactly on the zero lattice
        p, q = 0.2, 0.3
        with pytest.raises(PoleHit):
            theta_factorial(q * p ** 2, p, q, -1)


class TestTheta1:
    SIGMA = 0.13 + 0.02j
    TAU = 0.2 + 0.31j

    def test_odd(self):
        u = 0.37 - 0.11j
        a = theta1(u, self.SIGMA, self.TAU)
        b = theta1(-u, self.SIGMA, self.TAU)
        assert abs(a + b) <= 1e-13 * abs(a)

    def test_zero_at_origin(self):
        assert theta1(0.0, self.SIGMA, self.TAU) == 0.0

    def test_shift_by_inverse_sigma_flips_sign(self):
        u = 0.37 - 0.11j
        a = theta1(u, self.SIGMA, self.TAU)
        b = theta1(u + 1.0 / self.SIGMA, self.SIGMA, self.TAU)
        assert abs(b + a) <= 1e-12 * abs(a)

    def test_second_quasi_period(self):
        # theta_1(u + tau/sigma) = -exp(-pi i tau - 2 pi i sigma u) theta_1(u)
        u = 0.21 + 0.05j
        sigma, tau = self.SIGMA, self.TAU
        a = theta1(u, sigma, tau)
        b = theta1(u + tau / sigma, sigma, tau)
        factor = -cmath.exp(-1j * cmath.pi * tau - 2j * cmath.pi * sigma * u)
        assert abs(b - factor * a) <= 1e-12 * abs(b)

    def test_requires_upper_half_tau(self):
        with pytest.raises(DomainError):
            theta1(0.3, self.SIGMA, 0.2 - 0.1j)


class TestModuli:
    def test_bounds(self):
        with pytest.raises(ValueError):
            Moduli(1.0, 0.2)
        with pytest.raises(ValueError):
            Moduli(0.2, -1.5)

    def test_degenerations_allowed(self):
        m = Moduli(0.0, 0.3)
        assert m.q_degenerate and not m.p_degenerate

    def test_swapped(self):
        m = Moduli(0.31, 0.23)
        assert m.swapped().q == 0.23 and m.swapped().p == 0.31
