"""Elliptic gamma, double sine, and the modified gamma function."""

import cmath

import pytest

from ehv.core import Moduli, qpochhammer, theta
from ehv.errors import NonConvergent, PoleHit
from ehv.gamma import (
    QuasiPeriods,
    double_sine,
    elliptic_factorial_s,
    elliptic_gamma,
    elliptic_gamma_multi,
    modified_gamma_G,
)
from ehv.core import theta_factorial


class TestEllipticGamma:
    def test_symmetric_point(self, moduli):
        pq = moduli.p * moduli.q
        val = elliptic_gamma(cmath.sqrt(pq), moduli)
        assert abs(val - 1.0) <= 1e-13

    def test_p_zero_reciprocal_pochhammer(self):
        m = Moduli(0.3, 0.0)
        z = 0.5 + 0.2j
        assert (elliptic_gamma(z, m) * qpochhammer(z, 0.3)
                == pytest.approx(1.0, abs=1e-14))

    def test_difference_law_oracle(self, moduli):
        z = 0.5
        g = elliptic_gamma(z, moduli)
        got = elliptic_gamma(moduli.q * z, moduli)
        assert abs(got - theta(z, moduli.p) * g) <= 1e-13 * abs(got)

    def test_difference_laws_random(self, rng, arg, moduli):
        worst = 0.0
        for _ in range(200):
            z = arg(rng, 0.2, 2.0)
            g = elliptic_gamma(z, moduli)
            worst = max(
                worst,
                abs(elliptic_gamma(moduli.q * z, moduli)
                    - theta(z, moduli.p) * g) / abs(g),
                abs(elliptic_gamma(moduli.p * z, moduli)
                    - theta(z, moduli.q) * g) / abs(g))
        assert worst <= 1e-12

    def test_base_symmetry(self, rng, arg, moduli):
        for _ in range(50):
            z = arg(rng, 0.3, 1.5)
            a = elliptic_gamma(z, moduli)
            b = elliptic_gamma(z, moduli.swapped())
            assert abs(a - b) <= 1e-13 * abs(a)

    def test_all_reflection_identities(self, rng, arg, moduli):
        q, p = moduli.q, moduli.p
        for _ in range(50):
            z = arg(rng, 0.3, 2.0)
            for pair in ((p * z, q / z), (q * z, p / z),
                         (p * q * z, 1.0 / z), (z, p * q / z)):
                assert abs(elliptic_gamma_multi(pair, moduli) - 1.0) <= 1e-12

    def test_pole_guard(self, moduli):
        with pytest.raises(PoleHit):
            elliptic_gamma(1.0, moduli)
        with pytest.raises(PoleHit):
            elliptic_gamma(1.0 / moduli.q, moduli)

    def test_nonconvergent(self):
        with pytest.raises(ValueError):
            Moduli(1.2, 0.3)


class TestGammaMulti:
    def test_empty(self, moduli):
        assert elliptic_gamma_multi([], moduli) == 1.0

    def test_reflection_pair(self, moduli):
        z = 0.73 + 0.21j
        pq = moduli.p * moduli.q
        assert abs(elliptic_gamma_multi([z, pq / z], moduli) - 1.0) <= 1e-13

    def test_factorizes(self, moduli):
        got = elliptic_gamma_multi([0.4, 0.6], moduli)
        want = elliptic_gamma(0.4, moduli) * elliptic_gamma(0.6, moduli)
        assert got == pytest.approx(want, rel=1e-14)


class TestFactorialS:
    def test_s_zero(self, moduli):
        assert elliptic_factorial_s(0.4 + 0.1j, 0, moduli) == pytest.approx(1.0)

    def test_s_one_is_theta(self, moduli):
        z = 0.45 + 0.2j
        got = elliptic_factorial_s(z, 1, moduli)
        assert got == pytest.approx(theta(z, moduli.p), rel=1e-13)

    def test_integer_orders_match_theta_factorial(self, moduli):
        z = 0.5 + 0.05j
        for n in (2, 3):
            got = elliptic_factorial_s(z, n, moduli)
            want = theta_factorial(z, moduli.p, moduli.q, n)
            assert abs(got - want) <= 1e-12 * abs(want)

    def test_fractional_order_compose(self):
        m = Moduli(0.3, 0.2)
        z, s = 0.3, 2.5
        qs = m.q ** s
        want = elliptic_gamma(z * qs, m) / elliptic_gamma(z, m)
        assert elliptic_factorial_s(z, s, m) == pytest.approx(want, rel=1e-13)


class TestDoubleSine:
    W1, W2 = 1.0 + 0.4j, 1.0

    def test_pochhammer_oracle(self):
        u = 0.21 + 0.07j
        q = cmath.exp(2j * cmath.pi * self.W1 / self.W2)
        qt = cmath.exp(-2j * cmath.pi * self.W2 / self.W1)
        want = (qpochhammer(cmath.exp(2j * cmath.pi * u / self.W2), q)
                / qpochhammer(cmath.exp(2j * cmath.pi * u / self.W1) * qt, qt))
        assert double_sine(u, self.W1, self.W2) == pytest.approx(want, rel=1e-13)

    def test_zero_at_periods(self):
        # u = k w2 (k <= 0) makes the numerator argument hit 1 while the
        # denominator lattice stays clear
        assert double_sine(0.0, self.W1, self.W2) == 0.0
        assert abs(double_sine(-self.W2, self.W1, self.W2)) < 1e-12

    def test_nonconvergent_lower_half(self):
        with pytest.raises(NonConvergent):
            double_sine(0.3, 1.0 - 0.4j, 1.0)


class TestModifiedGamma:
    W = QuasiPeriods(1.0 + 0.4j, 1.0, 0.3 + 0.5j)

    def test_validity_flags(self):
        v = self.W.validity
        assert v == {"q": True, "qt": True, "p": True, "pt": True}

    def test_shift_by_omega1(self):
        u = 0.21 + 0.07j
        lhs = modified_gamma_G(u + self.W.omega1, self.W)
        rhs = (theta(cmath.exp(2j * cmath.pi * u / self.W.omega2), self.W.p)
               * modified_gamma_G(u, self.W))
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs)

    def test_shift_by_omega2(self):
        u = 0.13 - 0.04j
        lhs = modified_gamma_G(u + self.W.omega2, self.W)
        rhs = (theta(cmath.exp(2j * cmath.pi * u / self.W.omega1),
                     self.W.p_tilde)
               * modified_gamma_G(u, self.W))
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs)

    def test_shift_by_omega3_double_sine_product(self):
        u = 0.17 + 0.02j
        lhs = modified_gamma_G(u + self.W.omega3, self.W)
        w1, w2 = self.W.omega1, self.W.omega2
        rhs = (double_sine(u, w1, w2) * double_sine(w1 + w2 - u, w1, w2)
               * modified_gamma_G(u, self.W))
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)

    def test_small_p_approaches_inverse_double_sine(self):
        # w3 with large imaginary part makes p and pt ~ 1e-8
        w3 = 0.1 + 3.4j
        w = QuasiPeriods(1.0 + 0.4j, 1.0, w3)
        assert abs(w.p) < 1e-7 and abs(w.p_tilde) < 1e-7
        u = 0.23 + 0.06j
        got = modified_gamma_G(u, w)
        want = 1.0 / double_sine(u, w.omega1, w.omega2)
        assert abs(got - want) <= 1e-6 * abs(want)

    def test_requires_bases_inside_disk(self):
        bad = QuasiPeriods(1.0 + 0.4j, 1.0, 0.3 - 0.5j)   # |p| > 1
        with pytest.raises(NonConvergent):
            modified_gamma_G(0.2, bad)

    def test_third_shift_near_real_period_ratio(self):
        # Im(w1/w2) small but nonzero: approaching the unit-circle regime
        w = QuasiPeriods(1.0 + 0.05j, 1.0, 0.3 + 0.5j)
        u = 0.19 + 0.03j
        G0 = modified_gamma_G(u, w)
        lhs = modified_gamma_G(u + w.omega3, w)
        rhs = (double_sine(u, w.omega1, w.omega2)
               * double_sine(w.omega1 + w.omega2 - u, w.omega1, w.omega2) * G0)
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)
