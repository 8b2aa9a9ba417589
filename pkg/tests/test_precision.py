"""Extended-precision mode: same interfaces, mpmath scalars underneath."""

import mpmath
import pytest

from ehv import _backend
from ehv.core import Moduli, qpochhammer, theta, theta_factorial
from ehv.gamma import elliptic_gamma
from ehv.series import VSpec, sum_V


@pytest.fixture
def extended():
    _backend.set_precision(_backend.EXTENDED)
    yield
    _backend.set_precision(_backend.STD)


def test_theta_matches_std(extended):
    z = mpmath.mpc(0.4, 0.1)
    p = mpmath.mpc(0.25, 0.0)
    hi = theta(z, p)
    lo = theta(0.4 + 0.1j, 0.25)
    assert abs(complex(hi) - lo) <= 1e-14 * abs(lo)


def test_gamma_difference_law_at_30_digits(extended):
    m = Moduli(mpmath.mpc(0.31), mpmath.mpc(0.23))
    z = mpmath.mpc(0.5, 0.2)
    g = elliptic_gamma(z, m)
    lhs = elliptic_gamma(m.q * z, m)
    rhs = theta(z, m.p) * g
    assert abs(lhs - rhs) / abs(rhs) < mpmath.mpf(10) ** (-28)


def test_qpochhammer_high_precision(extended):
    v = qpochhammer(mpmath.mpf("0.5"), mpmath.mpf("0.5"))
    want = mpmath.mpf(1)
    w = mpmath.mpf("0.5")
    for _ in range(300):
        want *= 1 - w
        w *= mpmath.mpf("0.5")
    assert abs(v - want) < mpmath.mpf(10) ** (-30)


def test_terminating_sum_in_extended_mode(extended):
    q = mpmath.mpc("0.31")
    p = mpmath.mpc("0.23")
    m = Moduli(q, p)
    t0, t1, t4, t5 = (mpmath.mpc(v) for v in (0.5, 0.6, 0.7, 0.55))
    N = 3
    t6 = q ** -N
    t7 = q * t0 * t0 / (t1 * t4 * t5 * t6)
    val = sum_V(VSpec(t0=t0, t=(t1, t4, t5, t6, t7), x=1.0, moduli=m, N=N))
    from ehv.series import frenkel_turaev_rhs

    rhs = frenkel_turaev_rhs(t0, t1, t4, t5, N, m)
    assert abs(val - rhs) / abs(rhs) < mpmath.mpf(10) ** (-25)


def test_factorial_splitting_tight(extended):
    z = mpmath.mpc(0.7, 0.2)
    p, q = mpmath.mpc(0.25), mpmath.mpc(0.31, 0.02)
    lhs = theta_factorial(z, p, q, 5)
    rhs = theta_factorial(z, p, q, 2) * theta_factorial(z * q ** 2, p, q, 3)
    assert abs(lhs - rhs) / abs(lhs) < mpmath.mpf(10) ** (-30)
