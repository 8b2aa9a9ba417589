"""Biorthogonal families: series/recurrence/operator consistency and the
scalar-product structure against the beta weight."""

import cmath
import random

import numpy as np
import pytest

from ehv.core import Moduli, theta
from ehv.errors import InadmissibleContour
from ehv.biorthogonal import (
    OperatorGauge,
    RahmanParams,
    R_n,
    R_nm,
    T_n,
    T_nm,
    V_coeff,
    apply_D,
    apply_D_adjoint,
    biorth_value,
    contour_check,
    g_function,
    gauge_ratio,
    kappa_coeff,
    lambda_gevp,
    norm_h,
    norm_h2,
    r_family_nodes,
    recurrence_next,
    shifted_beta_sides,
    t_family_nodes,
    twelveV_integral_rep_sides,
    weight_ratio_down,
    weight_ratio_up,
)
from ehv.quadrature import QuadratureConfig


@pytest.fixture(scope="module")
def rp():
    rr = random.Random(2)
    ph = lambda: cmath.exp(2j * cmath.pi * rr.random())
    t = (0.85 * ph(), 0.83 * ph(), 0.86 * ph(), 0.84 * ph(), 0.45 * ph())
    return RahmanParams(t=t, moduli=Moduli(0.8, 0.1))


CFG = QuadratureConfig(nodes_per_dim=512, max_doublings=2, rel_tol=1e-11)


class TestFamilies:
    def test_r0_is_one(self, rp):
        assert R_n(cmath.exp(0.3j), 0, rp) == 1.0
        assert T_n(cmath.exp(0.3j), 0, rp) == 1.0

    def test_inversion_symmetry(self, rp, rng):
        z = cmath.exp(2j * cmath.pi * rng.random())
        for n in (1, 2, 3):
            a, b = R_n(z, n, rp), R_n(1.0 / z, n, rp)
            assert abs(a - b) <= 1e-12 * abs(a)

    def test_node_array_matches_scalar(self, rp):
        z = np.array([cmath.exp(0.37j), cmath.exp(-1.1j)])
        for n in (1, 3):
            vec = r_family_nodes(z, n, rp)
            assert abs(vec[0] - R_n(z[0], n, rp)) <= 1e-13 * abs(vec[0])
            tvec = t_family_nodes(z, n, rp)
            assert abs(tvec[1] - T_n(z[1], n, rp)) <= 1e-13 * abs(tvec[1])

    def test_dual_family_via_involution(self, rp):
        # T_n equals R_n after t4 -> pq/A
        z = cmath.exp(0.42j)
        pq = rp.moduli.p * rp.moduli.q
        rp_inv = RahmanParams(t=rp.t[:4] + (pq / rp.A,), moduli=rp.moduli)
        for n in (1, 2):
            a, b = T_n(z, n, rp), R_n(z, n, rp_inv)
            assert abs(a - b) <= 1e-12 * abs(a)

    def test_two_index_reductions(self, rp):
        z = cmath.exp(0.8j)
        assert R_nm(z, 0, 0, rp) == 1.0
        for n in (1, 2):
            assert R_nm(z, n, 0, rp) == pytest.approx(R_n(z, n, rp), rel=1e-13)
            assert T_nm(z, n, 0, rp) == pytest.approx(T_n(z, n, rp), rel=1e-13)

    def test_two_index_base_swap(self, rp):
        z = cmath.exp(0.8j)
        swapped = RahmanParams(t=rp.t, moduli=rp.moduli.swapped())
        a = R_nm(z, 1, 2, rp)
        b = R_nm(z, 2, 1, swapped)
        assert abs(a - b) <= 1e-12 * abs(a)

    def test_rationality_fiber(self, rp):
        # gamma(z') = gamma(z) is solved (numerically, Newton) near z' = pz;
        # R_n takes the same value on the fiber
        p = rp.moduli.p
        xi, eta = 1.3, 0.7 + 0.1j
        z0 = cmath.exp(0.37j)
        target = gauge_ratio(z0, xi, eta, p)

        def f(w):
            return gauge_ratio(w, xi, eta, p) - target

        w = p * z0 * (1 + 1e-3)        # perturbed start away from z0
        for _ in range(60):
            h = 1e-7 * abs(w)
            d = (f(w + h) - f(w - h)) / (2 * h)
            step = f(w) / d
            w -= step
            if abs(step) < 1e-14 * abs(w):
                break
        assert abs(f(w)) < 1e-11
        assert abs(w - z0) > 1e-3      # genuinely different point
        for n in (2, 3):
            a, b = R_n(z0, n, rp), R_n(w, n, rp)
            assert abs(a - b) <= 1e-9 * abs(a)


class TestRecurrence:
    def test_seed_step_ignores_r_minus_1(self, rp):
        z = cmath.exp(0.42j)
        a = recurrence_next(0.0, 1.0, 0, z, rp)
        b = recurrence_next(123.456, 1.0, 0, z, rp)
        assert a == b
        assert abs(a - R_n(z, 1, rp)) <= 1e-12 * abs(a)

    def test_matches_series_to_n5(self, rp):
        z = cmath.exp(0.42j)
        rs = [1.0 + 0.0j, R_n(z, 1, rp)]
        for n in range(1, 5):
            rs.append(recurrence_next(rs[n - 1], rs[n], n, z, rp))
        for n in range(2, 6):
            want = R_n(z, n, rp)
            assert abs(rs[n] - want) <= 1e-10 * abs(want)

    def test_gauge_independence(self, rp):
        z = cmath.exp(0.42j)
        gauges = [OperatorGauge(mu=1.0),
                  OperatorGauge(mu=1.0, xi=0.9 + 0.2j, eta=1.4 - 0.1j),
                  OperatorGauge(mu=1.0, xi=2.0, eta=0.3 + 0.4j)]
        seqs = []
        for g in gauges:
            rs = [1.0 + 0.0j, R_n(z, 1, rp)]
            for n in range(1, 5):
                rs.append(recurrence_next(rs[n - 1], rs[n], n, z, rp, g))
            seqs.append(rs)
        for n in range(6):
            spread = max(abs(seqs[0][n] - s[n]) for s in seqs[1:])
            assert spread <= 1e-12 * max(1.0, abs(seqs[0][n]))


class TestOperator:
    def test_mu_one_kills_constants(self, rp):
        assert kappa_coeff(1.0 + 0.0j, rp) == 0.0
        z = cmath.exp(1.1j)
        assert apply_D(lambda w: 1.0, z, 1.0 + 0.0j, rp) == 0.0

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
    def test_eigen_annihilation(self, rp, n):
        q = rp.moduli.q
        worst = 0.0
        for k in range(20):
            z = cmath.exp(2j * cmath.pi * (k + 0.381) / 20)
            val = apply_D(lambda w: R_n(w, n, rp), z, q ** n, rp)
            scale = max(abs(V_coeff(z, q ** n, rp)),
                        abs(V_coeff(1 / z, q ** n, rp)),
                        abs(kappa_coeff(q ** n, rp)))
            scale *= max(1.0, abs(R_n(z, n, rp)))
            worst = max(worst, abs(val) / scale)
        assert worst <= 1e-10

    @pytest.mark.parametrize("nm", [(1, 1), (2, 1), (2, 2)])
    def test_two_index_annihilated_by_both_operators(self, rp, nm):
        n, m = nm
        q, p = rp.moduli.q, rp.moduli.p
        mu = q ** n * p ** m
        z = cmath.exp(0.83j)
        f = lambda w: R_nm(w, n, m, rp)
        scale = abs(f(z))
        for base in ("q", "p"):
            val = apply_D(f, z, mu, rp, base=base)
            vscale = max(abs(V_coeff(z, mu, rp, base)),
                         abs(V_coeff(1 / z, mu, rp, base)),
                         abs(kappa_coeff(mu, rp, base))) * max(1.0, scale)
            assert abs(val) / vscale <= 1e-10

    def test_weight_ratio_dual_route(self, rp):
        # theta-form shift ratio vs direct weight evaluations
        from ehv.integrands import make_integrand

        w_ig = make_integrand(rp.weight_spec())
        q = rp.moduli.q
        z = cmath.exp(1.21j)
        want_up = w_ig((q * z,)) / w_ig((z,))
        got_up = weight_ratio_up(z, rp)
        assert abs(got_up - want_up) <= 1e-12 * abs(want_up)
        want_dn = w_ig((z / q,)) / w_ig((z,))
        assert abs(weight_ratio_down(z, rp) - want_dn) <= 1e-12 * abs(want_dn)

    def test_adjoint_on_constants_direct_transcription(self, rp):
        xi = 1.3 + 0.0j
        z = cmath.exp(0.64j)
        got = apply_D_adjoint(lambda w: 1.0, z, xi, rp)
        want = (weight_ratio_up(z, rp) * V_coeff(1 / (rp.moduli.q * z), xi, rp)
                + weight_ratio_down(z, rp) * V_coeff(z / rp.moduli.q, xi, rp)
                - V_coeff(z, xi, rp) - V_coeff(1 / z, xi, rp)
                + kappa_coeff(xi, rp))
        assert abs(got - want) <= 1e-13 * abs(want)

    def test_conjugation_identity(self, rp):
        mu = 0.77 * cmath.exp(0.9j)
        gauge = OperatorGauge(mu=mu)
        gauge.validate(rp)
        lam = lambda_gevp(mu, gauge, rp)
        f = lambda w: 1 + 0.3 * w + 0.2 / w
        gf = lambda w: g_function(w, mu, rp) * f(w)
        z = cmath.exp(1.21j)
        lhs = (apply_D_adjoint(gf, z, gauge.eta, rp)
               - lam * apply_D_adjoint(gf, z, gauge.xi, rp)) \
            / g_function(z, mu, rp)
        rhs = apply_D(f, z, gauge.eta, rp) - lam * apply_D(f, z, gauge.xi, rp)
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


class TestContour:
    def test_base_domain_admissible(self, rp):
        chk = contour_check(0, 0, 0, 0, rp)
        assert chk.admissible

    def test_shifted_t4_inadmissible(self):
        rp = RahmanParams(t=(0.6, 0.6, 0.6, 0.6, 0.5), moduli=Moduli(0.3, 0.2))
        chk = contour_check(2, 0, 0, 0, rp)
        assert not chk.admissible
        assert abs(chk.worst_pole) == pytest.approx(0.5 / 0.09, rel=1e-12)

    def test_admissible_grid_scan(self, rp):
        # every cell of the 4x4 single-index grid fits the unit circle
        for n in range(4):
            for m in range(4):
                assert contour_check(m, n, 0, 0, rp).admissible


class TestBiorthogonality:
    def test_diagonal_cells(self, rp):
        for n in (0, 1, 2, 3):
            val, expected, res = biorth_value(n, n, rp, CFG)
            assert abs(val - expected) <= 1e-8 * abs(expected)

    def test_off_diagonal_cells(self, rp):
        scale = abs(min((abs(norm_h(j, rp)) for j in range(4)))
                    * rp.beta_value())
        for (n, m) in ((1, 0), (0, 1), (3, 2), (2, 3)):
            val, expected, _ = biorth_value(n, m, rp, CFG)
            assert expected == 0
            assert abs(val) <= 1e-8 * scale

    def test_norm_h0_reduces_to_beta_value(self, rp):
        assert norm_h(0, rp) == pytest.approx(1.0)
        val, expected, _ = biorth_value(0, 0, rp, CFG)
        assert abs(expected - rp.beta_value()) <= 1e-13 * abs(expected)

    def test_norm_two_display_forms_agree(self, rp):
        # theta(A q^{2n}/(q t4)) in one display vs theta(A q^{2n-1}/t4)
        q, p = rp.moduli.q, rp.moduli.p
        for n in (1, 2, 3):
            a = theta(rp.A * q ** (2 * n) / (q * rp.t[4]), p)
            b = theta(rp.A * q ** (2 * n - 1) / rp.t[4], p)
            assert abs(a - b) <= 1e-12 * abs(a)

    def test_norm_h2_zero_indices_match_single(self, rp):
        for n in (0, 1, 2):
            assert norm_h2(n, 0, rp) == pytest.approx(norm_h(n, rp), rel=1e-13)

    def test_inadmissible_gate(self):
        rp = RahmanParams(t=(0.6, 0.6, 0.6, 0.6, 0.5), moduli=Moduli(0.3, 0.2))
        with pytest.raises(InadmissibleContour):
            biorth_value(3, 2, rp, CFG)


class TestIntegralRepresentation:
    def test_depth_zero_trivial(self, rp):
        lhs, rhs, _ = twelveV_integral_rep_sides(0.6, 0.55, 0, 0, rp, CFG)
        assert lhs == pytest.approx(1.0)
        assert abs(rhs - 1.0) <= 1e-10

    @pytest.mark.parametrize("mn", [(1, 0), (2, 0), (0, 1)])
    def test_depths_match(self, rp, mn):
        m, n = mn
        use = rp if n == 0 else RahmanParams(t=rp.t,
                                             moduli=rp.moduli.swapped())
        lhs, rhs, _ = twelveV_integral_rep_sides(0.6 + 0.1j, 0.55 - 0.05j,
                                                 m, n, use, CFG)
        assert abs(lhs - rhs) <= 1e-8 * abs(rhs)

    def test_gate_for_structurally_deep_indices(self, rp):
        with pytest.raises(InadmissibleContour):
            twelveV_integral_rep_sides(0.6, 0.55, 1, 1, rp, CFG)


class TestShiftedWeight:
    def test_zero_shift_is_beta_integral(self, rp):
        lhs, rhs, _ = shifted_beta_sides(0, 0, rp, CFG)
        assert abs(lhs - rhs) <= 1e-9 * abs(rhs)
        assert abs(rhs - rp.beta_value()) <= 1e-13 * abs(rhs)

    @pytest.mark.parametrize("ij", [(1, 0), (2, 0)])
    def test_q_shifts(self, rp, ij):
        lhs, rhs, _ = shifted_beta_sides(ij[0], ij[1], rp, CFG)
        assert abs(lhs - rhs) <= 1e-8 * abs(rhs)

    def test_theta_factorial_form_agrees(self, rp):
        # third display: factorial ratios times the unshifted value
        from ehv.core import theta_factorial_multi

        i = 1
        lhs, rhs, _ = shifted_beta_sides(i, 0, rp, CFG)
        p, q = rp.moduli.p, rp.moduli.q
        t = rp.t
        A = rp.A
        num = theta_factorial_multi([t[0] * t[k] for k in range(1, 5)],
                                    p, q, i)
        den = theta_factorial_multi([A / t[k] for k in range(1, 5)], p, q, i)
        want = num / den * rp.beta_value()
        assert abs(rhs - want) <= 1e-11 * abs(want)

    def test_gate(self, rp):
        with pytest.raises(InadmissibleContour):
            shifted_beta_sides(1, 1, rp, CFG)


class TestGaugeValidation:
    def test_collision_detected(self, rp):
        g = OperatorGauge(mu=1.0, xi=0.7 + 0.1j, eta=0.7 + 0.1j)
        with pytest.raises(ValueError):
            g.validate(rp)
