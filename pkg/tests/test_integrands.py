"""Integrand builders, symmetries, closed forms, and serialization."""

import cmath
import functools

import pytest

from ehv.core import Moduli
from ehv.errors import UnsupportedFamily
from ehv.gamma import elliptic_gamma_multi
from ehv.integrands import (
    Family,
    GenericVWP,
    IntegrandSpec,
    MinusA,
    ParamSet,
    delta_An_I,
    delta_Cn_I,
    delta_Cn_II,
    delta_Cn_III,
    delta_E,
    generic_vwp_integrand,
    interior_pole_radius,
    make_integrand,
    rhs_closed_form,
    validate_domain,
)
from ehv.params import spec_from_params, spec_to_params


def prod(seq):
    return functools.reduce(lambda a, b: a * b, seq, 1.0 + 0.0j)


def on_circle(rng):
    return cmath.exp(2j * cmath.pi * rng.random())


class TestValidation:
    def test_e_family_small_product_fails(self):
        m = Moduli(0.3, 0.3)
        spec = IntegrandSpec(Family.E, 1, ParamSet(t=(0.5,) * 5), m)
        result = validate_domain(spec)
        # |A| = 0.03125 < |pq| = 0.09
        assert not result.ok
        assert result.worst().margin == pytest.approx(0.5 ** 5 - 0.09)

    def test_e_family_large_product_passes(self):
        m = Moduli(0.3, 0.3)
        spec = IntegrandSpec(Family.E, 1, ParamSet(t=(0.8,) * 5), m)
        assert validate_domain(spec).ok

    def test_cn3_coupling_bound(self, moduli):
        spec = IntegrandSpec(
            Family.CN_III, 1,
            ParamSet(t=(0.6, 0.6, 0.6), x=(0.5,), extras={"t": 0.55}), moduli)
        result = validate_domain(spec)
        assert not result.ok
        assert "|t| < |x_0|" in result.failures()

    def test_parameter_counts_enforced(self, moduli):
        with pytest.raises(ValueError):
            IntegrandSpec(Family.E, 1, ParamSet(t=(0.5,) * 4), moduli)
        with pytest.raises(ValueError):
            IntegrandSpec(Family.CN_I, 2, ParamSet(t=(0.5,) * 6), moduli)
        with pytest.raises(ValueError):
            IntegrandSpec(Family.AN_II, 1, ParamSet(t=(0.5,) * 5), moduli)

    def test_zero_parameter_rejected(self):
        with pytest.raises(ValueError):
            ParamSet(t=(0.5, 0.0))


class TestDeltaE:
    def make(self, rng, arg, moduli):
        return IntegrandSpec(Family.E, 1,
                             ParamSet(t=tuple(arg(rng, 0.35, 0.8)
                                              for _ in range(5))), moduli)

    def test_inversion_symmetry(self, rng, arg, moduli):
        spec = self.make(rng, arg, moduli)
        z = 0.9 * on_circle(rng)
        a, b = delta_E(z, spec), delta_E(1.0 / z, spec)
        assert abs(a - b) <= 1e-12 * abs(a)

    def test_base_swap_symmetry(self, rng, arg, moduli):
        spec = self.make(rng, arg, moduli)
        sw = IntegrandSpec(Family.E, 1, spec.params, moduli.swapped())
        z = on_circle(rng)
        a, b = delta_E(z, spec), delta_E(z, sw)
        assert abs(a - b) <= 1e-12 * abs(a)

    def test_matches_generic_vwp_at_order_13(self, rng, arg, moduli):
        spec = self.make(rng, arg, moduli)
        z = on_circle(rng)
        got = generic_vwp_integrand(z, 13, spec.params.t,
                                    moduli.p * moduli.q, 0.0, moduli)
        want = delta_E(z, spec)
        assert abs(got - want) <= 1e-11 * abs(want)

    def test_mesh_agrees_with_scalar(self, rng, arg, moduli):
        spec = self.make(rng, arg, moduli)
        ig = make_integrand(spec)
        vals = ig.mesh_eval(16)
        for k in (1, 5, 11):
            z = cmath.exp(2j * cmath.pi * k / 16)
            assert abs(vals[k] - ig((z,))) <= 1e-11 * abs(vals[k])


class TestCnFamilies:
    def test_hyperoctahedral_invariance(self, rng, arg, moduli):
        spec = IntegrandSpec(Family.CN_I, 2,
                             ParamSet(t=tuple(arg(rng, 0.72, 0.85)
                                              for _ in range(7))), moduli)
        for _ in range(20):
            z = (on_circle(rng), on_circle(rng))
            v = delta_Cn_I(z, spec)
            assert abs(delta_Cn_I((z[1], z[0]), spec) - v) <= 1e-12 * abs(v)
            assert abs(delta_Cn_I((1 / z[0], z[1]), spec) - v) <= 1e-12 * abs(v)

    def test_cn2_unit_coupling_factorizes(self, rng, arg, moduli):
        t5 = tuple(arg(rng, 0.5, 0.8) for _ in range(5))
        spec = IntegrandSpec(Family.CN_II, 2,
                             ParamSet(t=t5, extras={"t": 1.0 + 0.0j}), moduli)
        especs = IntegrandSpec(Family.E, 1, ParamSet(t=t5), moduli)
        z = (0.97 * on_circle(rng), on_circle(rng))
        got = delta_Cn_II(z, spec)
        want = delta_E(z[0], especs) * delta_E(z[1], especs)
        assert abs(got - want) <= 1e-11 * abs(want)

    def test_cn3_rank1_equals_delta_e(self, rng, arg, moduli):
        x1 = arg(rng, 0.55, 0.8)
        t3 = tuple(arg(rng, 0.5, 0.75) for _ in range(3))
        tc = arg(rng, 0.15, 0.4)
        spec = IntegrandSpec(Family.CN_III, 1,
                             ParamSet(t=t3, x=(x1,), extras={"t": tc}), moduli)
        espec = IntegrandSpec(Family.E, 1,
                              ParamSet(t=(x1,) + t3 + (tc / x1,)), moduli)
        z = on_circle(rng)
        got = delta_Cn_III((z,), spec)
        want = delta_E(z, espec)
        assert abs(got - want) <= 1e-11 * abs(want)

    def test_cn3_base_swap_asymmetric(self, rng, arg, moduli):
        spec = IntegrandSpec(
            Family.CN_III, 2,
            ParamSet(t=(0.5, 0.6, 0.55), x=(0.7, 0.75), extras={"t": 0.4}),
            moduli)
        sw = IntegrandSpec(Family.CN_III, 2, spec.params, moduli.swapped())
        z = (cmath.exp(0.6j), cmath.exp(-1.2j))
        v1 = delta_Cn_III(z, spec)
        v2 = delta_Cn_III(z, sw)
        assert abs(v1 - v2) > 1e-3 * abs(v1)

    def test_cn2_rank1_rhs_equals_e_rhs(self, rng, arg, moduli):
        t5 = tuple(arg(rng, 0.55, 0.8) for _ in range(5))
        spec = IntegrandSpec(Family.CN_II, 1,
                             ParamSet(t=t5, extras={"t": arg(rng, 0.2, 0.5)}),
                             moduli)
        espec = IntegrandSpec(Family.E, 1, ParamSet(t=t5), moduli)
        a = rhs_closed_form(spec)
        b = rhs_closed_form(espec)
        assert abs(a - b) <= 1e-12 * abs(b)


class TestAnFamilies:
    def test_an1_rank1_equals_delta_e(self, rng, arg, moduli):
        t2 = tuple(arg(rng, 0.45, 0.75) for _ in range(2))
        f3 = tuple(arg(rng, 0.45, 0.75) for _ in range(3))
        spec = IntegrandSpec(Family.AN_I, 1, ParamSet(t=t2, f=f3), moduli)
        espec = IntegrandSpec(Family.E, 1, ParamSet(t=t2 + f3), moduli)
        z = on_circle(rng)
        got = delta_An_I((z,), spec)
        want = delta_E(z, espec)
        assert abs(got - want) <= 1e-11 * abs(want)

    def test_permutation_with_constrained_variable(self, rng, arg, moduli):
        t3 = tuple(arg(rng, 0.5, 0.75) for _ in range(3))
        f4 = tuple(arg(rng, 0.5, 0.75) for _ in range(4))
        spec = IntegrandSpec(Family.AN_I, 2, ParamSet(t=t3, f=f4), moduli)
        z1, z2 = on_circle(rng), on_circle(rng)
        z3 = 1.0 / (z1 * z2)
        v = delta_An_I((z1, z2), spec)
        # swapping the free variables and absorbing the constrained one
        assert abs(delta_An_I((z2, z1), spec) - v) <= 1e-12 * abs(v)
        assert abs(delta_An_I((z3, z2), spec) - v) <= 1e-12 * abs(v)
        assert abs(delta_An_I((z1, z3), spec) - v) <= 1e-12 * abs(v)

    def test_an1_against_independent_transcription(self, rng, arg, moduli):
        # direct formula re-code, no shared factor engine
        t3 = tuple(arg(rng, 0.5, 0.75) for _ in range(3))
        f4 = tuple(arg(rng, 0.5, 0.75) for _ in range(4))
        spec = IntegrandSpec(Family.AN_I, 2, ParamSet(t=t3, f=f4), moduli)
        z1, z2 = on_circle(rng), on_circle(rng)
        zs = (z1, z2, 1.0 / (z1 * z2))
        AB = prod(t3) * prod(f4)
        num = []
        for zk in zs:
            num.extend(ti / zk for ti in t3)
            num.extend(fj * zk for fj in f4)
        den = [AB * zk for zk in zs]
        for i in range(3):
            for j in range(3):
                if i != j:
                    den.append(zs[i] / zs[j])
        want = (elliptic_gamma_multi(num, moduli)
                / elliptic_gamma_multi(den, moduli))
        got = delta_An_I((z1, z2), spec)
        assert abs(got - want) <= 1e-11 * abs(want)


class TestWeylInvariance:
    """Pointwise symmetry-group invariance, 100 random points per family."""

    @staticmethod
    def _spec(rng, arg, moduli, family, n):
        from ehv.registry import Sampler, _draw_spec

        return _draw_spec(Sampler(rng.randint(0, 10 ** 6)), family, n)

    @pytest.mark.parametrize("family,n", [
        (Family.CN_I, 2), (Family.CN_II, 2), (Family.CN_III, 2),
        (Family.AN_I, 2), (Family.AN_II, 2), (Family.AN_III, 2),
    ])
    def test_invariance_100_points(self, rng, arg, moduli, family, n):
        # the manifest action per display: full hyperoctahedral for the
        # plain C_n types; inversions only for the determinant-derived type
        # (its theta prefactor and per-axis x_i are order-attached);
        # permutations of the n+1 constrained variables for the A_n types
        spec = self._spec(rng, arg, moduli, family, n)
        ig = make_integrand(spec)
        worst = 0.0
        for _ in range(100):
            z = tuple(on_circle(rng) for _ in range(n))
            v = ig(z)
            if family in (Family.CN_I, Family.CN_II):
                worst = max(worst, abs(ig((z[1], z[0])) - v) / abs(v),
                            abs(ig((1 / z[0], z[1])) - v) / abs(v))
            elif family is Family.CN_III:
                worst = max(worst, abs(ig((1 / z[0], z[1])) - v) / abs(v),
                            abs(ig((z[0], 1 / z[1])) - v) / abs(v),
                            abs(ig((1 / z[0], 1 / z[1])) - v) / abs(v))
            else:
                z3 = 1.0 / (z[0] * z[1])
                worst = max(worst, abs(ig((z[1], z[0])) - v) / abs(v),
                            abs(ig((z3, z[1])) - v) / abs(v),
                            abs(ig((z[0], z3)) - v) / abs(v))
        assert worst <= 1e-12, (family, worst)


class TestPointwiseShiftIdentity:
    def test_an1_integrand_satisfies_shift_combination(self, rng, arg, moduli):
        # sum_r c_r Delta(z; ..., q t_r, ...) reproduces Delta(z; t) at n=1
        from ehv.identities import an_shift_coefficients
        from ehv.integrands import make_an1_spec

        t = tuple(arg(rng, 0.6, 0.85) for _ in range(2))
        f = tuple(arg(rng, 0.6, 0.85) for _ in range(3))
        z = on_circle(rng)
        base = make_integrand(make_an1_spec(t, f, moduli))((z,))
        coeffs = an_shift_coefficients(t, f, moduli.p)
        total = 0.0 + 0.0j
        for r in range(2):
            tt = list(t)
            tt[r] = moduli.q * tt[r]
            total += coeffs[r] * make_integrand(
                make_an1_spec(tuple(tt), f, moduli))((z,))
        assert abs(total - base) <= 1e-12 * abs(base)


class TestGenericVWP:
    def test_doubling_of_reflection_parameters(self, rng, arg, moduli):
        # the eight distinguished parameters multiply to 1/Gamma(z^-2)
        q, p = moduli.q, moduli.p
        z = 0.9 * on_circle(rng)
        pars = []
        for s in (1, -1):
            pars.extend([s * cmath.sqrt(p * q), s * cmath.sqrt(q) * p,
                         s * cmath.sqrt(p) * q, s * p * q])
        lhs = elliptic_gamma_multi([c * z for c in pars], moduli)
        rhs = 1.0 / elliptic_gamma_multi([z ** -2], moduli)
        assert abs(lhs - rhs) <= 1e-11 * abs(rhs)

    def test_gamma_exponent_scaling(self, rng, arg, moduli):
        t = tuple(arg(rng, 0.4, 0.7) for _ in range(4))   # m = 12
        g = 0.37 - 0.11j
        base = GenericVWP(order=12, t=t, rho=moduli.p * moduli.q, gamma=0.0,
                          moduli=moduli)
        gam = GenericVWP(order=12, t=t, rho=moduli.p * moduli.q, gamma=g,
                         moduli=moduli)
        for _ in range(2):
            z = 0.95 * on_circle(rng)
            y = cmath.log(z) / cmath.log(moduli.q)
            assert abs(gam(z) - base(z) * cmath.exp(g * y)) \
                <= 1e-11 * abs(gam(z))

    def test_exposes_product_A(self, moduli):
        t = (0.5, 0.6, 0.55, 0.45, 0.52)
        vwp = GenericVWP(order=13, t=t, rho=moduli.p * moduli.q, gamma=0.0,
                         moduli=moduli)
        assert vwp.A == pytest.approx(prod(t))

    def test_minus_a_evaluates(self, rng, arg, moduli):
        t = tuple(arg(rng, 0.4, 0.7) for _ in range(5))   # m = 11
        fam = MinusA(order=11, t=t, moduli=moduli)
        z = on_circle(rng)
        v = fam(z)
        assert v == v and v != 0      # finite, nonzero
        # and the sign flip genuinely changes the value vs the plain family
        espec = IntegrandSpec(Family.E, 1, ParamSet(t=t), moduli)
        assert abs(v - delta_E(z, espec)) > 1e-6 * abs(v)

    def test_no_closed_form(self, moduli):
        spec = IntegrandSpec(
            Family.MINUS_A, 1,
            ParamSet(t=(0.5,) * 5, extras={"m": 11}), moduli)
        with pytest.raises(UnsupportedFamily):
            rhs_closed_form(spec)


class TestSerialization:
    def test_round_trip(self, rng, arg, moduli):
        spec = IntegrandSpec(
            Family.CN_III, 2,
            ParamSet(t=tuple(arg(rng, 0.5, 0.8) for _ in range(3)),
                     x=(arg(rng, 0.6, 0.8), arg(rng, 0.6, 0.8)),
                     extras={"t": arg(rng, 0.2, 0.5)}), moduli)
        back = spec_from_params(spec_to_params(spec))
        assert back.family == spec.family and back.n == spec.n
        assert back.params.t == spec.params.t
        assert back.params.x == spec.params.x
        assert back.params.extras["t"] == spec.params.extras["t"]
        assert back.moduli == spec.moduli

    def test_pole_radius_reported(self, moduli):
        spec = IntegrandSpec(Family.E, 1, ParamSet(t=(0.6, 0.6, 0.7, 0.8, 0.6)),
                             moduli)
        r = interior_pole_radius(spec)
        assert r == pytest.approx(0.8)     # the largest |t_m|
        bad = IntegrandSpec(Family.E, 1, ParamSet(t=(0.5, 0.6, 0.7, 0.8, 0.4)),
                            moduli)
        assert interior_pole_radius(bad) > 1.0   # invalid domain: pole outside
