"""Elliptic gamma function and relatives.

    Gamma(z; q, p) = prod_{j,k>=0} (1 - q^{j+1} p^{k+1} / z) / (1 - z q^j p^k)

solves the pair of difference laws

    Gamma(q z) = theta(z; p) Gamma(z),   Gamma(p z) = theta(z; q) Gamma(z),

is symmetric in (q, p), and satisfies the reflection law
Gamma(z) Gamma(pq/z) = 1.  The complex-order shifted factorial is the ratio
theta(z; p; q)_s = Gamma(z q^s) / Gamma(z).

Two relatives that remain sensible as |q| -> 1 are provided: the double
sine S(u; w1, w2) built from the modularly paired bases q = e^{2 pi i
w1/w2}, qt = e^{-2 pi i w2/w1}, and the modified gamma G(u; w1, w2, w3),
a four-fold product over the (q, p) and (qt, pt) lattices.  G regroups
exactly into two plain elliptic gamma factors,

    G(u; w) = Gamma(e^{2 pi i u/w2}; q, p) * Gamma(pt e^{-2 pi i u/w1}; qt, pt),

which is how it is evaluated here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._backend import cexp, clog, cpow
from .core import Moduli, TruncationPolicy, default_policy, qpochhammer
from .errors import NonConvergent, PoleHit, TruncationFailure

_TWO_PI_I = 2j * math.pi

# Relative distance to the pole lattice below which evaluation refuses to
# return a huge value and raises PoleHit instead.
_POLE_GUARD = 1e-13


def _gamma_core(z, q, p, policy: TruncationPolicy | None,
                inverse: bool = False):
    """Log-sum evaluation of the double product over the (j, k) lattice.

    Rows in k are cut at the first index where the row's geometric tail
    bound drops below eps; within a row, j is cut the same way.  With
    inverse=True the reciprocal is computed directly, so points on the
    pole lattice of Gamma give an exact 0 instead of PoleHit (integrand
    denominators rely on this at z^2 = 1).
    """
    if policy is None:
        policy = default_policy()
    if z == 0:
        raise PoleHit("elliptic gamma argument z = 0")
    qa, pa = abs(q), abs(p)
    if qa >= 1.0 or pa >= 1.0:
        raise NonConvergent("elliptic gamma requires |q| < 1 and |p| < 1")
    zi = 1.0 / z
    if pa == 0.0 or qa == 0.0:
        # Gamma(z; q, 0) = 1 / (z; q)_oo
        poch = qpochhammer(z, q if pa == 0.0 else p, policy)
        if inverse:
            return poch
        if abs(poch) < _POLE_GUARD:
            raise PoleHit("z within guard distance of the degenerate pole lattice")
        return 1.0 / poch

    za = abs(z)
    scale = max(za, qa * pa * abs(zi))
    kmax = policy.cutoff(scale, pa)
    total = 0
    acc = 0.0
    hit_zero = False
    pk = 1.0 + 0.0 * p          # p^k
    for _ in range(kmax):
        row_scale = scale * abs(pk)
        jmax = policy.cutoff(row_scale, qa) if row_scale > 0 else 1
        total += jmax
        if total > policy.max_terms:
            raise TruncationFailure(
                f"elliptic gamma lattice needs {total}+ terms, "
                f"policy allows {policy.max_terms}"
            )
        w_den = z * pk          # z q^j p^k
        w_num = (q * p * pk) * zi   # q^{j+1} p^{k+1} / z
        for _ in range(jmax):
            fd = 1.0 - w_den
            fn = 1.0 - w_num
            if not inverse and abs(fd) < _POLE_GUARD:
                raise PoleHit(
                    f"z within {_POLE_GUARD} relative distance of pole lattice"
                )
            if inverse and abs(fn) < _POLE_GUARD:
                raise PoleHit(
                    "z within guard distance of the reciprocal's pole lattice"
                )
            if inverse and fd == 0:
                hit_zero = True
            else:
                acc = acc + clog(fn) - clog(fd)
            w_den = w_den * q
            w_num = w_num * q
        pk = pk * p
    if hit_zero:
        return 0.0 + 0.0j
    return cexp(-acc) if inverse else cexp(acc)


def elliptic_gamma(z, m: Moduli, policy: TruncationPolicy | None = None):
    """Gamma(z; q, p) with pole-proximity guard."""
    return _gamma_core(z, m.q, m.p, policy)


def elliptic_gamma_reciprocal(z, m: Moduli,
                              policy: TruncationPolicy | None = None):
    """1/Gamma(z; q, p); exactly 0 on the pole lattice of Gamma."""
    return _gamma_core(z, m.q, m.p, policy, inverse=True)


def elliptic_gamma_multi(zs, m: Moduli, policy: TruncationPolicy | None = None):
    """Gamma(z_1, ..., z_k; q, p) = prod_j Gamma(z_j; q, p); empty -> 1."""
    acc = 1.0 + 0.0j
    for z in zs:
        acc = acc * _gamma_core(z, m.q, m.p, policy)
    return acc


def elliptic_factorial_s(z, s, m: Moduli, policy: TruncationPolicy | None = None):
    """theta(z; p; q)_s = Gamma(z q^s) / Gamma(z) for complex order s."""
    qs = cpow(m.q, s)
    num = _gamma_core(z * qs, m.q, m.p, policy)
    den = _gamma_core(z, m.q, m.p, policy)
    return num / den


@dataclass(frozen=True)
class QuasiPeriods:
    """Quasi-period triple (w1, w2, w3) and its four derived bases.

        q  = e^{2 pi i w1/w2}     qt = e^{-2 pi i w2/w1}
        p  = e^{2 pi i w3/w2}     pt = e^{2 pi i w3/w1}
    """

    omega1: complex
    omega2: complex
    omega3: complex
    _bases: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        q = cexp(_TWO_PI_I * self.omega1 / self.omega2)
        qt = cexp(-_TWO_PI_I * self.omega2 / self.omega1)
        p = cexp(_TWO_PI_I * self.omega3 / self.omega2)
        pt = cexp(_TWO_PI_I * self.omega3 / self.omega1)
        object.__setattr__(self, "_bases", {"q": q, "qt": qt, "p": p, "pt": pt})

    @property
    def q(self):
        return self._bases["q"]

    @property
    def q_tilde(self):
        return self._bases["qt"]

    @property
    def p(self):
        return self._bases["p"]

    @property
    def p_tilde(self):
        return self._bases["pt"]

    @property
    def validity(self) -> dict:
        """Which of the four derived bases lie inside the unit disk."""
        return {name: abs(b) < 1.0 for name, b in self._bases.items()}


def double_sine(u, omega1, omega2, policy: TruncationPolicy | None = None):
    """S(u; w1, w2) = (e^{2 pi i u/w2}; q)_oo / (e^{2 pi i u/w1} qt; qt)_oo."""
    q = cexp(_TWO_PI_I * omega1 / omega2)
    qt = cexp(-_TWO_PI_I * omega2 / omega1)
    if abs(q) >= 1.0 or abs(qt) >= 1.0:
        raise NonConvergent(
            "double sine requires Im(w1/w2) > 0 so that |q|, |qt| < 1"
        )
    num = qpochhammer(cexp(_TWO_PI_I * u / omega2), q, policy)
    den = qpochhammer(cexp(_TWO_PI_I * u / omega1) * qt, qt, policy)
    if abs(den) < _POLE_GUARD:
        raise PoleHit("double sine denominator Pochhammer vanishes")
    return num / den


def modified_gamma_G(u, w: QuasiPeriods, policy: TruncationPolicy | None = None):
    """Modified elliptic gamma G(u; w1, w2, w3).

    Evaluated as Gamma(x; q, p) * Gamma(pt / y; qt, pt) with
    x = e^{2 pi i u/w2}, y = e^{2 pi i u/w1}; multiplying out the two
    double products reproduces the defining four-fold product factor by
    factor.
    """
    v = w.validity
    if not (v["q"] and v["p"] and v["pt"]):
        raise NonConvergent(
            "modified gamma requires |q|, |p|, |pt| < 1; "
            f"validity flags: {v}"
        )
    x = cexp(_TWO_PI_I * u / w.omega2)
    y = cexp(_TWO_PI_I * u / w.omega1)
    part_qp = _gamma_core(x, w.q, w.p, policy)
    part_mod = _gamma_core(w.p_tilde / y, w.q_tilde, w.p_tilde, policy)
    return part_qp * part_mod
