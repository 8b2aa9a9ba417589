"""Integrand builders for every beta-integral family, their closed-form
right-hand sides, and parameter-domain validation.

Families (n is the torus dimension actually integrated over):

    E         single-variable weight with 5 parameters t_0..t_4
    CN_I      2n+3 parameters, hyperoctahedral symmetry, cross terms 1/Gamma
    CN_II     5 parameters + coupling t, Gamma-ratio cross terms
    CN_III    per-axis x_i, three t_k, coupling t; theta prefactor, q/p asymmetric
    AN_I      n+1 t's and n+2 f's on the constrained torus z_1...z_{n+1} = 1
    AN_II     coupling pair (t, s) + 5 parameters, constrained torus
    AN_III    coupling t + n+4 parameters, constrained torus
    GENERIC_VWP / MINUS_A   single-variable families without closed forms

All integrands are returned "bare": the 1/(2 pi i)^n prefactors and the
dz/z measure live in the quadrature module, which evaluates the plain
grid average of these values.

Every family is described once as a list of atomic factors
g(c * z^e) with g in {Gamma, 1/Gamma, theta, 1/theta, identity} and e an
integer exponent vector over the free variables (the constrained variable
z_{n+1} of the AN families contributes (-1, ..., -1)).  The scalar path
evaluates atoms directly; the mesh path evaluates one table per distinct
constant on the Fourier grid and combines tables by index arithmetic,
which is what makes the n >= 2 acceptance runs cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._backend import cexp, clog, cpow
from .core import Moduli, theta
from .errors import DomainViolation, UnsupportedFamily
from .gamma import elliptic_gamma, elliptic_gamma_multi, elliptic_gamma_reciprocal
from .vec import gamma_vec, theta_vec


class Family(Enum):
    E = "E"
    CN_I = "Cn_I"
    CN_II = "Cn_II"
    CN_III = "Cn_III"
    AN_I = "An_I"
    AN_II = "An_II"
    AN_III = "An_III"
    GENERIC_VWP = "generic_vwp"
    MINUS_A = "minus_A"


@dataclass(frozen=True)
class ParamSet:
    """Named parameter sequences plus scalar extras; all entries nonzero."""

    t: tuple = ()
    w: tuple = ()
    f: tuple = ()
    s: tuple = ()
    x: tuple = ()
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("t", "w", "f", "s", "x"):
            seq = tuple(getattr(self, name))
            object.__setattr__(self, name, seq)
            if any(v == 0 for v in seq):
                raise ValueError(f"parameter sequence {name} contains 0")
        for key, v in self.extras.items():
            if isinstance(v, (int, float, complex)) and v == 0 and key in ("t", "s", "rho"):
                raise ValueError(f"scalar extra {key} must be nonzero")


_COUNTS = {
    # family -> (t_len as function of n, other requirements description)
    Family.E: lambda n: 5,
    Family.CN_I: lambda n: 2 * n + 3,
    Family.CN_II: lambda n: 5,
    Family.CN_III: lambda n: 3,
    Family.AN_I: lambda n: n + 1,
    Family.AN_II: lambda n: 5,
    Family.AN_III: lambda n: n + 4,
}


@dataclass(frozen=True)
class IntegrandSpec:
    family: Family
    n: int
    params: ParamSet
    moduli: Moduli

    def __post_init__(self):
        fam, n, ps = self.family, self.n, self.params
        if n < 1:
            raise ValueError("rank n must be >= 1")
        if fam in _COUNTS and len(ps.t) != _COUNTS[fam](n):
            raise ValueError(
                f"{fam.value} needs {_COUNTS[fam](n)} t-parameters, got {len(ps.t)}"
            )
        if fam is Family.E and n != 1:
            raise ValueError("E family is single-variable")
        if fam is Family.AN_I and len(ps.f) != n + 2:
            raise ValueError(f"An_I needs {n + 2} f-parameters")
        if fam is Family.CN_III and len(ps.x) != n:
            raise ValueError(f"Cn_III needs {n} x-parameters")
        if fam in (Family.CN_II, Family.CN_III, Family.AN_II, Family.AN_III):
            if "t" not in ps.extras:
                raise ValueError(f"{fam.value} needs the scalar extra 't'")
        if fam is Family.AN_II and "s" not in ps.extras:
            raise ValueError("An_II needs the scalar extra 's'")
        if fam in (Family.GENERIC_VWP, Family.MINUS_A):
            if n != 1:
                raise ValueError(f"{fam.value} is single-variable")
            order = ps.extras.get("m")
            if order is None:
                raise ValueError(f"{fam.value} needs the integer extra 'm'")
            need = order - 8 if fam is Family.GENERIC_VWP else order - 6
            if len(ps.t) != need:
                raise ValueError(
                    f"{fam.value} at m={order} needs {need} t-parameters"
                )

    # -- derived products ---------------------------------------------------

    @property
    def product_A(self):
        ps, m, n = self.params, self.moduli, self.n
        fam = self.family
        if fam in (Family.E, Family.CN_I, Family.AN_I):
            return _prod(ps.t)
        if fam is Family.CN_III:
            return ps.extras["t"] * _prod(ps.t) * cpow(m.q, n - 1)
        if fam is Family.AN_III:
            return cpow(ps.extras["t"], n + 2) * _prod(ps.t)
        if fam is Family.GENERIC_VWP:
            order = ps.extras["m"]
            return cpow(m.p * m.q, (13 - order) / 2.0) * _prod(ps.t)
        if fam is Family.MINUS_A:
            order = ps.extras["m"]
            return cpow(m.p * m.q, (11 - order) / 2.0) * _prod(ps.t)
        raise UnsupportedFamily(f"no product A for {fam.value}")

    @property
    def product_B(self):
        ps, n = self.params, self.n
        fam = self.family
        if fam is Family.CN_II:
            return cpow(ps.extras["t"], 2 * n - 2) * _prod(ps.t)
        if fam is Family.AN_I:
            return _prod(ps.f)
        if fam is Family.AN_II:
            return cpow(ps.extras["t"] * ps.extras["s"], n - 1) * _prod(ps.t)
        raise UnsupportedFamily(f"no product B for {fam.value}")


def _prod(seq):
    out = 1.0 + 0.0j
    for v in seq:
        out = out * v
    return out


# -- domain validation -------------------------------------------------------


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    margin: float

    @property
    def ok(self) -> bool:
        return self.margin > 0


@dataclass(frozen=True)
class ValidationResult:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c.name for c in self.checks if not c.ok]

    def worst(self):
        return min(self.checks, key=lambda c: c.margin)


def validate_domain(spec: IntegrandSpec) -> ValidationResult:
    """Per-family inequality checklist with margins; strict throughout."""
    ps, m = spec.params, spec.moduli
    pq = abs(m.p * m.q)
    checks = []

    def lt1(vals, label):
        for i, v in enumerate(vals):
            checks.append(InequalityCheck(f"|{label}_{i}| < 1", 1.0 - abs(v)))

    fam = spec.family
    if fam in (Family.E, Family.CN_I):
        lt1(ps.t, "t")
        checks.append(InequalityCheck("|pq| < |A|", abs(spec.product_A) - pq))
    elif fam is Family.CN_II:
        lt1(ps.t, "t")
        checks.append(InequalityCheck("|t| < 1", 1.0 - abs(ps.extras["t"])))
        checks.append(InequalityCheck("|pq| < |B|", abs(spec.product_B) - pq))
    elif fam is Family.CN_III:
        lt1(ps.x, "x")
        lt1(ps.t, "t")
        tmod = abs(ps.extras["t"])
        for i, xv in enumerate(ps.x):
            checks.append(InequalityCheck(f"|t| < |x_{i}|", abs(xv) - tmod))
        checks.append(InequalityCheck("|pq| < |A|", abs(spec.product_A) - pq))
    elif fam is Family.AN_I:
        lt1(ps.t, "t")
        lt1(ps.f, "f")
        checks.append(InequalityCheck(
            "|pq| < |AB|", abs(spec.product_A * spec.product_B) - pq))
    elif fam is Family.AN_II:
        lt1(ps.t, "t")
        checks.append(InequalityCheck("|t| < 1", 1.0 - abs(ps.extras["t"])))
        checks.append(InequalityCheck("|s| < 1", 1.0 - abs(ps.extras["s"])))
        checks.append(InequalityCheck("|pq| < |B|", abs(spec.product_B) - pq))
    elif fam is Family.AN_III:
        lt1(ps.t, "t")
        checks.append(InequalityCheck("|t| < 1", 1.0 - abs(ps.extras["t"])))
        checks.append(InequalityCheck("|pq| < |A|", abs(spec.product_A) - pq))
    elif fam in (Family.GENERIC_VWP, Family.MINUS_A):
        lt1(ps.t, "t")
        checks.append(InequalityCheck("|pq| < |A|", abs(spec.product_A) - pq))
    return ValidationResult(tuple(checks))


def require_valid(spec: IntegrandSpec) -> None:
    result = validate_domain(spec)
    if not result.ok:
        raise DomainViolation(
            f"{spec.family.value} domain violated: {result.failures()}"
        )


def interior_pole_radius(spec: IntegrandSpec) -> float:
    """Largest interior-pole modulus seen along any one torus variable.

    The trapezoid rule's geometric convergence rate is this radius, so
    samplers reject draws whose radius does not fit the node budget.
    """
    ps, m = spec.params, spec.moduli
    pq = abs(m.p * m.q)
    fam = spec.family
    if fam is Family.E or fam is Family.CN_I:
        return max([abs(v) for v in ps.t] + [pq / abs(spec.product_A)])
    if fam is Family.CN_II:
        return max([abs(v) for v in ps.t]
                   + [abs(ps.extras["t"]), pq / abs(spec.product_B)])
    if fam is Family.CN_III:
        tmod = abs(ps.extras["t"])
        return max([abs(v) for v in ps.t] + [abs(v) for v in ps.x]
                   + [tmod / abs(v) for v in ps.x]
                   + [pq / abs(spec.product_A)])
    if fam is Family.AN_I:
        return max([abs(v) for v in ps.t] + [abs(v) for v in ps.f]
                   + [pq / abs(spec.product_A * spec.product_B)])
    if fam is Family.AN_II:
        return max([abs(v) for v in ps.t]
                   + [abs(ps.extras["t"]), abs(ps.extras["s"]),
                      pq / abs(spec.product_B)])
    if fam is Family.AN_III:
        tmod = abs(ps.extras["t"])
        return max([abs(v) for v in ps.t]
                   + [tmod, pq / abs(spec.product_A)])
    return max([abs(v) for v in ps.t] + [pq / abs(spec.product_A)])


# -- atomic factor engine -----------------------------------------------------


class Kind(Enum):
    GAMMA = "gamma"
    IGAMMA = "igamma"
    THETA = "theta"
    ITHETA = "itheta"
    MONO = "mono"          # value c * z^e itself


@dataclass(frozen=True)
class Factor:
    kind: Kind
    c: complex
    evec: tuple


class FactorIntegrand:
    """Product of atomic factors over n free torus variables.

    Callable on a point sequence (scalar path); mesh_eval(N) returns the
    value array on the full N^n tensor grid of roots of unity.
    """

    def __init__(self, n: int, moduli: Moduli, factors, constant=1.0 + 0.0j):
        self.n = n
        self.moduli = moduli
        self.factors = tuple(factors)
        self.constant = constant

    def __call__(self, zs):
        zs = tuple(zs)
        if len(zs) != self.n:
            raise ValueError(f"expected {self.n} variables, got {len(zs)}")
        m = self.moduli
        out = self.constant
        for f in self.factors:
            w = f.c
            for zi, e in zip(zs, f.evec):
                if e:
                    w = w * zi ** e
            if f.kind is Kind.GAMMA:
                out = out * elliptic_gamma(w, m)
            elif f.kind is Kind.IGAMMA:
                out = out * elliptic_gamma_reciprocal(w, m)
            elif f.kind is Kind.THETA:
                out = out * theta(w, m.p)
            elif f.kind is Kind.ITHETA:
                out = out / theta(w, m.p)
            else:
                out = out * w
        return out

    def mesh_eval(self, N: int) -> np.ndarray:
        m = self.moduli
        z1d = np.exp(2j * np.pi * np.arange(N) / N)
        gamma_cache: dict = {}
        theta_cache: dict = {}

        def base_table(f: Factor) -> np.ndarray:
            if f.kind in (Kind.GAMMA, Kind.IGAMMA):
                key = (f.c, f.kind is Kind.IGAMMA)
                tab = gamma_cache.get(key)
                if tab is None:
                    tab = gamma_vec(f.c * z1d, m.q, m.p,
                                    inverse=f.kind is Kind.IGAMMA)
                    gamma_cache[key] = tab
                return tab
            if f.kind in (Kind.THETA, Kind.ITHETA):
                tab = theta_cache.get(f.c)
                if tab is None:
                    tab = theta_vec(f.c * z1d, m.p)
                    theta_cache[f.c] = tab
                return tab if f.kind is Kind.THETA else 1.0 / tab
            return f.c * z1d

        per_evec: dict = {}
        for f in self.factors:
            tab = base_table(f)
            if f.evec in per_evec:
                per_evec[f.evec] = per_evec[f.evec] * tab
            else:
                per_evec[f.evec] = tab.copy()

        axes = [np.arange(N).reshape([N if d == i else 1 for d in range(self.n)])
                for i in range(self.n)]
        out = np.full((N,) * self.n, self.constant, dtype=complex)
        for evec, tab in per_evec.items():
            idx = None
            for e, ax in zip(evec, axes):
                if e:
                    idx = e * ax if idx is None else idx + e * ax
            if idx is None:
                out = out * tab[0]
            else:
                out = out * tab[np.mod(idx, N)]
        return out


# -- family factor lists ------------------------------------------------------


def _unit(n, i, scale=1):
    e = [0] * n
    e[i] = scale
    return tuple(e)


def make_integrand(spec: IntegrandSpec) -> FactorIntegrand:
    """Bare integrand for the quadrature families (not GENERIC_VWP/MINUS_A)."""
    fam, n, ps, m = spec.family, spec.n, spec.params, spec.moduli
    fs = []
    one = 1.0 + 0.0j

    if fam is Family.E:
        A = spec.product_A
        for tm in ps.t:
            fs.append(Factor(Kind.GAMMA, tm, (1,)))
            fs.append(Factor(Kind.GAMMA, tm, (-1,)))
        for c, e in ((one, 2), (one, -2), (A, 1), (A, -1)):
            fs.append(Factor(Kind.IGAMMA, c, (e,)))
        return FactorIntegrand(1, m, fs)

    if fam is Family.CN_I:
        A = spec.product_A
        for j in range(n):
            for tr in ps.t:
                fs.append(Factor(Kind.GAMMA, tr, _unit(n, j)))
                fs.append(Factor(Kind.GAMMA, tr, _unit(n, j, -1)))
            for c, sc in ((one, 2), (one, -2), (A, 1), (A, -1)):
                fs.append(Factor(Kind.IGAMMA, c, _unit(n, j, sc)))
        for j in range(n):
            for k in range(j + 1, n):
                for ej, ek in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    e = [0] * n
                    e[j], e[k] = ej, ek
                    fs.append(Factor(Kind.IGAMMA, one, tuple(e)))
        return FactorIntegrand(n, m, fs)

    if fam is Family.CN_II:
        B = spec.product_B
        tc = ps.extras["t"]
        for j in range(n):
            for tr in ps.t:
                fs.append(Factor(Kind.GAMMA, tr, _unit(n, j)))
                fs.append(Factor(Kind.GAMMA, tr, _unit(n, j, -1)))
            for c, sc in ((one, 2), (one, -2), (B, 1), (B, -1)):
                fs.append(Factor(Kind.IGAMMA, c, _unit(n, j, sc)))
        for j in range(n):
            for k in range(j + 1, n):
                for ej, ek in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    e = [0] * n
                    e[j], e[k] = ej, ek
                    fs.append(Factor(Kind.GAMMA, tc, tuple(e)))
                    fs.append(Factor(Kind.IGAMMA, one, tuple(e)))
        return FactorIntegrand(n, m, fs)

    if fam is Family.CN_III:
        A = spec.product_A
        tc = ps.extras["t"]
        t1, t2, t3 = ps.t
        for i in range(n):
            per_axis = (ps.x[i], t1, t2, t3, tc / ps.x[i])
            for c in per_axis:
                fs.append(Factor(Kind.GAMMA, c, _unit(n, i)))
                fs.append(Factor(Kind.GAMMA, c, _unit(n, i, -1)))
            for sc in (2, -2):
                fs.append(Factor(Kind.IGAMMA, one, _unit(n, i, sc)))
            for sc in (1, -1):
                fs.append(Factor(Kind.IGAMMA, A, _unit(n, i, sc)))
        # ordered prefactor prod_{i<j} z_j theta(z_i/z_j, 1/(z_i z_j); p)
        for i in range(n):
            for j in range(i + 1, n):
                fs.append(Factor(Kind.MONO, one, _unit(n, j)))
                e = [0] * n
                e[i], e[j] = 1, -1
                fs.append(Factor(Kind.THETA, one, tuple(e)))
                e = [0] * n
                e[i], e[j] = -1, -1
                fs.append(Factor(Kind.THETA, one, tuple(e)))
        return FactorIntegrand(n, m, fs)

    # constrained A_n families: variable k = n+1 has exponent vector (-1,..,-1)
    if fam in (Family.AN_I, Family.AN_II, Family.AN_III):
        evecs = [_unit(n, k) for k in range(n)] + [tuple([-1] * n)]

        def minus(e):
            return tuple(-v for v in e)

        def add(e1, e2):
            return tuple(a + b for a, b in zip(e1, e2))

        if fam is Family.AN_I:
            AB = spec.product_A * spec.product_B
            for ek in evecs:
                for ti in ps.t:
                    fs.append(Factor(Kind.GAMMA, ti, minus(ek)))
                for fj in ps.f:
                    fs.append(Factor(Kind.GAMMA, fj, ek))
                fs.append(Factor(Kind.IGAMMA, AB, ek))
            for i in range(n + 1):
                for j in range(n + 1):
                    if i != j:
                        fs.append(Factor(Kind.IGAMMA, one,
                                         add(evecs[i], minus(evecs[j]))))
            return FactorIntegrand(n, m, fs)

        if fam is Family.AN_II:
            tc, sc_ = ps.extras["t"], ps.extras["s"]
            t1, t2, t3, t4, t5 = ps.t
            C = spec.product_B
            for ek in evecs:
                for c in (t1, t2, t3):
                    fs.append(Factor(Kind.GAMMA, c, ek))
                for c in (t4, t5):
                    fs.append(Factor(Kind.GAMMA, c, minus(ek)))
                fs.append(Factor(Kind.IGAMMA, C, ek))
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    fs.append(Factor(Kind.GAMMA, tc, add(evecs[i], evecs[j])))
                    fs.append(Factor(Kind.GAMMA, sc_,
                                     minus(add(evecs[i], evecs[j]))))
                    fs.append(Factor(Kind.IGAMMA, one,
                                     add(evecs[i], minus(evecs[j]))))
                    fs.append(Factor(Kind.IGAMMA, one,
                                     add(minus(evecs[i]), evecs[j])))
            return FactorIntegrand(n, m, fs)

        # AN_III
        A = spec.product_A
        tc = ps.extras["t"]
        for ek in evecs:
            for tk in ps.t[: n + 1]:
                fs.append(Factor(Kind.GAMMA, tk, minus(ek)))
            for tk in ps.t[n + 1:]:
                fs.append(Factor(Kind.GAMMA, tc * tk, ek))
            fs.append(Factor(Kind.IGAMMA, A, minus(ek)))
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                fs.append(Factor(Kind.GAMMA, tc, add(evecs[i], evecs[j])))
                fs.append(Factor(Kind.IGAMMA, one,
                                 add(evecs[i], minus(evecs[j]))))
                fs.append(Factor(Kind.IGAMMA, one,
                                 add(minus(evecs[i]), evecs[j])))
        return FactorIntegrand(n, m, fs)

    raise UnsupportedFamily(
        f"{fam.value} has no torus-quadrature integrand; evaluate pointwise"
    )


# -- per-family scalar entry points ---------------------------------------------


def delta_E(z, spec: IntegrandSpec):
    if spec.family is not Family.E:
        raise UnsupportedFamily("delta_E needs an E-family spec")
    return make_integrand(spec)((z,))


def delta_Cn_I(zs, spec):
    return _delta_checked(zs, spec, Family.CN_I)


def delta_Cn_II(zs, spec):
    return _delta_checked(zs, spec, Family.CN_II)


def delta_Cn_III(zs, spec):
    return _delta_checked(zs, spec, Family.CN_III)


def delta_An_I(zs, spec):
    return _delta_checked(zs, spec, Family.AN_I)


def delta_An_II(zs, spec):
    return _delta_checked(zs, spec, Family.AN_II)


def delta_An_III(zs, spec):
    return _delta_checked(zs, spec, Family.AN_III)


def _delta_checked(zs, spec, fam):
    if spec.family is not fam:
        raise UnsupportedFamily(f"expected a {fam.value} spec")
    return make_integrand(spec)(tuple(zs))


# -- closed-form right-hand sides ----------------------------------------------


def _pochs(m: Moduli):
    from .core import qpochhammer

    return qpochhammer(m.p, m.p), qpochhammer(m.q, m.q)


def rhs_closed_form(spec: IntegrandSpec):
    """The family's exact integral value (bare-measure convention)."""
    fam, n, ps, m = spec.family, spec.n, spec.params, spec.moduli
    if fam in (Family.GENERIC_VWP, Family.MINUS_A):
        raise UnsupportedFamily(f"{fam.value} has no closed form")
    pp, qq = _pochs(m)
    G = lambda *args: elliptic_gamma_multi(args, m)

    if fam is Family.E:
        t = ps.t
        A = spec.product_A
        val = 2.0 / (qq * pp)
        for i in range(5):
            for j in range(i + 1, 5):
                val *= G(t[i] * t[j])
        for i in range(5):
            val /= G(A / t[i])
        return val

    if fam is Family.CN_I:
        t = ps.t
        A = spec.product_A
        val = 2.0 ** n * math.factorial(n) / (pp * qq) ** n
        for i in range(len(t)):
            for j in range(i + 1, len(t)):
                val *= G(t[i] * t[j])
        for ti in t:
            val /= G(A / ti)
        return val

    if fam is Family.CN_II:
        t = ps.t
        tc = ps.extras["t"]
        B = spec.product_B
        val = 2.0 ** n * math.factorial(n) / (pp * qq) ** n
        for j in range(1, n + 1):
            val *= G(cpow(tc, j)) / G(tc)
            for r in range(5):
                for s_ in range(r + 1, 5):
                    val *= G(cpow(tc, j - 1) * t[r] * t[s_])
            for r in range(5):
                val /= G(cpow(tc, 1 - j) * B / t[r])
        return val

    if fam is Family.CN_III:
        x = ps.x
        t1, t2, t3 = ps.t
        tc = ps.extras["t"]
        A = spec.product_A
        q = m.q
        val = 2.0 ** n / (pp * qq) ** n * cpow(G(tc), n)
        for i in range(n):
            for j in range(i + 1, n):
                val *= x[j] * theta(x[i] / x[j], m.p) * theta(tc / (x[i] * x[j]), m.p)
        for i in range(1, n + 1):
            xi = x[i - 1]
            for pair in (t1 * t2, t1 * t3, t2 * t3):
                val *= G(pair * cpow(q, i - 1))
            val /= G(A / xi) * G(A * xi / tc)
            for tk in (t1, t2, t3):
                val *= G(xi * tk) * G(tc * tk / xi)
                val /= G(A * cpow(q, 1 - i) / tk)
        return val

    if fam is Family.AN_I:
        t, f = ps.t, ps.f
        A, B = spec.product_A, spec.product_B
        val = math.factorial(n + 1) / (qq * pp) ** n
        val *= G(A)
        for fj in f:
            val *= G(B / fj)
        for tk in t:
            for fj in f:
                val *= G(tk * fj)
        for tk in t:
            val /= G(tk * B)
        for fj in f:
            val /= G(A * B / fj)
        return val

    if fam is Family.AN_II:
        return _rhs_an2(spec)

    if fam is Family.AN_III:
        return _rhs_an3(spec)

    raise UnsupportedFamily(fam.value)


def _rhs_an2(spec: IntegrandSpec):
    ps, m, n = spec.params, spec.moduli, spec.n
    t1, t2, t3, t4, t5 = ps.t
    tc, sc = ps.extras["t"], ps.extras["s"]
    pp, qq = _pochs(m)
    G = lambda *args: elliptic_gamma_multi(args, m)
    P5 = t1 * t2 * t3 * t4 * t5
    val = math.factorial(n + 1) / (qq * pp) ** n
    if n % 2 == 1:                       # n = 2m - 1
        mm = (n + 1) // 2
        val *= G(cpow(tc, mm), cpow(sc, mm), cpow(sc, mm - 1) * t4 * t5)
        for i, j in ((0, 1), (0, 2), (1, 2)):
            val *= G(cpow(tc, mm - 1) * ps.t[i] * ps.t[j])
        for k in (t4, t5):
            val /= G(cpow(tc, 2 * mm - 2) * cpow(sc, mm - 1) * t1 * t2 * t3 * k)
        for j in range(1, mm + 1):
            for i in (t1, t2, t3):
                for k in (t4, t5):
                    val *= G(cpow(tc * sc, j - 1) * i * k)
            for a, b in ((t1, t2), (t1, t3), (t2, t3)):
                val /= G(cpow(tc * sc, mm + j - 2) * a * b * t4 * t5)
        for j in range(1, mm):
            val *= G(cpow(tc * sc, j), cpow(tc, j) * cpow(sc, j - 1) * t4 * t5)
            for a, b in ((t1, t2), (t1, t3), (t2, t3)):
                val *= G(cpow(tc, j - 1) * cpow(sc, j) * a * b)
            for k in (t4, t5):
                val /= G(cpow(tc, mm + j - 2) * cpow(sc, mm + j - 1)
                         * t1 * t2 * t3 * k)
        return val
    mm = n // 2                          # n = 2m
    val *= G(cpow(tc, mm) * t1, cpow(tc, mm) * t2, cpow(tc, mm) * t3)
    val *= G(cpow(sc, mm) * t4, cpow(sc, mm) * t5)
    val *= G(cpow(tc, mm - 1) * t1 * t2 * t3)
    val /= G(cpow(tc, 2 * mm - 1) * cpow(sc, mm - 1) * P5,
             cpow(tc, 2 * mm - 1) * cpow(sc, mm) * t1 * t2 * t3)
    for j in range(1, mm + 1):
        val *= G(cpow(tc * sc, j), cpow(tc, j) * cpow(sc, j - 1) * t4 * t5)
        for i in (t1, t2, t3):
            for k in (t4, t5):
                val *= G(cpow(tc * sc, j - 1) * i * k)
        for k in (t4, t5):
            val /= G(cpow(tc, mm + j - 2) * cpow(sc, mm + j - 1) * P5 / k)
        for a, b in ((t1, t2), (t1, t3), (t2, t3)):
            val *= G(cpow(tc, j - 1) * cpow(sc, j) * a * b)
            val /= G(cpow(tc * sc, mm + j - 1) * a * b * t4 * t5)
    return val


def _rhs_an3(spec: IntegrandSpec):
    ps, m, n = spec.params, spec.moduli, spec.n
    t = ps.t
    tc = ps.extras["t"]
    pp, qq = _pochs(m)
    G = lambda *args: elliptic_gamma_multi(args, m)
    val = math.factorial(n + 1) / (qq * pp) ** n
    if n % 2 == 1:                       # n = 2l - 1, n + 4 = 2l + 3 parameters
        ll = (n + 1) // 2
        head = _prod(t[: 2 * ll])
        tail = t[2 * ll:]                # 3 entries
        val *= G(cpow(tc, ll), head) / G(cpow(tc, ll) * head)
        for i in range(2 * ll):
            for j in range(2 * ll, 2 * ll + 3):
                val *= G(tc * t[i] * t[j])
        for i in range(2 * ll):
            for j in range(i + 1, 2 * ll):
                val *= G(tc * t[i] * t[j])
        for i in range(3):
            for j in range(i + 1, 3):
                val *= G(cpow(tc, ll + 1) * tail[i] * tail[j])
        allprod = _prod(t)
        for i in range(2 * ll):
            val /= G(cpow(tc, 2 * ll + 1) * allprod / t[i])
        for tj in tail:
            val /= G(cpow(tc, ll + 1) * allprod / tj)
        return val
    ll = n // 2                          # n = 2l, n + 4 = 2l + 4 parameters
    head = _prod(t[: 2 * ll + 1])
    tail = t[2 * ll + 1:]                # 3 entries
    val *= G(head, cpow(tc, ll + 2) * _prod(tail))
    val /= G(cpow(tc, ll + 2) * _prod(t))
    for i in range(2 * ll + 1):
        for j in range(2 * ll + 1, 2 * ll + 4):
            val *= G(tc * t[i] * t[j])
    for i in range(2 * ll + 1):
        for j in range(i + 1, 2 * ll + 1):
            val *= G(tc * t[i] * t[j])
    for tj in tail:
        val *= G(cpow(tc, ll + 1) * tj)
    allprod = _prod(t)
    for i in range(2 * ll + 1):
        val /= G(cpow(tc, 2 * ll + 2) * allprod / t[i])
    for tj in tail:
        val /= G(cpow(tc, ll + 1) * tj * head)
    return val


# -- single-variable families without closed forms ------------------------------


@dataclass(frozen=True)
class GenericVWP:
    """Well-poised single-variable integrand with free balancing constant.

    rho = pq collapses the doubled reflection factors and reproduces the
    symmetric form; gamma multiplies in exp(gamma * y) with z = q^y.
    """

    order: int
    t: tuple
    rho: complex
    gamma: complex
    moduli: Moduli

    @property
    def A(self):
        return cpow(self.moduli.p * self.moduli.q,
                    (13 - self.order) / 2.0) * _prod(self.t)

    def __call__(self, z):
        m = self.moduli
        q, p = m.q, m.p
        rho = self.rho
        mo = self.order
        num = []
        den = []
        for tj in self.t:
            num.append(tj * z)
            den.append(rho / tj * z)
        num.append(cpow(rho, (mo + 1) / 2.0) * cpow(p * q, -6.0)
                   / _prod(self.t) * z)
        den.extend([1.0 / z ** 2, (rho / (p * q)) ** 2 * z ** 2,
                    cpow(rho, (1 - mo) / 2.0) * cpow(p * q, 6.0)
                    * _prod(self.t) * z])
        val = elliptic_gamma_multi(num, m) / elliptic_gamma_multi(den, m)
        if self.gamma != 0:
            y = clog(z) / clog(q)
            val = val * cexp(self.gamma * y)
        return val


def generic_vwp_integrand(z, order: int, t, rho, gamma, moduli: Moduli):
    """Value of the general well-poised integrand at z (see GenericVWP)."""
    return GenericVWP(order=order, t=tuple(t), rho=rho, gamma=gamma,
                      moduli=moduli)(z)


@dataclass(frozen=True)
class MinusA:
    """The sign-flipped variant: same shape, -A in the reflection slots,
    no known closed form."""

    order: int
    t: tuple
    moduli: Moduli

    @property
    def A(self):
        return cpow(self.moduli.p * self.moduli.q,
                    (11 - self.order) / 2.0) * _prod(self.t)

    def __call__(self, z):
        m = self.moduli
        A = self.A
        num = []
        for tj in self.t:
            num.extend([tj * z, tj / z])
        den = [z ** 2, 1.0 / z ** 2, -A * z, -A / z]
        return elliptic_gamma_multi(num, m) / elliptic_gamma_multi(den, m)


def make_an1_spec(t, f, m: Moduli) -> IntegrandSpec:
    n = len(t) - 1
    return IntegrandSpec(Family.AN_I, n,
                         ParamSet(t=tuple(t), f=tuple(f)), m)


# -- transformation-identity integrand (shares the factor engine) ---------------


def an_trans_domain_check(tglob, f, s, m: Moduli) -> ValidationResult:
    pq = abs(m.p * m.q)
    n = len(f) - 2
    checks = [InequalityCheck("|t| < 1", 1.0 - abs(tglob))]
    for i, v in enumerate(f):
        checks.append(InequalityCheck(f"|f_{i}| < 1", 1.0 - abs(v)))
    for i, v in enumerate(s):
        checks.append(InequalityCheck(f"|s_{i}| < 1", 1.0 - abs(v)))
    B = abs(_prod(f)) * abs(tglob) ** (n + 1)
    S = abs(_prod(s)) * abs(tglob) ** (n + 1)
    checks.append(InequalityCheck("|pq| < |t^(n+1) B|", B - pq))
    checks.append(InequalityCheck("|pq| < |t^(n+1) S|", S - pq))
    return ValidationResult(tuple(checks))


def make_an_trans_integrand(tglob, first, second, firstprod, secondprod,
                            m: Moduli) -> FactorIntegrand:
    """Integrand of the f <-> s transformation identity (one side).

    Numerator Gamma(t f_j / z_k, s_j z_k) over all k, j; denominator the
    i != j Gamma(z_i/z_j) cross terms and Gamma(t^{n+1} S z_k, t B / z_k).
    """
    n = len(first) - 2
    evecs = [_unit(n, k) for k in range(n)] + [tuple([-1] * n)]

    def minus(e):
        return tuple(-v for v in e)

    def add(e1, e2):
        return tuple(a + b for a, b in zip(e1, e2))

    one = 1.0 + 0.0j
    tn1 = cpow(tglob, n + 1)
    fs = []
    for ek in evecs:
        for fj in first:
            fs.append(Factor(Kind.GAMMA, tglob * fj, minus(ek)))
        for sj in second:
            fs.append(Factor(Kind.GAMMA, sj, ek))
        fs.append(Factor(Kind.IGAMMA, tn1 * secondprod, ek))
        fs.append(Factor(Kind.IGAMMA, tglob * firstprod, minus(ek)))
    for i in range(n + 1):
        for j in range(n + 1):
            if i != j:
                fs.append(Factor(Kind.IGAMMA, one, add(evecs[i], minus(evecs[j]))))
    return FactorIntegrand(n, m, fs)
