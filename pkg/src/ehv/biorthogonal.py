"""Biorthogonal rational function families over the elliptic beta weight.

R_n(z) is the terminating 12-parameter very-well-poised series

    V(t3/t4; q/(t0 t4), q/(t1 t4), q/(t2 t4), t3 z, t3/z, q^-n, A q^(n-1)/t4)

with A = t0 t1 t2 t3 t4; T_n is its image under the involution
t4 -> pq/A.  Two-index variants R_nm, T_nm multiply in the partner series
with the two bases swapped.  Both families are rational in the gauge
cross-ratio gamma(z) = theta(z xi, z/xi; p)/theta(z eta, z/eta; p), solve a
generalized eigenvalue problem for a pair of theta-coefficient difference
operators, and satisfy

    (1/2 pi i) int T_n R_m Delta_E dz/z = h_n N_E delta_nm

whenever the unit circle separates the integrand's pole sequences; the
admissibility gate is contour_check and no contour is ever deformed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import cpow
from .core import Moduli, theta, theta_factorial_multi, theta_multi
from .errors import InadmissibleContour, SingularStep
from .integrands import Family, IntegrandSpec, ParamSet, make_integrand, rhs_closed_form
from .quadrature import QuadratureConfig, default_config, integrate_mesh_fn
from .report import VerificationReport
from .series import VSpec, sum_V
from .vec import theta_vec

_MARGIN = 1e-6


@dataclass(frozen=True)
class RahmanParams:
    """Five weight parameters t_0..t_4 with |t_r| < 1 and |pq| < |A|."""

    t: tuple
    moduli: Moduli

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(self.t))
        if len(self.t) != 5:
            raise ValueError("need exactly 5 parameters t_0..t_4")
        for i, v in enumerate(self.t):
            if abs(v) >= 1.0:
                raise ValueError(f"|t_{i}| must be < 1")
        if abs(self.moduli.p * self.moduli.q) >= abs(self.A):
            raise ValueError("|pq| < |A| violated")

    @property
    def A(self):
        out = 1.0 + 0.0j
        for v in self.t:
            out *= v
        return out

    def weight_spec(self) -> IntegrandSpec:
        return IntegrandSpec(Family.E, 1, ParamSet(t=self.t), self.moduli)

    def beta_value(self):
        """Closed form of the weight's total integral."""
        return rhs_closed_form(self.weight_spec())


@dataclass(frozen=True)
class OperatorGauge:
    """Spectral parameter mu and the auxiliary gauge pair (xi, eta)."""

    mu: complex
    xi: complex = 1.3
    eta: complex = 0.7 + 0.1j

    def validate(self, rp: RahmanParams) -> None:
        p = rp.moduli.p
        q = rp.moduli.q
        for k in range(-3, 4):
            pk = cpow(p, k) if k >= 0 else 1.0 / cpow(p, -k)
            if abs(self.xi - self.eta * pk) < 1e-10:
                raise ValueError("gauge collision xi = eta p^k")
            if abs(self.xi - q * rp.t[4] * pk / (rp.A * self.eta)) < 1e-10:
                raise ValueError("gauge collision xi = q t4 p^k / (A eta)")


def gauge_ratio(z, xi, eta, p):
    """gamma(z) = theta(z xi, z/xi; p) / theta(z eta, z/eta; p)."""
    return theta_multi([z * xi, z / xi], p) / theta_multi([z * eta, z / eta], p)


# -- the function families ------------------------------------------------------


def _rn_vspec(z, n, t, q, p, kind: str) -> VSpec:
    t0, t1, t2, t3, t4 = t
    A = t0 * t1 * t2 * t3 * t4
    if kind == "R":
        head = t3 / t4
        tail = (q / (t0 * t4), q / (t1 * t4), q / (t2 * t4))
    else:
        head = A * t3 / q
        tail = (A / t0, A / t1, A / t2)
    pars = tail + (t3 * z, t3 / z, cpow(q, -n), A * cpow(q, n - 1) / t4)
    return VSpec(t0=head, t=pars, x=1.0, moduli=Moduli(q=q, p=p), N=n)


def R_n(z, n: int, rp: RahmanParams):
    """n-th member of the first biorthogonal family."""
    return sum_V(_rn_vspec(z, n, rp.t, rp.moduli.q, rp.moduli.p, "R"))


def T_n(z, n: int, rp: RahmanParams):
    """n-th member of the dual family (t4 -> pq/A image of R_n)."""
    return sum_V(_rn_vspec(z, n, rp.t, rp.moduli.q, rp.moduli.p, "T"))


def R_nm(z, n: int, m: int, rp: RahmanParams):
    """Two-index family: q-base series times p-base series."""
    q, p = rp.moduli.q, rp.moduli.p
    return (sum_V(_rn_vspec(z, n, rp.t, q, p, "R"))
            * sum_V(_rn_vspec(z, m, rp.t, p, q, "R")))


def T_nm(z, n: int, m: int, rp: RahmanParams):
    q, p = rp.moduli.q, rp.moduli.p
    return (sum_V(_rn_vspec(z, n, rp.t, q, p, "T"))
            * sum_V(_rn_vspec(z, m, rp.t, p, q, "T")))


def _family_nodes(z, n: int, t, q, p, kind: str) -> np.ndarray:
    """Vectorized terminating series over a node array z."""
    z = np.asarray(z, dtype=complex)
    t0, t1, t2, t3, t4 = t
    A = t0 * t1 * t2 * t3 * t4
    if kind == "R":
        head = t3 / t4
        scal = (q / (t0 * t4), q / (t1 * t4), q / (t2 * t4),
                cpow(q, -n), A * cpow(q, n - 1) / t4)
    else:
        head = A * t3 / q
        scal = (A / t0, A / t1, A / t2, cpow(q, -n), A * cpow(q, n - 1) / t4)
    th0 = theta(head, p)
    tot = np.ones_like(z)
    fac = np.ones_like(z)
    for s in range(n):
        qs = cpow(q, s)
        num = theta(head * qs, p)
        den = theta(cpow(q, s + 1), p)
        for v in scal:
            num *= theta(v * qs, p)
            den *= theta(q * head / v * qs, p)
        numv = theta_vec(t3 * z * qs, p) * theta_vec(t3 / z * qs, p)
        denv = (theta_vec(q * head / (t3 * z) * qs, p)
                * theta_vec(q * head * z / t3 * qs, p))
        fac = fac * (num / den) * (numv / denv)
        tot = tot + theta(head * cpow(q, 2 * s + 2), p) / th0 * fac * cpow(q, s + 1)
    return tot


def r_family_nodes(z, n: int, rp: RahmanParams, base_swapped=False) -> np.ndarray:
    q, p = rp.moduli.q, rp.moduli.p
    if base_swapped:
        q, p = p, q
    return _family_nodes(z, n, rp.t, q, p, "R")


def t_family_nodes(z, n: int, rp: RahmanParams, base_swapped=False) -> np.ndarray:
    q, p = rp.moduli.q, rp.moduli.p
    if base_swapped:
        q, p = p, q
    return _family_nodes(z, n, rp.t, q, p, "T")


# -- difference operator ---------------------------------------------------------


def _bases(rp: RahmanParams, base: str):
    if base == "q":
        return rp.moduli.q, rp.moduli.p
    if base == "p":
        return rp.moduli.p, rp.moduli.q
    raise ValueError("base must be 'q' or 'p'")


def V_coeff(z, mu, rp: RahmanParams, base: str = "q"):
    """Shift coefficient of the difference operator."""
    q, p = _bases(rp, base)
    t4 = rp.t[4]
    A = rp.A
    num = theta_multi([t4 / (q * mu * z), A * mu / (q * q * z), t4 * z / q], p)
    for tr in rp.t:
        num *= theta(tr * z, p)
    return num / theta_multi([z * z, q * z * z], p)


def kappa_coeff(mu, rp: RahmanParams, base: str = "q"):
    q, p = _bases(rp, base)
    t4 = rp.t[4]
    val = theta_multi([rp.A * mu / (q * t4), 1.0 / mu], p)
    for tr in rp.t[:4]:
        val *= theta(tr * t4 / q, p)
    return val


def apply_D(f, z, mu, rp: RahmanParams, base: str = "q"):
    """D_mu f at z: V(z)(f(qz)-f(z)) + V(1/z)(f(z/q)-f(z)) + kappa f(z)."""
    q, _ = _bases(rp, base)
    fz = f(z)
    return (V_coeff(z, mu, rp, base) * (f(q * z) - fz)
            + V_coeff(1.0 / z, mu, rp, base) * (f(z / q) - fz)
            + kappa_coeff(mu, rp, base) * fz)


def weight_ratio_up(z, rp: RahmanParams):
    """Delta_E(qz)/Delta_E(z) in exact theta form."""
    q, p = rp.moduli.q, rp.moduli.p
    A = rp.A
    num = theta_multi([1.0 / (z * z * q * q), 1.0 / (z * z * q), A / (q * z)], p)
    den = theta_multi([z * z, q * z * z, A * z], p)
    for tm in rp.t:
        num *= theta(tm * z, p)
        den *= theta(tm / (q * z), p)
    return num / den


def weight_ratio_down(z, rp: RahmanParams):
    """Delta_E(z/q)/Delta_E(z)."""
    return 1.0 / weight_ratio_up(z / rp.moduli.q, rp)


def apply_D_adjoint(f, z, xi, rp: RahmanParams):
    """Adjoint operator action with respect to the weight Delta_E."""
    q = rp.moduli.q
    fz = f(z)
    return (weight_ratio_up(z, rp) * V_coeff(1.0 / (q * z), xi, rp) * f(q * z)
            + weight_ratio_down(z, rp) * V_coeff(z / q, xi, rp) * f(z / q)
            - (V_coeff(z, xi, rp) + V_coeff(1.0 / z, xi, rp)) * fz
            + kappa_coeff(xi, rp) * fz)


def lambda_gevp(mu, gauge: OperatorGauge, rp: RahmanParams):
    """Generalized eigenvalue attached to mu for the gauge pair."""
    p = rp.moduli.p
    q = rp.moduli.q
    t4 = rp.t[4]
    return (theta_multi([mu * rp.A * gauge.eta / (q * t4), mu / gauge.eta], p)
            / theta_multi([mu * rp.A * gauge.xi / (q * t4), mu / gauge.xi], p))


def g_function(z, mu, rp: RahmanParams):
    """Conjugating factor between the operator and its adjoint."""
    from .gamma import elliptic_gamma_multi

    q = rp.moduli.q
    t4 = rp.t[4]
    A = rp.A
    num = [q * mu * z / t4, mu * q / (t4 * z), A * z, A / z]
    den = [q * q * z / t4, q * q / (t4 * z), A * mu * z / q, A * mu / (q * z)]
    return (elliptic_gamma_multi(num, rp.moduli)
            / elliptic_gamma_multi(den, rp.moduli))


def g_n_factor(z, n: int, rp: RahmanParams):
    q, p = rp.moduli.q, rp.moduli.p
    t4, A = rp.t[4], rp.A
    num = theta_factorial_multi([q * q * z / t4, q * q / (t4 * z)], p, q, n - 1)
    den = theta_factorial_multi([A * z, A / z], p, q, n - 1)
    return num / den


def recurrence_next(R_prev, R_curr, n: int, z, rp: RahmanParams,
                    gauge: OperatorGauge | None = None):
    """Solve the three-term recurrence for the (n+1)-th family member.

    The auxiliary gauge pair cancels identically from the result; any
    valid gauge gives the same value.
    """
    if gauge is None:
        gauge = OperatorGauge(mu=1.0)
    q, p = rp.moduli.q, rp.moduli.p
    t0, t1, t2, t3, t4 = rp.t
    A = rp.A
    xi, eta = gauge.xi, gauge.eta

    def gam(w):
        return gauge_ratio(w, xi, eta, p)

    def B(x):
        num = theta_multi(
            [x, t3 / (t4 * x), q * t3 / (t4 * x), q * x / (t0 * t1),
             q * x / (t0 * t2), q * x / (t1 * t2), q * q * eta * x / A,
             q * q * x / (A * eta)], p)
        den = theta_multi([q * t4 * x * x / A, q * q * t4 * x * x / A], p)
        return num / den

    delta = theta_multi(
        [q * q * t3 / A, q / (t0 * t4), q / (t1 * t4), q / (t2 * t4),
         t3 * eta, t3 / eta], p)
    gz = gam(z)
    alpha_next = gam(cpow(q, n + 1) / t4)      # alpha_k = gamma(q^k / t4)
    beta_prev = gam(cpow(q, n - 2) * A)        # beta_k  = gamma(q^(k-1) A)
    lead = (gz - alpha_next) * B(A * cpow(q, n - 1) / t4)
    if abs(lead) < 1e-250:
        raise SingularStep("leading recurrence coefficient vanishes")
    rest = ((gz - beta_prev) * B(cpow(q, -n)) * (R_prev - R_curr)
            + delta * (gz - gam(t3)) * R_curr)
    return R_curr - rest / lead


# -- contours and biorthogonality -------------------------------------------------


@dataclass(frozen=True)
class ContourCheck:
    admissible: bool
    worst_pole: complex
    worst_margin: float


def contour_check(m: int, n: int, k: int, l: int, rp: RahmanParams) -> ContourCheck:
    """Is the unit circle itself a valid separating contour?

    Extremal interior-pole candidates: t_0..t_3, t_4 q^-m p^-k, and
    A^-1 q^(1-n) p^(1-l); admissible iff all have modulus <= 1 - 1e-6.
    """
    q, p = rp.moduli.q, rp.moduli.p
    candidates = list(rp.t[:4])
    candidates.append(rp.t[4] * cpow(q, -m) * cpow(p, -k))
    candidates.append(cpow(q, 1 - n) * cpow(p, 1 - l) / rp.A)
    worst = max(candidates, key=abs)
    margin = 1.0 - abs(worst)
    return ContourCheck(admissible=margin >= _MARGIN, worst_pole=worst,
                        worst_margin=margin)


def norm_h(n: int, rp: RahmanParams, base: str = "q"):
    """Normalization constant of the n-th diagonal scalar product."""
    q, p = _bases(rp, base)
    t0, t1, t2, t3, t4 = rp.t
    A = rp.A
    head = theta(A / (q * t4), p) / theta(A * cpow(q, 2 * n - 1) / t4, p)
    num = theta_factorial_multi(
        [q, q * t3 / t4, t0 * t1, t0 * t2, t1 * t2, A * t3], p, q, n)
    den = theta_factorial_multi(
        [1.0 / (t3 * t4), t0 * t3, t1 * t3, t2 * t3, A / (q * t3), A / (q * t4)],
        p, q, n)
    return head * num / den * cpow(q, -n)


def norm_h2(n: int, l: int, rp: RahmanParams):
    """Two-index normalization: the q-base factor times the p-base factor."""
    return norm_h(n, rp, "q") * norm_h(l, rp, "p")


def _biorth_mesh(rp, n, m, k, l):
    weight = make_integrand(rp.weight_spec())

    def mesh(N):
        z1d = np.exp(2j * np.pi * np.arange(N) / N)
        vals = weight.mesh_eval(N)
        vals = vals * _family_nodes(z1d, m, rp.t, rp.moduli.q, rp.moduli.p, "R")
        vals = vals * _family_nodes(z1d, n, rp.t, rp.moduli.q, rp.moduli.p, "T")
        if k or l:
            vals = vals * _family_nodes(z1d, k, rp.t, rp.moduli.p, rp.moduli.q, "R")
            vals = vals * _family_nodes(z1d, l, rp.t, rp.moduli.p, rp.moduli.q, "T")
        return vals

    return mesh


def biorth_value(n: int, m: int, rp: RahmanParams,
                 cfg: QuadratureConfig | None = None, k: int = 0, l: int = 0):
    """(integral, expected) for the scalar product of T_[n,l] and R_[m,k].

    Raises InadmissibleContour when the unit circle fails the separation
    test; contours are never deformed.
    """
    chk = contour_check(m, n, k, l, rp)
    if not chk.admissible:
        raise InadmissibleContour(
            f"inadmissible contour: worst pole {chk.worst_pole:.6g} "
            f"(margin {chk.worst_margin:.3e})"
        )
    if cfg is None:
        cfg = default_config(1, rel_tol=1e-10)
    res = integrate_mesh_fn(_biorth_mesh(rp, n, m, k, l), 1, cfg)
    if n == m and k == l:
        expected = (norm_h2(n, k, rp) if (k or l) else norm_h(n, rp)) \
            * rp.beta_value()
    else:
        expected = 0.0 + 0.0j
    return res.value, expected, res


def biorth_integral(n: int, m: int, rp: RahmanParams,
                    cfg: QuadratureConfig | None = None, k: int = 0, l: int = 0,
                    tol: float = 1e-8) -> VerificationReport:
    """Verification report for one scalar-product cell.

    Off-diagonal cells compare |integral| against tol * |h_min N_E| (the
    natural scale of the diagonal), diagonal cells relatively against
    h_n N_E.
    """
    value, expected, res = biorth_value(n, m, rp, cfg, k, l)
    scale_n = min(abs(norm_h(j, rp)) for j in range(0, max(n, m) + 1))
    scale = abs(scale_n * rp.beta_value())
    name = f"biorth[n={n},m={m}" + (f",k={k},l={l}]" if (k or l) else "]")
    if expected == 0:
        return VerificationReport.from_sides(
            name, value / scale, 0.0, tol,
            nodes=res.nodes_used,
            params={"t": list(rp.t), "q": rp.moduli.q, "p": rp.moduli.p,
                    "n": n, "m": m, "k": k, "l": l})
    return VerificationReport.from_sides(
        name, value, expected, tol, nodes=res.nodes_used,
        params={"t": list(rp.t), "q": rp.moduli.q, "p": rp.moduli.p,
                "n": n, "m": m, "k": k, "l": l})


# -- integral representation and shifted-weight identities -------------------------


def _theta_factorial_vec(z, p, q, k: int):
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    w = z.copy()
    for _ in range(k):
        out = out * theta_vec(w, p)
        w = w * q
    return out


def twelveV_integral_rep_sides(alpha, beta, m: int, n: int, rp: RahmanParams,
                               cfg: QuadratureConfig | None = None):
    """(product of the two terminating series, prefactor * quadrature).

    The representation couples a q-base series of depth m and a p-base
    series of depth n to one contour integral against the beta weight.
    """
    q, p = rp.moduli.q, rp.moduli.p
    t = rp.t
    A = rp.A
    worst = max([abs(v) for v in t]
                + [abs(cpow(q, 1 - m) * cpow(p, 1 - n) / A)])
    if worst > 1.0 - _MARGIN:
        raise InadmissibleContour(
            f"inadmissible contour for depths ({m},{n}): "
            f"worst pole modulus {worst:.6f}"
        )
    t0 = t[0]
    v_q = sum_V(VSpec(
        t0=A * t0 / q,
        t=(alpha, t0 * t[1], t0 * t[2], t0 * t[3], t0 * t[4],
           cpow(q, -m), A * A * cpow(q, m - 1) / alpha),
        x=1.0, moduli=rp.moduli, N=m))
    v_p = sum_V(VSpec(
        t0=A * t0 / p,
        t=(beta, t0 * t[1], t0 * t[2], t0 * t[3], t0 * t[4],
           cpow(p, -n), A * A * cpow(p, n - 1) / beta),
        x=1.0, moduli=rp.moduli.swapped(), N=n))
    lhs = v_q * v_p

    pref = (theta_factorial_multi([A * t0, A / t0], p, q, m)
            * theta_factorial_multi([A * t0, A / t0], q, p, n)
            / theta_factorial_multi([A / (alpha * t0), A * t0 / alpha], p, q, m)
            / theta_factorial_multi([A / (beta * t0), A * t0 / beta], q, p, n))

    weight = make_integrand(rp.weight_spec())

    def mesh(N):
        z1d = np.exp(2j * np.pi * np.arange(N) / N)
        vals = weight.mesh_eval(N)
        vals = vals * _theta_factorial_vec(A * z1d / alpha, p, q, m)
        vals = vals * _theta_factorial_vec(A / (alpha * z1d), p, q, m)
        vals = vals * _theta_factorial_vec(A * z1d / beta, q, p, n)
        vals = vals * _theta_factorial_vec(A / (beta * z1d), q, p, n)
        vals = vals / _theta_factorial_vec(A * z1d, p, q, m)
        vals = vals / _theta_factorial_vec(A / z1d, p, q, m)
        vals = vals / _theta_factorial_vec(A * z1d, q, p, n)
        vals = vals / _theta_factorial_vec(A / z1d, q, p, n)
        return vals

    if cfg is None:
        cfg = default_config(1, rel_tol=1e-10)
    res = integrate_mesh_fn(mesh, 1, cfg)
    rhs = pref * res.value / rp.beta_value()
    return lhs, rhs, res


def shifted_beta_sides(i: int, j: int, rp: RahmanParams,
                       cfg: QuadratureConfig | None = None):
    """(quadrature with factorial ratios, (t0/A)^(2ij) N_E(shifted))."""
    q, p = rp.moduli.q, rp.moduli.p
    t = rp.t
    A = rp.A
    t0 = t[0]
    shifted0 = t0 * cpow(q, i) * cpow(p, j)
    worst = max([abs(v) for v in t]
                + [abs(shifted0), abs(cpow(q, 1 - i) * cpow(p, 1 - j) / A)])
    if worst > 1.0 - _MARGIN:
        raise InadmissibleContour(
            f"inadmissible contour for shifts ({i},{j}): "
            f"worst pole modulus {worst:.6f}"
        )
    weight = make_integrand(rp.weight_spec())

    def mesh(N):
        z1d = np.exp(2j * np.pi * np.arange(N) / N)
        vals = weight.mesh_eval(N)
        vals = vals * _theta_factorial_vec(t0 * z1d, p, q, i)
        vals = vals * _theta_factorial_vec(t0 / z1d, p, q, i)
        vals = vals * _theta_factorial_vec(t0 * z1d, q, p, j)
        vals = vals * _theta_factorial_vec(t0 / z1d, q, p, j)
        vals = vals / _theta_factorial_vec(A * z1d, p, q, i)
        vals = vals / _theta_factorial_vec(A / z1d, p, q, i)
        vals = vals / _theta_factorial_vec(A * z1d, q, p, j)
        vals = vals / _theta_factorial_vec(A / z1d, q, p, j)
        return vals

    if cfg is None:
        cfg = default_config(1, rel_tol=1e-10)
    res = integrate_mesh_fn(mesh, 1, cfg)
    shifted_spec = IntegrandSpec(
        Family.E, 1, ParamSet(t=(shifted0,) + t[1:]), rp.moduli)
    rhs = cpow(t0 / A, 2 * i * j) * rhs_closed_form(shifted_spec)
    return res.value, rhs, res


def shifted_beta_identity(i: int, j: int, rp: RahmanParams,
                          cfg: QuadratureConfig | None = None,
                          tol: float = 1e-8) -> VerificationReport:
    lhs, rhs, res = shifted_beta_sides(i, j, rp, cfg)
    return VerificationReport.from_sides(
        f"shifted_beta[i={i},j={j}]", lhs, rhs, tol, nodes=res.nodes_used,
        params={"t": list(rp.t), "q": rp.moduli.q, "p": rp.moduli.p,
                "i": i, "j": j})
