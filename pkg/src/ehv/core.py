"""Foundation layer: truncated infinite products and theta functions.

Conventions used throughout the package:

    (z; b)_oo        = prod_{k>=0} (1 - z b^k),                     |b| < 1
    theta(z; p)      = (z; p)_oo * (p/z; p)_oo,                     z != 0
    theta(z; p; q)_n = prod_{l=0}^{n-1} theta(z q^l; p),            n >= 0
    theta(z; p; q)_n = 1 / theta(z q^n; p; q)_{-n},                 n < 0

theta(z;p) vanishes exactly on the lattice z = p^k, k in Z, and obeys the
quasi-periodicity relations

    theta(p z; p) = theta(1/z; p) = -theta(z; p) / z.

The Jacobi theta_1 function is exposed through the multiplicative theta via

    theta_1(u; sigma, tau) = p^(1/8) * i * q^(-u/2) * (p;p)_oo * theta(q^u; p)

with q = exp(2 pi i sigma), p = exp(2 pi i tau).  Principal branches are
fixed by evaluating p^(1/8) = exp(pi i tau / 4) and q^(-u/2) = exp(-pi i
sigma u) directly from the modular parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import cexp, clog
from .errors import DomainError, NonConvergent, PoleHit, TruncationFailure

_TWO_PI = 2.0 * math.pi

# Above this factor count, products accumulate in log space to dodge
# overflow; each factor is near 1 so principal logs compose exactly.
_LOG_SPACE_COUNT = 64
_LOG_SPACE_MAGNITUDE = 1e3


@dataclass(frozen=True)
class TruncationPolicy:
    """Tail-bound control for all infinite products.

    A product is cut at the first index K where the geometric tail bound
    |z| |b|^K / (1 - |b|) drops below eps; exceeding max_terms first is a
    TruncationFailure.
    """

    eps: float = 1e-16
    max_terms: int = 4096

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    def cutoff(self, scale: float, base_mod: float) -> int:
        """Smallest K with scale * base_mod^K / (1 - base_mod) < eps."""
        if scale == 0.0 or base_mod == 0.0:
            return 1
        target = self.eps * (1.0 - base_mod) / scale
        if target >= 1.0:
            return 1
        k = int(math.ceil(math.log(target) / math.log(base_mod)))
        return max(k, 1)


DEFAULT_POLICY = TruncationPolicy()
_EXTENDED_POLICY = TruncationPolicy(eps=1e-38, max_terms=16384)


def default_policy() -> TruncationPolicy:
    """Mode-aware default: 1e-16 tails in float64, 1e-38 in extended mode."""
    from ._backend import EXTENDED, get_precision

    return _EXTENDED_POLICY if get_precision() == EXTENDED else DEFAULT_POLICY


@dataclass(frozen=True)
class Moduli:
    """The pair of bases (q, p), both strictly inside the unit disk.

    q = 0 or p = 0 are legal degenerations (theta(z;0) = 1 - z) and are
    first-class code paths everywhere downstream.
    """

    q: complex
    p: complex

    def __post_init__(self):
        if abs(self.q) >= 1.0:
            raise ValueError(f"|q| must be < 1, got {abs(self.q)}")
        if abs(self.p) >= 1.0:
            raise ValueError(f"|p| must be < 1, got {abs(self.p)}")

    @property
    def q_degenerate(self) -> bool:
        return self.q == 0

    @property
    def p_degenerate(self) -> bool:
        return self.p == 0

    def swapped(self) -> "Moduli":
        return Moduli(q=self.p, p=self.q)


def qpochhammer(z, b, policy: TruncationPolicy | None = None):
    """(z; b)_oo = prod_{k>=0} (1 - z b^k), truncated under the policy."""
    if policy is None:
        policy = default_policy()
    babs = abs(b)
    if babs >= 1.0:
        raise NonConvergent(f"qpochhammer requires |b| < 1, got {babs}")
    if z == 0:
        return 1.0 + 0.0 * z
    if babs == 0.0:
        return 1.0 - z
    kmax = policy.cutoff(abs(z), babs)
    if kmax > policy.max_terms:
        raise TruncationFailure(
            f"qpochhammer needs {kmax} terms, policy allows {policy.max_terms}"
        )
    use_logs = kmax > _LOG_SPACE_COUNT or abs(z) > _LOG_SPACE_MAGNITUDE
    w = z
    if use_logs:
        acc = 0.0
        for _ in range(kmax):
            f = 1.0 - w
            if f == 0:
                return 0.0 * z
            acc = acc + clog(f)
            w = w * b
        return cexp(acc)
    acc = 1.0 + 0.0 * z
    for _ in range(kmax):
        acc = acc * (1.0 - w)
        w = w * b
    return acc


def _on_zero_lattice(z, p) -> bool:
    # Exact-zero detection: the zeros of theta lie at z = p^k.  Comparing
    # against the same power expressions a caller would build (p**k and
    # p**(-k)) keeps the check exact in floating point for |k| <= 8.
    if z == 1:
        return True
    if p == 0:
        return False
    for k in range(1, 9):
        if z == p ** k or z == p ** (-k):
            return True
    return False


def theta(z, p, policy: TruncationPolicy | None = None):
    """theta(z; p) = (z; p)_oo (p/z; p)_oo."""
    if policy is None:
        policy = default_policy()
    if z == 0:
        raise DomainError("theta requires z != 0")
    pabs = abs(p)
    if pabs >= 1.0:
        raise NonConvergent(f"theta requires |p| < 1, got {pabs}")
    if _on_zero_lattice(z, p):
        return 0.0 * z
    if pabs == 0.0:
        return 1.0 - z
    zi = 1.0 / z
    scale = max(abs(z), pabs * abs(zi))
    kmax = policy.cutoff(scale, pabs)
    if kmax > policy.max_terms:
        raise TruncationFailure(
            f"theta needs {kmax} terms, policy allows {policy.max_terms}"
        )
    use_logs = kmax > _LOG_SPACE_COUNT or scale > _LOG_SPACE_MAGNITUDE
    w1 = z
    w2 = p * zi
    if use_logs:
        acc = 0.0
        for _ in range(kmax):
            f = (1.0 - w1) * (1.0 - w2)
            if f == 0:
                return 0.0 * z
            acc = acc + clog(f)
            w1 = w1 * p
            w2 = w2 * p
        return cexp(acc)
    acc = 1.0 + 0.0 * z
    for _ in range(kmax):
        acc = acc * (1.0 - w1) * (1.0 - w2)
        w1 = w1 * p
        w2 = w2 * p
    return acc


def theta_multi(zs, p, policy: TruncationPolicy | None = None):
    """Product of theta over a sequence; the empty sequence gives 1."""
    zs = list(zs)
    for z in zs:
        if z == 0:
            raise DomainError("theta requires z != 0")
    acc = 1.0 + 0.0j
    for z in zs:
        acc = acc * theta(z, p, policy)
    return acc


# PoleHit threshold: |theta| below this times the natural scale is treated
# as a pole of a reciprocal factor.
_POLE_EPS = 1e-13


def theta_factorial(z, p, q, n: int, policy: TruncationPolicy | None = None):
    """Elliptic shifted factorial theta(z; p; q)_n for any integer n.

    n >= 0: prod_{l=0}^{n-1} theta(z q^l; p).
    n <  0: 1 / theta(z q^n; p; q)_{-n}, i.e. 1 / prod_{l=1}^{-n} theta(z q^-l; p).
    """
    if z == 0:
        raise DomainError("theta_factorial requires z != 0")
    if n == 0:
        return 1.0 + 0.0j
    if n > 0:
        acc = 1.0 + 0.0j
        w = z
        for _ in range(n):
            acc = acc * theta(w, p, policy)
            w = w * q
        return acc
    acc = 1.0 + 0.0j
    w = z
    for _ in range(-n):
        w = w / q
        f = theta(w, p, policy)
        if abs(f) < _POLE_EPS:
            raise PoleHit(
                f"theta_factorial denominator theta({w!r}; p) vanishes"
            )
        acc = acc * f
    return 1.0 / acc


def theta_factorial_multi(zs, p, q, n: int,
                          policy: TruncationPolicy | None = None):
    """theta(z_1, ..., z_k; p; q)_n = prod_j theta(z_j; p; q)_n."""
    acc = 1.0 + 0.0j
    for z in zs:
        acc = acc * theta_factorial(z, p, q, n, policy)
    return acc


def theta1(u, sigma, tau, policy: TruncationPolicy | None = None):
    """Jacobi theta_1 via the multiplicative theta function.

    Requires Im(tau) > 0 so that |p| < 1.  sigma may be real (|q| = 1).
    """
    im_tau = float(tau.imag) if hasattr(tau, "imag") else 0.0
    if not im_tau > 0:
        raise DomainError("theta1 requires Im(tau) > 0")
    two_pi_i = _TWO_PI * 1j
    p = cexp(two_pi_i * tau)
    q_u = cexp(two_pi_i * sigma * u)          # q^u without a log branch cut
    pref = cexp(two_pi_i * tau / 8.0) * 1j * cexp(-two_pi_i * sigma * u / 2.0)
    return pref * qpochhammer(p, p, policy) * theta(q_u, p, policy)
