"""Arithmetic backend dispatch: float64 complex by default, mpmath on demand.

All core evaluators are written against the tiny helper set below instead of
calling cmath directly.  When any operand is an mpmath number the helpers
route through mpmath, so the same code path serves the extended-precision
mode (>= 30 significant digits).  Mode switching only affects how *inputs*
are coerced; the evaluators themselves are precision-agnostic.
"""

from __future__ import annotations

import cmath

import mpmath

STD = "std"
EXTENDED = "extended"
EXTENDED_DPS = 36

_mode = STD


def set_precision(mode: str) -> None:
    global _mode
    if mode not in (STD, EXTENDED):
        raise ValueError(f"unknown precision mode {mode!r}")
    _mode = mode
    if mode == EXTENDED:
        mpmath.mp.dps = EXTENDED_DPS


def get_precision() -> str:
    return _mode


def coerce(x):
    """Coerce a number to the active mode's scalar type."""
    if _mode == EXTENDED:
        return mpmath.mpc(x)
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return complex(x)
    return complex(x)


def is_mp(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def cexp(x):
    return mpmath.exp(x) if is_mp(x) else cmath.exp(x)


def clog(x):
    return mpmath.log(x) if is_mp(x) else cmath.log(x)


def csqrt(x):
    return mpmath.sqrt(x) if is_mp(x) else cmath.sqrt(x)


def cpow(x, y):
    """Principal-branch power; exact for float base with int exponent."""
    if is_mp(x) or is_mp(y):
        return mpmath.power(x, y)
    if isinstance(y, int):
        return x ** y
    return cmath.exp(y * cmath.log(x))


def epsilon() -> float:
    """Unit roundoff scale of the active mode."""
    if _mode == EXTENDED:
        return float(mpmath.mpf(10) ** (-mpmath.mp.dps + 1))
    return 2.2e-16
