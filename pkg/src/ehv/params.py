"""Parameter-file I/O and integrand-spec serialization.

File format: JSON object with optional fields

    {"q": [re, im], "p": [re, im],
     "t": [[re, im], ...], "w": [...], "f": [...], "s": [...], "x": [...],
     "extras": {"t": [re, im], "s": [...], "rho": [...], "gamma": [...],
                "m": 13, "N": 4, "n": 2, ...}}

Complex numbers are [re, im] pairs (bare reals also accepted).
"""

from __future__ import annotations

import json

from .core import Moduli
from .integrands import Family, IntegrandSpec, ParamSet


def decode_complex(v):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(v[0], v[1])
    raise ValueError(f"cannot parse complex value {v!r}")


def encode_complex(v):
    v = complex(v)
    return [v.real, v.imag]


def decode_params(raw: dict) -> dict:
    """Decode a raw JSON object into python complex structures."""
    out = {}
    for key in ("q", "p"):
        if key in raw:
            out[key] = decode_complex(raw[key])
    for key in ("t", "w", "f", "s", "x"):
        if key in raw:
            out[key] = tuple(decode_complex(v) for v in raw[key])
    extras = {}
    for key, v in raw.get("extras", {}).items():
        if key in ("m", "N", "n", "i", "j", "k", "l") or isinstance(v, bool):
            extras[key] = int(v)
        elif isinstance(v, (int, float, list, tuple)):
            extras[key] = decode_complex(v)
        else:
            extras[key] = v
    if extras:
        out["extras"] = extras
    for key in ("family", "n", "N", "seed"):
        if key in raw:
            out[key] = raw[key]
    return out


def load_params(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return decode_params(json.load(fh))


def spec_to_params(spec: IntegrandSpec) -> dict:
    """JSON-ready encoding; round-trips through spec_from_params."""
    ps = spec.params
    out = {
        "family": spec.family.value,
        "n": spec.n,
        "q": encode_complex(spec.moduli.q),
        "p": encode_complex(spec.moduli.p),
    }
    for key in ("t", "w", "f", "s", "x"):
        seq = getattr(ps, key)
        if seq:
            out[key] = [encode_complex(v) for v in seq]
    if ps.extras:
        enc = {}
        for key, v in ps.extras.items():
            enc[key] = v if isinstance(v, int) else encode_complex(v)
        out["extras"] = enc
    return out


def spec_from_params(raw: dict) -> IntegrandSpec:
    d = decode_params(raw)
    fam = Family(raw["family"])
    moduli = Moduli(q=d["q"], p=d["p"])
    ps = ParamSet(t=d.get("t", ()), w=d.get("w", ()), f=d.get("f", ()),
                  s=d.get("s", ()), x=d.get("x", ()),
                  extras=d.get("extras", {}))
    return IntegrandSpec(fam, int(raw["n"]), ps, moduli)
