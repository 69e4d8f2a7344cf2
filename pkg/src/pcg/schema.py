"""JSON encoding of game specs and positions.

A position document looks like::

    {"spec": {"variant": "numeric", "m": 4, "losing": [1], "unit_mode": true,
              "bounded_decrement": false},
     "heaps": [5, 1]}

``variant`` is one of ``numeric``, ``field`` (keys ``p``, ``n``,
``irreducible`` as a little-endian coefficient list, plus ``hex`` when p = 2)
or ``chain`` (keys ``N``, ``g``, and the derived ``k``).
"""
from __future__ import annotations

import json

from .errors import InvalidSpec
from .finite_field import field_from_hex, field_new
from .game_core import ChainRSA, FieldPCG, GameSpec, NumericPCG, Position, validate_position


def spec_to_dict(spec: GameSpec) -> dict:
    if isinstance(spec, NumericPCG):
        return {
            "variant": "numeric",
            "m": spec.m,
            "losing": sorted(spec.losing),
            "unit_mode": spec.unit_mode,
            "bounded_decrement": spec.bounded_decrement,
        }
    if isinstance(spec, FieldPCG):
        f = spec.field
        d = {"variant": "field", "p": f.p, "n": f.n, "irreducible": list(f.irreducible)}
        if f.p == 2:
            d["hex"] = f.hex
        return d
    if isinstance(spec, ChainRSA):
        return {"variant": "chain", "N": spec.N, "g": spec.g, "k": spec.k}
    raise InvalidSpec(f"unknown spec type {type(spec).__name__}")


def spec_from_dict(d: dict) -> GameSpec:
    variant = d.get("variant")
    if variant == "numeric":
        return NumericPCG(
            int(d["m"]),
            frozenset(int(r) for r in d.get("losing", [1])),
            unit_mode=bool(d.get("unit_mode", True)),
            bounded_decrement=bool(d.get("bounded_decrement", False)),
        )
    if variant == "field":
        if "irreducible" in d:
            return FieldPCG(field_new(int(d["p"]), int(d["n"]), [int(c) for c in d["irreducible"]]))
        return FieldPCG(field_from_hex(d["hex"]))
    if variant == "chain":
        spec = ChainRSA(int(d["N"]), int(d["g"]))
        if "k" in d and int(d["k"]) != spec.k:
            raise InvalidSpec(f"stated k = {d['k']} but ord_{spec.N}({spec.g}) = {spec.k}")
        return spec
    raise InvalidSpec(f"unknown variant {variant!r}")


def position_to_dict(spec: GameSpec, heaps: Position) -> dict:
    return {"spec": spec_to_dict(spec), "heaps": list(heaps)}


def position_from_dict(d: dict) -> tuple[GameSpec, Position]:
    spec = spec_from_dict(d["spec"])
    return spec, validate_position(spec, d["heaps"])


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, no insignificant whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
