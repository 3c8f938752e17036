"""JSON round-trip for fans and bundles, and parsing of builtin bundle specs."""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .fan import BUILTIN_FANS, Fan, builtin_fan
from .field import GF
from .klyachko import (
    RayFiltration,
    ToricBundle,
    cotangent_bundle,
    line_bundle,
    sum_of_lines,
    tangent_bundle,
    trivial_bundle,
)
from .subspace import Subspace

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed input; the message carries the location or the violated invariant."""


def load_json_text(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_json_file(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc.strerror}") from None
    return load_json_text(text, str(p))


def dump_json(obj: Any) -> str:
    """Canonical text form: two-space indent, key order as built, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{what} must be an exact integer, got {x!r}")
    return x


# -- fans --------------------------------------------------------------------------


def fan_to_json(fan: Fan) -> dict:
    return fan.to_dict()


def fan_from_json(data: Any, name: str | None = None) -> Fan:
    if not isinstance(data, dict):
        raise InputError("fan JSON must be an object")
    for key in ("rank", "rays", "max_cones"):
        if key not in data:
            raise InputError(f"fan JSON is missing key {key!r}")
    rank = _int(data["rank"], "rank")
    rays = [[_int(x, "ray entry") for x in r] for r in data["rays"]]
    cones = [[_int(x, "cone index") for x in c] for c in data["max_cones"]]
    return Fan(rank, rays, cones, name=name)


def resolve_fan(path: str | None = None, builtin: str | None = None) -> Fan:
    if (path is None) == (builtin is None):
        raise InputError("give exactly one of a fan file or a builtin fan name")
    if builtin is not None:
        if builtin not in BUILTIN_FANS:
            raise InputError(f"unknown builtin fan {builtin!r}; choose from {', '.join(BUILTIN_FANS)}")
        return builtin_fan(builtin)
    return fan_from_json(load_json_file(path), name=Path(path).stem)


# -- bundles ----------------------------------------------------------------------


def bundle_to_json(b: ToricBundle) -> dict:
    return {
        "rank": b.rank,
        "field": {"p": b.field.p, "d": b.field.d},
        "filtrations": [
            {"ray": a, "jumps": [{"i": i, "basis": [list(r) for r in v.basis()]} for i, v in f.jumps]}
            for a, f in enumerate(b.filtrations)
        ],
    }


def bundle_from_json(data: Any, fan: Fan) -> ToricBundle:
    if not isinstance(data, dict):
        raise InputError("bundle JSON must be an object")
    for key in ("rank", "field", "filtrations"):
        if key not in data:
            raise InputError(f"bundle JSON is missing key {key!r}")
    r = _int(data["rank"], "rank")
    fd = data["field"]
    if not isinstance(fd, dict) or "p" not in fd:
        raise InputError("bundle field must be an object with keys 'p' and optionally 'd'")
    F = GF(_int(fd["p"], "field.p"), _int(fd.get("d", 1), "field.d"))
    by_ray: dict[int, RayFiltration] = {}
    for entry in data["filtrations"]:
        a = _int(entry.get("ray"), "filtration ray")
        if not 0 <= a < len(fan.rays):
            raise InputError(f"filtration for missing ray {a}")
        if a in by_ray:
            raise InputError(f"ray {a} has two filtrations")
        jumps = []
        for j in entry.get("jumps", []):
            i = _int(j.get("i"), "jump index")
            vecs = [[_int(x, "basis entry") for x in row] for row in j.get("basis", [])]
            for row in vecs:
                if len(row) != r:
                    raise InputError(f"ray {a}, jump {i}: basis vector of length {len(row)} in rank {r}")
                if any(not 0 <= x < F.q for x in row):
                    raise InputError(f"ray {a}, jump {i}: entries must be encoded elements of {F!r} (0..{F.q - 1})")
            jumps.append((i, Subspace.span(F, vecs, r)))
        by_ray[a] = RayFiltration(F, r, tuple(jumps))
    missing = [a for a in range(len(fan.rays)) if a not in by_ray]
    if missing:
        raise InputError(f"no filtration given for rays {missing}")
    return ToricBundle(fan, F, [by_ray[a] for a in range(len(fan.rays))])


_LINE = re.compile(r"^line:(\[.*\])$")
_SUM = re.compile(r"^sum:(\[.*\])$")
_TRIVIAL = re.compile(r"^trivial:(\d+)$")


def parse_bundle_spec(spec: str, fan: Fan, field: GF) -> ToricBundle:
    """Builtin spec (``tangent``, ``cotangent``, ``line:[..]``, ``sum:[[..],..]``, ``trivial:r``) or a JSON file."""
    s = spec.strip()
    if s == "tangent":
        return tangent_bundle(fan, field)
    if s == "cotangent":
        return cotangent_bundle(fan, field)
    m = _TRIVIAL.match(s)
    if m:
        return trivial_bundle(fan, field, int(m.group(1)))
    m = _LINE.match(s)
    if m:
        vals = load_json_text(m.group(1), "line spec")
        return line_bundle(fan, field, [_int(v, "line value") for v in vals])
    m = _SUM.match(s)
    if m:
        rows = load_json_text(m.group(1), "sum spec")
        if not rows or not all(isinstance(r, list) for r in rows):
            raise InputError("sum spec must be a list of line-data lists")
        return sum_of_lines(fan, field, [[_int(v, "line value") for v in r] for r in rows])
    path = Path(s)
    if path.suffix == ".json" or path.exists():
        b = bundle_from_json(load_json_file(path), fan)
        if b.field.p != field.p:
            raise InputError(f"bundle file is over {b.field!r} but p = {field.p} was requested")
        return b
    raise InputError(f"unrecognised bundle spec {spec!r}")
