"""Named (fan, bundle) fixtures used by the tests and the ``fixtures`` subcommand."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .fan import Fan, builtin_fan
from .field import GF
from .klyachko import (
    RayFiltration,
    ToricBundle,
    cotangent_bundle,
    sum_of_lines,
    tangent_bundle,
    trivial_bundle,
)
from .subspace import Subspace

SURFACES = ("P2", "P1xP1", "F0", "F1", "F2", "F3")
SMOOTH_COMPLETE = ("P1", "P2", "P3", "P1xP1", "F0", "F1", "F2", "F3")


@dataclass(frozen=True)
class Fixture:
    name: str
    fan_name: str
    build: Callable[[GF], ToricBundle]

    @property
    def fan(self) -> Fan:
        return builtin_fan(self.fan_name)

    def bundle(self, p: int, d: int = 1) -> ToricBundle:
        return self.build(GF(p, d))


def _fmt_line(a: int) -> str:
    return "O" if a == 0 else f"O({a})"


def rank2_line_filtrations(fan: Fan, K: GF, data) -> ToricBundle:
    """Rank-2 bundle from ``(a, b, line)`` per ray: E for i <= a, the line up to b, then 0."""
    filts = []
    for a, b, line in data:
        if a == b:
            filts.append(RayFiltration.single(K, 2, a))
        else:
            filts.append(RayFiltration(K, 2, ((a, Subspace.full(K, 2)), (b, Subspace.span(K, [line], 2)))))
    return ToricBundle(fan, K, filts)


def _all() -> list[Fixture]:
    out: list[Fixture] = []
    for name in SMOOTH_COMPLETE:
        fan = builtin_fan(name)
        out.append(Fixture(f"{name}/tangent", name, lambda K, fan=fan: tangent_bundle(fan, K)))
        out.append(Fixture(f"{name}/cotangent", name, lambda K, fan=fan: cotangent_bundle(fan, K)))
        out.append(Fixture(f"{name}/trivial2", name, lambda K, fan=fan: trivial_bundle(fan, K, 2)))
    p1 = builtin_fan("P1")
    for a in range(-3, 4):
        for b in range(a, 4):
            out.append(
                Fixture(
                    f"P1/{_fmt_line(a)}+{_fmt_line(b)}",
                    "P1",
                    lambda K, a=a, b=b: sum_of_lines(p1, K, [[a, 0], [b, 0]]),
                )
            )
    out.append(Fixture("P1/O+O(2D0-D1)", "P1", lambda K: sum_of_lines(p1, K, [[0, 0], [2, -1]])))
    p2 = builtin_fan("P2")
    out.append(
        Fixture(
            "P2/three-lines",
            "P2",
            lambda K: rank2_line_filtrations(p2, K, [(0, 2, (1, 0)), (0, 2, (0, 1)), (0, 2, (1, 1))]),
        )
    )
    return out


FIXTURES: dict[str, Fixture] = {f.name: f for f in _all()}


def fixtures() -> list[Fixture]:
    return list(FIXTURES.values())


def fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}") from None
