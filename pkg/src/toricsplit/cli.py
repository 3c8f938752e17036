"""Command-line front end.

Exit codes: 0 SPLIT, 1 NOT_SPLIT, 2 CRITERION_FAILED or UNKNOWN, 3 invalid
input, 4 internal inconsistency.  Non-deciding subcommands exit 0 on success.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .criteria import (
    DEFAULT_DMAX,
    DEFAULT_EXHAUSTION_BOUND,
    Decision,
    SplitReport,
    criterion_A_check,
    kaneyama_from_klyachko,
    theorem1_check,
    theorem2_check,
    twisted_bundle,
)
from .fan import FanError
from .field import GF, FieldError, is_prime
from .fixtures import fixture, fixtures
from .io import SCHEMA_VERSION, InputError, bundle_to_json, dump_json, fan_to_json, parse_bundle_spec, resolve_fan
from .klyachko import KlyachkoError, det_bundle
from .sections import SectionsError, chart_restriction, weight_space, weight_support

EXIT_CODES = {Decision.SPLIT: 0, Decision.NOT_SPLIT: 1, Decision.CRITERION_FAILED: 2, Decision.UNKNOWN: 2}
EXIT_INPUT = 3
EXIT_INTERNAL = 4


@dataclass(frozen=True)
class RunConfig:
    fan_path: str | None
    builtin_fan: str | None
    bundle: str
    p: int
    d: int = 1
    dmax: int = DEFAULT_DMAX
    criterion: str = "all"
    output: str | None = None
    exhaustion_bound: int = DEFAULT_EXHAUSTION_BOUND

    def validate(self):
        if not is_prime(self.p):
            raise InputError(f"p = {self.p} is not prime")
        if self.d < 1 or self.dmax < 1:
            raise InputError("field degree and --dmax must be at least 1")
        if self.dmax < self.d:
            raise InputError("--dmax must be at least the field degree --d")
        if self.criterion not in ("1", "2", "A", "all"):
            raise InputError(f"unknown criterion {self.criterion!r}")

    def to_dict(self) -> dict:
        return {
            "fan": self.builtin_fan or self.fan_path,
            "bundle": self.bundle,
            "p": self.p,
            "d": self.d,
            "dmax": self.dmax,
            "criterion": self.criterion,
        }


def conflicts(reports: Sequence[SplitReport]) -> list[dict]:
    """Criterion A SPLIT verdicts contradicted by an exact NOT_SPLIT certificate.

    The coincidence test behind criterion A only looks at the transition entries
    themselves, not at their products with arbitrary functions, so it can pass
    on bundles whose weight-zero space is provably empty.  Such a SPLIT is
    overruled rather than treated as an internal error.
    """
    if not any(r.decision is Decision.NOT_SPLIT for r in reports):
        return []
    return [
        {"criterion": r.criterion, "decision": r.decision.value, "overruled_by": "2"}
        for r in reports
        if r.decision is Decision.SPLIT and r.criterion == "A"
    ]


def combine(reports: Sequence[SplitReport]) -> Decision:
    """SPLIT beats inconclusive outcomes.

    A criterion-A SPLIT against a NOT_SPLIT certificate resolves to NOT_SPLIT
    (see :func:`conflicts`); any other SPLIT/NOT_SPLIT clash is an internal error.
    """
    overruled = {id(r) for r in reports if r.criterion == "A" and conflicts(reports)}
    ds = {r.decision for r in reports if id(r) not in overruled}
    if Decision.SPLIT in ds and Decision.NOT_SPLIT in ds:
        raise AssertionError("criteria disagree: one reports SPLIT, another NOT_SPLIT")
    for d in (Decision.SPLIT, Decision.NOT_SPLIT, Decision.UNKNOWN, Decision.CRITERION_FAILED):
        if d in ds:
            return d
    raise AssertionError("no report produced")  # pragma: no cover


def run(cfg: RunConfig) -> tuple[dict, Decision]:
    cfg.validate()
    fan = resolve_fan(cfg.fan_path, cfg.builtin_fan)
    b = parse_bundle_spec(cfg.bundle, fan, GF(cfg.p, cfg.d))
    reports: list[SplitReport] = []
    skipped = []
    wants = ("1", "A", "2") if cfg.criterion == "all" else (cfg.criterion,)
    for c in wants:
        if c in ("1", "A") and b.rank != 2:
            if cfg.criterion == "all":
                skipped.append({"criterion": c, "reason": "rank is not 2"})
                continue
            raise InputError(f"criterion {c} needs a rank-2 bundle, got rank {b.rank}")
        if c == "1":
            reports.append(theorem1_check(b, cfg.p))
        elif c == "A":
            reports.append(criterion_A_check(kaneyama_from_klyachko(b), cfg.p))
        else:
            reports.append(theorem2_check(b, cfg.p, dmax=cfg.dmax, exhaustion_bound=cfg.exhaustion_bound))
    decision = combine(reports)
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": "check-split",
        "config": cfg.to_dict(),
        "decision": decision.value,
        "reports": [r.to_dict() for r in reports],
        "skipped": skipped,
        "conflicts": conflicts(reports),
    }
    return out, decision


def render(out: dict) -> str:
    lines = [f"decision: {out['decision']}"]
    for r in out["reports"]:
        lines.append(f"  criterion {r['criterion']}: {r['decision']}")
        w = r.get("witness") or {}
        if "basis" in w:
            lines.append(f"    FS-vector basis {w['basis']} over GF({w['field']['p']}^{w['field']['d']}) ({w['source']})")
        for reason in r.get("diagnostics", {}).get("reasons", []):
            lines.append(f"    {reason}")
        if "reason" in r.get("diagnostics", {}):
            lines.append(f"    {r['diagnostics']['reason']}")
    for c in out.get("conflicts", []):
        lines.append(f"  criterion {c['criterion']} {c['decision']} overruled by criterion {c['overruled_by']}")
    for s in out.get("skipped", []):
        lines.append(f"  criterion {s['criterion']}: skipped ({s['reason']})")
    return "\n".join(lines)


# -- other subcommands -------------------------------------------------------------------


def _bundle_from_args(args):
    if not is_prime(args.p):
        raise InputError(f"p = {args.p} is not prime")
    fan = resolve_fan(args.fan, args.builtin_fan)
    return fan, parse_bundle_spec(args.bundle, fan, GF(args.p, args.d))


def klyachko_info(args) -> dict:
    fan, b = _bundle_from_args(args)
    rays = []
    for a, f in enumerate(b.filtrations):
        table = []
        for i in range(f.n_min - 1, f.n_max + 2):
            v = f.at(i)
            table.append({"i": i, "dim": v.dim, "basis": [list(r) for r in v.basis()]})
        rays.append(
            {
                "ray": a,
                "vector": list(fan.rays[a]),
                "jumps": list(f.jump_set),
                "n_max": f.n_max,
                "n_min": f.n_min,
                "steps": table,
            }
        )
    cones = [
        {
            "cone": list(d.cone.ray_indices),
            "parts": [{"character": list(chi), "basis": [list(r) for r in v.basis()]} for chi, v in d.parts],
        }
        for d in b.decompositions
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "klyachko-info",
        "rank": b.rank,
        "field": {"p": b.field.p, "d": b.field.d},
        "klyachko_length": b.klyachko_length(),
        "det": list(det_bundle(b).values),
        "rays": rays,
        "cones": cones,
        "bundle": bundle_to_json(b),
    }


def sections_cmd(args) -> dict:
    fan, b = _bundle_from_args(args)
    if args.twisted:
        b = twisted_bundle(b, args.p)
    out = []
    for chi in weight_support(b):
        ws = weight_space(b, chi)
        item = {"character": list(chi), "dim": ws.dim}
        if args.charts:
            charts = []
            for v in ws.space.basis():
                per = []
                for cone in fan.max_cones():
                    cs = chart_restriction(b, chi, v, cone)
                    per.append(
                        {
                            "cone": list(cone.ray_indices),
                            "terms": [{"eigen_index": i, "c": c, "exponent": list(e)} for i, c, e in cs.terms],
                        }
                    )
                charts.append({"vector": list(v), "charts": per})
            item["restrictions"] = charts
        out.append(item)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "sections",
        "twisted": bool(args.twisted),
        "total_dim": sum(x["dim"] for x in out),
        "weights": out,
    }


def cocycle_cmd(args) -> dict:
    fan, b = _bundle_from_args(args)
    c = kaneyama_from_klyachko(b)
    bad = c.check_cocycle()
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "cocycle",
        "cocycle": c.to_dict(),
        "cocycle_ok": not bad,
        "violations": [list(t) for t in bad],
    }


def fixtures_cmd(args) -> dict:
    if args.show:
        fx = fixture(args.show)
        return {
            "schema_version": SCHEMA_VERSION,
            "command": "fixtures",
            "name": fx.name,
            "fan": fan_to_json(fx.fan),
            "bundle": bundle_to_json(fx.bundle(args.p, args.d)),
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "fixtures",
        "fixtures": [{"name": f.name, "fan": f.fan_name} for f in fixtures()],
    }


# -- argument parsing --------------------------------------------------------------------


def _add_source(sp, bundle_required: bool = True):
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--fan", help="fan JSON file")
    g.add_argument("--builtin-fan", help="builtin fan name (P1, P2, P3, P1xP1, F0..F3, A1..A3)")
    sp.add_argument("--bundle", required=bundle_required, help="bundle JSON file or builtin spec")
    sp.add_argument("--p", type=int, default=2, help="characteristic (default 2)")
    sp.add_argument("--d", type=int, default=1, help="field degree over GF(p) (default 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricsplit", description="Frobenius splitting of projectivised toric bundles")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    cs = sub.add_parser("check-split", help="decide whether P(E) is Frobenius split")
    _add_source(cs)
    cs.add_argument("--criterion", choices=["1", "2", "A", "all"], default="all")
    cs.add_argument("--dmax", type=int, default=DEFAULT_DMAX, help="largest field degree searched (default 4)")
    cs.add_argument("--exhaustion-bound", type=int, default=DEFAULT_EXHAUSTION_BOUND)
    cs.add_argument("--output", help="write the JSON report here and print a summary instead")

    ki = sub.add_parser("klyachko-info", help="filtration table, jumps and cone decompositions")
    _add_source(ki)

    se = sub.add_parser("sections", help="weight spaces of global sections")
    _add_source(se)
    se.add_argument("--twisted", action="store_true", help="use S^{r(p-1)}E (x) det^{1-p} (x) omega^{1-p}")
    se.add_argument("--charts", action="store_true", help="include chart restrictions of each basis vector")

    co = sub.add_parser("cocycle", help="Kaneyama transition data")
    _add_source(co)

    fx = sub.add_parser("fixtures", help="list the builtin fixtures")
    fx.add_argument("--show", help="print the fan and bundle JSON of one fixture")
    fx.add_argument("--p", type=int, default=2)
    fx.add_argument("--d", type=int, default=1)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check-split":
            cfg = RunConfig(
                fan_path=args.fan,
                builtin_fan=args.builtin_fan,
                bundle=args.bundle,
                p=args.p,
                d=args.d,
                dmax=args.dmax,
                criterion=args.criterion,
                output=args.output,
                exhaustion_bound=args.exhaustion_bound,
            )
            out, decision = run(cfg)
            if cfg.output:
                Path(cfg.output).write_text(dump_json(out), encoding="utf-8")
                print(render(out))
            else:
                sys.stdout.write(dump_json(out))
            return EXIT_CODES[decision]
        handler = {
            "klyachko-info": klyachko_info,
            "sections": sections_cmd,
            "cocycle": cocycle_cmd,
            "fixtures": fixtures_cmd,
        }[args.command]
        sys.stdout.write(dump_json(handler(args)))
        return 0
    except (InputError, FanError, KlyachkoError, FieldError, SectionsError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
