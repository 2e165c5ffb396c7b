"""Command-line front end: ``sedf <subcommand> ...``.

Reports are JSON objects with ``"format": 1``; ``--pretty`` renders the same
object as indented text.  Exit codes: 0 ok (parameter mismatches against a
recipe's stated values are warnings only), 1 verification failure, 2 usage
error, 3 internal error.
"""
from __future__ import annotations

import argparse
import dataclasses
import enum
import json
import random
import sys
import time
from fractions import Fraction
from typing import Any

import numpy as np

from . import constructions as cons
from . import search as srch
from .cyclotomy import audit_identities, build_cyclotomy
from .designs import (
    Family,
    classify_pds_type,
    verify_bgsedf,
    verify_ds,
    verify_gsedf,
    verify_pds,
    verify_sedf,
)
from .errors import SedfError
from . import numtheory as nt
from .groups import ElementSet, GroupSpec, build_group, order_cap, parse_group

FORMAT = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- serialization ------------------------------------------------------------------


def jsonable(obj: Any) -> Any:
    """Plain JSON value; fractions become ``"a/b"`` strings."""
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if hasattr(obj, "astuple"):
        return [jsonable(x) for x in obj.astuple()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    return obj


def family_to_json(F: Family) -> dict:
    labels = F.labels or [f"A{i + 1}" for i in range(F.m)]
    return {
        "format": FORMAT,
        "group": F.group.descriptor(),
        "sets": [{"label": lab, "elements": s.tolist()} for lab, s in zip(labels, F.sets)],
    }


def family_from_json(data: dict) -> Family:
    """Accepts a family object or any report that echoes one under ``"family"``."""
    if "family" in data and "sets" not in data:
        data = data["family"]
    try:
        group = build_group(GroupSpec.from_dict(data["group"]))
        sets = data["sets"]
        labels = [s.get("label", f"A{i + 1}") for i, s in enumerate(sets)]
        return Family.of(group, [s["elements"] for s in sets], labels)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed family JSON: {exc}") from None


def _read_json(path: str) -> dict:
    try:
        with (sys.stdin if path == "-" else open(path)) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True)


def render_pretty(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    obj = jsonable(obj)
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                         (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- " + render_pretty(x, indent + 1).lstrip() for x in obj)
    return pad + json.dumps(obj)


# --- verification helpers --------------------------------------------------------


def _family_result(rep) -> dict:
    return {
        "kind": rep.kind,
        "ok": rep.ok,
        "params": rep.params,
        "achieved": rep.achieved,
        "zero_coeffs": rep.zero_coeffs,
        "reason": rep.reason,
        "counterexample": rep.counterexample,
    }


def _set_result(kind: str, label: str, s: ElementSet) -> dict:
    out = {"kind": kind, "set": label}
    try:
        params = verify_ds(s) if kind == "DS" else verify_pds(s)
    except SedfError as exc:
        return {**out, "ok": False, "params": None, "reason": str(exc)}
    out.update(ok=params is not None, params=params,
               reason=None if params is not None else f"{label} is not a {kind}")
    if kind == "PDS" and params is not None:
        out["pds_type"] = classify_pds_type(params)
    return out


def _parse_bounds(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--bounds expects comma-separated integers, got {text!r}") from None


def verify_family(F: Family, kind: str, bounds: list[int] | None = None) -> list[dict]:
    kind = kind.lower()
    if kind in ("ds", "pds"):
        return [_set_result(kind.upper(), lab, s) for lab, s in zip(F.labels, F.sets)]
    if kind == "sedf":
        return [_family_result(verify_sedf(F))]
    if kind == "gsedf":
        return [_family_result(verify_gsedf(F))]
    if kind == "bgsedf":
        if bounds is not None and len(bounds) != F.m:
            raise UsageError(f"--bounds needs {F.m} values")
        return [_family_result(verify_bgsedf(F, bounds))]
    if kind == "auto":
        if F.m == 1:
            return verify_family(F, "ds") + verify_family(F, "pds")
        return [r for k in ("sedf", "gsedf", "bgsedf") for r in verify_family(F, k, bounds)]
    raise UsageError(f"unknown verifier {kind!r}")


# --- subcommands ----------------------------------------------------------------------


def cmd_field(args) -> tuple[dict, int]:
    modulus = [int(x) for x in args.modulus.split(",")] if args.modulus else None
    spec = _field_spec(args.q)
    g = build_group(spec, modulus_override=modulus, theta_override=args.theta)
    out = {
        "group": g.descriptor(),
        "name": g.name(),
        "order": g.n,
        "theta": g.theta,
        "modulus": list(g.modulus),
    }
    if args.tables:
        out["antilog"] = g.antilog
        out["log"] = g.log
    return out, EXIT_OK


def cmd_cyclo(args) -> tuple[dict, int]:
    g = parse_group(args.group) if args.group else build_group(_field_spec(args.q))
    sys_ = build_cyclotomy(g, args.e)
    out = {
        "group": g.descriptor(),
        "q": sys_.q,
        "e": sys_.e,
        "f": sys_.f,
        "theta": g.theta,
        "numbers": sys_.numbers,
    }
    if args.classes:
        out["classes"] = [c.tolist() for c in sys_.classes]
    code = EXIT_OK
    if args.audit:
        rep = audit_identities(sys_)
        out["audit"] = {"ok": rep.ok, "checks": rep.checks, "refuted": rep.refuted}
        out["verdict"] = "ok" if rep.ok else "fail"
        code = EXIT_OK if rep.ok else EXIT_FAIL
    return out, code


def _field_spec(q: int | None) -> GroupSpec:
    if q is None:
        raise UsageError("need --q or --group")
    pm = nt.prime_power(q)
    if pm is None:
        raise UsageError(f"{q} is not a prime power")
    return GroupSpec.field(*pm)


def cmd_verify(args) -> tuple[dict, int]:
    F = family_from_json(_read_json(args.file))
    results = verify_family(F, args.kind, _parse_bounds(args.bounds))
    ok = any(r["ok"] for r in results) if args.kind == "auto" else all(r["ok"] for r in results)
    out = {
        "group": F.group.descriptor(),
        "verdict": "ok" if ok else "fail",
        "results": results,
        "family": family_to_json(F),
    }
    return out, EXIT_OK if ok else EXIT_FAIL


def _parse_options(pairs: list[str]) -> dict:
    opts = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--opt expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            opts[key] = json.loads(raw)
        except json.JSONDecodeError:
            opts[key] = raw
    return opts


def _claim_result(r: cons.ClaimResult) -> dict:
    c = r.claim
    return {
        "kind": c.kind,
        "family": c.family,
        "index": c.index,
        "claimed": c.params,
        "computed": r.computed,
        "ok": r.ok,
        "mismatch": r.mismatch,
        "reason": r.reason,
        "note": c.note,
        **r.extra,
    }


def cmd_construct(args) -> tuple[dict, int]:
    if args.recipe == "list":
        rows = []
        for name, r in cons.CATALOG.items():
            row = {"recipe": name, "condition": r.condition, "options": list(r.options)}
            if args.q is not None:
                row["applicable"] = r.applicable(args.q) is not None
            rows.append(row)
        return {"recipes": rows}, EXIT_OK
    if args.q is None:
        raise UsageError("construct needs --q")
    if args.recipe not in cons.CATALOG:
        raise UsageError(f"unknown recipe {args.recipe!r}; try 'construct list'")
    c = cons.build(args.recipe, args.q, **_parse_options(args.opt))
    out: dict = {
        "recipe": c.recipe,
        "group": c.group.descriptor(),
        "options": c.options,
        "claims": [{"kind": cl.kind, "family": cl.family, "index": cl.index,
                    "claimed": cl.params, "note": cl.note} for cl in c.claims],
        "families": {name: family_to_json(F) for name, F in c.families.items()},
        "family": family_to_json(c.family),
    }
    code = EXIT_OK
    warnings = []
    if args.verify:
        rep = cons.verify_construction(c, deep=args.deep)
        if rep.skipped:
            warnings.append(f"q={c.group.n} verification runs only with --deep")
            out["verdict"] = "skipped"
        else:
            out["results"] = [_claim_result(r) for r in rep.results]
            out["mismatches"] = [_claim_result(r) for r in rep.mismatches]
            for r in rep.mismatches:
                warnings.append(f"{r.claim.kind} on {r.claim.family}: stated {jsonable(r.claim.params)}"
                                f" but computed {jsonable(r.computed)}")
            out["verdict"] = "ok" if rep.ok else "fail"
            code = EXIT_OK if rep.ok else EXIT_FAIL
    out["warnings"] = warnings
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(family_to_json(c.family)) + "\n")
    return out, code


def cmd_scan(args) -> tuple[dict, int]:
    if args.max > order_cap():
        raise UsageError(f"--max {args.max} exceeds the order cap {order_cap()}")
    if args.kind not in srch.SCAN_KINDS:
        raise UsageError(f"unknown kind {args.kind!r}; choose from {sorted(srch.SCAN_KINDS)}")
    hits = srch.scan_diophantine(args.kind, args.max)
    return {"kind": args.kind, "max": args.max, "hits": [{"q": q, "witness": w} for q, w in hits]}, EXIT_OK


def cmd_search(args) -> tuple[list[dict], int]:
    g = parse_group(args.group)
    if args.budget < 1 or args.workers < 1:
        raise UsageError("--budget and --workers must be positive")
    res = srch.exhaustive_sedf(srch.SearchConfig(g, args.m, args.k, args.budget, args.workers))
    lines = [family_to_json(F) for F in res.family_objects()]
    summary = {
        "summary": True,
        "group": g.descriptor(),
        "m": args.m,
        "k": args.k,
        "lambda": res.lam,
        "count": len(res.families),
        "exhaustive": res.exhaustive,
        "nodes": res.nodes,
    }
    return lines + [summary], EXIT_OK


def cmd_census(args) -> tuple[dict, int]:
    g = parse_group(args.group)
    if args.kind == "ds":
        cen = srch.ds_census(g, k_max=args.k_max)
    else:
        cen = srch.pds_census(g, args.mode, args.e)
    entries = [{"elements": e.set.tolist(), "params": e.params, "pds_type": e.pds_type}
               for e in cen.entries]
    out = {
        "group": g.descriptor(),
        "kind": args.kind,
        "mode": cen.mode,
        "exhaustive": cen.exhaustive,
        "entries": entries,
        "flagged": [{"elements": e.set.tolist(), "params": e.params} for e in cen.flagged],
    }
    return out, EXIT_OK


COMMANDS = {
    "field": cmd_field,
    "cyclo": cmd_cyclo,
    "verify": cmd_verify,
    "construct": cmd_construct,
    "scan": cmd_scan,
    "search": cmd_search,
    "census": cmd_census,
}


# --- parser -------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable output instead of JSON")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized hooks (default 0)")

    p = _Parser(prog="sedf", description="Strong external difference families: "
                "constructions, verifiers, cyclotomy tables and search.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("field", parents=[common], help="finite field tables")
    f.add_argument("--q", type=int)
    f.add_argument("--modulus", help="coefficients c0,...,cm of a monic irreducible")
    f.add_argument("--theta", type=int, help="primitive element (encoded integer)")
    f.add_argument("--tables", action="store_true", help="include log / antilog tables")

    c = sub.add_parser("cyclo", parents=[common], help="cyclotomic classes and numbers")
    c.add_argument("--q", type=int)
    c.add_argument("--group", help="field descriptor such as F9 or JSON")
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--classes", action="store_true", help="list the class elements")
    c.add_argument("--audit", action="store_true", help="check the standard identities")

    v = sub.add_parser("verify", parents=[common], help="verify a family file or report")
    v.add_argument("kind", choices=("ds", "pds", "sedf", "gsedf", "bgsedf", "auto"))
    v.add_argument("file", help="family JSON, a report echoing one, or - for stdin")
    v.add_argument("--bounds", help="BGSEDF bounds, comma-separated")

    k = sub.add_parser("construct", parents=[common], help="build a catalog construction")
    k.add_argument("recipe", help="recipe name, or 'list'")
    k.add_argument("--q", type=int)
    k.add_argument("--opt", action="append", metavar="KEY=VALUE", help="recipe option")
    k.add_argument("--verify", action="store_true")
    k.add_argument("--deep", action="store_true", help="allow large-q verification")
    k.add_argument("--out", help="write the primary family JSON here")

    s = sub.add_parser("scan", parents=[common], help="prime powers meeting a side condition")
    s.add_argument("--kind", required=True)
    s.add_argument("--max", type=int, required=True)

    x = sub.add_parser("search", parents=[common], help="exhaustive SEDF search")
    x.add_argument("--group", required=True)
    x.add_argument("--m", type=int, required=True)
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--budget", type=int, default=10**7, help="node budget per top-level branch")
    x.add_argument("--workers", type=int, default=1)

    n = sub.add_parser("census", parents=[common], help="DS / PDS census of a small group")
    n.add_argument("--group", required=True)
    n.add_argument("--kind", choices=("ds", "pds"), default="pds")
    n.add_argument("--mode", choices=("exhaustive", "classes"), default="exhaustive")
    n.add_argument("--e", type=int)
    n.add_argument("--k-max", type=int, dest="k_max")
    return p


def _command_echo(args) -> dict:
    skip = {"pretty", "file", "out", "func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(obj, pretty: bool, out) -> None:
    out.write((render_pretty(obj) if pretty else dumps(obj)) + "\n")


def _csv_table(numbers) -> str:
    rows = [",".join(["i\\j"] + [str(j) for j in range(len(numbers))])]
    for i, row in enumerate(numbers):
        rows.append(",".join([str(i)] + [str(int(x)) for x in row]))
    return "\n".join(rows) + "\n"


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"sedf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    pretty = getattr(args, "pretty", False)
    args.seed = getattr(args, "seed", 0)
    random.seed(args.seed)
    np.random.seed(args.seed)
    start = time.perf_counter()
    try:
        payload, code = COMMANDS[args.command](args)
    except (UsageError, SedfError) as exc:
        print(f"sedf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"sedf: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    elapsed = time.perf_counter() - start

    if args.command == "cyclo" and args.format == "csv":
        out.write(_csv_table(payload["numbers"]))
        return code
    if isinstance(payload, list):
        for line in payload:
            _emit(line, pretty, out)
    else:
        report = {"format": FORMAT, "command": _command_echo(args),
                  "timing": {"seconds": round(elapsed, 6)}, **payload}
        _emit(report, pretty, out)
        for w in payload.get("warnings", []):
            print(f"sedf: warning: {w}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
