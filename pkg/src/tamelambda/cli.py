"""Command-line front end.

Exit codes: 0 success, 2 bad input or unmet hypothesis, 3 internal
invariant failure (e.g. oracle disagreement), 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from sympy import isprime, primerange

from . import __version__
from .analytic import lambda_empty_quad_report
from .eisenstein import order_X2, order_X3
from .errors import InvariantError, ResourceError, TameLambdaError
from .kernels import BACKEND
from .lambda_engine import lambda_Q, lambda_quad, quad_profile
from .padic import require_fundamental, splitting_profile
from .ray_class import growth_lambda, level_cap, ray_class_group, unit_power_check

SCHEMA_VERSION = 1

# column order of the CSV output, per command; part of the schema
CSV_COLUMNS = {
    "profile": ["p", "ell", "N", "P", "ell_mod_p"],
    "lambda-q": ["p", "S", "lambda", "P", "lcm_degree", "verified",
                 "oracle_lambda", "oracle_stabilized", "oracle_valuations", "verdict"],
    "lambda-quad": ["p", "disc", "S", "lambda", "lambda_0", "lambda_0_source",
                    "verified", "verdict"],
    "order": ["ell", "alpha", "s", "m", "order", "bound_ok",
              "oracle_order", "verdict"],
    "order2": ["ell", "order", "oracle_order", "verdict"],
    "check-corollary4": ["p", "ell", "n", "k", "pass"],
    "scan-profile": ["p", "ell", "N", "P", "ell_mod_p"],
    "scan-order": ["ell", "alpha", "s", "m", "order", "bound_ok",
                   "oracle_order", "verdict"],
    "scan-lambda-witness": ["p", "target", "S", "lambda", "oracle_lambda",
                            "oracle_stabilized", "verdict"],
}


@dataclass(frozen=True)
class RunConfig:
    fmt: str
    verify: str
    max_level: Optional[int]
    precision: Optional[int]
    jobs: int
    header: bool


class CliError(TameLambdaError):
    exit_code = 2


def parse_primes(text: str) -> list[int]:
    if text is None or not text.strip():
        return []
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            v = int(tok)
        except ValueError:
            raise CliError(f"not an integer: {tok!r}") from None
        if not isprime(v):
            raise CliError(f"{v} is not prime")
        out.append(v)
    return sorted(set(out))


def parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise CliError(f"range must look like LO:HI, got {text!r}") from None
    return lo, hi


def _join(xs) -> str:
    return ";".join(str(x) for x in xs)


# ---------------------------------------------------------------- oracles

def _levels(p: int, cfg: RunConfig) -> int:
    cap = level_cap(p)
    top = cap if cfg.max_level is None else cfg.max_level
    if top > cap:
        raise ResourceError(
            f"--max-level {top} exceeds the level cap {cap} for p={p}; "
            f"raise it with TAMELAMBDA_MAX_LEVEL_P{p}")
    return top


def oracle_growth(p: int, S: Sequence[int], top: int) -> dict:
    vals = [ray_class_group(p, S, n, max_level=top).valuation for n in range(top + 1)]
    g = growth_lambda(vals)
    return {"lambda": g.lam, "stabilized": g.stabilized, "n0": g.n0,
            "valuations": vals}


def oracle_order(p: int, ell: int, top: int) -> dict:
    groups = [ray_class_group(p, [ell], n, max_level=top) for n in range(top + 1)]
    orders = [g.order for g in groups]
    stable = len(orders) >= 2 and orders[-1] == orders[-2]
    return {"order": orders[-1], "stabilized": stable, "orders": orders}


def _verdict(formula, oracle, stabilized: bool) -> str:
    if oracle is None or not stabilized:
        return "UNSTABLE"
    if formula != oracle:
        return "MISMATCH"
    return "OK"


# --------------------------------------------------------------- commands

def cmd_profile(args, cfg: RunConfig):
    prof = splitting_profile(args.p, args.ell)
    rec = {"p": prof.p, "ell": prof.ell, "N": prof.N, "P": prof.P,
           "ell_mod_p": prof.ell_mod_p}
    return {"p": args.p, "ell": args.ell}, rec, None, [rec]


def cmd_lambda_q(args, cfg: RunConfig):
    S = parse_primes(args.S)
    rep = lambda_Q(args.p, S)
    result = rep.to_dict()
    ver = None
    row = {"p": args.p, "S": _join(S), "lambda": rep.value,
           "P": _join(rep.P[l] for l in S), "lcm_degree": rep.lcm_degree,
           "verified": rep.verified}
    if cfg.verify == "oracle":
        top = _levels(args.p, cfg)
        og = oracle_growth(args.p, S, top)
        ver = {"oracle": "ray class growth", "max_level": top, **og,
               "verdict": _verdict(rep.value, og["lambda"], og["stabilized"])}
        row.update(oracle_lambda=og["lambda"], oracle_stabilized=og["stabilized"],
                   oracle_valuations=_join(og["valuations"]), verdict=ver["verdict"])
    return {"p": args.p, "S": S}, result, ver, [row]


def cmd_lambda_quad(args, cfg: RunConfig):
    S = parse_primes(args.S)
    require_fundamental(args.disc)
    k = quad_profile(args.disc, args.p)
    ver = None
    lambda0 = args.lambda0
    source = "supplied" if lambda0 is not None else None
    if args.p != 2 and lambda0 is None:
        an = lambda_empty_quad_report(args.p, args.disc, K=cfg.precision)
        lambda0, source = an.value, an.source
        if cfg.verify == "oracle":
            ver = {"oracle": "analytic", "verdict": "OK", **an.to_dict()}
    elif args.p == 2:
        source = "closed form"
    rep = lambda_quad(args.p, k, S, lambda0=lambda0 if args.p != 2 else None)
    if cfg.verify == "oracle" and ver is None:
        ver = {"oracle": None, "verdict": "NO_ORACLE"}
    result = rep.to_dict()
    result["lambda_0_source"] = source
    row = {"p": args.p, "disc": args.disc, "S": _join(S), "lambda": rep.value,
           "lambda_0": rep.extra.get("lambda_0"), "lambda_0_source": source,
           "verified": rep.verified, "verdict": ver["verdict"] if ver else ""}
    return {"p": args.p, "disc": args.disc, "S": S}, result, ver, [row]


def _order_row(ell: int, cfg: RunConfig) -> tuple[dict, Optional[dict], dict]:
    r = order_X3(ell)
    rec = r.to_dict()
    row = {"ell": ell, "alpha": f"{r.alpha.a}{r.alpha.b:+d}ζ", "s": r.s, "m": r.m,
           "order": r.order, "bound_ok": 3**r.m <= 4 * ell}
    rec["bound_ok"] = row["bound_ok"]
    ver = None
    if cfg.verify == "oracle":
        top = _levels(3, cfg)
        oo = oracle_order(3, ell, top)
        ver = {"oracle": "ray class order", "max_level": top, **oo,
               "verdict": _verdict(r.order, oo["order"], oo["stabilized"])}
        row.update(oracle_order=oo["order"], verdict=ver["verdict"])
    return rec, ver, row


def cmd_order(args, cfg: RunConfig):
    rec, ver, row = _order_row(args.ell, cfg)
    return {"ell": args.ell}, rec, ver, [row]


def cmd_order2(args, cfg: RunConfig):
    o = order_X2(args.ell)
    rec = {"ell": args.ell, "order": o}
    row = dict(rec)
    ver = None
    if cfg.verify == "oracle":
        top = _levels(2, cfg)
        oo = oracle_order(2, args.ell, top)
        ver = {"oracle": "ray class order", "max_level": top, **oo,
               "verdict": _verdict(o, oo["order"], oo["stabilized"])}
        row.update(oracle_order=oo["order"], verdict=ver["verdict"])
    return {"ell": args.ell}, rec, ver, [row]


def cmd_unit_power_check(args, cfg: RunConfig):
    rep = unit_power_check(args.p, args.ell, args.n)
    rows = [{"p": args.p, "ell": args.ell, "n": args.n, "k": k, "pass": ok}
            for k, ok in rep.verdicts]
    return {"p": args.p, "ell": args.ell, "n": args.n}, rep.to_dict(), None, rows


# scan workers must be module-level so a process pool can pickle them

def _scan_profile_item(item):
    p, ell, _ = item
    prof = splitting_profile(p, ell)
    return {"p": p, "ell": ell, "N": prof.N, "P": prof.P, "ell_mod_p": prof.ell_mod_p}


def _scan_order_item(item):
    ell, cfg = item
    _, _, row = _order_row(ell, cfg)
    return row


def _witness_candidates(p: int, lo: int, hi: int, size_cap: int = 4):
    primes = [l for l in primerange(max(lo, 2), hi) if l != p]
    for r in range(1, size_cap + 1):
        yield from itertools.combinations(primes, r)


def _scan_witness_item(item):
    p, target, lo, hi, cfg = item
    for S in _witness_candidates(p, lo, hi):
        rep = lambda_Q(p, S)
        if rep.value == target:
            row = {"p": p, "target": target, "S": _join(S), "lambda": rep.value}
            if cfg.verify == "oracle":
                og = oracle_growth(p, S, _levels(p, cfg))
                row.update(oracle_lambda=og["lambda"],
                           oracle_stabilized=og["stabilized"],
                           verdict=_verdict(rep.value, og["lambda"], og["stabilized"]))
            return row
    return {"p": p, "target": target, "S": "", "lambda": None}


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))  # map preserves input order


def cmd_scan(args, cfg: RunConfig):
    lo, hi = parse_range(args.range)
    kind = args.kind
    query = {"kind": kind, "range": [lo, hi]}
    if kind == "profile":
        if args.p is None:
            raise CliError("scan --kind profile needs --p")
        query["p"] = args.p
        items = [(args.p, l, None) for l in primerange(max(lo, 2), hi) if l != args.p]
        rows = _map(_scan_profile_item, items, cfg.jobs)
    elif kind == "order":
        items = [(l, cfg) for l in primerange(max(lo, 2), hi)
                 if l % 3 == 1 and l % 9 != 1]
        rows = _map(_scan_order_item, items, cfg.jobs)
    elif kind == "lambda-witness":
        if args.p is None:
            raise CliError("scan --kind lambda-witness needs --p")
        targets = [int(t) for t in args.targets.split(",")] if args.targets else []
        query.update(p=args.p, targets=targets)
        items = [(args.p, t, lo, hi, cfg) for t in targets] if hi > lo else []
        rows = _map(_scan_witness_item, items, cfg.jobs)
    else:  # argparse restricts choices
        raise CliError(f"unknown scan kind {kind}")
    ver = None
    if cfg.verify == "oracle":
        bad = [r for r in rows if r.get("verdict") == "MISMATCH"]
        ver = {"verdicts": [r.get("verdict", "NO_ORACLE") for r in rows],
               "mismatches": len(bad)}
    return query, rows, ver, rows


COMMANDS = {
    "profile": cmd_profile,
    "lambda-q": cmd_lambda_q,
    "lambda-quad": cmd_lambda_quad,
    "order": cmd_order,
    "order2": cmd_order2,
    "check-corollary4": cmd_unit_power_check,
    "scan": cmd_scan,
}


# ---------------------------------------------------------------- output

def render_json(query, result, verification) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "query": query, "result": result,
           "verification": verification}
    return json.dumps(doc, sort_keys=True, ensure_ascii=False)


def render_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["" if r.get(c) is None else r.get(c) for c in columns])
    return buf.getvalue()


def _human_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return ", ".join(_human_value(x) for x in v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_human_value(x)}" for k, x in v.items()) + "}"
    return str(v)


def render_human(command: str, result, verification, rows) -> str:
    lines = []
    if command == "check-corollary4":
        lines.append(f"e = {result['e']}")
        for r in rows:
            lines.append(f"zeta^{r['k']}: {'pass' if r['pass'] else 'FAIL'}")
        lines.append(f"all pass: {result['all_pass']}")
    elif command == "scan":
        for r in rows:
            lines.append("  ".join(f"{k}={_human_value(v)}" for k, v in r.items()))
    else:
        if command in ("lambda-q", "lambda-quad"):
            lines.append(f"lambda = {result['lambda']}")
            for t in result["terms"]:
                lines.append(f"  {t['label']:<24} {t['value']:+d}")
            lines.append(f"  P: {_human_value(result['P'])}")
            lines.append(f"  lcm degree {result['lcm_degree']}, "
                         f"lcm check gives {result['lcm_check_lambda']}")
        else:
            for k, v in result.items():
                lines.append(f"{k}: {_human_value(v)}")
        if verification:
            lines.append("verification:")
            for k, v in verification.items():
                lines.append(f"  {k}: {_human_value(v)}")
    return "\n".join(lines) + ("\n" if lines else "")


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output")
    fmt.add_argument("--csv", action="store_true", help="CSV output")
    common.add_argument("--verify", choices=["none", "oracle"], default="none")
    common.add_argument("--max-level", type=int, default=None,
                        help="top level for ray class oracles")
    common.add_argument("--precision", type=int, default=None,
                        help="p-adic precision K of the analytic series")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--no-header", action="store_true",
                        help="suppress the run metadata line on stderr")

    ap = argparse.ArgumentParser(
        prog="tamelambda",
        description="Iwasawa lambda-invariants of tamely ramified extensions")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("profile", parents=[common], help="splitting profile of ell")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)

    s = sub.add_parser("lambda-q", parents=[common], help="lambda_S over Q")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--S", default="", help="comma-separated primes")

    s = sub.add_parser("lambda-quad", parents=[common],
                       help="lambda_S over an imaginary quadratic field")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--S", default="")
    s.add_argument("--lambda0", type=int, default=None,
                   help="unramified lambda of k (odd p); computed if omitted")

    s = sub.add_parser("order", parents=[common], help="|X_{ell}| for p = 3")
    s.add_argument("--ell", type=int, required=True)

    s = sub.add_parser("order2", parents=[common], help="|X_{ell}| for p = 2")
    s.add_argument("--ell", type=int, required=True)

    s = sub.add_parser("check-corollary4", parents=[common],
                       help="per-root test of (1 - zeta)^e != 1")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("scan", parents=[common], help="batch tables")
    s.add_argument("--kind", choices=["profile", "order", "lambda-witness"],
                   required=True)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--range", default="2:100", help="primes in [LO, HI)")
    s.add_argument("--targets", default="0,1,2,3",
                   help="lambda values to find witnesses for")
    return ap


def _csv_key(args) -> str:
    return f"scan-{args.kind}" if args.command == "scan" else args.command


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = RunConfig(
        fmt="json" if args.json else "csv" if args.csv else "human",
        verify=args.verify, max_level=args.max_level, precision=args.precision,
        jobs=max(1, args.jobs), header=not args.no_header)
    if cfg.header:
        print(f"# tamelambda {__version__} backend={BACKEND} command={args.command} "
              f"schema={SCHEMA_VERSION}", file=sys.stderr)
    try:
        if cfg.max_level is not None and cfg.max_level < 0:
            raise CliError("--max-level must be nonnegative")
        query, result, ver, rows = COMMANDS[args.command](args, cfg)
    except TameLambdaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if cfg.fmt == "json":
        out = render_json(query, result, ver) + "\n"
    elif cfg.fmt == "csv":
        out = render_csv(CSV_COLUMNS[_csv_key(args)], rows)
    else:
        out = render_human(args.command, result, ver, rows)
    sys.stdout.write(out)
    verdicts = []
    if ver:
        verdicts = ver.get("verdicts") or [ver.get("verdict")]
    if "MISMATCH" in verdicts:
        print("error: formula and oracle disagree", file=sys.stderr)
        return InvariantError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
