"""Command-line entry point: ``steklov <command> ...``.

Exit codes: 0 success, 1 a verified assertion failed, 2 bad input or
domain error, 3 a computation budget was exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .cheeger import cheeger_constants, higher_order_constants
from .dtn import blowup_convergence, blowup_spectrum, dirichlet_laplacian_spectrum, dtn_spectrum, parse_schedule
from .errors import BudgetExceeded, DomainError, MonotonicityError
from .exhaustion import (
    exhaust_cheeger,
    exhaust_higher,
    exhaust_spectrum,
    family_from_spec,
    graph_eigen_limit,
    recurrence_test,
)
from .graph import build_domain, make_window
from .io import load_graph, sha256_of

SCHEMA = "steklov-report/1"


def _clean(obj):
    """JSON-safe copy: non-finite floats become strings, tuples become lists."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _report(args, inputs: dict, results: dict, assertions=None, started: float = 0.0) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": args.command,
        "argv": list(args.argv),
        "inputs": inputs,
        "results": results,
        "assertions": assertions or [],
        "wall_time": time.perf_counter() - started,
    }


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(_clean(report), indent=2, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# --------------------------------------------------------------------------
# window parsing


def parse_window(spec: str, domain) -> list:
    """``all``, ``a..b`` (integer names), ``ball:R`` or a comma-separated list."""
    spec = spec.strip()
    if spec == "all":
        return [domain.name(x) for x in domain.closure]
    if spec.startswith("ball:"):
        try:
            radius = int(spec[5:])
        except ValueError:
            raise DomainError(f"bad ball radius in {spec!r}") from None
        from .exhaustion import ExhaustionSequence

        seq = ExhaustionSequence(domain, depth_max=radius)
        return [domain.name(int(x)) for x in seq.ball(radius)]
    if ".." in spec:
        lo, _, hi = spec.partition("..")
        try:
            a, b = int(lo), int(hi)
        except ValueError:
            raise DomainError(f"range window must be integer a..b, got {spec!r}") from None
        return [str(i) for i in range(a, b + 1)]
    names = [s.strip() for s in spec.split(",") if s.strip()]
    if not names:
        raise DomainError("empty window")
    return names


def _load_window(args):
    g, interior = load_graph(args.graph)
    dom = build_domain(g, interior)
    win = make_window(dom, parse_window(args.window, dom))
    return win, {args.graph: sha256_of(args.graph)}


# --------------------------------------------------------------------------
# commands


def cmd_spectrum(args) -> int:
    t0 = time.perf_counter()
    win, inputs = _load_window(args)
    res = {"boundary": list(win.boundary_names()), "sigma": dtn_spectrum(win),
           "lambdaD": dirichlet_laplacian_spectrum(win)}
    if args.blowup is not None:
        res["blowup"] = {"r": args.blowup, "values": blowup_spectrum(win, args.blowup)}
    if args.schedule:
        rows = blowup_convergence(win, parse_schedule(args.schedule))
        res["blowup_table"] = [{"r": r.r, "k": r.k, "value": r.value, "gap": r.gap, "ratio": r.ratio} for r in rows]
    _emit(_report(args, inputs, res, started=t0), args.out)
    return 0


def _result_json(r):
    return {"value": r.value, "witness": r.witness, "method": r.method, "note": r.note}


def cmd_cheeger(args) -> int:
    t0 = time.perf_counter()
    win, inputs = _load_window(args)
    h, hj = cheeger_constants(win, args.method)
    res = {"h": _result_json(h), "h_J": _result_json(hj)}
    if args.order and args.order > 1:
        mode = "auto" if args.method == "auto" else ("exact" if args.method == "enum" else "auto")
        hk, hjk = higher_order_constants(win, args.order, mode)
        res["order"] = args.order
        res["h_k"] = _result_json(hk)
        res["h_J^k"] = _result_json(hjk)
    _emit(_report(args, inputs, res, started=t0), args.out)
    return 0


def _family(args):
    text = args.family
    path = Path(text)
    if not text.lstrip().startswith("{") and path.exists():
        text = path.read_text()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"family spec: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(spec, dict):
        raise DomainError("family spec must be a JSON object")
    inputs = {"family": spec}
    if spec.get("family") == "finite_file" and "path" in spec:
        inputs[spec["path"]] = sha256_of(spec["path"])
    return family_from_spec(spec), inputs


def cmd_exhaust(args) -> int:
    t0 = time.perf_counter()
    fam, inputs = _family(args)
    q = args.quantity
    kw = {"step": args.step}
    if args.depth is not None:
        kw["depth_max"] = args.depth
    if q == "sigma":
        table = exhaust_spectrum(fam, k=args.k, tol=args.tol, **kw)
    elif q == "cheeger":
        table = exhaust_cheeger(fam, tol=args.tol, **kw)
    elif q == "higher":
        table = exhaust_higher(fam, k=args.k, **kw)
    elif q == "lambda":
        table = graph_eigen_limit(fam, k=args.k, tol=args.tol, **kw)
    else:
        table = recurrence_test(fam, tol=args.tol, **kw)
    if args.csv:
        Path(args.csv).write_text(table.to_csv())
    else:
        sys.stderr.write(table.to_csv())
    _emit(_report(args, inputs, table.to_json(), started=t0), args.out)
    return 0


def cmd_recurrence(args) -> int:
    args.quantity = "recurrence"
    args.k = 1
    return cmd_exhaust(args)


def cmd_verify(args) -> int:
    from .suite import run_suite

    t0 = time.perf_counter()
    count = 0 if args.fixtures == "only" else args.count
    res = run_suite(args.seed, count, fixtures=True, dump_dir=args.dump_dir)
    groups = {k: {"passed": p, "total": t} for k, (p, t) in res.by_group().items()}
    results = {
        "seed": args.seed,
        "count": count,
        "passed": res.passed,
        "groups": groups,
        "c_hat": res.c_hat,
        "c_hat_dirichlet": res.c_hat_dirichlet,
        "dumped": res.dumped,
    }
    assertions = [a.to_json() for a in (res.assertions if args.all_assertions else res.failures())]
    _emit(_report(args, {"seed": args.seed}, results, assertions, started=t0), args.out)
    return 0 if res.passed else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steklov", description="Steklov spectra and Cheeger constants on weighted graphs")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, window=True):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        if window:
            sp.add_argument("--graph", required=True, help="graph JSON file")
            sp.add_argument("--window", default="all", help="all | a..b | ball:R | v1,v2,...")

    sp = sub.add_parser("spectrum", help="DtN and Dirichlet spectra of a window")
    common(sp)
    sp.add_argument("--blowup", type=float, help="blow-up parameter r")
    sp.add_argument("--schedule", help="r0:r1:factor blow-up convergence table")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("cheeger", help="Cheeger constants of a window")
    common(sp)
    sp.add_argument("--order", type=int, default=1)
    sp.add_argument("--method", choices=["enum", "cut", "auto"], default="auto")
    sp.set_defaults(func=cmd_cheeger)

    def exhaust_args(sp):
        common(sp, window=False)
        sp.add_argument("--family", required=True, help="family JSON (inline or a file path)")
        sp.add_argument("--tol", type=float, default=1e-6)
        sp.add_argument("--depth", type=int)
        sp.add_argument("--step", type=int, default=1, help="radius increment")
        sp.add_argument("--csv", help="write the convergence table here (default: stderr)")

    sp = sub.add_parser("exhaust", help="limits along a ball exhaustion")
    exhaust_args(sp)
    sp.add_argument("--quantity", choices=["sigma", "cheeger", "higher", "lambda", "recurrence"], default="sigma")
    sp.add_argument("--k", type=int, default=1)
    sp.set_defaults(func=cmd_exhaust)

    sp = sub.add_parser("recurrence", help="capacity-based recurrence test")
    exhaust_args(sp)
    sp.set_defaults(func=cmd_recurrence)

    sp = sub.add_parser("verify", help="run the inequality and identity suite")
    common(sp, window=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--fixtures", choices=["only", "with-random"], default="with-random")
    sp.add_argument("--dump-dir", default="verify-failures", help="where failing random instances are written")
    sp.add_argument("--all-assertions", action="store_true", help="list every assertion, not only failures")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MonotonicityError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
