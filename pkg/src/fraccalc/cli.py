"""Command-line interface: catalog inspection, grid transforms, verification.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical-precondition
error.  CSV files are UTF-8 with LF endings, header ``t,value``, 17
significant digits (lossless float round-trip), and the token ``sing`` for a
singular index-0 value.  All file writes go through a temp file + rename.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__, catalog
from .errors import DataError, FracCalcError, PreconditionError, UsageError
from .grid import GridFunction
from .harness import SuiteConfig, resolve_check_ids, resolved_threads, run_suite
from .operators import caputo_derivative, frac_integral, leibniz_rl, rl_derivative

_SING = "sing"


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fraccalc-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_grid_csv(path: str, g: GridFunction) -> None:
    t = g.times()
    lines = ["t,value"]
    for i in range(g.n):
        if i == 0 and g.singular_start:
            lines.append(f"{t[i]:.17g},{_SING}")
        else:
            lines.append(f"{t[i]:.17g},{g.values[i]:.17g}")
    _atomic_write(path, "\n".join(lines) + "\n")


def read_grid_csv(path: str) -> GridFunction:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    lines = [ln for ln in lines if ln.strip()]
    if not lines or lines[0].strip() != "t,value":
        raise DataError(f"{path}: first line must be the header 't,value'")
    ts: list[float] = []
    vals: list[float] = []
    singular = False
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: expected 't,value', got {ln!r}")
        try:
            t = float(parts[0])
        except ValueError:
            raise DataError(f"{path}:{lineno}: bad t value {parts[0]!r}") from None
        token = parts[1].strip()
        if token == _SING:
            if len(ts) != 0:
                raise DataError(f"{path}:{lineno}: '{_SING}' is only allowed on the first data row")
            singular = True
            v = math.nan
        else:
            try:
                v = float(token)
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad value {token!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}:{lineno}: non-finite value {token!r}")
        if not math.isfinite(t):
            raise DataError(f"{path}:{lineno}: non-finite t {parts[0]!r}")
        ts.append(t)
        vals.append(v)
    if len(ts) < 2:
        raise DataError(f"{path}: need at least 2 data rows")
    t_arr = np.asarray(ts)
    span = t_arr[-1] - t_arr[0]
    if span <= 0:
        raise DataError(f"{path}: t column must be strictly increasing")
    h = span / (len(ts) - 1)
    dt = np.diff(t_arr)
    if np.any(dt <= 0) or np.max(np.abs(dt - h)) > 1e-9 * span:
        raise DataError(f"{path}: t column is not uniformly spaced (relative tolerance 1e-9)")
    return GridFunction(float(t_arr[0]), float(t_arr[-1]), np.asarray(vals), singular)


def _parse_fn_spec(spec: str) -> catalog.AnalyticFunction:
    name, _, rest = spec.partition(":")
    name = name.strip()
    params = {}
    if rest:
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep or not key.strip():
                raise UsageError(f"bad --fn parameter {item!r}; expected key=value")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise UsageError(f"bad --fn parameter value {value!r} for {key.strip()!r}") from None
    return catalog.builtin(name, params)


def _parse_taylor(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad --taylor value {text!r}; expected comma-separated numbers") from None


def _cmd_catalog(args: argparse.Namespace) -> int:
    if args.action == "list":
        for name in catalog.builtin_names():
            print(name)
        return 0
    print(catalog.describe_builtin(args.id))
    return 0


def _transform_input(args: argparse.Namespace) -> GridFunction:
    if args.input:
        for flag in ("n", "t0", "t1"):
            if getattr(args, flag) is not None:
                raise UsageError(f"--{flag} only applies to --fn inputs")
        return read_grid_csv(args.input)
    entry = _parse_fn_spec(args.fn)
    n = args.n if args.n is not None else 1025
    t0 = args.t0 if args.t0 is not None else entry.base_point
    t1 = args.t1 if args.t1 is not None else entry.base_point + 1.0
    return catalog.sample(entry, t0, t1, n)


def _cmd_transform(args: argparse.Namespace) -> int:
    if args.op == "leibniz":
        if not (args.fn and args.fn2):
            raise UsageError("--op leibniz needs --fn and --fn2 (catalog factors on a shared grid)")
        u = _transform_input(args)
        entry2 = _parse_fn_spec(args.fn2)
        v = catalog.sample(entry2, u.t0, u.t1, u.n)
        out = leibniz_rl(u, v, args.alpha)
    else:
        if args.fn2:
            raise UsageError("--fn2 only applies to --op leibniz")
        g = _transform_input(args)
        if args.op == "J":
            if args.method:
                raise UsageError("--method only applies to derivative ops")
            out = frac_integral(g, args.alpha)
        elif args.op == "D":
            out = rl_derivative(g, args.alpha, args.method)
        else:  # cD
            if args.taylor is not None:
                taylor = _parse_taylor(args.taylor)
            elif args.fn:
                entry = _parse_fn_spec(args.fn)
                taylor = catalog.taylor_for_order(entry, max(math.ceil(args.alpha), 0))
            else:
                if g.singular_start:
                    raise PreconditionError(
                        "cannot infer Taylor data from a singular first value; pass --taylor"
                    )
                m = math.ceil(args.alpha)
                if m > 1:
                    raise UsageError(f"--taylor is required for CSV input with order {args.alpha}")
                taylor = (float(g.values[0]),) if m == 1 else ()
            out = caputo_derivative(g, args.alpha, taylor, args.method)
    write_grid_csv(args.output, out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    ids = resolve_check_ids(args.suite)
    config = SuiteConfig(n=args.n, seed=args.seed, checks=tuple(ids))
    reports = run_suite(config)
    aggregate = all(r.passed for r in reports)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.check_id}: max_error={r.max_error:.6g} tolerance={r.tolerance:g} n={r.grid_n}")
    print(f"{'PASS' if aggregate else 'FAIL'}: {sum(r.passed for r in reports)}/{len(reports)} checks passed")
    if args.json:
        document = {
            "schema": 1,
            "tool_version": __version__,
            "config_echo": {
                "suite": ids,
                "n": args.n,
                "seed": args.seed,
                "threads": resolved_threads(config),
            },
            "reports": [r.to_dict() for r in reports],
            "aggregate_pass": aggregate,
        }
        _atomic_write(args.json, json.dumps(document, indent=2, sort_keys=True) + "\n")
    return 0 if aggregate else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraccalc",
        description="Fractional-calculus transforms on uniform grids, with a verification suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cat = sub.add_parser("catalog", help="list or describe the analytic test functions")
    cat_sub = p_cat.add_subparsers(dest="action", required=True)
    cat_sub.add_parser("list", help="print the catalog ids")
    p_desc = cat_sub.add_parser("describe", help="print parameters and closed forms")
    p_desc.add_argument("id")

    p_tr = sub.add_parser("transform", help="apply a fractional operator to a grid function")
    src = p_tr.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="input CSV (header 't,value')")
    src.add_argument("--fn", help="catalog spec, e.g. power:p=0.5")
    p_tr.add_argument("--fn2", help="second factor for --op leibniz, same syntax as --fn")
    p_tr.add_argument("--op", required=True, choices=["J", "D", "cD", "leibniz"])
    p_tr.add_argument("--alpha", required=True, type=float)
    p_tr.add_argument("--method", choices=["marchaud", "integral_then_difference"])
    p_tr.add_argument("--n", type=int, help="grid nodes for --fn sampling (default 1025)")
    p_tr.add_argument("--t0", type=float, help="grid start for --fn sampling (default: base point)")
    p_tr.add_argument("--t1", type=float, help="grid end for --fn sampling (default: base point + 1)")
    p_tr.add_argument("--taylor", help="comma-separated Taylor data at t0 for --op cD")
    p_tr.add_argument("--output", required=True, help="output CSV path")

    p_ver = sub.add_parser("verify", help="run verification checks and report")
    p_ver.add_argument("--suite", nargs="+", default=["all"], help="'all' or check ids")
    p_ver.add_argument("--n", type=int, default=2049)
    p_ver.add_argument("--seed", type=int, default=7)
    p_ver.add_argument("--json", help="write the JSON report document here")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "catalog":
            return _cmd_catalog(args)
        if args.command == "transform":
            return _cmd_transform(args)
        return _cmd_verify(args)
    except FracCalcError as exc:
        print(f"fraccalc: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
