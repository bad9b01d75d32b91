"""Command-line interface.

Vectors are given inline as comma-separated reals (``--u 0.5,0``), as a JSON
array (``--u '[0.5, 0]'``) or as a path to a JSON file holding an array.
A vector that starts with a minus sign must be attached to its flag with
``=`` (``--u=-0.5,0``) so it is not mistaken for an option.

Exit status: 0 on success, 1 when a verification run reports failures, 2 on
usage, parse or domain errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import harness
from .exceptions import DimensionMismatch, GyroballError
from .gyro import ADD_BACKENDS, GYR_BACKENDS, gyration, gyration_matrix, mobius_add, mobius_neg
from .isometry import Isometry, apply, compose, inverse, symmetry_at, transport
from .metric import MetricKind, distance, norm_bounds

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _jsonable(x):
    """Plain Python values for ``json.dumps``; integral floats print as ints."""
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        negative_zero = x == 0 and math.copysign(1.0, x) < 0
        # -0.0 keeps its float form so the sign survives a round trip
        if math.isfinite(x) and x.is_integer() and abs(x) < 2**53 and not negative_zero:
            return int(x)
        return x
    return x


def _dumps(x) -> str:
    return json.dumps(_jsonable(x))


def _load_json_arg(text: str, what: str):
    path = Path(text)
    try:
        if path.is_file():
            return json.loads(path.read_text())
        return json.loads(text)
    except (json.JSONDecodeError, OSError) as exc:
        raise UsageError(f"{what}: cannot read JSON from {text!r}: {exc}") from None


def parse_vector(text: str, name: str = "vector") -> np.ndarray:
    """Parse ``"a,b,c"``, a JSON array, or a JSON file into a 1-d float array."""
    s = text.strip()
    if s.startswith("[") or Path(s).is_file():
        data = _load_json_arg(s, name)
    else:
        try:
            data = [float(t) for t in s.split(",")]
        except ValueError:
            raise UsageError(f"{name}: {text!r} is not a comma-separated list of reals") from None
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise UsageError(f"{name}: expected a non-empty flat list of reals, got {text!r}")
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{name}: non-finite entry in {text!r}")
    return arr


def _vectors(args, *names):
    vecs = [parse_vector(getattr(args, n), f"--{n}") for n in names]
    dims = {v.shape[0] for v in vecs}
    if len(dims) > 1:
        detail = ", ".join(f"--{n} has {v.shape[0]}" for n, v in zip(names, vecs))
        raise UsageError(f"vector arities differ: {detail}")
    return vecs


def _load_isometry(text: str) -> Isometry:
    data = _load_json_arg(text, "isometry")
    if not isinstance(data, dict) or "u" not in data or "tau" not in data:
        raise UsageError(f"isometry {text!r} must be an object with 'u' and 'tau'")
    return Isometry.from_dict(data)


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--dims: {text!r} is not a comma-separated list of integers") from None


def _parse_tols(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects KEY=VALUE, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise UsageError(f"--tol {key}: {value!r} is not a real number") from None
    return out


def _default_seed() -> int:
    env = os.environ.get("GYROBALL_SEED")
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GYROBALL_SEED={env!r} is not an integer") from None


def _config(args, default_samples) -> harness.VerifyConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    kwargs = {"seed": seed, "tolerances": _parse_tols(getattr(args, "tol", None))}
    if args.dims is not None:
        kwargs["dims"] = _parse_dims(args.dims)
    kwargs["samples"] = args.samples if args.samples is not None else default_samples
    if args.r_max is not None:
        kwargs["r_max"] = args.r_max
    return harness.VerifyConfig(**kwargs)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_add(args, out):
    u, v = _vectors(args, "u", "v")
    print(_dumps(mobius_add(u, v, backend=args.backend)), file=out)
    return EXIT_OK


def cmd_neg(args, out):
    (v,) = _vectors(args, "v")
    print(_dumps(mobius_neg(v)), file=out)
    return EXIT_OK


def cmd_gyr(args, out):
    if args.matrix:
        u, v = _vectors(args, "u", "v")
        print(_dumps(gyration_matrix(u, v)), file=out)
        return EXIT_OK
    if args.w is None:
        raise UsageError("gyr needs --w unless --matrix is given")
    u, v, w = _vectors(args, "u", "v", "w")
    print(_dumps(gyration(u, v, w, backend=args.backend)), file=out)
    return EXIT_OK


def cmd_dist(args, out):
    x, y = _vectors(args, "x", "y")
    print(_dumps(distance(x, y, metric=args.metric)), file=out)
    return EXIT_OK


def cmd_bounds(args, out):
    u, v = _vectors(args, "u", "v")
    lower, upper = norm_bounds(u, v)
    print(_dumps({"lower": lower, "upper": upper}), file=out)
    return EXIT_OK


def cmd_isom(args, out):
    action = args.action
    ops = args.operands
    need = {"compose": 2, "inverse": 1, "apply": 1, "symmetry": 0, "transport": 0}[action]
    if len(ops) != need:
        raise UsageError(f"isom {action} takes {need} isometry operand(s), got {len(ops)}")
    if action == "compose":
        result = compose(_load_isometry(ops[0]), _load_isometry(ops[1]))
    elif action == "inverse":
        result = inverse(_load_isometry(ops[0]))
    elif action == "apply":
        if args.x is None:
            raise UsageError("isom apply needs --x")
        T = _load_isometry(ops[0])
        (x,) = _vectors(args, "x")
        if x.shape[0] != T.dim:
            raise DimensionMismatch(f"isometry has dim {T.dim}, --x has {x.shape[0]}")
        print(_dumps(apply(T, x)), file=out)
        return EXIT_OK
    elif action == "symmetry":
        if args.x is None:
            raise UsageError("isom symmetry needs --x")
        (x,) = _vectors(args, "x")
        result = symmetry_at(x)
    else:
        if args.x is None or args.y is None:
            raise UsageError("isom transport needs --x and --y")
        x, y = _vectors(args, "x", "y")
        result = transport(x, y)
    print(_dumps(result.to_dict()), file=out)
    return EXIT_OK


def cmd_verify(args, out):
    cfg = _config(args, default_samples=10_000)
    names = list(harness.SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        reports.extend(harness.run_suite(name, cfg, workers=args.workers))
    lines = "".join(r.to_json() + "\n" for r in reports)
    if args.out:
        Path(args.out).write_text(lines)
    if args.table:
        print(harness.format_table(reports), file=out)
    elif not args.out:
        out.write(lines)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_bench(args, out):
    cfg = _config(args, default_samples=2000)
    rows = harness.bench_backends(cfg, clifford_max_dim=args.clifford_max_dim, chain_length=args.chain)
    if args.table:
        header = ("dim", "backend", "operation", "ops_per_sec", "drift")
        body = [
            (str(r["dim"]), r["backend"], r["operation"], f"{r['ops_per_sec']:.3e}",
             "n/a" if r["drift"] is None else f"{r['drift']:.3e}")
            for r in rows
        ]
        widths = [max(len(t[i]) for t in [header, *body]) for i in range(len(header))]
        for t in [header, *body]:
            print("  ".join(c.ljust(w) for c, w in zip(t, widths)).rstrip(), file=out)
    else:
        for r in rows:
            print(json.dumps(r), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_cfg_flags(p):
    p.add_argument("--dims", help="comma-separated dimensions, e.g. 2,3,5,8")
    p.add_argument("--samples", type=int, help="samples per suite per dimension")
    p.add_argument("--seed", type=int, help="master seed (default: $GYROBALL_SEED or 42)")
    p.add_argument("--r-max", type=float, dest="r_max", help="sampling radius bound in (0, 1)")
    p.add_argument("--table", action="store_true", help="print a human-readable table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gyroball",
        description="Möbius gyrogroup arithmetic, ball metrics, isometries and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("add", help="Möbius sum u ⊕ v")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--backend", choices=ADD_BACKENDS, default="direct")
    p.set_defaults(func=cmd_add)

    p = sub.add_parser("neg", help="gyrogroup inverse ⊖v")
    p.add_argument("--v", required=True)
    p.set_defaults(func=cmd_neg)

    p = sub.add_parser("gyr", help="gyration gyr[u, v] applied to w, or its matrix")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--w")
    p.add_argument("--matrix", action="store_true", help="print the orthogonal matrix instead")
    p.add_argument("--backend", choices=GYR_BACKENDS, default="gyrator")
    p.set_defaults(func=cmd_gyr)

    p = sub.add_parser("dist", help="distance between two points")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--metric", choices=[m.value for m in MetricKind], default="arctan")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("bounds", help="lower and upper bounds on |u ⊕ v|")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("isom", help="isometry algebra on JSON {dim, u, tau} objects")
    p.add_argument("action", choices=("compose", "inverse", "apply", "symmetry", "transport"))
    p.add_argument("operands", nargs="*", help="isometries as JSON files or inline JSON")
    p.add_argument("--x")
    p.add_argument("--y")
    p.set_defaults(func=cmd_isom)

    p = sub.add_parser("verify", help="run property suites; JSON lines on stdout")
    p.add_argument("--suite", default="all", help=f"'all' or one of: {', '.join(harness.SUITES)}")
    _add_cfg_flags(p)
    p.add_argument("--workers", type=int, default=1, help="threads over sample blocks")
    p.add_argument(
        "--tol", action="append", metavar="KEY=VALUE",
        help="tolerance override for a suite or suite.check; repeatable",
    )
    p.add_argument("--out", help="write the JSON lines report to this file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="backend throughput and drift")
    _add_cfg_flags(p)
    p.add_argument("--chain", type=int, default=1000, help="length of the drift chain")
    p.add_argument("--clifford-max-dim", type=int, default=harness.DIM_MAX, dest="clifford_max_dim")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, GyroballError, ValueError) as exc:
        print(f"gyroball {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
