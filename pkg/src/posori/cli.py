"""Command-line access to pairwise distances, features, and the check suites.

Input clouds are UTF-8 text, one JSON object per line with fields
"x" (3 numbers) and "n" (3 numbers, normalized on load).  Tabular output is
CSV with a header row; reals carry 17 significant digits so values
round-trip exactly.

Exit codes: 0 ok, 2 input parse failure, 3 non-finite result,
4 weight-constraint violation.  The env var M3_SEED supplies the default
seed for `check`.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import kernels
from .group import PositionOrientation
from .mav import mav_distance
from .metric import MetricParams, stabilizer_invariant_basis
from .verify import (
    run_classification_check,
    run_invariance_suite,
    run_minimality_suite,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_CONSTRAINT = 4

_SUITES = ("all", "invariance", "minimality", "classification")


class ParseFailure(Exception):
    pass


class ConstraintFailure(Exception):
    pass


class NumericFailure(Exception):
    pass


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def load_points(path: str) -> list[PositionOrientation]:
    points = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseFailure(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            x = record["x"]
            n = record["n"]
            if len(x) != 3 or len(n) != 3:
                raise ValueError("x and n must have 3 components")
            points.append(PositionOrientation(x, n))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseFailure(f"{path}:{lineno}: bad point record: {exc}") from exc
    if not points:
        raise ParseFailure(f"{path}: no point records found")
    return points


def parse_weights(text: str, strict: bool) -> MetricParams:
    parts = text.split(",")
    if len(parts) != 5:
        raise ParseFailure(f"--weights needs 5 comma-separated reals, got {len(parts)}")
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ParseFailure(f"--weights: {exc}") from exc
    if not all(math.isfinite(v) for v in values):
        raise ParseFailure("--weights must be finite")
    try:
        return MetricParams(*values, strict=strict)
    except ValueError as exc:
        raise ConstraintFailure(str(exc)) from exc


def parse_pairs(text: str, n: int) -> list[tuple[int, int]]:
    pairs = []
    for item in text.split(","):
        i, sep, j = item.partition(":")
        if not sep:
            raise ParseFailure(f"--pairs item {item!r} is not of the form i:j")
        try:
            a, b = int(i), int(j)
        except ValueError as exc:
            raise ParseFailure(f"--pairs: {exc}") from exc
        if not (0 <= a < n and 0 <= b < n):
            raise ParseFailure(f"--pairs index out of range for {n} points: {item}")
        pairs.append((a, b))
    return pairs


def _require_finite(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise NumericFailure("non-finite value in output")


def _write_rows(out, header: str, rows) -> None:
    out.write(header + "\n")
    for row in rows:
        out.write(row + "\n")


def _feature_matrix(points, w, kind, threads):
    xs = np.array([p.x for p in points])
    ns = np.array([p.n for p in points])
    if threads is not None:
        kernels.set_threads(threads)
    blocks = []
    if kind in ("mav", "both"):
        blocks.append(kernels.pairwise_mav(xs, ns, w.as_array())[..., None])
    if kind in ("triple", "both"):
        blocks.append(kernels.pairwise_triple(xs, ns))
    return blocks[0] if len(blocks) == 1 else np.concatenate(blocks, axis=-1)


def cmd_dist(args, out) -> int:
    points = load_points(args.points)
    w = parse_weights(args.weights, args.strict)
    if args.pairs is not None:
        pairs = parse_pairs(args.pairs, len(points))
        rows = []
        for i, j in pairs:
            mu = mav_distance(w, points[i], points[j])
            _require_finite(np.array([mu]))
            rows.append(f"{i},{j},{_fmt(mu)}")
        _write_rows(out, "i,j,mav", rows)
        return EXIT_OK
    values = _feature_matrix(points, w, "mav", args.threads)
    _require_finite(values)
    n = len(points)
    rows = [
        f"{i},{j},{_fmt(values[i, j, 0])}" for i in range(n) for j in range(n)
    ]
    _write_rows(out, "i,j,mav", rows)
    return EXIT_OK


_HEADERS = {
    "mav": "i,j,mav",
    "triple": "i,j,i1,i2,i3",
    "both": "i,j,mav,i1,i2,i3",
}


def cmd_features(args, out) -> int:
    points = load_points(args.points)
    w = None
    if args.kind in ("mav", "both"):
        w = parse_weights(args.weights, args.strict)
    values = _feature_matrix(points, w, args.kind, args.threads)
    _require_finite(values)
    n = len(points)
    rows = [
        f"{i},{j}," + ",".join(_fmt(v) for v in values[i, j])
        for i in range(n)
        for j in range(n)
    ]
    _write_rows(out, _HEADERS[args.kind], rows)
    return EXIT_OK


def cmd_check(args, out) -> int:
    seed = args.seed
    if seed is None:
        env = os.environ.get("M3_SEED", "").strip()
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise ParseFailure(f"M3_SEED is not an integer: {env!r}")
    reports = []
    if args.suite in ("all", "invariance"):
        reports.append(run_invariance_suite(seed, args.trials))
    if args.suite in ("all", "minimality"):
        reports.append(run_minimality_suite(seed, args.trials))
    if args.suite in ("all", "classification"):
        dim = len(stabilizer_invariant_basis(PositionOrientation((0, 0, 0), (0, 0, 1))))
        out.write(f"classification basis dimension {dim}\n")
        reports.append(run_classification_check(seed))
    for report in reports:
        out.write(report.to_line() + "\n")
    return EXIT_OK if all(r.failures == 0 for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posori",
        description="Invariant distances and features on position-orientation clouds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("points", help="line-delimited JSON point file")
        p.add_argument(
            "--weights",
            default="1,1,1,0,0",
            help="five metric weights w1,w2,w3,w4,w5 (default 1,1,1,0,0)",
        )
        p.add_argument(
            "--strict",
            action="store_true",
            help="reject weights violating the positivity constraints (exit 4)",
        )
        p.add_argument("--threads", type=int, default=None, help="kernel thread cap")
        p.add_argument("-o", "--output", default=None, help="write CSV here instead of stdout")

    p_dist = sub.add_parser("dist", help="pairwise mav distances")
    add_common(p_dist)
    p_dist.add_argument(
        "--pairs", default=None, help="only these pairs, e.g. 0:1,0:2 (default: all)"
    )
    p_dist.set_defaults(func=cmd_dist)

    p_feat = sub.add_parser("features", help="pairwise invariant features")
    add_common(p_feat)
    p_feat.add_argument(
        "--kind", choices=("mav", "triple", "both"), default="mav", help="feature block"
    )
    p_feat.set_defaults(func=cmd_features)

    p_check = sub.add_parser("check", help="run the certification suites")
    p_check.add_argument("--suite", choices=_SUITES, default="all")
    p_check.add_argument(
        "--seed", type=int, default=None, help="suite seed (default: $M3_SEED or 0)"
    )
    p_check.add_argument("--trials", type=int, default=1000)
    p_check.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    close = False
    if getattr(args, "output", None):
        out = open(args.output, "w", encoding="utf-8", newline="")
        close = True
    try:
        return args.func(args, out)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConstraintFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except NumericFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
