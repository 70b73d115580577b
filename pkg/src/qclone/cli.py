"""Command-line front end.

Subcommands: ``bounds`` (evaluate a bound on a point or grid), ``figure1``
(the multi-copy equal-error curves, optionally rendered to SVG), ``maxima``
(locate the worst-case overlap for a bound), ``optimize`` (search for the
best copying machine), and ``verify`` (run the property suite).  Output is
CSV by default or JSON with ``--format json``; all reals are rendered with
12 significant digits and runs are deterministic given flags and seed.

Exit codes: 0 success, 1 runtime/domain failure (including a failed verify
run), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import decimal
import json
import math
import os
import sys
from typing import Iterable, Sequence

from . import bounds, verify
from .hilbert import CopyScenario
from .machine import Objective, optimize_machine

SCHEMA_VERSION = 1

# CLI-facing names for the bound kinds.
KIND_FLAGS = {
    "sum": bounds.SUM,
    "equal-exact": bounds.EQUAL_EXACT,
    "equal-simplified": bounds.EQUAL_SIMPLIFIED,
    "perfect-first": bounds.PERFECT_FIRST,
}

FIGURE1_DEFAULT_N = (1, 2, 3, 5, 10, 100)


def format_real(x: float) -> str:
    """Render a real with exactly 12 significant digits, zero-padded.

    Values smaller than 1e-4 in magnitude (residuals, tiny gaps) switch to
    scientific notation to avoid long runs of leading zeros.
    """
    x = float(x)
    if x == 0.0:
        return "0"
    if not math.isfinite(x):
        return repr(x)
    if abs(x) < 1e-4 or abs(x) >= 1e16:
        return f"{x:.11e}"
    return format(decimal.Decimal(f"{x:.11e}"), "f")


def _json_real(x: float) -> float:
    """Round to 12 significant digits for stable JSON output."""
    return float(format_real(x))


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    return int(os.environ.get("QCLONE_SEED", "0"))


def _open_output(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit_table(rows: list[dict], columns: Sequence[str], args) -> None:
    stream, close = _open_output(args.output)
    try:
        if args.format == "json":
            doc = {
                "schema_version": SCHEMA_VERSION,
                "rows": [
                    {c: (_json_real(r[c]) if isinstance(r[c], float) else r[c]) for c in columns}
                    for r in rows
                ],
            }
            json.dump(doc, stream, indent=2)
            stream.write("\n")
        else:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(columns)
            for r in rows:
                writer.writerow(
                    [format_real(r[c]) if isinstance(r[c], float) else r[c] for c in columns]
                )
    finally:
        if close:
            stream.close()


def _emit_document(doc: dict, args) -> None:
    """Structured single-record output: JSON, or flat key,value CSV."""
    stream, close = _open_output(args.output)
    try:
        if args.format == "json":
            json.dump({"schema_version": SCHEMA_VERSION, **_round_reals(doc)}, stream, indent=2)
            stream.write("\n")
        else:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(["field", "value"])
            for key, value in _flatten(doc):
                writer.writerow([key, format_real(value) if isinstance(value, float) else value])
    finally:
        if close:
            stream.close()


def _round_reals(obj):
    if isinstance(obj, float):
        return _json_real(obj)
    if isinstance(obj, dict):
        return {k: _round_reals(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_reals(v) for v in obj]
    return obj


def _flatten(obj, prefix: str = "") -> Iterable[tuple[str, object]]:
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}." if prefix or True else k)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), obj


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"value must lie in [0, 1], got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"value must be a positive integer, got {text}")
    return value


def _n_list(text: str) -> list[int]:
    try:
        ns = [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad n list {text!r}") from exc
    if not ns or any(n < 1 for n in ns):
        raise argparse.ArgumentTypeError(f"n list must contain positive integers, got {text!r}")
    return ns


def _z_values(args) -> list[float]:
    if args.z is not None:
        return [args.z]
    points = args.grid
    return [i / (points - 1) for i in range(points)]


def cmd_bounds(args) -> int:
    kind = KIND_FLAGS[args.kind]
    rows = [
        {"z": z, "n": args.n, "kind": kind, "value": bounds.evaluate_bound(kind, z, args.n)}
        for z in _z_values(args)
    ]
    _emit_table(rows, ("z", "n", "kind", "value"), args)
    return 0


def cmd_figure1(args) -> int:
    points = args.points
    grid = [i / (points - 1) for i in range(points)]
    n_values = sorted(set(args.n_list))
    rows = [
        {"z": z, "n": n, "x_min": bounds.x_equal_min_simplified(z, n)}
        for z in grid
        for n in n_values
    ]
    rows.sort(key=lambda r: (r["z"], r["n"]))
    _emit_table(rows, ("z", "n", "x_min"), args)
    if args.plot:
        _render_figure1(rows, n_values, args.plot)
    return 0


def _render_figure1(rows: list[dict], n_values: list[int], path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for n in n_values:
        zs = [r["z"] for r in rows if r["n"] == n]
        xs = [r["x_min"] for r in rows if r["n"] == n]
        ax.plot(zs, xs, label=f"n = {n}")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 0.45)
    ax.set_xlabel("overlap |z|")
    ax.set_ylabel("minimal equal error")
    ax.legend(loc="upper left", frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def cmd_maxima(args) -> int:
    kind = KIND_FLAGS[args.kind]
    if kind == bounds.SUM:
        z_star, value = bounds.sum_min_peak(args.n)
    else:
        z_star, value = bounds.maximize_over_z(kind, args.n, tol=args.tol)
    _emit_table(
        [{"kind": kind, "n": args.n, "z_star": z_star, "value": value}],
        ("kind", "n", "z_star", "value"),
        args,
    )
    return 0


def cmd_optimize(args) -> int:
    seed = _resolve_seed(args.seed)
    scenario = CopyScenario(z=args.z, n=args.n, d_in=args.d_in, d_x=args.d_x)
    objective = Objective(kind=args.objective, w1=args.w1, w2=args.w2)
    result = optimize_machine(scenario, objective, starts=args.starts, seed=seed)
    doc = {
        "z": scenario.z,
        "n": scenario.n,
        "d_in": scenario.d_in,
        "d_x": scenario.d_x,
        "objective": objective.kind,
        "objective_value": result.objective_value,
        "bound_value": result.bound_value,
        "gap": result.gap,
        "x1": result.errors.x1,
        "x2": result.errors.x2,
        "starts": result.starts,
        "seed": seed,
        "converged": result.converged,
    }
    if objective.kind == "weighted":
        doc["w1"], doc["w2"] = objective.w1, objective.w2
    _emit_document(doc, args)
    return 0


VERIFY_PROFILES = {
    # name: (z points, n list, samples per cell)
    "quick": (11, (1, 2, 3), 10),
    "full": (11, (1, 2, 3), 152),
}


def cmd_verify(args) -> int:
    seed = _resolve_seed(args.seed)
    mutated = args.profile == "self-test"
    profile = "quick" if mutated else args.profile
    z_points, n_list, samples = VERIFY_PROFILES[profile]
    z_grid = [i / (z_points - 1) for i in range(z_points)]

    rhs_fn = None
    if mutated:
        # Deliberately broken constraint (cross term dropped); the suite
        # must detect it, so this profile is expected to exit nonzero.
        def rhs_fn(z, n, e):
            t = z ** (n + 1)
            c1 = math.sqrt(max(0.0, 1 - e[0] ** 2))
            c2 = math.sqrt(max(0.0, 1 - e[1] ** 2))
            return t * c1 * c2 + e[0] * e[1]

    report = verify.run_suite(
        z_grid=z_grid, n_list=n_list, samples_per_cell=samples, seed=seed, rhs_fn=rhs_fn
    )
    doc = {"profile": args.profile, "seed": seed, **report.to_dict()}
    _emit_document(doc, args)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qclone",
        description="Evaluate, verify and numerically probe lower bounds on quantum-copying noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default=None, help="output file (default: stdout)")

    p_bounds = sub.add_parser("bounds", help="evaluate one bound at a point or on a z grid")
    p_bounds.add_argument("--kind", choices=sorted(KIND_FLAGS), required=True)
    group = p_bounds.add_mutually_exclusive_group(required=True)
    group.add_argument("--z", type=_unit_interval, help="single overlap value in [0, 1]")
    group.add_argument("--grid", type=_positive_int, help="number of uniform z points on [0, 1]")
    p_bounds.add_argument("--n", type=_positive_int, default=1, help="number of copies")
    add_common(p_bounds)
    p_bounds.set_defaults(fn=cmd_bounds)

    p_fig = sub.add_parser("figure1", help="equal-error curves for several copy counts")
    p_fig.add_argument("--n-list", type=_n_list, default=list(FIGURE1_DEFAULT_N),
                       help="comma-separated copy counts (default 1,2,3,5,10,100)")
    p_fig.add_argument("--points", type=int, default=501, help="z grid size (>= 2)")
    p_fig.add_argument("--plot", default=None, help="also render the curves to this SVG file")
    add_common(p_fig)
    p_fig.set_defaults(fn=cmd_figure1)

    p_max = sub.add_parser("maxima", help="worst-case overlap for a bound")
    p_max.add_argument("--kind", choices=sorted(KIND_FLAGS), required=True)
    p_max.add_argument("--n", type=_positive_int, default=1)
    p_max.add_argument("--tol", type=float, default=1e-10)
    add_common(p_max)
    p_max.set_defaults(fn=cmd_maxima)

    p_opt = sub.add_parser("optimize", help="search for the least-noisy machine")
    p_opt.add_argument("--z", type=_unit_interval, required=True)
    p_opt.add_argument("--n", type=_positive_int, default=1)
    p_opt.add_argument("--d-in", type=_positive_int, default=2)
    p_opt.add_argument("--d-x", type=_positive_int, default=2)
    p_opt.add_argument("--objective", choices=("sum", "max", "weighted"), default="sum")
    p_opt.add_argument("--w1", type=float, default=1.0)
    p_opt.add_argument("--w2", type=float, default=1.0)
    p_opt.add_argument("--starts", type=_positive_int, default=16)
    p_opt.add_argument("--seed", type=int, default=None,
                       help="RNG seed (default: QCLONE_SEED env var, else 0)")
    add_common(p_opt)
    p_opt.set_defaults(fn=cmd_optimize)

    p_ver = sub.add_parser("verify", help="run the property-check suite")
    p_ver.add_argument("--profile", choices=("quick", "full", "self-test"), default="quick")
    p_ver.add_argument("--seed", type=int, default=None,
                       help="RNG seed (default: QCLONE_SEED env var, else 0)")
    add_common(p_ver)
    p_ver.set_defaults(fn=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bounds" and args.kind == "equal-exact" and args.n != 1:
        parser.error("--kind equal-exact is defined for --n 1 only")
    if args.command == "figure1" and args.points < 2:
        parser.error("--points must be >= 2")
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
