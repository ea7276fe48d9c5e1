"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 assertable property failure,
3 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .ahn import MAX_AHN_CUTOFF, side_by_side_report
from .channel import (MAX_CHOI_SIDE, MAX_KRAUS_ELEMENTS, MAX_KRAUS_OPS, R_MAX, ChannelSpec)
from .errors import BudgetError
from .measures import DISTANCES, MEASURES
from .report import PropertyReport
from .states import PRESETS
from .sweep import OUTPUT_DIR_ENV, SweepConfig, resolve_output, run_sweep, versions, write_sweep
from .verify import oracle_report, run_verify

EXIT_OK, EXIT_USAGE, EXIT_PROPERTY, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noninertial", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    sw = sub.add_parser("sweep", help="resource measures over an acceleration grid")
    sw.add_argument("--config", help="JSON file with sweep settings; flags override it")
    sw.add_argument("--state", help=f"preset ({', '.join(PRESETS)}), 'random' or a matrix file")
    sw.add_argument("--dims", type=_ints, help="subsystem dimensions for a custom matrix")
    sw.add_argument("--accelerated", type=_ints, help="accelerated party indices (default: last)")
    sw.add_argument("--bipartition", type=_ints, help="transposed parties for negativity")
    sw.add_argument("--r-min", type=float)
    sw.add_argument("--r-max", type=float)
    sw.add_argument("--r-count", type=int)
    sw.add_argument("--omega-grid", type=_floats, help="comma-separated frequencies, mapped to r")
    sw.add_argument("--measures", type=_names, help=f"comma-separated from {', '.join(MEASURES)}")
    sw.add_argument("--epsilon", type=float)
    sw.add_argument("--seed", type=int)
    sw.add_argument("--output", help=f"output file (default: ${OUTPUT_DIR_ENV}/sweep.<fmt> or stdout)")
    sw.add_argument("--format", choices=("csv", "json"))
    sw.add_argument("--jobs", type=int, help="worker processes for grid points")

    ve = sub.add_parser("verify", help="run every property suite on the default qubit setup")
    ve.add_argument("--r", type=float, default=0.881374)
    ve.add_argument("--samples", type=int, default=50)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--epsilon", type=float, default=1e-10)
    ve.add_argument("--inject-fault", type=int, metavar="INDEX",
                    help="drop this Kraus operator to exercise failure reporting")
    ve.add_argument("--output", help="write the JSON summary here")

    orc = sub.add_parser("oracle", help="Kraus channel against isometry-then-trace")
    orc.add_argument("--dims", type=_ints, default=[2, 2])
    orc.add_argument("--accelerated", type=_ints, default=[1])
    orc.add_argument("--r", type=_floats, default=[0.5], help="one value, or one per accelerated party")
    orc.add_argument("--samples", type=int, default=50)
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--epsilon", type=float, default=1e-10)
    orc.add_argument("--method", choices=("closed", "squeezing"), default="closed")

    ah = sub.add_parser("ahn", help="trace of the earlier Kraus family on |Phi+>")
    ah.add_argument("--r-grid", type=_floats, default=[0.0, 0.4, 0.881374, 1.5, 2.0])
    ah.add_argument("--epsilon", type=float, default=1e-10)
    ah.add_argument("--output")
    ah.add_argument("--format", choices=("csv", "json"), default="csv")

    sub.add_parser("info", help="presets, measures and budget limits")
    return parser


def _emit(text: str, target: str | None) -> None:
    if target is None:
        sys.stdout.write(text)
        return
    with open(target, "w", newline="") as fh:
        fh.write(text)


def cmd_sweep(args) -> int:
    overrides = {"state": args.state, "dims": args.dims, "accelerated": args.accelerated,
                 "bipartition": args.bipartition, "r_min": args.r_min, "r_max": args.r_max,
                 "r_count": args.r_count, "omega_grid": args.omega_grid,
                 "measures": args.measures, "epsilon": args.epsilon, "seed": args.seed,
                 "output": args.output, "format": args.format, "jobs": args.jobs}
    if args.config:
        cfg = SweepConfig.from_json(args.config, **overrides)
    else:
        cfg = SweepConfig(**{k: v for k, v in overrides.items() if v is not None})
    text = write_sweep(run_sweep(cfg), cfg)
    if resolve_output(cfg.output, f"sweep.{cfg.format}") is None:
        sys.stdout.write(text)
    return EXIT_OK


def _finish(reports: list[PropertyReport], output: str | None) -> int:
    for rep in reports:
        print(rep.line())
        for part in rep.parts:
            print("    " + part.line())
        for note in rep.notes:
            print(f"    note: {note}")
    failed = [r.property for r in reports if not r.passed]
    if output:
        doc = {"reports": [r.as_dict() for r in reports], "failed": failed, "versions": versions()}
        _emit(json.dumps(doc, indent=2) + "\n", output)
    if failed:
        print("failed: " + ", ".join(failed))
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = run_verify(args.r, args.samples, args.seed, args.epsilon, args.inject_fault)
    return _finish(reports, args.output)


def cmd_oracle(args) -> int:
    r = args.r[0] if len(args.r) == 1 else tuple(args.r)
    spec = ChannelSpec.build(tuple(args.dims), tuple(args.accelerated), r, args.epsilon)
    return _finish([oracle_report(spec, args.samples, args.seed, args.method)], None)


def cmd_ahn(args) -> int:
    rows = side_by_side_report(args.r_grid, args.epsilon)
    if args.format == "json":
        text = json.dumps({"rows": rows, "versions": versions()}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([v if isinstance(v, (str, int)) else "%.12g" % v for v in row.values()])
        text = buf.getvalue()
    target = resolve_output(args.output, f"ahn.{args.format}")
    _emit(text, target)
    if target is not None:
        for row in rows:
            print(f"{row['state']:14s} r={row['r']:<9g} trace={row['ahn_trace']:.12f} "
                  f"channel_deficit={row['channel_deficit']:.2e} {row['verdict']}")
    return EXIT_OK


def cmd_info(args) -> int:
    print("presets: " + ", ".join(PRESETS) + ", random, <matrix file>")
    print("measures: " + ", ".join(MEASURES))
    print("distances: " + ", ".join(DISTANCES))
    print(f"r max: {R_MAX}")
    print(f"kraus operators max: {MAX_KRAUS_OPS}")
    print(f"kraus elements max: {MAX_KRAUS_ELEMENTS}")
    print(f"choi side max: {MAX_CHOI_SIDE}")
    print(f"earlier-map cutoff max: {MAX_AHN_CUTOFF}")
    print(f"output directory variable: {OUTPUT_DIR_ENV}")
    for key, value in versions().items():
        print(f"{key}: {value}")
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "verify": cmd_verify, "oracle": cmd_oracle,
            "ahn": cmd_ahn, "info": cmd_info}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BudgetError as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
