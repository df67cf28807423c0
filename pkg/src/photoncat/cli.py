"""Command-line interface.

Subcommands: ``simulate`` (pipeline run + artifact export), ``wigner`` (grid
of a stored state), ``tomo`` (synthetic tomography round trip), ``report``
(pretty-print a stored report).  Exit codes: 0 success, 1 validation error,
2 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .errors import ConfigError, PhotoncatError
from .fock import load_state
from .pipeline import load_config, run_and_export, run_tomography_check
from .wigner import wigner_grid, write_grid_csv

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photoncat",
        description="Photon-addition cat-state simulation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run the pipeline and export artifacts")
    p_sim.add_argument("--config", required=True, help="experiment config JSON")
    p_sim.add_argument("--out", required=True, help="output directory")

    p_wig = sub.add_parser("wigner", help="evaluate a Wigner grid for a stored state")
    p_wig.add_argument("--state", required=True, help="state JSON file")
    p_wig.add_argument("--out", required=True, help="output CSV path")
    p_wig.add_argument("--range", type=float, default=5.0, dest="half_range",
                       help="half-width of the square grid (default 5)")
    p_wig.add_argument("--points", type=int, default=201,
                       help="grid points per axis (default 201)")

    p_tomo = sub.add_parser("tomo", help="sample, reconstruct, and compare per row")
    p_tomo.add_argument("--config", required=True, help="experiment config JSON")
    p_tomo.add_argument("--out", required=True, help="output directory")

    p_rep = sub.add_parser("report", help="print a stored report as a table")
    p_rep.add_argument("--in", dest="in_dir", required=True,
                       help="directory containing report.json")
    return parser


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    reports, paths = run_and_export(config, args.out)
    failed = [r for r in reports if r.error is not None]
    print(f"wrote {len(paths)} file(s) to {args.out}")
    for report in failed:
        print(f"row {report.label} failed: {report.error}", file=sys.stderr)
    return EXIT_OK


def _cmd_wigner(args) -> int:
    state = load_state(args.state)
    grid = wigner_grid(
        state,
        x_range=(-args.half_range, args.half_range),
        p_range=(-args.half_range, args.half_range),
        nx=args.points,
        n_p=args.points,
    )
    csv_path, sidecar = write_grid_csv(grid, args.out)
    print(f"wrote {csv_path} and {sidecar}")
    return EXIT_OK


def _cmd_tomo(args) -> int:
    config = load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    reports = run_tomography_check(config, out_dir=args.out)
    payload = {"rows": [dataclasses.asdict(r) for r in reports]}
    report_path = os.path.join(args.out, "tomo_report.json")
    with open(report_path, "w") as fh:
        json.dump(payload, fh, indent=1)
    print(f"wrote {report_path}")
    for report in reports:
        if report.error is not None:
            print(f"row {report.label} failed: {report.error}", file=sys.stderr)
        else:
            print(
                f"{report.label}: fidelity={report.fidelity:.4f} "
                f"w00 truth={report.w00_truth:+.4f} recon={report.w00_recon:+.4f}"
            )
    return EXIT_OK


def _format_cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def _cmd_report(args) -> int:
    path = os.path.join(args.in_dir, "report.json")
    with open(path) as fh:
        payload = json.load(fh)
    rows = payload.get("rows", [])
    if not rows:
        print("report is empty")
        return EXIT_OK
    columns = ["label", "purity_opo", "purity_empty", "purity_add", "w00",
               "f_cat", "cat_alpha", "f_sq_add", "error"]
    table = [[_format_cell(row.get(col)) for col in columns] for row in rows]
    widths = [max(len(col), *(len(line[i]) for line in table)) for i, col in enumerate(columns)]
    print("  ".join(col.ljust(w) for col, w in zip(columns, widths)))
    for line in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "wigner": _cmd_wigner,
        "tomo": _cmd_tomo,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PhotoncatError, OSError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
