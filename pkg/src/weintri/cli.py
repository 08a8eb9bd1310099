"""Command-line front end: run the audit, export field samples as CSV.

Exit codes: 0 when no check failed (flagged findings do not fail a run),
1 when at least one check failed, 2 for configuration or I/O problems.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .config import STEP2_MODES, RunConfig
from .liouville import LiouvilleField
from .regions import default_cap_region, default_sector_region, sample_boundary
from .report import VerificationReport
from .sphere import ChartPoint, fubini_study_potential, omega_from_potential
from .verify import full_verify

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

FIELD_SELECTORS = ("potential", "omega-density", "liouville-field", "boundary-samples")

_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig)}


def load_config_file(path: str) -> dict:
    """Parse a key=value configuration file (# starts a comment)."""
    values: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, value)
    return values


def _parse_value(key: str, value: str):
    kind = _CONFIG_TYPES[key]
    if kind == "int":
        return int(value)
    if kind == "float":
        return float(value)
    return value


def _build_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        values.update(load_config_file(args.config))
    for name in _CONFIG_TYPES:
        cli_value = getattr(args, name, None)
        if cli_value is not None:
            values[name] = cli_value
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--g", type=int, help="base-factor genus (default 0)")
    parser.add_argument("--h", type=int, help="fiber-factor genus (default 0)")
    parser.add_argument("--cap-radius", dest="cap_radius", type=float,
                        help="geodesic cap radius (default pi/4)")
    parser.add_argument("--step2-mode", dest="step2_mode", choices=STEP2_MODES,
                        help="second-factor variant (default both)")
    parser.add_argument("--fd-step", dest="fd_step", type=float,
                        help="finite-difference step (default 1e-4)")
    parser.add_argument("--samples-per-stratum", dest="samples_per_stratum", type=int,
                        help="boundary samples per stratum (default 256)")
    parser.add_argument("--partner-samples", dest="partner_samples", type=int,
                        help="interior partner samples per stratum (default 4)")
    parser.add_argument("--sweep-samples", dest="sweep_samples", type=int,
                        help="random points per identity sweep (default 1000)")
    parser.add_argument("--quadrature-target", dest="quadrature_target", type=float,
                        help="absolute quadrature error target (default 1e-7)")
    parser.add_argument("--threshold", type=float,
                        help="outwardness pass threshold (default 0)")
    parser.add_argument("--seed", type=int, help="sampling seed (default 0)")


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        cfg = _build_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = full_verify(cfg)

    try:
        if args.json_out:
            Path(args.json_out).write_text(report.to_json(), encoding="utf-8")
        if args.markdown_out:
            Path(args.markdown_out).write_text(report.to_markdown(), encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE

    summary = report.summary
    for e in report.entries:
        print(f"[{e.status:>7}] {e.id}: {e.description}")
    print(
        f"{summary['total']} checks: {summary['pass']} pass, {summary['fail']} fail, "
        f"{summary['flagged']} flagged, {summary['skipped']} skipped"
    )
    return EXIT_CHECK_FAILED if report.has_failures else EXIT_OK


def _grid(extent: float, resolution: int) -> list[float]:
    return [(-extent + 2.0 * extent * k / (resolution - 1)) for k in range(resolution)]


def export_fields(
    selector: str,
    out_path: str,
    extent: float = 3.0,
    resolution: int = 101,
    boundary_region: str = "B1",
    boundary_samples: int = 8,
    cap_radius: float = math.pi / 4.0,
) -> int:
    """Write the selected field samples as CSV; returns the data row count."""
    if selector not in FIELD_SELECTORS:
        raise ValueError(f"unknown selector {selector!r}; choose from {FIELD_SELECTORS}")
    fs = fubini_study_potential()
    rows: list[list] = []
    if selector == "potential":
        header = ["u", "v", "value"]
        for v in _grid(extent, resolution):
            for u in _grid(extent, resolution):
                rows.append([u, v, fs.evaluate(ChartPoint(u, v))])
    elif selector == "omega-density":
        header = ["u", "v", "density"]
        omega = omega_from_potential(fs)
        for v in _grid(extent, resolution):
            for u in _grid(extent, resolution):
                rows.append([u, v, omega.density(ChartPoint(u, v))])
    elif selector == "liouville-field":
        header = ["u", "v", "x_u", "x_v"]
        field = LiouvilleField(fs)
        for v in _grid(extent, resolution):
            for u in _grid(extent, resolution):
                xu, xv = field.components(ChartPoint(u, v))
                rows.append([u, v, xu, xv])
    else:
        header = ["region", "arc", "x", "y", "z", "normal_x", "normal_y", "normal_z"]
        name = boundary_region.upper()
        kind, index = name[0], int(name[1:])
        if kind == "B":
            region = default_sector_region(index)
        elif kind == "N":
            region = default_cap_region(index, cap_radius)
        else:
            raise ValueError(f"unknown region {boundary_region!r}; use B1..B3 or N1..N3")
        for s in sample_boundary(region, boundary_samples):
            n = np.asarray(s.outward_normal, dtype=float)
            rows.append([name, s.arc, s.point.x, s.point.y, s.point.z, n[0], n[1], n[2]])

    with open(out_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    return len(rows)


def _cmd_export(args: argparse.Namespace) -> int:
    try:
        count = export_fields(
            args.selector,
            args.out,
            extent=args.extent,
            resolution=args.resolution,
            boundary_region=args.region,
            boundary_samples=args.boundary_samples,
            cap_radius=args.cap_radius if args.cap_radius is not None else math.pi / 4.0,
        )
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {count} data rows to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weintri",
        description=(
            "Build trisection data for surface products and audit the explicit "
            "Weinstein structure on the sphere product numerically."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the verification pipeline")
    _add_config_flags(run_p)
    run_p.add_argument("--json-out", dest="json_out", help="write the JSON report here")
    run_p.add_argument("--markdown-out", dest="markdown_out",
                       help="write a markdown rendering here")
    run_p.set_defaults(func=_cmd_run)

    export_p = sub.add_parser("export", help="export field samples as CSV")
    export_p.add_argument("--selector", required=True, choices=FIELD_SELECTORS)
    export_p.add_argument("--out", required=True, help="output CSV path")
    export_p.add_argument("--extent", type=float, default=3.0,
                          help="half-width of the chart grid (default 3)")
    export_p.add_argument("--resolution", type=int, default=101,
                          help="grid points per axis (default 101)")
    export_p.add_argument("--region", default="B1",
                          help="region for boundary-samples (B1..B3, N1..N3)")
    export_p.add_argument("--boundary-samples", dest="boundary_samples", type=int,
                          default=8, help="samples per boundary component (default 8)")
    export_p.add_argument("--cap-radius", dest="cap_radius", type=float,
                          help="cap radius for N regions (default pi/4)")
    export_p.set_defaults(func=_cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
