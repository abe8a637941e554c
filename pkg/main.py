#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
gbec-lab - generalized Bose-Einstein condensation numerical lab
"""

import os
import sys
import json
import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.table import Table

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from gbec_lab.utils.logging import setup_logging, get_logger
from gbec_lab.config.config_loader import (
    ConfigLoader,
    RunConfig,
    parse_grid,
    parse_ladder,
    parse_number,
)
from gbec_lab.core.errors import ConfigError, GbecError
from gbec_lab.core.general_box import BoxExponents, classify
from gbec_lab.tools.sweep import (
    CondensateReport,
    SweepTable,
    figure_tables,
    format_value,
    report_transitions,
    run_sweep,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ROW_FAILURES = 2

DEFAULT_GRIDS = {
    "bose-fn": "1e-6:10:50",
    "isotropic": "0.01:1.5:150",
    "channel": "0.005:1.0:200",
    "cigar": "0.01:1.1:220",
    "prism": "0.5",
    "box": "0.5",
    "oracle": "0.2:0.8:3",
}

DEFAULT_OUTPUTS = {
    "prism": "prism_scaling.csv",
    "box": "box_scaling.csv",
}

COLUMNS_HELP = """\
CSV columns (see FORMATS.md):
  bose-fn    alpha, F_half, F_3half, F_3, F_half_asymptotic
  isotropic  t, f0, alpha, f_p1 [, f0_exact, fg_exact]
  channel    t, f0, f_s0, f_s1, f_s2 [, f0_exact, fg_exact]
  cigar      t, f0, fg [, fg_tl with --bz] [, f0_exact, fg_exact]
  prism      L_over_a, max_state_fraction, band_fraction, alpha
  box        H, gamma, max_state_density, k0, s0
  oracle     t, f0_analytic, f0_exact, fg_analytic, fg_exact
"""

console = Console()


def render_report(report: CondensateReport) -> None:
    """Print a transition report as a table"""
    table = Table(title=f"{report.geometry} transitions")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for key, value in report.to_dict().items():
        if isinstance(value, float):
            value = format_value(value)
        table.add_row(key, str(value))
    console.print(table)


def render_table(sweep: SweepTable, title: str) -> None:
    """Print a sweep table"""
    table = Table(title=title)
    for name in sweep.header:
        table.add_column(name, justify="right")
    for row in sweep.rows:
        table.add_row(*(f"{v:.6g}" for v in row))
    console.print(table)


def emit(sweep: SweepTable, output: Optional[str], fmt: str) -> None:
    """Write a table to a file, or to stdout without one"""
    if output:
        sweep.write(output, fmt)
    else:
        sys.stdout.write(sweep.to_json() + "\n" if fmt == "json" else sweep.to_csv())


def finish(tables: List[SweepTable]) -> int:
    """Exit code, with a failure summary on stderr for failed rows"""
    failures = [t.failure_summary() for t in tables if not t.ok]
    if not failures:
        return EXIT_OK
    summary = failures[0] if len(failures) == 1 else {"tables": failures}
    sys.stderr.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_ROW_FAILURES


def build_run_config(args: argparse.Namespace, config_loader: ConfigLoader) -> RunConfig:
    """
    Merge flags with the run section of the config file

    Priority: flags > environment > config file > defaults
    """
    run_section: Dict[str, Any] = config_loader.get("run", {}) or {}
    geometry = args.command

    def pick(name: str, default: Any = None) -> Any:
        value = getattr(args, name, None)
        if value is None or value is False:
            value = run_section.get(name, value)
        return default if value is None else value

    def number(name: str, default: Any = None) -> Optional[float]:
        value = pick(name, default)
        return None if value is None else parse_number(value)

    if geometry == "bose-fn":
        grid_text = pick("alpha", DEFAULT_GRIDS[geometry])
    else:
        grid_text = pick("t", DEFAULT_GRIDS[geometry])
    t_min, t_max, steps = parse_grid(grid_text)

    cfg = RunConfig(
        geometry=geometry,
        n_particles=number("n"),
        delta=number("delta"),
        bz=bool(pick("bz", False)),
        bz_gamma=number("gamma", 1.6),
        c_const=number("c", config_loader.get("cigar.c_const", 1.0)),
        d_over_a=number("d", 10.0),
        l_ladder=parse_ladder(pick("l", "1e3,1e4,1e5")),
        nu=str(pick("nu", "0.6,0.2,0.2")),
        h_ladder=parse_ladder(pick("h", "1e4,1e5,1e6,1e7,1e8,1e9,1e10")),
        cutoff_c=number("cutoff_c", 1e4),
        oracle_geometry=str(pick("geometry", "cigar")),
        t_min=t_min,
        t_max=t_max,
        steps=steps,
        output=pick("out", DEFAULT_OUTPUTS.get(geometry)),
        fmt=str(pick("format", config_loader.get_sweep_config().format)),
        jobs=int(pick("jobs", config_loader.get_sweep_config().jobs)),
        oracle=bool(pick("oracle", False)),
    )
    return cfg.validate()


def run_box(args: argparse.Namespace, cfg: RunConfig) -> int:
    """box classify [--scan]"""
    nu = BoxExponents.parse(cfg.nu)
    kind = classify(nu)
    table = Table(title="box classification")
    table.add_column("nu")
    table.add_column("class")
    table.add_column("eta = 2 nu1 - 1", justify="right")
    table.add_row(cfg.nu, kind.value, f"{nu.eta:.6g}")
    console.print(table)

    if not args.scan:
        return EXIT_OK
    sweep = run_sweep(cfg)
    emit(sweep, cfg.output, cfg.fmt)
    return finish([sweep])


def run_oracle(args: argparse.Namespace, cfg: RunConfig, config_loader: ConfigLoader) -> int:
    """oracle compare"""
    sweep = run_sweep(cfg, config_loader.get_oracle_config())
    render_table(sweep, f"{cfg.oracle_geometry}: analytic vs exact")
    if args.csv:
        sweep.write(args.csv, "csv")
    return finish([sweep])


def run_figures(args: argparse.Namespace, config_loader: ConfigLoader) -> int:
    """Regenerate fig1 ... fig5"""
    sweep_config = config_loader.get_sweep_config()
    outdir = Path(args.outdir or sweep_config.outdir)
    jobs = args.jobs or sweep_config.jobs
    tables = figure_tables(jobs)
    for name, sweep in tables.items():
        sweep.write(str(outdir / f"{name}.csv"), "csv")
    return finish(list(tables.values()))


def run_command(args: argparse.Namespace) -> int:
    """Dispatch one subcommand; returns the exit code"""
    config_loader = ConfigLoader(config_file=args.config)
    config_loader.load_config()
    if not args.verbose:
        try:
            setup_logging(str(config_loader.get("logging.level", "INFO")))
        except ValueError as e:
            raise ConfigError(str(e)) from e

    if args.command == "figures":
        return run_figures(args, config_loader)

    cfg = build_run_config(args, config_loader)
    logger.debug(f"Run configuration: {cfg}")

    if getattr(args, "report", False):
        render_report(report_transitions(cfg))
        return EXIT_OK
    if cfg.geometry == "box":
        return run_box(args, cfg)
    if cfg.geometry == "oracle":
        return run_oracle(args, cfg, config_loader)

    sweep = run_sweep(cfg, config_loader.get_oracle_config())
    emit(sweep, cfg.output, cfg.fmt)
    return finish([sweep])


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--out', '-o', type=str, default=None,
                        help='Output file (default: stdout)')
    parser.add_argument('--format', type=str, choices=['csv', 'json'], default=None,
                        help='Output format (default: from config or csv)')
    parser.add_argument('--jobs', '-j', type=int, default=None,
                        help='Worker threads for sweep rows (default: from config or 4)')
    parser.add_argument('--report', action='store_true', default=None,
                        help='Print transition temperatures and parameters instead of a sweep')


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per geometry"""
    parser = argparse.ArgumentParser(
        prog="gbec",
        description="gbec-lab - generalized Bose-Einstein condensation numerical lab",
        epilog=COLUMNS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Enable verbose/debug logging')
    parser.add_argument('--config', '-c', type=str, default=None,
                        help='Path to a YAML or JSON config file (default: ./configs/config.yaml)')

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser('bose-fn', help='Bose functions F_n(alpha) on a log alpha grid')
    p.add_argument('--alpha', type=str, default=None, help='alpha grid min:max:steps (default: 1e-6:10:50)')
    add_output_arguments(p)

    p = sub.add_parser('isotropic', help='Isotropic harmonic trap (normal BEC)')
    p.add_argument('--n', type=str, default=None, help='Particle number (default: 1e5)')
    p.add_argument('--t', type=str, default=None, help='T/Tc grid min:max:steps')
    p.add_argument('--oracle', action='store_true', default=None, help='Add exact-summation columns')
    add_output_arguments(p)

    p = sub.add_parser('channel', help='Channel potential (type II band condensation)')
    p.add_argument('--n', type=str, default=None, help='Particle number (default: 1e6)')
    p.add_argument('--t', type=str, default=None, help='T/Tc grid min:max:steps (default: 0.005:1.0:200)')
    p.add_argument('--oracle', action='store_true', default=None, help='Add exact-summation columns')
    add_output_arguments(p)

    p = sub.add_parser('cigar', help='Cigar trap, two-step condensation')
    p.add_argument('--n', type=str, default=None, help='Particle number (default: 1e6)')
    p.add_argument('--delta', type=str, default=None, help='Aspect ratio L_par/L_perp (default: 5.6e4)')
    p.add_argument('--bz', action='store_true', default=None, help='Exponential (BZ) thermodynamic limit')
    p.add_argument('--gamma', type=str, default=None, help='BZ exponent gamma (default: 1.6)')
    p.add_argument('--c', type=str, default=None, help='Constant c in ln(cN) (default: 1)')
    p.add_argument('--t', type=str, default=None, help='T/Tc grid min:max:steps (default: 0.01:1.1:220)')
    p.add_argument('--oracle', action='store_true', default=None, help='Add exact-summation columns')
    add_output_arguments(p)

    p = sub.add_parser('prism', help='Casimir prism L-ladder scaling')
    p.add_argument('--t', type=str, default=None, help='T/Tc (default: 0.5)')
    p.add_argument('--d', type=str, default=None, help='Cross-section D/a (default: 10)')
    p.add_argument('--l', type=str, default=None, help='Comma-separated L/a ladder (default: 1e3,1e4,1e5)')
    add_output_arguments(p)

    p = sub.add_parser('box', help='Exponent box: classification and H scan')
    p.add_argument('action', choices=['classify'], help='Classify the exponents')
    p.add_argument('--nu', type=str, default=None, help='Exponents nu1,nu2,nu3 (fractions allowed)')
    p.add_argument('--t', type=str, default=None, help='T/Tc for the scan (default: 0.5)')
    p.add_argument('--scan', action='store_true', help='Scan the H ladder and write box_scaling.csv')
    p.add_argument('--h', type=str, default=None, help='Comma-separated H ladder (default: 1e4 ... 1e10)')
    p.add_argument('--cutoff-c', dest='cutoff_c', type=str, default=None,
                   help='Occupation-drop threshold C (default: 1e4)')
    add_output_arguments(p)

    p = sub.add_parser('oracle', help='Analytic formulas against exact finite-N summation')
    p.add_argument('action', choices=['compare'], help='Compare analytic and exact fractions')
    p.add_argument('--geometry', type=str, default=None,
                   choices=['isotropic', 'channel', 'cigar', 'prism'], help='Geometry (default: cigar)')
    p.add_argument('--n', type=str, default=None, help='Particle number (default: 1e4)')
    p.add_argument('--delta', type=str, default=None,
                   help='Cigar aspect ratio, or prism L/D (default: 100)')
    p.add_argument('--t', type=str, default=None, help='T/Tc value or grid (default: 0.2:0.8:3)')
    p.add_argument('--csv', type=str, default=None, help='Also write the rows to this CSV file')
    add_output_arguments(p)

    p = sub.add_parser('figures', help='Write fig1.csv ... fig5.csv')
    p.add_argument('--outdir', type=str, default=None, help='Output directory (default: from config)')
    p.add_argument('--jobs', '-j', type=int, default=None, help='Worker threads')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Setup logging
    setup_logging("DEBUG" if args.verbose else "INFO")

    try:
        return run_command(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except GbecError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
