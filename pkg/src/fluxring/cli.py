"""Scenario runner: spectra, reference curves, verification suites, orbits.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
configuration error.  Data tables go to CSV (or JSON via the config's
output_format); reports are JSON.  Outputs carry no timestamps, so identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, analytic, classical, io, verify
from .kernels import BACKEND
from .model import (ConfigError, GaugeKind, ScenarioConfig, config_to_dict,
                    load_config, validate_config)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _parse_gauges(listing: str) -> list[GaugeKind]:
    kinds = []
    for token in listing.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            kinds.append(GaugeKind(token))
        except ValueError:
            raise ConfigError([f"gauges: unknown gauge {token!r}"])
    if not kinds:
        raise ConfigError(["gauges: empty list"])
    return kinds


def _parse_tolerance_overrides(pairs) -> dict:
    overrides = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError([f"tol: expected NAME=VALUE, got {pair!r}"])
        try:
            overrides[name.strip()] = float(value)
        except ValueError:
            raise ConfigError([f"tol: {value!r} is not a number"])
    return overrides


def _load_or_default_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return validate_config(ScenarioConfig())
    try:
        return load_config(path)
    except FileNotFoundError:
        raise ConfigError([f"config: file not found: {path}"])
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError([f"config: invalid JSON ({exc})"])


def cmd_spectrum(args) -> int:
    gauges = _parse_gauges(args.gauges)
    cfg = validate_config(ScenarioConfig(flux=args.flux, l_max=args.lmax,
                                         n_grid=4 * args.lmax))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tables, worst = verify.spectrum_tables(cfg.flux, cfg.l_max, gauges)
    summary = {"flux": cfg.flux, "l_max": cfg.l_max, "max_deviation": worst,
               "tolerance": verify.DEFAULT_TOLERANCES["spectrum_gauge_invariance"],
               "gauges": {}}
    for kind, (ls, energies, devs) in tables.items():
        path = io.write_table(out_dir / f"spectrum_{kind.value}.csv",
                              {"l": ls, "energy": energies, "abs_dev": devs})
        summary["gauges"][kind.value] = {"max_deviation": float(devs.max()),
                                         "table": str(path)}
    ok = worst < summary["tolerance"]
    summary["passed"] = ok
    io.write_json(out_dir / "spectrum_summary.json", summary)
    print(f"spectrum: max cross-gauge deviation {worst:.3e} "
          f"({'PASS' if ok else 'FAIL'} at {summary['tolerance']:.0e})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_figure(args) -> int:
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    flux_col, phi_col, re_col = [], [], []
    for f in analytic.FIGURE_FLUXES:
        phi, re_psi = analytic.figure_curve(args.which, f, args.samples)
        flux_col.append(np.full_like(phi, f))
        phi_col.append(phi)
        re_col.append(re_psi)
    io.write_table(out, {"flux": np.concatenate(flux_col),
                         "phi": np.concatenate(phi_col),
                         "re_psi": np.concatenate(re_col)})
    print(f"figure {args.which}: wrote {out}")
    return EXIT_OK


def _print_checks(checks) -> None:
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"  [{status}] {check.name}: measured {check.measured:.3e} "
              f"(tolerance {check.tolerance:.0e})")


def cmd_verify(args) -> int:
    cfg = _load_or_default_config(args.config)
    if args.flux is not None:
        cfg = validate_config(ScenarioConfig(
            gauge=cfg.gauge, flux=args.flux, l_max=cfg.l_max, n_grid=cfg.n_grid,
            classical=cfg.classical, output_format=cfg.output_format))
    overrides = _parse_tolerance_overrides(args.tol)
    tolerances = verify.resolve_tolerances(overrides)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    report = verify.ScenarioReport(
        scenario=f"verify:{args.suite}",
        parameters={"config": config_to_dict(cfg), "backend": BACKEND,
                    "version": __version__})
    if args.suite in ("quantum", "all"):
        checks, artifacts = verify.quantum_suite(
            cfg.flux, cfg.l_max, cfg.n_grid, tolerances)
        report.checks.extend(checks)
        for name, columns in artifacts.items():
            suffix = "csv" if cfg.output_format == "csv" else "json"
            report.outputs.append(io.write_table(
                out_dir / f"{name}.{suffix}", columns, cfg.output_format))
    if args.suite in ("classical", "all"):
        checks, traj = verify.classical_suite(cfg.classical, tolerances)
        report.checks.extend(checks)
        suffix = "csv" if cfg.output_format == "csv" else "json"
        report.outputs.append(io.write_table(
            out_dir / f"trajectory.{suffix}", traj.columns(), cfg.output_format))

    report_path = io.write_json(out_dir / "report.json", report.as_dict())
    report.outputs.append(report_path)
    _print_checks(report.checks)
    if report.all_passed:
        print(f"verify:{args.suite}: all {len(report.checks)} checks passed")
        return EXIT_OK
    failed = ", ".join(c.name for c in report.failed())
    print(f"verify:{args.suite}: FAILED checks: {failed}", file=sys.stderr)
    return EXIT_CHECK_FAILED


def cmd_classical(args) -> int:
    cfg = _load_or_default_config(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    traj = classical.run_scenario(cfg.classical)
    suffix = "csv" if cfg.output_format == "csv" else "json"
    path = io.write_table(out_dir / f"trajectory.{suffix}", traj.columns(),
                          cfg.output_format)
    audit = classical.conservation_audit(traj)
    io.write_json(out_dir / "audit.json", {
        "parameters": config_to_dict(cfg)["classical"],
        "audit": audit.as_dict(),
        "trajectory": str(path),
    })
    print(f"classical: {traj.n_samples} samples -> {path}")
    print(f"  lz drift {audit.max_lz_drift:.3e}, landau residual "
          f"{audit.max_landau_residual:.3e}, orbit-average gap {audit.orbit_average_gap:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxring",
        description="Gauge checks for the flux-threaded ring and the ramped-field orbit")
    parser.add_argument("--version", action="version", version=f"fluxring {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_spectrum = sub.add_parser("spectrum", help="per-gauge eigenvalue tables")
    p_spectrum.add_argument("--flux", type=float, required=True, help="flux ratio f")
    p_spectrum.add_argument("--lmax", type=int, default=32, help="basis truncation")
    p_spectrum.add_argument("--gauges", default="cylindrical,landau,singular",
                        help="comma-separated gauge list")
    p_spectrum.add_argument("--out", required=True, help="output directory")
    p_spectrum.set_defaults(func=cmd_spectrum)

    p_fig = sub.add_parser("figure", help="reference wave-function curves")
    p_fig.add_argument("--which", choices=("fig1", "fig3"), required=True)
    p_fig.add_argument("--samples", type=int, default=256)
    p_fig.add_argument("--out", required=True, help="output CSV path")
    p_fig.set_defaults(func=cmd_figure)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("--suite", choices=("quantum", "classical", "all"), default="all")
    p_ver.add_argument("--flux", type=float, default=None, help="override the flux ratio")
    p_ver.add_argument("--config", default=None, help="scenario JSON path")
    p_ver.add_argument("--out", required=True, help="output directory")
    p_ver.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help="override a tolerance (repeatable)")
    p_ver.set_defaults(func=cmd_verify)

    p_cls = sub.add_parser("classical", help="simulate the orbit scenario")
    p_cls.add_argument("--config", default=None, help="scenario JSON path")
    p_cls.add_argument("--out", required=True, help="output directory")
    p_cls.set_defaults(func=cmd_classical)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for message in exc.errors:
            print(f"config error: {message}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
