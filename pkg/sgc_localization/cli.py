"""Command-line front end: ``run`` scans a preset and writes its outputs, ``audit`` tabulates the closed forms.

Exit codes: 0 on success, 1 on configuration errors, 2 on solver errors.
"""
import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from sgc_localization.analysis import PeakSet, QuadrantSummary, find_extrema, quadrant_distribution
from sgc_localization.config import ConfigError, RunConfig, format_config, parse_config
from sgc_localization.data import Domain, FigurePreset, OutputKind, default_out_dir
from sgc_localization.dynamics import SolverError
from sgc_localization.export import (
    export_audit,
    export_csv,
    export_heatmap,
    export_peaks,
    sample_points,
)
from sgc_localization.field import GridSpec, LocalizationMap, scan_map
from sgc_localization.util import output_sink

AUDIT_SAMPLES = 5
DOMAINS = {Domain.HALF: GridSpec.half_domain, Domain.FULL: GridSpec.full_domain}


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as configuration errors instead of exiting."""

    def error(self, message: str):
        raise ConfigError(message)


@dataclass
class RunResult:
    config: RunConfig
    map: LocalizationMap
    peaks: PeakSet
    summary: QuadrantSummary
    written: list[Path] = field(default_factory=list)


def grid_overrides(grid: int | None = None, domain: Domain | str | None = None) -> dict:
    """Translate --grid and --domain into configuration overrides."""
    overrides = {}
    if grid is not None:
        overrides["nx"] = overrides["ny"] = grid
    if domain is not None:
        span = DOMAINS[Domain(domain)]()
        overrides.update(x_min=span.x_min, x_max=span.x_max, y_min=span.y_min, y_max=span.y_max)
    return overrides


def write_outputs(result: RunResult, out_dir: Path, name: str):
    """Write every requested output plus the echoed configuration under out_dir."""
    config = result.config
    targets = [(out_dir / f"{name}.cfg", False, lambda sink: sink.write(format_config(config)))]
    if OutputKind.CSV in config.outputs:
        targets.append((out_dir / f"{name}.csv", False, lambda sink: export_csv(result.map, sink)))
    if OutputKind.HEATMAP in config.outputs:
        targets.append((out_dir / f"{name}.ppm", True, lambda sink: export_heatmap(result.map, sink)))
    if OutputKind.PEAKS in config.outputs:
        targets.append(
            (out_dir / f"{name}_peaks.txt", False, lambda sink: export_peaks(result.map, result.peaks, result.summary, sink))
        )
    if OutputKind.AUDIT in config.outputs:
        report = export_audit(sample_points(config, AUDIT_SAMPLES))
        targets.append((out_dir / f"{name}_audit.txt", False, lambda sink: sink.write(report)))
    for path, binary, write in targets:
        with output_sink(path, binary=binary) as sink:
            write(sink)
        result.written.append(path)


def run_config(config: RunConfig, out_dir: Path | None = None, name: str = "run", workers: int = 1) -> RunResult:
    """Scan the configured map, analyse it and optionally write its outputs.

    :param config: Resolved configuration.
    :param out_dir: Folder for outputs; nothing is written when None.
    :param name: Stem of the output file names.
    :param workers: Threads used by the scan.
    :raises SolverError: A grid node failed to solve.
    """
    local_map = scan_map(config.base, config.wave, config.grid, workers=workers)
    result = RunResult(
        config=config,
        map=local_map,
        peaks=find_extrema(local_map),
        summary=quadrant_distribution(local_map),
    )
    if out_dir is not None:
        write_outputs(result, Path(out_dir), name)
    return result


def run_preset(
    name: FigurePreset | str,
    out_dir: Path | None = None,
    config_text: str = "",
    grid: int | None = None,
    domain: Domain | str | None = None,
    emit: list[OutputKind] | None = None,
    workers: int = 1,
) -> RunResult:
    """Resolve a shipped preset with optional document and flag overrides, then run it.

    :raises ConfigError: The preset or an override is invalid.
    :raises SolverError: A grid node failed to solve.
    """
    overrides = grid_overrides(grid, domain)
    if emit is not None:
        overrides["outputs"] = tuple(emit)
    config = parse_config(config_text, preset=name, overrides=overrides)
    logging.info(f"Resolved preset {config.preset.value}.")
    return run_config(config, out_dir=out_dir, name=config.preset.value, workers=workers)


def _emit_list(text: str) -> list[OutputKind]:
    try:
        kinds = [OutputKind(item.strip()) for item in text.split(",") if item.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from err
    if not kinds:
        raise argparse.ArgumentTypeError("at least one output kind is required")
    return kinds


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="sgc-localization", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    presets = [preset.value for preset in FigurePreset]

    run = commands.add_parser("run", help="Scan a localization map and write its outputs.")
    run.add_argument("--preset", choices=presets, help="Figure preset to start from.")
    run.add_argument("--config", type=Path, help="Configuration document applied on top of the preset.")
    run.add_argument("--out-dir", type=Path, default=default_out_dir, help="Output folder.")
    run.add_argument("--grid", type=int, help="Odd node count per axis.")
    run.add_argument("--domain", choices=[domain.value for domain in Domain], help="Half or full wavelength cell.")
    run.add_argument("--emit", type=_emit_list, help="Comma list of csv, heatmap, peaks, audit.")
    run.add_argument("--workers", type=int, default=1, help="Threads for the scan.")
    run.add_argument("-v", "--verbose", action="count", default=0)

    audit = commands.add_parser("audit", help="Compare the closed-form coherence with the numeric oracle.")
    audit.add_argument("--preset", choices=presets, required=True)
    audit.add_argument("--samples", type=int, default=AUDIT_SAMPLES, help="Sample points per axis.")
    audit.add_argument("--out-dir", type=Path, default=default_out_dir, help="Output folder.")
    audit.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _read_config(path: Path | None) -> str:
    if path is None:
        return ""
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as err:
        raise ConfigError(f"Cannot read config file {path}: {err}") from err


def run_command(args: argparse.Namespace):
    overrides = grid_overrides(args.grid, args.domain)
    if args.emit is not None:
        overrides["outputs"] = tuple(args.emit)
    config = parse_config(_read_config(args.config), preset=args.preset, overrides=overrides)
    name = config.preset.value if config.preset else "run"
    result = run_config(config, out_dir=args.out_dir, name=name, workers=args.workers)
    for path in result.written:
        print(path)


def audit_command(args: argparse.Namespace):
    if args.samples < 1:
        raise ConfigError(f"--samples must be at least 1, got {args.samples}.")
    config = parse_config(preset=args.preset)
    report = export_audit(sample_points(config, args.samples))
    path = Path(args.out_dir) / f"{config.preset.value}_audit.txt"
    with output_sink(path) as sink:
        sink.write(report)
    print(path)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as err:
        logging.error(err)
        return 1
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s: %(message)s")
    try:
        if args.command == "run":
            run_command(args)
        else:
            audit_command(args)
    except ConfigError as err:
        logging.error(f"Configuration error: {err}")
        return 1
    except OSError as err:
        logging.error(f"Cannot write outputs: {err}")
        return 1
    except SolverError as err:
        logging.error(f"Solver error: {err}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
