"""Private module; avoid importing from directly.
"""

import argparse
import json
import pathlib
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import torch

from .. import geometry, types
from ..calculus import (
    GridFunction,
    TruncationError,
    apply_multiplier,
    bochner_riesz,
    load_grid_function,
    save_grid_function,
    truncation_tail,
)
from ..estimates import ExperimentReport, Verdict
from ._config import RunConfig, load_run_config
from ._suites import SuiteOptions, run_suite, suite_names
from ._symbol_specs import parse_symbol

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2


class UsageError(Exception):
    """Malformed command line."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore
        raise UsageError(message)


def _numbers(cast: Callable[[str], Any]) -> Callable[[str], Tuple[Any, ...]]:
    def parse(text: str) -> Tuple[Any, ...]:
        try:
            values = tuple(cast(item) for item in text.split(",") if item.strip() != "")
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"invalid list `{text}`") from e
        if len(values) == 0:
            raise argparse.ArgumentTypeError("empty list")
        return values

    return parse


_floats = _numbers(float)
_ints = _numbers(int)


def _common_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    group = common.add_argument_group("run configuration")
    group.add_argument("--config", type=pathlib.Path, help="YAML or JSON config file.")
    group.add_argument("--output-dir", dest="output_dir", help="Report directory.")
    group.add_argument("--seed", type=int)
    group.add_argument("--threads", type=int, help="Torch intra-op threads.")
    group.add_argument("--d1", type=int, help="First layer dimension.")
    group.add_argument("--d2", type=int, help="Second layer dimension.")
    group.add_argument("--kmax", dest="k_max", type=int, help="Retained Hermite indices.")
    group.add_argument("--n-x", dest="n_x", type=int, help="Samples per x-axis.")
    group.add_argument("--n-y", dest="n_y", type=int, help="Samples per y-axis.")
    group.add_argument("--x-extent", dest="x_extent", type=float)
    group.add_argument("--y-extent", dest="y_extent", type=float)
    group.add_argument("--bump", choices=("smooth", "hat"))
    group.add_argument("--trials", type=int, help="Probes per norm estimate.")
    group.add_argument("--verbose", action="store_true", default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for every subcommand."""
    common = _common_parser()
    parser = _ArgumentParser(
        prog="torchgrushin",
        description="Joint functional calculus of the Grushin operator.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    apply = subparsers.add_parser(
        "apply", parents=[common], help="Apply F(sqrt(L)) to a stored grid function."
    )
    apply.add_argument("--input", type=pathlib.Path, required=True)
    apply.add_argument("--symbol", required=True, help="e.g. `bump:lo=0.25,hi=4`.")
    apply.add_argument("--output", type=pathlib.Path, required=True)

    riesz = subparsers.add_parser(
        "riesz", parents=[common], help="Apply the Bochner-Riesz mean (1 - tL)_+^delta."
    )
    riesz.add_argument("--input", type=pathlib.Path, required=True)
    riesz.add_argument("--delta", type=float, required=True)
    riesz.add_argument("--t", type=float, required=True)
    riesz.add_argument("--output", type=pathlib.Path, required=True)

    geodist = subparsers.add_parser(
        "geodist", parents=[common], help="Comparison distance between two points."
    )
    geodist.add_argument("--z", type=_floats, required=True)
    geodist.add_argument("--w", type=_floats, required=True)

    cover = subparsers.add_parser(
        "cover", parents=[common], help="Anisotropic cover of a box with overlap bounds."
    )
    cover.add_argument("--radius", type=float, required=True)
    cover.add_argument("--x-bounds", dest="x_bounds", type=_floats, required=True)
    cover.add_argument("--y-bounds", dest="y_bounds", type=_floats, required=True)
    cover.add_argument("--dilations", type=_floats, default=(1.0, 2.0))

    verify = subparsers.add_parser(
        "verify", parents=[common], help="Run a verification suite."
    )
    verify.add_argument("suite", choices=suite_names())
    verify.add_argument("--p", type=float)
    verify.add_argument("--lmin", type=int)
    verify.add_argument("--lmax", type=int)
    verify.add_argument("--N", type=int)
    verify.add_argument("--t", type=_floats)
    verify.add_argument("--delta", type=float)
    verify.add_argument("--margins", type=_floats)
    verify.add_argument("--radius", type=float)
    verify.add_argument("--a", type=_floats, help="Center magnitudes |a|.")
    verify.add_argument("--r", type=_floats, help="Frequency magnitudes.")
    verify.add_argument("--k", type=_ints, help="Eigenvalue indices.")
    verify.add_argument("--symbol")

    export = subparsers.add_parser(
        "export", parents=[common], help="Convert a JSON report to CSV."
    )
    export.add_argument("--report", type=pathlib.Path, required=True)
    export.add_argument("--output", type=pathlib.Path)

    return parser


_CONFIG_FLAGS = (
    "output_dir",
    "seed",
    "threads",
    "d1",
    "d2",
    "k_max",
    "n_x",
    "n_y",
    "x_extent",
    "y_extent",
    "bump",
    "trials",
    "verbose",
)


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    config = load_run_config(
        args.config, overrides={name: getattr(args, name) for name in _CONFIG_FLAGS}
    )
    if config.threads is not None:
        torch.set_num_threads(config.threads)
    return config


def _split_point(coordinates: Sequence[float], d1: int, d2: int) -> types.CCPoint:
    """First `d1` entries are x, last `d2` entries are y; anything between must be 0."""
    if len(coordinates) < d1 + d2:
        raise ValueError(f"Expected at least {d1 + d2} coordinates, got {len(coordinates)}.")
    middle = coordinates[d1 : len(coordinates) - d2]
    if any(value != 0.0 for value in middle):
        raise ValueError("Coordinates between the x and y blocks must be zero.")
    return types.CCPoint(
        x=torch.tensor(coordinates[:d1], dtype=torch.float64),
        y=torch.tensor(coordinates[len(coordinates) - d2 :], dtype=torch.float64),
    )


def _tail_report(
    f: GridFunction, k_max: int, config: RunConfig, inputs: Dict[str, Any]
) -> ExperimentReport:
    tolerances = config.experiment_tolerances()
    _, relative = truncation_tail(f, k_max=k_max)
    tails = [float(v) for v in relative.reshape(-1)]
    worst = max(tails, default=0.0)
    flags: Tuple[str, ...] = ()
    if worst > tolerances.tail_tolerance:
        flags = (f"relative truncation tail {worst:.3e} exceeds {tolerances.tail_tolerance:g}",)
    return ExperimentReport(
        experiment="truncation_tail",
        inputs=dict(inputs, k_max=k_max, grid=f.spec.to_dict()),
        series={"batch": [float(i) for i in range(len(tails))], "relative_tail": tails},
        verdict=Verdict.PASS if worst <= tolerances.tail_tolerance else Verdict.FAIL,
        constants={"max_relative_tail": worst},
        flags=flags,
        tolerances=tolerances,
        config=config.to_dict(),
    )


def _apply_command(args: argparse.Namespace, config: RunConfig) -> int:
    f = load_grid_function(args.input)
    k_max = f.spec.k_max if args.k_max is None else args.k_max
    if args.command == "riesz":
        inputs: Dict[str, Any] = {"input": args.input, "delta": args.delta, "t": args.t}
        if args.t == 0.0:
            result = f.clone()
        else:
            result = apply_multiplier(bochner_riesz(args.delta, args.t), f, k_max=k_max)
    else:
        symbol = parse_symbol(args.symbol)
        inputs = {"input": args.input, "symbol": symbol.name}
        result = apply_multiplier(symbol, f, k_max=k_max)

    save_grid_function(args.output, result)
    report = _tail_report(f, k_max, config, inputs)
    json_path, _ = report.write(config.output_dir, stem=f"{args.output.stem}.tail")
    print(f"{args.output} (truncation tail: {report.verdict.value}, {json_path})")
    return EXIT_FAIL if report.verdict is Verdict.FAIL else EXIT_OK


def _geodist_command(args: argparse.Namespace, config: RunConfig) -> int:
    z = _split_point(args.z, config.d1, config.d2)
    w = _split_point(args.w, config.d1, config.d2)
    print(f"{float(geometry.cc_distance(z, w)):.12g}")
    return EXIT_OK


def _cover_command(args: argparse.Namespace, config: RunConfig) -> int:
    if len(args.x_bounds) != 2 or len(args.y_bounds) != 2:
        raise ValueError("Bounds are given as `lower,upper`.")
    region = geometry.AxisBox(
        x_lower=(args.x_bounds[0],) * config.d1,
        x_upper=(args.x_bounds[1],) * config.d1,
        y_lower=(args.y_bounds[0],) * config.d2,
        y_upper=(args.y_bounds[1],) * config.d2,
    )
    result = geometry.cover(region, args.radius, args.dilations)
    summary = {
        "cells": len(result.cells),
        "radius": result.radius,
        "overlap_bounds": {
            f"{dilation:g}": bound for dilation, bound in sorted(result.overlap_bounds.items())
        },
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _verify_command(args: argparse.Namespace, config: RunConfig) -> int:
    options = SuiteOptions(
        p=args.p,
        lmin=args.lmin,
        lmax=args.lmax,
        N=args.N,
        t=args.t,
        delta=args.delta,
        margins=args.margins,
        radius=args.radius,
        a=args.a,
        r=args.r,
        k=args.k,
        symbol=args.symbol,
    )
    report = run_suite(args.suite, config, options)
    json_path, _ = report.write(config.output_dir, stem=args.suite)
    print(f"{args.suite}: {report.verdict.value} ({json_path})")
    return EXIT_FAIL if report.verdict is Verdict.FAIL else EXIT_OK


def _export_command(args: argparse.Namespace, config: RunConfig) -> int:
    report = ExperimentReport.from_json(args.report.read_text(encoding="utf-8"))
    if args.output is None:
        sys.stdout.write(report.to_csv())
    else:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(report.to_csv(), encoding="utf-8")
    return EXIT_OK


_COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "apply": _apply_command,
    "riesz": _apply_command,
    "geodist": _geodist_command,
    "cover": _cover_command,
    "verify": _verify_command,
    "export": _export_command,
}


def run(argv: List[str]) -> int:
    """Run one command-line invocation.

    Args:
        argv (List[str]): Arguments, without the program name.

    Returns:
        int: 0 on success, 2 when a verdict is FAIL, 1 on usage or input errors.
    """
    try:
        args = build_parser().parse_args(argv)
        config = _resolve_config(args)
        return _COMMANDS[args.command](args, config)
    except (
        UsageError,
        ValueError,
        OSError,
        TruncationError,
        geometry.CoverCertificationError,
    ) as e:
        message = " ".join(str(e).split())
        print(f"torchgrushin: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
