"""Command-line front end: ``wgs-lab <experiment> [options]``.

Exit codes: 0 success, 1 usage error, 2 numerical/validation failure,
3 resource overrun.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DomainError, NumericalError, ResourceLimitError
from .runner import EXPERIMENTS, SweepConfig, config_hash, run

USAGE_ERROR, VALIDATION_ERROR, RESOURCE_ERROR = 1, 2, 3


def _parse_grid(text: str) -> tuple[float, float, int]:
    try:
        start, step, count = text.split(":")
        return float(start), float(step), int(count)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"grid must be start:step:count, got {text!r}"
        ) from exc


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgs-lab",
        description="Weighted-graph-state entanglement sweeps for variable-range qudit chains.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON file with config fields (flags override)")
        p.add_argument("--n", type=int, help="number of sites")
        p.add_argument("--d", type=int, help="local dimension")
        p.add_argument("--alpha", type=_parse_grid, help="fall-off grid start:step:count")
        p.add_argument("--t0", type=float, help="time-average horizon / series end")
        p.add_argument("--time-step", type=float, help="quadrature / sampling step")
        p.add_argument("--r", type=_parse_int_list, help="separations, e.g. 1,2,3")
        p.add_argument("--blocks", type=_parse_int_list, help="block lengths for entropy")
        p.add_argument("--sub-len", type=int, help="sub-block length for the U_L bound")
        p.add_argument("--t", type=float, help="fixed evaluation time (entropy)")
        p.add_argument("--n-values", type=_parse_int_list, help="system sizes (approx-error)")
        p.add_argument("--trials", type=int, help="random trials (validate)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--jobs", type=int, help="parallel workers")
        p.add_argument("--seed", type=int, help="RNG seed (validate)")
        p.add_argument("--no-cache", action="store_true", help="bypass the result cache")
        p.add_argument("--dry-run", action="store_true", help="print the resolved plan and exit")
    return parser


_FLAG_TO_FIELD = {
    "n": "n_sites",
    "d": "local_dim",
    "alpha": "alpha",
    "t0": "t0",
    "time_step": "time_step",
    "r": "r_values",
    "blocks": "block_lengths",
    "sub_len": "sub_len",
    "t": "fixed_time",
    "n_values": "n_values",
    "trials": "n_trials",
    "out": "out_dir",
    "jobs": "jobs",
    "seed": "seed",
}


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    fields: dict = {"experiment": args.experiment}
    if args.config:
        with open(args.config) as handle:
            loaded = json.load(handle)
        if not isinstance(loaded, dict):
            raise DomainError(f"config file {args.config} must hold a JSON object")
        fields.update(loaded)
    for flag, name in _FLAG_TO_FIELD.items():
        value = getattr(args, flag, None)
        if value is not None:
            fields[name] = value
    if args.no_cache:
        fields["use_cache"] = False
    # JSON lists arrive as lists; the config wants tuples.
    for name in ("alpha", "r_values", "block_lengths", "epsilons", "n_values"):
        if name in fields and isinstance(fields[name], list):
            fields[name] = tuple(fields[name])
    return SweepConfig(**fields)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (DomainError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    if args.dry_run:
        plan = config.canonical()
        plan["config_hash"] = config_hash(config)
        print(json.dumps(plan, indent=2))
        return 0

    try:
        table = run(config)
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ResourceLimitError as exc:
        print(f"resource overrun: {exc}", file=sys.stderr)
        return RESOURCE_ERROR
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return VALIDATION_ERROR

    if config.experiment == "validate" and not table.derived.get("passed", False):
        print(
            f"validation failed: worst error {table.derived.get('worst_error'):.3e}",
            file=sys.stderr,
        )
        return VALIDATION_ERROR
    print(f"{config.experiment}: {len(table.rows)} rows -> {config.out_dir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
