"""Command line front end.

Subcommands mirror the library: prob (forward evaluation), solve-p and
solve-t (the two inverse problems), rop-table (render a population table),
and curve (probability samples for plotting).  Structured output (json or
csv) carries the library floats verbatim; text output is for reading.

Exit codes: 0 on success, 2 for malformed arguments, 3 for domain or
input-data errors.
"""

import argparse
import csv
import json
import math
import re
import sys

from .collision import (
    AUTO,
    DomainError,
    IterationBudgetError,
    as_space_size,
    collision_probability,
)
from .rop import (
    BUNDLED_DATASETS,
    IngestError,
    format_percent,
    load_bundled_cities,
    load_populations,
    rop_table,
)
from .solvers import DEFAULT_WORLD_POPULATION, SolveTarget, solve_population, solve_space

__all__ = ["main", "build_parser", "parse_space_expr", "parse_count_expr"]

_POWER = re.compile(r"(?P<base>[0-9][0-9,_ ]*)\^(?P<exp>[0-9][0-9,_ ]*)$")

_DOMAIN_EXIT = 3


def _strip_groups(text: str) -> str:
    return re.sub(r"[,_ ]", "", text)


def parse_space_expr(text: str):
    """Parse a space-size expression into a number (int or float).

    Accepts plain integers with optional thousands separators
    ("68,719,476,736"), scientific notation ("6.9e10"), and the power form
    "base^exponent" ("2^36"), which is evaluated in exact integer
    arithmetic.  Syntax only; range checks happen when the value is used.
    """
    expr = text.strip()
    m = _POWER.match(expr)
    try:
        if m:
            base = int(_strip_groups(m.group("base")))
            exp = int(_strip_groups(m.group("exp")))
            if exp > 4096:
                raise ValueError("exponent too large")
            return base**exp
        cleaned = _strip_groups(expr)
        if re.fullmatch(r"[0-9]+", cleaned):
            return int(cleaned)
        return float(cleaned)
    except (ValueError, OverflowError) as err:
        raise ValueError(f"bad space size {text!r}: {err}") from None


def parse_count_expr(text: str) -> int:
    """Parse a whole-number count: separators and scientific notation allowed."""
    cleaned = _strip_groups(text.strip())
    try:
        if re.fullmatch(r"[0-9]+", cleaned):
            return int(cleaned)
        value = float(cleaned)
    except ValueError:
        raise ValueError(f"bad count {text!r}") from None
    if not (math.isfinite(value) and value >= 0 and value.is_integer()):
        raise ValueError(f"bad count {text!r}: must be a non-negative whole number")
    return int(value)


def _space_arg(text):
    try:
        return parse_space_expr(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _count_arg(text):
    try:
        return parse_count_expr(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _json_float(x):
    # strict JSON has no Infinity; a guaranteed repeat reports null
    return None if math.isinf(x) else x


def _print_json(payload):
    print(json.dumps(payload))


def _print_csv(header, rows):
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _result_payload(result, note):
    return {
        "probability": result.probability,
        "log_survival": _json_float(result.log_survival),
        "method": result.method,
        "order": result.order,
        "error_bound": result.abs_error_bound,
        "note": note,
    }


def _cmd_prob(args):
    space = as_space_size(args.space)
    result = collision_probability(space, args.population, args.method, order=args.order)
    note = None
    guaranteed = (
        args.population >= space.exact + 1
        if space.exact is not None
        else args.population >= space.value + 1.0
    )
    if guaranteed:
        note = "pigeonhole: population exceeds the number of distinct values"
    if args.format == "json":
        _print_json(_result_payload(result, note))
    elif args.format == "csv":
        _print_csv(
            ["probability", "log_survival", "method", "order", "error_bound", "note"],
            [[
                repr(result.probability),
                repr(result.log_survival),
                result.method,
                "" if result.order is None else result.order,
                repr(result.abs_error_bound),
                note or "",
            ]],
        )
    else:
        print(f"probability: {result.probability!r} ({format_percent(result.probability)})")
        print(f"log survival: {result.log_survival!r}")
        print(f"method: {result.method}" + ("" if result.order is None else f" (order {result.order})"))
        print(f"error bound: {result.abs_error_bound:.6g}")
        if note:
            print(f"note: {note}")
    return 0


def _cmd_solve_p(args):
    space = as_space_size(args.space)
    p = solve_population(space, args.target)
    attained = collision_probability(space, p).probability
    if args.format == "json":
        _print_json({
            "space": space.value,
            "target": args.target,
            "population": p,
            "probability": attained,
        })
    elif args.format == "csv":
        _print_csv(
            ["space", "target", "population", "probability"],
            [[repr(space.value), repr(args.target), p, repr(attained)]],
        )
    else:
        print(f"population: {p:,}")
        print(f"probability there: {attained!r}")
    return 0


def _cmd_solve_t(args):
    population = args.population if args.population is not None else args.phi
    space = solve_space(population, SolveTarget(args.target, args.tolerance))
    attained = collision_probability(space, population).probability
    if args.format == "json":
        _print_json({
            "population": population,
            "target": args.target,
            "space": space.value,
            "probability": attained,
        })
    elif args.format == "csv":
        _print_csv(
            ["population", "target", "space", "probability"],
            [[population, repr(args.target), repr(space.value), repr(attained)]],
        )
    else:
        print(f"space size: {space.value:.5e}")
        print(f"probability there: {attained!r}")
    return 0


def _load_dataset(spec_text, delimiter):
    if spec_text in BUNDLED_DATASETS:
        return load_bundled_cities()
    return load_populations(spec_text, delimiter=delimiter)


def _cmd_rop_table(args):
    records = _load_dataset(args.dataset, args.delimiter)
    entries = rop_table(records, as_space_size(args.space))
    if args.format == "json":
        _print_json([
            {
                "name": e.record.name,
                "population": e.record.population,
                "probability": e.result.probability,
                "log_survival": _json_float(e.result.log_survival),
                "display": e.display,
            }
            for e in entries
        ])
    elif args.format == "csv":
        _print_csv(
            ["name", "population", "probability", "display"],
            [
                [e.record.name, e.record.population, repr(e.result.probability), e.display]
                for e in entries
            ],
        )
    else:
        name_w = max(len("name"), max(len(e.record.name) for e in entries))
        pop_w = max(len("population"), max(len(f"{e.record.population:,}") for e in entries))
        print(f"{'name':<{name_w}}  {'population':>{pop_w}}  overlap")
        for e in entries:
            print(f"{e.record.name:<{name_w}}  {e.record.population:>{pop_w},}  {e.display}")
    return 0


def _cmd_curve(args):
    space = as_space_size(args.space)
    if args.samples < 2:
        raise DomainError(f"need at least 2 samples, got {args.samples}")
    if args.p_max < 1:
        raise DomainError(f"--p-max must be at least 1, got {args.p_max}")
    pairs = []
    for i in range(args.samples):
        p = round(i * args.p_max / (args.samples - 1))
        prob = collision_probability(space, p).probability
        pairs.append((p, prob))
    if args.format == "json":
        _print_json([{"population": p, "probability": b} for p, b in pairs])
    elif args.format == "csv":
        _print_csv(["population", "probability"], [[p, repr(b)] for p, b in pairs])
    else:
        for p, b in pairs:
            print(f"{p}\t{b!r}")
    return 0


def _add_format(parser):
    parser.add_argument(
        "--format",
        choices=("text", "csv", "json"),
        default="text",
        help="output format (default text)",
    )


def _add_space(parser, required=True, default=None, help_extra=""):
    parser.add_argument(
        "-t",
        "--space",
        type=_space_arg,
        required=required,
        default=default,
        help="space size: plain, scientific, or base^exp form" + help_extra,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ropcalc",
        description="Repeat probabilities for uniform draws from very large spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_prob = sub.add_parser("prob", help="probability that a population repeats a value")
    _add_space(p_prob)
    p_prob.add_argument("-p", "--population", type=_count_arg, required=True,
                        help="number of draws (separators and 1.4e7 style accepted)")
    p_prob.add_argument("--method", choices=("exact", "series", "auto"), default=AUTO,
                        help="evaluation route (default auto)")
    p_prob.add_argument("--order", type=int, default=None,
                        help="series truncation order (series method only)")
    _add_format(p_prob)
    p_prob.set_defaults(func=_cmd_prob)

    p_solvep = sub.add_parser("solve-p", help="smallest population reaching a target probability")
    _add_space(p_solvep)
    p_solvep.add_argument("--target", type=float, required=True,
                          help="target probability in (0, 1)")
    _add_format(p_solvep)
    p_solvep.set_defaults(func=_cmd_solve_p)

    p_solvet = sub.add_parser("solve-t", help="space size pinning a target probability")
    p_solvet.add_argument("-p", "--population", type=_count_arg, default=None,
                          help="number of draws (defaults to --phi, the world population)")
    p_solvet.add_argument("--target", type=float, required=True,
                          help="target probability in (0, 1)")
    p_solvet.add_argument("--phi", type=_count_arg, default=DEFAULT_WORLD_POPULATION,
                          help="world population used when -p is omitted (default 8.2e9)")
    p_solvet.add_argument("--tolerance", type=float, default=1e-9,
                          help="relative tolerance on the space size (default 1e-9)")
    _add_format(p_solvet)
    p_solvet.set_defaults(func=_cmd_solve_t)

    p_table = sub.add_parser("rop-table", help="overlap table for a population dataset")
    p_table.add_argument("--dataset", default="us_cities",
                         help="path to a name/population table, or the bundled "
                              f"name(s): {', '.join(BUNDLED_DATASETS)} (default)")
    p_table.add_argument("--delimiter", choices=(",", ";", "\t"), default=None,
                         help="field delimiter (default: auto-detect)")
    _add_space(p_table, required=False, default=parse_space_expr("2^36"),
               help_extra=" (default 2^36, the classic fingerprint estimate)")
    _add_format(p_table)
    p_table.set_defaults(func=_cmd_rop_table)

    p_curve = sub.add_parser("curve", help="sample the probability curve up to --p-max")
    _add_space(p_curve)
    p_curve.add_argument("--p-max", type=_count_arg, required=True,
                         help="largest population to sample")
    p_curve.add_argument("--samples", type=int, default=101,
                         help="number of evenly spaced samples (default 101)")
    _add_format(p_curve)
    p_curve.set_defaults(func=_cmd_curve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, IngestError, IterationBudgetError) as err:
        print(f"error: {err}", file=sys.stderr)
        return _DOMAIN_EXIT
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return _DOMAIN_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
