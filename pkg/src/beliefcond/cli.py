"""Command line entry point: ``beliefcond condition|decompose|check|combine``."""

from __future__ import annotations

import argparse
import sys
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from .conditioning import (
    BBA,
    QBBA,
    condition,
    dempster_combine,
    quasi_norm_status,
    validate_bba,
    validate_qbba,
)
from .decomposition import DecompositionContext, decompose
from .errors import BeliefError, ImpossibleProblemError, TotalConflictError
from .labels import Label
from .lattice import render
from .scenario import ScenarioError, load_scenario

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IMPOSSIBLE = 2
EXIT_CONFLICT = 3


def format_value(value, decimals=False) -> str:
    if isinstance(value, Label):
        return str(value)
    text = str(value)
    if decimals:
        text += f"  ({to_decimal(value)})"
    return text


def to_decimal(value: Fraction, places: int = 6) -> str:
    with localcontext() as ctx:
        ctx.prec = 60
        exact = Decimal(value.numerator) / Decimal(value.denominator)
        return str(exact.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def mass_rows(masses, fmt="text", decimals=False) -> list:
    lines = []
    for prop, value in masses.sorted_items():
        if fmt == "tsv":
            lines.append(f"0x{prop.hex}\t{render(prop)}\t{format_value(value)}")
        else:
            lines.append(f"{render(prop)} = {format_value(value, decimals)}")
    return lines


def _summary(masses) -> str:
    if isinstance(masses, QBBA):
        return f"quasi-normalized: {quasi_norm_status(masses).describe()}"
    return f"sum: {masses.total}"


def _context(scenario):
    if scenario.condition is None:
        raise ScenarioError("scenario has no 'condition:'", scenario.source)
    return DecompositionContext.from_expression(scenario.condition, scenario.model)


def cmd_condition(path, fmt="text", decimals=False) -> list:
    scenario = load_scenario(path)
    if scenario.prior is None:
        raise ScenarioError("scenario has no mass block", scenario.source)
    if scenario.rule is None:
        raise ScenarioError("scenario has no 'rule:'", scenario.source)
    ctx = _context(scenario)
    revision = condition(scenario.rule, scenario.prior, ctx.event)
    if fmt == "tsv":
        return mass_rows(revision.posterior, "tsv")
    lines = [
        f"scenario: {Path(path).name}",
        f"rule: {scenario.rule}",
        f"mode: {scenario.mode}",
        f"condition: {scenario.condition.text.strip()} = {render(ctx.event)}",
        "prior:",
    ]
    classes = decompose(scenario.prior, ctx)
    for prop, value in scenario.prior.sorted_items():
        lines.append(f"  {render(prop)} = {format_value(value, decimals)}  [{classes[prop]}]")
    lines.append(f"  {_summary(scenario.prior)}")
    lines.append("posterior:")
    lines.extend(mass_rows(revision.posterior, "text", decimals))
    lines.append(_summary(revision.posterior))
    for note in revision.notes:
        lines.append(f"note: {note}")
    return lines


def cmd_decompose(path, fmt="text") -> list:
    scenario = load_scenario(path)
    ctx = _context(scenario)
    focals = scenario.prior if scenario.prior is not None else {}
    classes = decompose(focals, ctx)
    rows = sorted(classes.items(), key=lambda kv: (render(kv[0]), kv[0].regions))
    if fmt == "tsv":
        return [f"0x{p.hex}\t{render(p)}\t{c}" for p, c in rows]
    lines = [f"event: {render(ctx.event)}",
             f"support atoms: {' '.join(a for a in scenario.frame.atoms if a in ctx.support_atoms)}"]
    lines.extend(f"{render(p)}: {c}" for p, c in rows)
    return lines


def cmd_check(path, fmt="text") -> list:
    scenario = load_scenario(path)
    if scenario.prior is None:
        raise ScenarioError("scenario has no mass block", scenario.source)
    prior = scenario.prior
    if fmt == "tsv":
        return mass_rows(prior, "tsv")
    lines = mass_rows(prior)
    if isinstance(prior, QBBA):
        validate_qbba(prior)
        status = quasi_norm_status(prior)
        top = prior.scale.max_index
        if status.exact:
            lines.append(f"status: exact quasi-normalized (raw {status.raw_index_sum}/{top})")
        elif status.clamped_ok:
            lines.append(f"status: clamped quasi-normalized (raw {status.raw_index_sum}/{top})")
        else:
            lines.append(f"status: not quasi-normalized (raw {status.raw_index_sum}/{top})")
    else:
        validate_bba(prior)
        lines.append(f"sum: {prior.total}")
        lines.append("status: valid")
    for first, again in scenario.duplicates:
        lines.append(f"note: '{again}' repeats '{first}' under the model; masses were added")
    return lines


def cmd_combine(path1, path2, fmt="text", decimals=False) -> list:
    s1, s2 = load_scenario(path1), load_scenario(path2)
    for s in (s1, s2):
        if not isinstance(s.prior, BBA):
            raise ScenarioError("combine needs a quantitative 'mass:' block", s.source)
        validate_bba(s.prior)
    if s1.model != s2.model:
        raise ScenarioError("the two files declare different frames or models", s2.source)
    combined, conflict = dempster_combine(s1.prior, s2.prior)
    if fmt == "tsv":
        return mass_rows(combined, "tsv") + [f"K\t\t{conflict}"]
    return mass_rows(combined, "text", decimals) + [f"K = {format_value(conflict, decimals)}",
                                                    _summary(combined)]


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ImpossibleProblemError):
        return EXIT_IMPOSSIBLE
    if isinstance(exc, TotalConflictError):
        return EXIT_CONFLICT
    return EXIT_INVALID


def _run_one(fn, out, err, label=None) -> int:
    try:
        lines = fn()
    except BeliefError as exc:
        text = str(exc)
        if label and label not in text:
            text = f"{label}: {text}"
        print(f"error: {text}", file=err)
        return _exit_code(exc)
    for line in lines:
        print(line, file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beliefcond",
        description="Revise belief mass assignments given a conditioning event.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, batch=True):
        p.add_argument("--format", choices=("text", "tsv"), default="text")
        if batch:
            p.add_argument("--all", metavar="DIR", dest="all_dir",
                           help="process every *.scn file in DIR")

    p = sub.add_parser("condition", help="apply the scenario's rule and print the posterior")
    p.add_argument("file", nargs="?")
    p.add_argument("--decimals", action="store_true",
                   help="append a 6-place decimal to rational masses")
    common(p)
    p = sub.add_parser("decompose", help="classify prior focal elements as D1/D2/D3")
    p.add_argument("file", nargs="?")
    common(p)
    p = sub.add_parser("check", help="validate the prior mass block")
    p.add_argument("file", nargs="?")
    common(p)
    p = sub.add_parser("combine", help="combine two mass files with Dempster's rule")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--decimals", action="store_true")
    common(p, batch=False)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format

    if args.command == "combine":
        return _run_one(lambda: cmd_combine(args.file1, args.file2, fmt, args.decimals), out, err)

    def job(path):
        if args.command == "condition":
            return lambda: cmd_condition(path, fmt, args.decimals)
        if args.command == "decompose":
            return lambda: cmd_decompose(path, fmt)
        return lambda: cmd_check(path, fmt)

    if args.all_dir:
        if args.file:
            parser.error("give either a file or --all, not both")
        paths = sorted(Path(args.all_dir).glob("*.scn"))
        if not paths:
            print(f"error: no *.scn files in {args.all_dir}", file=err)
            return EXIT_INVALID
        worst = EXIT_OK
        for path in paths:
            print(f"== {path.name}", file=out)
            worst = max(worst, _run_one(job(path), out, err, path.name))
        return worst
    if not args.file:
        parser.error("a scenario file or --all DIR is required")
    return _run_one(job(args.file), out, err)


if __name__ == "__main__":
    sys.exit(main())
