"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 infeasible task (incompatible size).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction

from . import formats
from .contrast import (
    compatible_sizes,
    contrast_rep,
    marginal,
    strength,
    strength_constraints,
    subsets_by_size,
)
from .core import DesignSpace
from .enumerate import IncompatibleSizeError, enumerate_orthogonal, free_dimension, validate_task
from .polynomial import (
    EMIT_FORMATS,
    LinearConstraint,
    check_relations,
    emit_relations,
    fraction_of_indicator,
    indicator_of,
    is_indicator,
    relation_system,
)
from .symmetry import classify

log = logging.getLogger("ffindicator")

# searches with more free coordinates than this can take very long
UNBOUNDED_COST_DIMENSION = 24


class UsageError(Exception):
    pass


class Infeasible(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _space(args) -> DesignSpace:
    return formats.parse_space_spec(args.space)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_design(args, space):
    if args.design == "-":
        return formats.read_design_csv(sys.stdin, space)
    return formats.read_design_csv(args.design, space)


def cmd_indicator(args, out):
    space = _space(args)
    F = _read_design(args, space)
    ind = indicator_of(space, F)
    doc = formats.dumps(formats.indicator_to_json(ind))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
    out.write(doc + "\n")
    out.write(f"f(x) = {ind.poly.format()}\n")


def cmd_contrast(args, out):
    space = _space(args)
    F = _read_design(args, space)
    rep = contrast_rep(space, F)
    out.write(formats.dumps(formats.contrast_to_json(rep)) + "\n")
    out.write(f"f(z) = {rep.format()}\n")


def cmd_verify(args, out):
    space = _space(args)
    ind = formats.indicator_from_json(formats.load_first_json(_read_text(args.theta)), space)
    idem = is_indicator(space, ind)
    rel = check_relations(relation_system(space), ind)
    try:
        F = fraction_of_indicator(space, ind)
        zero_one, size = True, F.size
    except ValueError:
        zero_one, size = False, None
    out.write(f"idempotent={'true' if idem else 'false'}\n")
    out.write(f"relations={'true' if rel else 'false'}\n")
    out.write(f"zero_one={'true' if zero_one else 'false'}\n")
    if size is not None:
        out.write(f"size={size}\n")
    out.write(f"verdict={'indicator' if idem and rel and zero_one else 'not-an-indicator'}\n")


def cmd_strength(args, out):
    space = _space(args)
    F = _read_design(args, space)
    t = strength(F)
    out.write(f"strength={t}\n")
    out.write(f"size={F.size}\n")
    for k in range(1, space.n + 1):
        for J in subsets_by_size(space.n, k):
            table = marginal(F, J)
            mJ = len(table.counts)
            target = Fraction(F.size, mJ)
            equal = all(c == target for c in table.counts.values())
            cells = " ".join(f"{''.join(map(str, cell))}:{c}" for cell, c in table.counts.items())
            out.write(f"J={','.join(map(str, J))} target={target} equal={'yes' if equal else 'no'} {cells}\n")


def cmd_sizes(args, out):
    space = _space(args)
    if not 1 <= args.strength <= space.n:
        raise UsageError(f"--strength must be in 1..{space.n}")
    sizes = compatible_sizes(space, args.strength, proper=args.proper)
    out.write(",".join(map(str, sizes)) + "\n")


def cmd_relations(args, out):
    space = _space(args)
    system = relation_system(space)
    constraints: list[LinearConstraint] = []
    if args.strength is not None:
        if not 1 <= args.strength <= space.n:
            raise UsageError(f"--strength must be in 1..{space.n}")
        constraints = strength_constraints(space, args.strength)
    elif args.size is not None:
        constraints = strength_constraints(space, 0)
    if args.size is not None:
        size_con = constraints[0]
        constraints[0] = LinearConstraint(size_con.coeffs, Fraction(0), Fraction(-args.size))
    out.write(emit_relations(system, constraints, args.format))


def _check_task(space, s, t):
    try:
        validate_task(space, s, t)
    except IncompatibleSizeError as exc:
        raise Infeasible(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if free_dimension(space, t) > UNBOUNDED_COST_DIMENSION:
        log.warning(
            "warning: %d free coordinates after the strength-%d constraints; this search may not finish",
            free_dimension(space, t),
            t,
        )


def cmd_enumerate(args, out):
    space = _space(args)
    _check_task(space, args.size, args.strength)
    sols = enumerate_orthogonal(space, args.size, args.strength, jobs=args.jobs, canonical_only=args.canonical_only)
    if args.output_dir:
        os.makedirs(args.output_dir, exist_ok=True)
        width = max(3, len(str(len(sols))))
        for k, F in enumerate(sols, start=1):
            path = os.path.join(args.output_dir, f"solution_{k:0{width}d}.csv")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(formats.design_csv(F))
    if args.format == "json":
        doc = [[[formats.rational_json(v) for v in pt] for pt in F.points] for F in sols]
        out.write(formats.dumps(doc) + "\n")
    else:
        for k, F in enumerate(sols, start=1):
            out.write(f"# solution {k}\n")
            out.write(formats.design_csv(F))
            out.write("\n")
    out.write(f"solutions={len(sols)} size={args.size} strength={args.strength}\n")


def classification_json(space, orbits) -> dict:
    return {
        "total": sum(o.size for o in orbits),
        "orbits": [
            {
                "size": o.size,
                "representative": [[formats.rational_json(v) for v in pt] for pt in o.representative.points],
                "theta": formats.theta_terms_json(space, indicator_of(space, o.representative).poly),
                "mu": formats.contrast_to_json(contrast_rep(space, o.representative)),
            }
            for o in orbits
        ],
    }


def cmd_classify(args, out):
    space = _space(args)
    _check_task(space, args.size, args.strength)
    sols = enumerate_orthogonal(space, args.size, args.strength, jobs=args.jobs)
    orbits = classify(space, sols)
    out.write(
        f"total={len(sols)} orbits={len(orbits)} sizes={','.join(str(o.size) for o in orbits)}\n"
    )
    for k, o in enumerate(orbits, start=1):
        rep = o.representative
        out.write(f"\n# orbit {k} size={o.size}\n")
        out.write(f"f(x) = {indicator_of(space, rep).poly.format()}\n")
        out.write(f"f(z) = {contrast_rep(space, rep).format()}\n")
        out.write(formats.design_csv(rep))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(formats.dumps(classification_json(space, orbits)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ffindicator", description=__doc__.splitlines()[0] if __doc__ else None)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--space", required=True, help='level counts "2,2,3", a JSON object or a JSON file')
        sp.set_defaults(func=func)
        return sp

    sp = add("indicator", cmd_indicator, "indicator function of a design table")
    sp.add_argument("--design", required=True)
    sp.add_argument("--output", help="also write the JSON document here")

    sp = add("contrast", cmd_contrast, "contrast representation of a design table")
    sp.add_argument("--design", required=True)

    sp = add("verify", cmd_verify, "check an indicator JSON document")
    sp.add_argument("--theta", required=True)

    sp = add("strength", cmd_strength, "orthogonality strength and marginal report")
    sp.add_argument("--design", required=True)

    sp = add("sizes", cmd_sizes, "compatible sizes for a strength")
    sp.add_argument("--strength", type=int, required=True)
    sp.add_argument("--proper", action="store_true", help="exclude the full design")

    sp = add("relations", cmd_relations, "emit the polynomial system for the indicator coefficients")
    sp.add_argument("--strength", type=int)
    sp.add_argument("--size", type=int)
    sp.add_argument("--format", choices=EMIT_FORMATS, default="plain")

    for name, func, help_ in (
        ("enumerate", cmd_enumerate, "all fractions of a size and strength"),
        ("classify", cmd_classify, "orbits of the fractions of a size and strength"),
    ):
        sp = add(name, func, help_)
        sp.add_argument("--size", type=int, required=True)
        sp.add_argument("--strength", type=int, required=True)
        sp.add_argument("--jobs", type=int, default=1)
        if name == "enumerate":
            sp.add_argument("--canonical-only", action="store_true")
            sp.add_argument("--format", choices=("csv", "json"), default="csv")
            sp.add_argument("--output-dir", help="also write one CSV file per solution")
        else:
            sp.add_argument("--json", help="write the classification JSON document here")
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    handler = logging.StreamHandler(err)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root = logging.getLogger("ffindicator")
    root.addHandler(handler)
    try:
        try:
            args = build_parser().parse_args(argv)
        except UsageError as exc:
            err.write(f"error: {exc}\n")
            return 1
        root.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
        try:
            args.func(args, out)
        except Infeasible as exc:
            err.write(f"infeasible: {exc}\n")
            return 2
        except (UsageError, ValueError, KeyError, IndexError, TypeError, OSError) as exc:
            err.write(f"error: {exc}\n")
            return 1
        return 0
    finally:
        root.removeHandler(handler)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
