"""Command-line front end.

Exit status: 0 on success, 1 on parse or validation errors, 2 when the
reduction does not terminate within ``--max-passes`` passes.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import defaultdict

from .gl2 import normal_form, ray_normalize
from .io import (
    InputError,
    dump_json,
    parse_chain,
    parse_lifted_chain,
    parse_matrix,
    parse_point,
    parse_vectors,
    read_json,
)
from .reducer import ReducerConfig, ReductionError, reduce_chain
from .sharbly import boundary, gamma_key
from .voronoi import (
    ConeLocationError,
    barycenter,
    containing_cone,
    get_cone_data,
    load_cone_data,
    register_cone_data,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NONTERMINATION = 2

log = logging.getLogger("vreduce")


def _write(args, obj) -> None:
    text = dump_json(obj, pretty=not args.compact)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cone_data(args):
    if args.cone_data:
        try:
            data = load_cone_data(args.cone_data)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read cone data: {exc}", args.cone_data) from None
        if data.d != args.field:
            raise InputError(f"cone data is for d={data.d}, not d={args.field}", args.cone_data)
        register_cone_data(data)
        return data
    try:
        return get_cone_data(args.field)
    except ValueError as exc:
        raise InputError(str(exc), "--field") from None


def cmd_reduce(args) -> int:
    obj, text = read_json(args.input)
    xi = parse_lifted_chain(obj, args.field, default_lifts=args.default_lifts, text=text)
    data = _cone_data(args)
    cfg = ReducerConfig(max_passes=args.max_passes, trace_enabled=bool(args.trace))
    try:
        _, trace = reduce_chain(xi, cfg, data)
    except ReductionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONTERMINATION
    out = trace.output.to_json()
    out["passes"] = trace.passes
    out["size_tables"] = trace.size_tables
    _write(args, out)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(dump_json(trace.to_json(), pretty=not args.compact))
    for i, table in enumerate(trace.size_tables, 1):
        log.info("pass %d: %s", i, table)
    return EXIT_OK


def cmd_classify(args) -> int:
    obj, text = read_json(args.input)
    p = parse_point(obj, args.field, text)
    data = _cone_data(args)
    try:
        cone = containing_cone(p, data)
    except ValueError as exc:
        raise InputError(str(exc), "point") from None
    _write(args, {"field": args.field, "dim": cone.dim, "generators": [g.to_json() for g in cone.generators]})
    return EXIT_OK


def cmd_normal_form(args) -> int:
    obj, text = read_json(args.input)
    M = parse_matrix(obj, args.field, text)
    if M.is_zero():
        raise InputError("the zero matrix has no normal form", "matrix")
    if not M.is_integral():
        raise InputError("matrix entries must lie in O", "matrix")
    M0, gamma = normal_form(M)
    _write(args, {"field": args.field, "normal_form": M0.to_json(), "gamma": gamma.to_json()})
    return EXIT_OK


def cmd_check_reduced(args) -> int:
    obj, text = read_json(args.input)
    vs = parse_vectors(obj, args.field, text)
    data = _cone_data(args)
    cone = containing_cone(barycenter(vs), data)
    reduced = all(ray_normalize(v) in cone for v in vs)
    _write(
        args,
        {
            "field": args.field,
            "reduced": reduced,
            "witness_cone": [g.to_json() for g in cone.generators],
        },
    )
    return EXIT_OK


def cycle_residues(chain) -> list[tuple[object, int]]:
    """Nonzero classes of the boundary of ``chain`` modulo GL_2(O).

    Classes equivalent to their own reverse are 2-torsion, so their
    coefficient is taken mod 2.
    """
    acc: dict = defaultdict(int)
    torsion = set()
    for s, c in boundary(chain).items():
        if s.is_degenerate():
            continue
        k, sign = gamma_key(s)
        if sign == 0:
            torsion.add(k)
            acc[k] += c
        else:
            acc[k] += sign * c
    out = []
    for k in sorted(acc, key=lambda m: m.key()):
        c = acc[k] % 2 if k in torsion else acc[k]
        if c:
            out.append((k, c))
    return out


def cmd_check_cycle(args) -> int:
    obj, text = read_json(args.input)
    chain = parse_chain(obj, args.field, text)
    res = cycle_residues(chain)
    # the summary line goes to stderr so stdout stays valid JSON
    print(f"is-cycle: {'false' if res else 'true'}", file=sys.stderr)
    _write(
        args,
        {
            "field": chain.d,
            "is_cycle": not res,
            "residues": [{"class": k.to_json(), "coeff": c} for k, c in res],
        },
    )
    return EXIT_OK


def cmd_act(args) -> int:
    obj, text = read_json(args.input)
    g_obj, g_text = read_json(args.matrix)
    g = parse_matrix(g_obj, args.field, g_text)
    if not g.is_integral():
        raise InputError("matrix entries must lie in O", "matrix")
    if g.det().is_zero():
        raise InputError("singular matrix cannot act on chains", "matrix")
    if any("lifts" in t for t in obj.get("terms", []) if isinstance(t, dict)) or args.default_lifts:
        xi = parse_lifted_chain(obj, args.field, default_lifts=args.default_lifts, text=text)
    else:
        xi = parse_chain(obj, args.field, text)
    _write(args, xi.act(g).to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=2, help="d in Q(sqrt d) (default 2)")
    common.add_argument("--cone-data", help="cone data JSON file for fields without shipped data")
    common.add_argument("--output", "-o", help="output file (default stdout)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--compact", action="store_true", help="single-line JSON")
    fmt.add_argument("--pretty", dest="compact", action="store_false", help="indented JSON (default)")
    common.add_argument("--verbose", "-v", action="store_true")

    p = argparse.ArgumentParser(prog="vreduce", description="Reduce 1-sharbly chains over real quadratic fields.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reduce", parents=[common], help="reduce a chain of lifted 1-sharblies")
    r.add_argument("input", help="chain JSON ('-' for stdin)")
    r.add_argument("--max-passes", type=int, default=64)
    r.add_argument("--trace", metavar="FILE", help="write the reduction trace here")
    r.add_argument("--default-lifts", action="store_true", help="lift terms without lifts by their spanning vectors")
    r.set_defaults(func=cmd_reduce)

    c = sub.add_parser("classify", parents=[common], help="minimal Voronoi cone containing a point")
    c.add_argument("input")
    c.set_defaults(func=cmd_classify)

    n = sub.add_parser("normal-form", parents=[common], help="normal form of a 2x2 matrix")
    n.add_argument("input")
    n.set_defaults(func=cmd_normal_form)

    k = sub.add_parser("check-reduced", parents=[common], help="whether a sharbly is Voronoi reduced")
    k.add_argument("input")
    k.set_defaults(func=cmd_check_reduced)

    y = sub.add_parser("check-cycle", parents=[common], help="whether a chain is a cycle modulo GL_2(O)")
    y.add_argument("input")
    y.set_defaults(func=cmd_check_cycle)

    a = sub.add_parser("act", parents=[common], help="translate a chain by a matrix")
    a.add_argument("matrix", help="matrix JSON")
    a.add_argument("input", help="chain JSON")
    a.add_argument("--default-lifts", action="store_true")
    a.set_defaults(func=cmd_act)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "max_passes", 1) < 1:
        print("error: --max-passes must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ConeLocationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
