"""Command line interface: ``dglie <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys

from . import fileformat
from .claims import run_claims
from .dgl import generator_homology, linear_part
from .errors import DglError
from .models import AbelianGroupPresentation, moore_wedge, sphere_product
from .ring import LocalRing
from .selfeq import SplitData, infiniteness_check, sequence_report

EXIT_OK, EXIT_WARNING, EXIT_INPUT = 0, 1, 2


def _model_summary(p) -> dict:
    return {
        "ring": str(p.ring),
        "window": list(p.window),
        "generators": [{"name": g.name, "degree": g.degree,
                        "d": fileformat.format_expression(p.differential[g.name])}
                       for g in p.generators],
    }


def _report(p=None) -> dict:
    warnings = []
    if p is not None:
        for w in list(p.report.warnings) + list(p.warnings):
            if w not in warnings:
                warnings.append(w)
    return {
        "model": _model_summary(p) if p is not None else None,
        "hypothesis": p.report.to_dict() if p is not None else None,
        "homology": [],
        "sequence": None,
        "verdict": None,
        "warnings": warnings,
    }


def _homology_entry(p, degree: int, generators: bool) -> dict:
    if generators:
        data = generator_homology(p, degree)
        module, reps = data.module, []
        names = linear_part(p).names.get(degree, [])
        for r in data.representatives:
            reps.append(fileformat.format_expression(
                sum((c * p.gen(n) for n, c in zip(names, r)), p.algebra.zero())))
    else:
        h = p.lie_homology(degree)
        module = h.module
        reps = [fileformat.format_expression(x) for x in h.representatives()]
    return {"degree": degree, "of": "generators" if generators else "lie",
            "module": module.to_dict(), "rendered": module.render(),
            "representatives": reps}


def _parse_invert(primes) -> LocalRing:
    if primes is None:
        return LocalRing.integers()
    if primes == ["Q"]:
        return LocalRing.rationals()
    return LocalRing.invert(*(int(x) for x in primes))


def _moore_spec(text: str):
    """``M:G1;G2;...`` with each Gi in the group syntax (``Z+Z/5``)."""
    if ":" not in text:
        raise ValueError("moore-wedge SPEC must look like 'M:G1;G2;...'")
    m, groups = text.split(":", 1)
    return int(m), [AbelianGroupPresentation.parse(g) for g in groups.split(";") if g.strip()]


# ---------------------------------------------------------------------------
# commands


def cmd_check(args):
    p = fileformat.load(args.file)
    rep = _report(p)
    return rep, [f"presentation over {p.ring} with {len(p.generators)} generators, "
                 f"window {p.window}",
                 f"d^2 = 0: {p.report.d_squared_zero}",
                 f"hypothesis: {'holds' if p.report.hypothesis else 'fails'} "
                 f"(least non-invertible prime {p.report.least_noninvertible})"]


def cmd_basis(args):
    p = fileformat.load(args.file)
    rep = _report(p)
    basis = [p.algebra.format_monomial(m) for m in p.algebra.basis(args.degree)]
    rep["basis"] = {"degree": args.degree, "elements": basis}
    return rep, [f"dim L_{args.degree} = {len(basis)}"] + [f"  {b}" for b in basis]


def cmd_homology(args):
    p = fileformat.load(args.file)
    rep = _report(p)
    entry = _homology_entry(p, args.degree, args.generators)
    rep["homology"].append(entry)
    what = "H(V, d)" if args.generators else "H(L(V))"
    lines = [f"{what} in degree {args.degree}: {entry['rendered']}"]
    lines += [f"  {r}" for r in entry["representatives"]]
    return rep, lines


def cmd_selfeq(args):
    p = fileformat.load(args.file)
    rep = _report(p)
    s = SplitData(p, args.split, args.top)
    r = sequence_report(s, pointed=args.star)
    rep["homology"] = [_homology_entry(s.truncation, d, False) for d in (s.q - 2, s.q - 1)
                       if d >= 1]
    rep["sequence"] = r.to_dict()
    rep["warnings"] += list(r.warnings)
    return rep, ([r.render()] + [f"note: {n}" for n in r.notes]
                 + [f"warning: {w}" for w in r.warnings])


def cmd_infinite(args):
    p = fileformat.load(args.file)
    rep = _report(p)
    v = infiniteness_check(p, args.split, args.top)
    rep["verdict"] = v.to_dict()
    lines = [f"verdict: {v.status}"]
    if v.criterion:
        lines.append(f"criterion: {v.criterion}")
    if v.family:
        lines.append(f"family: {v.family}")
    if v.order is not None:
        lines.append(f"order: {v.order}")
    if v.witnesses:
        lines.append(f"witnesses verified: {v.verified}")
    return rep, lines


def cmd_model(args):
    ring = _parse_invert(args.invert)
    if args.kind == "sphere-product":
        if len(args.spec) != 2:
            raise ValueError("sphere-product needs M N")
        p = sphere_product(int(args.spec[0]), int(args.spec[1]), ring)
    else:
        if len(args.spec) != 1:
            raise ValueError("moore-wedge needs a single SPEC like '4:Z+Z/5;Z'")
        m, groups = _moore_spec(args.spec[0])
        p = moore_wedge(groups, m, ring)
    rep = _report(p)
    text = fileformat.dumps(p)
    rep["presentation"] = text
    return rep, text.rstrip("\n").splitlines()


def cmd_verify(args):
    results = run_claims()
    rep = _report()
    rep["claims"] = [r.to_dict() for r in results]
    failed = [r for r in results if not r.ok]
    if failed:
        rep["warnings"].append(f"{len(failed)} claim(s) failed")
    lines = [r.line() for r in results]
    lines.append(f"{len(results) - len(failed)}/{len(results)} claims pass")
    return rep, lines


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS)
    common.add_argument("--strict", action="store_true", default=argparse.SUPPRESS,
                        help="exit with status 1 when the computation produced warnings")

    parser = argparse.ArgumentParser(prog="dglie", parents=[common],
                                     description="Self-equivalences of localized spaces "
                                                 "through free DG Lie models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse and validate a presentation")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("basis", parents=[common], help="free Lie basis in one degree")
    p.add_argument("file")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("homology", parents=[common], help="homology in one degree")
    p.add_argument("file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--generators", action="store_true",
                   help="homology of the generators under the linear part")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("selfeq", parents=[common], help="self-equivalence exact sequence")
    p.add_argument("file")
    p.add_argument("--split", type=int, required=True, metavar="N")
    p.add_argument("--top", type=int, required=True, metavar="Q")
    p.add_argument("--star", action="store_true", help="homology-trivial subgroup")
    p.set_defaults(func=cmd_selfeq)

    p = sub.add_parser("infinite", parents=[common], help="infiniteness check")
    p.add_argument("file")
    p.add_argument("--split", type=int, required=True, metavar="N")
    p.add_argument("--top", type=int, required=True, metavar="Q")
    p.set_defaults(func=cmd_infinite)

    p = sub.add_parser("model", parents=[common], help="print a built-in model")
    p.add_argument("kind", choices=("sphere-product", "moore-wedge"))
    p.add_argument("spec", nargs="+")
    p.add_argument("--invert", nargs="+", metavar="P")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("verify-paper", parents=[common], help="run the built-in worked examples")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    fmt = getattr(args, "format", "text")
    strict = getattr(args, "strict", False)
    try:
        report, lines = args.func(args)
    except (DglError, ValueError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    if fmt == "structured":
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print("\n".join(lines))
        for w in report["warnings"]:
            if f"warning: {w}" not in lines:
                print(f"warning: {w}")
    if args.command == "verify-paper" and report["warnings"]:
        return EXIT_WARNING
    if strict and report["warnings"]:
        return EXIT_WARNING
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
