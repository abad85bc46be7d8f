"""Command-line entry point.

Exit status: 0 on success, 1 on domain errors (invalid branch data,
inconsistent relations, degenerate pencils, undecidable requests), 2 on
I/O and parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import conics, moduli, prym
from .bundle import as_profile
from .cohomology import h0h1
from .expr import EvalError, ParseError, eval_source, format_value
from .picard import PicardClass

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _profile_json(v) -> list[dict]:
    return [
        {"slope": str(s), "rank": r, "degree": d}
        for s, r, d in as_profile(v).triples()
    ]


def cmd_eval(args) -> tuple[str, dict]:
    v, _ = eval_source(args.expr)
    text = format_value(v)
    if isinstance(v, PicardClass):
        return text, {"expr": args.expr, "result": text, "degree": v.degree}
    rec = {
        "expr": args.expr,
        "result": text,
        "rank": v.rank,
        "degree": v.degree,
        "resolved": as_profile(v).resolved,
        "profile": _profile_json(v),
    }
    return text, rec


def cmd_cohom(args) -> tuple[str, dict]:
    v, _ = eval_source(args.expr)
    if isinstance(v, PicardClass):
        raise EvalError("cohomology of a determinant class: wrap it as a bundle")
    rep = h0h1(v)
    rec = {"expr": args.expr, "h0": rep.h0, "h1": rep.h1, "chi": rep.chi, "resolved": rep.resolved}
    if not rep.resolved:
        text = f"chi = {rep.chi} (h0, h1 depend on an undecomposed slope-0 piece)"
    else:
        text = f"h0 = {rep.h0}  h1 = {rep.h1}  chi = {rep.chi}"
    return text, rec


def _shape(shape, iso) -> str:
    parts = []
    for (r, d), c in zip(shape, iso):
        parts.append(f"{'L' if r == 1 else 'I'}{r}({d})#{c + 1}")
    return " + ".join(parts)


def cmd_moduli(args) -> tuple[str, dict]:
    rep = moduli.enumerate_and_verify(args.e, args.window)
    recs = rep.records()
    head = f"{'case':5} {'E':30} {'F':20} {'rel':3} {'status':30} {'mod':>3} {'h0S':>4} {'hE':>3} {'hF':>3} {'cov':>4}"
    lines = [f"e = {rep.e}, n = {2 * rep.e}, window = {rep.window}, types = {len(recs)}", head]
    for t, v in rep.rows:
        lines.append(
            f"{v.case_tag:5} {_shape(t.E_shape, t.E_iso):30} {_shape(t.F_shape, t.F_iso):20} "
            f"{len(t.relations):3} {v.status:30} {v.moduli_of_pair:3} {v.h0_FS2E:4} "
            f"{v.h0_EndE:3} {v.h0_EndF:3} {v.covering_moduli:4}"
        )
    lines.append("accepted:")
    for t in rep.accepted:
        rels = "; ".join(moduli.relation_strings(t)) or "no relations"
        lines.append(f"  E = {_shape(t.E_shape, t.E_iso)}, F = {_shape(t.F_shape, t.F_iso)}, {rels}")
    doc = {"e": rep.e, "window": rep.window, "verdicts": recs,
           "accepted": [r for r in recs if r["status"] == "accepted"]}
    return "\n".join(lines), doc


def cmd_prym(args) -> tuple[str, dict]:
    b = prym.load_branch_data(args.path)
    rep = prym.prym_polarization(prym.build_homology(b))
    rec = rep.to_json()
    if b.degree == 4:
        rec["component"] = prym.classify_index(rep.d2)
    text = "  ".join(f"{k} = {v}" for k, v in rec.items())
    return text, rec


def cmd_conics(args) -> tuple[str, dict]:
    p = conics.load_pencil(args.path)
    if args.action == "fiber":
        y0 = Fraction(args.at)
        fa = conics.fiber_analysis(p, y0)
        rec = {"y": str(y0), **fa.to_json()}
        text = (f"y = {y0}: multiplicities {list(fa.multiplicities)}, "
                f"branched = {fa.branched}, simple = {fa.simple}")
        return text, rec
    if args.action == "branch":
        facs = conics.branch_divisor(p)
        rec = {
            "factors": [[str(f.as_expr()), k] for f, k in facs],
            "degree": conics.branch_degree(facs),
            "squarefree": conics.is_squarefree(facs),
        }
        body = " * ".join(f"({f})^{k}" if k > 1 else f"({f})" for f, k in rec["factors"]) or "1"
        return f"branch divisor: {body}  (degree {rec['degree']})", rec
    pat = conics.degeneration_pattern(p)
    return pat, {"pattern": pat}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadcover", description="Bundles on an elliptic curve and quadruple covers.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the machine-readable report")
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a bundle expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cohom", parents=[common], help="h0, h1 and chi of a bundle expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_cohom)

    p = sub.add_parser("moduli", parents=[common], help="classify pair types for n = 2e")
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--window", type=int, default=4)
    p.set_defaults(func=cmd_moduli)

    p = sub.add_parser("prym", parents=[common], help="Prym polarization of a branch datum file")
    p.add_argument("path")
    p.set_defaults(func=cmd_prym)

    p = sub.add_parser("conics", parents=[common], help="analyse a pencil-of-conics file")
    p.add_argument("action", choices=("fiber", "branch", "pattern"))
    p.add_argument("path")
    p.add_argument("--at", default="0", help="chart value for 'fiber' (a rational)")
    p.set_defaults(func=cmd_conics)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    try:
        text, rec = args.func(args)
    except (ParseError, OSError, json.JSONDecodeError, prym.InvalidBranchData) as exc:
        code = EXIT_DOMAIN if isinstance(exc, prym.InvalidBranchData) and not _malformed(exc) else EXIT_IO
        print(f"error: {exc}", file=sys.stderr)
        return code
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    out = _dump(rec) if args.json else text
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(out + "\n")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        print(out)
    return EXIT_OK


def _malformed(exc: Exception) -> bool:
    return str(exc).startswith("malformed")


if __name__ == "__main__":
    sys.exit(main())
