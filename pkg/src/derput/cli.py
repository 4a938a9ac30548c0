"""Command-line front end.

Every verb writes a plain-text report that starts with a versioned header
and is byte-identical for identical inputs and options.  Exit codes: 0 on
success or pass, 1 when some check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .algebra import (AlgebraError, build_algebra, dual_extension_algebra,
                      one_point_extension_algebra)
from .dersolve import KINDS, PAIR_KINDS, NotDecomposable, decompose_jordan, solve
from .field import FieldError, parse_field
from .linmap import MapSyntaxError, format_map, format_vector, is_jordan_derivation, parse_map
from .quiver import QuiverError, parse_quiver
from .verify import (CHECKS, CONSTRUCTIONS, FAIL, SHAPES, SpecError, format_manifest,
                     parse_manifest, run_check, run_corpus, standard_corpus)

HEADER = "derput-report v1"
THEOREMS = ("3.4", "4.6", "3.10", "3.11", "3.6", "4.2")
SPACE_KINDS = tuple(k for k in KINDS if k != "center")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _construction(args) -> str:
    if getattr(args, "dualext", False) and getattr(args, "opext", False):
        raise InputError("--dualext and --opext are mutually exclusive")
    if args.verb == "dualext" or getattr(args, "dualext", False):
        return "dual_extension"
    if args.verb == "opext" or getattr(args, "opext", False):
        return "one_point_extension"
    return "plain"


def _algebra(args):
    qr = parse_quiver(_read(args.quiver))
    con = _construction(args)
    if con == "dual_extension":
        t = dual_extension_algebra(qr, args.field)
    elif con == "one_point_extension":
        t = one_point_extension_algebra(qr, args.field)
    else:
        t = build_algebra(qr, args.field)
    return qr, con, t


def _preamble(args, **extra) -> list[str]:
    lines = [HEADER, f"verb: {args.verb}", f"field: {args.field}"]
    lines.extend(f"{k}: {v}" for k, v in extra.items())
    return lines


def cmd_build(args):
    _, con, t = _algebra(args)
    lines = _preamble(args, algebra=con, dim=t.dim)
    lines.append("basis:")
    lines.extend(f"  {t.label(i)}" for i in range(t.dim))
    if args.table:
        lines.append("products:")
        for (i, j) in sorted(t.mult):
            prod = format_vector(t, t.mult[(i, j)])
            lines.append(f"  {t.label(i)} * {t.label(j)} = {prod}")
    return 0, lines


def cmd_derspace(args):
    _, con, t = _algebra(args)
    s = solve(t, args.kind)
    lines = _preamble(args, algebra=con, kind=s.kind, **{"algebra dim": t.dim},
                      ambient=s.ambient, dim=s.dim)
    lines.append("basis:")
    for idx, m in enumerate(s.maps(t), 1):
        lines.append(f"  [{idx}]")
        if args.kind in PAIR_KINDS:
            f, d = m
            lines.append("    f:")
            lines.extend("      " + ln for ln in format_map(f).splitlines())
            lines.append("    d:")
            lines.extend("      " + ln for ln in format_map(d).splitlines())
        else:
            lines.extend("    " + ln for ln in format_map(m).splitlines())
    return 0, lines


def cmd_check(args):
    qr = parse_quiver(_read(args.quiver))
    names = args.theorem or list(THEOREMS)
    lines = _preamble(args)
    code = 0
    for name in names:
        v = run_check(name, qr, "plain", args.field)
        lines.append(f"check {name}: {v.summary()}")
        lines.extend(v.details())
        if v.status == FAIL:
            code = 1
    return code, lines


def cmd_decompose(args):
    _, con, t = _algebra(args)
    try:
        theta = parse_map(t, _read(args.map))
    except (QuiverError, MapSyntaxError) as exc:
        raise InputError(f"{args.map}: {exc}") from None
    if not is_jordan_derivation(t, theta):
        raise InputError("the given map is not a Jordan derivation")
    lines = _preamble(args, algebra=con)
    try:
        dec = decompose_jordan(t, theta)
    except NotDecomposable:
        lines.append("FAIL not decomposable: no derivation plus anti-derivation equals the map")
        lines.append("witness:")
        lines.extend("  " + ln for ln in format_map(theta).splitlines())
        return 1, lines
    lines.append(f"ambiguity: {dec.ambiguity}")
    lines.append("PASS D + F = Theta")
    lines.append("derivation D:")
    lines.extend("  " + ln for ln in format_map(dec.derivation).splitlines())
    lines.append("anti-derivation F:")
    lines.extend("  " + ln for ln in format_map(dec.anti_derivation).splitlines())
    return 0, lines


def cmd_corpus(args):
    if args.generate is not None:
        if args.manifest:
            raise InputError("give either a manifest or --generate, not both")
        specs = standard_corpus(args.generate, args.construction, args.shape,
                                first_seed=args.seed)
        return 0, [format_manifest(specs).rstrip("\n")]
    if not args.manifest:
        raise InputError("corpus needs a manifest file or --generate COUNT")
    specs = parse_manifest(_read(args.manifest))
    specs = sorted(specs, key=lambda s: s.seed)
    results = run_corpus(specs, args.theorem, args.threads, args.field)
    lines = _preamble(args, instances=len(specs))
    tally = {}
    for r in results:
        label = r.spec.line().replace(" ", ",")
        for name, status, summary, details in r.verdicts:
            tally[status] = tally.get(status, 0) + 1
            lines.append(f"[{label}] rels={r.relations} {name}: {summary}")
            lines.extend(details)
    lines.append("summary: " + " ".join(f"{k}={tally[k]}" for k in sorted(tally)))
    code = 1 if any(r.failed for r in results) else 0
    return code, lines


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q (rationals, default) or fp:<p>, p >= 3")
    common.add_argument("--threads", type=int, default=1, help="worker bound (output is unaffected)")
    common.add_argument("--out", help="write the report here instead of stdout")

    ext = argparse.ArgumentParser(add_help=False)
    ext.add_argument("--dualext", action="store_true", help="use the dual extension")
    ext.add_argument("--opext", action="store_true", help="use the one-point extension")

    p = argparse.ArgumentParser(prog="derput",
                                description="Exact derivation spaces of quiver algebras.")
    p.add_argument("--version", action="version", version=f"derput {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    for verb in ("build", "dualext", "opext"):
        sp = sub.add_parser(verb, parents=[common] + ([ext] if verb == "build" else []),
                            help="list the basis of an algebra")
        sp.add_argument("quiver")
        sp.add_argument("--table", action="store_true", help="also print nonzero products")

    sp = sub.add_parser("derspace", parents=[common, ext], help="solve a derivation-type law")
    sp.add_argument("quiver")
    sp.add_argument("--kind", required=True, choices=SPACE_KINDS)

    sp = sub.add_parser("check", parents=[common], help="run theorem checks")
    sp.add_argument("quiver")
    sp.add_argument("--theorem", action="append", choices=THEOREMS)

    sp = sub.add_parser("decompose", parents=[common, ext],
                        help="split a Jordan derivation into derivation + anti-derivation")
    sp.add_argument("quiver")
    sp.add_argument("--map", required=True)

    sp = sub.add_parser("corpus", parents=[common], help="run checks over a manifest")
    sp.add_argument("manifest", nargs="?")
    sp.add_argument("--theorem", action="append", choices=CHECKS)
    sp.add_argument("--generate", type=int, metavar="COUNT",
                    help="print a manifest of COUNT instances instead of running one")
    sp.add_argument("--construction", default="dual_extension", choices=CONSTRUCTIONS)
    sp.add_argument("--shape", default="any", choices=SHAPES)
    sp.add_argument("--seed", type=int, default=0, help="first seed for --generate")
    return p


COMMANDS = {
    "build": cmd_build,
    "dualext": cmd_build,
    "opext": cmd_build,
    "derspace": cmd_derspace,
    "check": cmd_check,
    "decompose": cmd_decompose,
    "corpus": cmd_corpus,
}


def run(argv=None) -> tuple[int, str]:
    """Return (exit code, report text); usage errors raise SystemExit(2)."""
    args = _parser().parse_args(argv)
    try:
        args.field = parse_field(args.field)
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        code, lines = COMMANDS[args.verb](args)
    except (InputError, QuiverError, FieldError, SpecError, AlgebraError) as exc:
        return 2, f"error: {exc}\n"
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            return 2, f"error: cannot write {args.out}: {exc.strerror}\n"
        return code, ""
    return code, text


def main(argv=None) -> int:
    code, text = run(argv)
    stream = sys.stderr if code == 2 else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
