"""Command-line interface.

Exit codes: ``equiv`` returns 0 equivalent, 1 not equivalent, 2 incomparable;
``validate`` and ``verify-chain`` return 0 ok, 1 failed. Any input error
(unreadable file, malformed document, invalid drawing where a valid one is
needed, unknown flag) returns 3.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import documents as docs
from .embedding import extract_polarization, signature
from .equivalence import Verdict, equivalent, make_chain, verify_chain
from .errors import UpwardPlaneError
from .extension import npp_extend, npp_extend_auto, polarization_via_npp, virtualize_drawing
from .generate import GeneratorConfig, generate
from .geometry import PlaneBox, validate_drawing, validate_progressive
from .render import render_svg

EXIT_INPUT_ERROR = 3
_EXIT = {Verdict.EQUIVALENT: 0, Verdict.NOT_EQUIVALENT: 1, Verdict.INCOMPARABLE: 2}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_validate(args) -> int:
    d = docs.parse_drawing(_read(args.file))
    report = validate_drawing(d)
    if report.ok and args.box:
        report = validate_progressive(d, PlaneBox(*args.box))
    _write(None, docs.dumps(docs.report_to_obj(report)))
    return 0 if report.ok else 1


def _cmd_signature(args) -> int:
    d = docs.parse_drawing(_read(args.file))
    if args.npp:
        target = npp_extend_auto(d, args.stub_scale).drawing
    else:
        target, _ = virtualize_drawing(d)
    _write(None, docs.dumps(docs.signature_document(signature(target))))
    return 0


def _cmd_polarization(args) -> int:
    d = docs.parse_drawing(_read(args.file))
    validate = validate_drawing(d)
    if not validate.ok:
        raise UpwardPlaneError(f"invalid drawing: {validate.violations[0].message}")
    pols = polarization_via_npp(d, auto_virtualize=True) if args.via_npp else extract_polarization(d)
    _write(None, docs.dumps(docs.polarization_to_obj(pols)))
    return 0


def _cmd_extend(args) -> int:
    d = docs.parse_drawing(_read(args.file))
    ext = npp_extend(d, args.stub_scale) if args.no_auto_virtualize else npp_extend_auto(d, args.stub_scale)
    _write(args.output, docs.serialize_extended(ext))
    return 0


def _cmd_virtualize(args) -> int:
    d = docs.parse_drawing(_read(args.file))
    out, mapping = virtualize_drawing(d)
    obj = docs.drawing_to_obj(out)
    if mapping:
        obj["virtualization_mapping"] = docs.virtualization_to_obj(mapping)
    _write(args.output, docs.dumps(obj))
    return 0


def _cmd_equiv(args) -> int:
    a = docs.parse_drawing(_read(args.a))
    b = docs.parse_drawing(_read(args.b))
    report = equivalent(a, b)
    _write(None, docs.dumps(docs.equivalence_to_obj(report)))
    return _EXIT[report.verdict]


def _cmd_render(args) -> int:
    d = docs.parse_drawing(_read(args.file))
    _write(args.output, render_svg(d, show_ids=not args.no_ids, show_polarization_labels=args.labels))
    return 0


def _cmd_gen(args) -> int:
    cfg = GeneratorConfig(args.vertices, args.edges, args.seed, max_attempts=args.max_attempts)
    d = generate(cfg)
    got = len(d.graph.edges)
    if got < args.edges:
        print(f"generated {got} of {args.edges} requested edges", file=sys.stderr)
    _write(args.output, docs.serialize_drawing(d))
    return 0


def _cmd_perturb(args) -> int:
    d = docs.parse_drawing(_read(args.file))
    chain = make_chain(d, args.steps, args.seed)
    _write(args.output, docs.serialize_chain(chain))
    return 0


def _cmd_verify_chain(args) -> int:
    chain = docs.parse_chain(_read(args.chain))
    check = verify_chain(chain)
    _write(None, docs.dumps(docs.chain_check_to_obj(check)))
    return 0 if check.ok else 1


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="upwardplane", description="Validate and compare upward planar drawings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a drawing (exit 0 valid, 1 invalid)")
    s.add_argument("file")
    s.add_argument("--box", nargs=4, type=_fraction, metavar=("XMIN", "XMAX", "YMIN", "YMAX"),
                   help="also check the boxed (progressive) condition")
    s.set_defaults(func=_cmd_validate)

    s = sub.add_parser("signature", help="print the canonical embedding signature")
    s.add_argument("file")
    s.add_argument("--npp", action="store_true", help="sign the NPP-extension instead of the drawing")
    s.add_argument("--stub-scale", type=_fraction, default=Fraction(1, 2))
    s.set_defaults(func=_cmd_signature)

    s = sub.add_parser("polarization", help="print the polarization structure")
    s.add_argument("file")
    s.add_argument("--via-npp", action="store_true", help="derive it from rotations of the NPP-extension")
    s.set_defaults(func=_cmd_polarization)

    s = sub.add_parser("extend", help="write the NPP-extension of a drawing")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.add_argument("--stub-scale", type=_fraction, default=Fraction(1, 2))
    s.add_argument("--no-auto-virtualize", action="store_true")
    s.set_defaults(func=_cmd_extend)

    s = sub.add_parser("virtualize", help="replace isolated vertices by virtual edges")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=_cmd_virtualize)

    s = sub.add_parser("equiv", help="decide deformation equivalence (exit 0/1/2)")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=_cmd_equiv)

    s = sub.add_parser("render", help="render a drawing as SVG")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.add_argument("--labels", action="store_true", help="show polarization order labels")
    s.add_argument("--no-ids", action="store_true")
    s.set_defaults(func=_cmd_render)

    s = sub.add_parser("gen", help="generate a random valid drawing")
    s.add_argument("--vertices", type=int, required=True)
    s.add_argument("--edges", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-attempts", type=int, default=200)
    s.add_argument("-o", "--output")
    s.set_defaults(func=_cmd_gen)

    s = sub.add_parser("perturb", help="write a seeded deformation chain")
    s.add_argument("file")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=_cmd_perturb)

    s = sub.add_parser("verify-chain", help="check a deformation chain (exit 0/1)")
    s.add_argument("chain")
    s.set_defaults(func=_cmd_verify_chain)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(str(exc))
        return EXIT_INPUT_ERROR
    try:
        return args.func(args)
    except (UpwardPlaneError, OSError, ValueError) as exc:
        print(f"upwardplane: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
