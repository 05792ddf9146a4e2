"""Command-line interface.

Simple roots follow Bourbaki numbering, 1-based: ``a1`` ... ``an``.  Roots
are written ``a1+a2+2a3`` or ``[1,1,2,0,0]``; a leading ``-`` negates the
whole sum.  Covectors are ``root:coefficient`` lists such as ``a4:1,a5:1``.

Exit status: 0 on success, 1 on usage or input errors, 2 when a
verification suite reports a failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, expansion, nilorbit, verify
from .chevalley import Covector
from .errors import LieExpError
from .grading_parabolic import classify_root, is_nice
from .root_system import RootSystemError, build
from .whittaker import v_gamma

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

EPILOG = """\
Simple roots use Bourbaki numbering (a1..an).  Roots: "a1+a2+2a3" or
"[1,1,2,0,0]", a leading "-" negates the whole sum.  Covectors:
"a4:1,a5:1".  --config FILE reads a JSON object whose keys are long option
names (without dashes, "-" replaced by "_"); command-line flags win.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _simple(rs, text: str) -> int:
    t = text.strip().lower()
    if t.startswith("a"):
        t = t[1:]
    if not t.isdigit() or not 1 <= int(t) <= rs.rank:
        raise UsageError(f"{text!r} is not a simple root of {rs.name}")
    return int(t) - 1


def _enumeration(rs, text: str | None) -> list[int]:
    if text is None or text.strip().lower() == "bourbaki":
        return list(range(rs.rank))
    return [_simple(rs, p) for p in text.split(",") if p.strip()]


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _render_tree(args, tree) -> str:
    if args.flatten:
        tree = expansion.flatten(tree)
    if args.format == "latex":
        return expansion.render(tree, "latex", standalone=args.standalone, labels=not args.no_labels,
                                collapse=not args.no_collapse)
    if args.format == "dot":
        raise UsageError("dot output is only available for hasse")
    return expansion.render(tree, args.format)


# commands

def cmd_roots(args) -> int:
    rs = build(args.type)
    rows = []
    for i in range(rs.rank):
        kind = classify_root(rs, i)
        rows.append({"root": f"a{i + 1}", "class": kind, "nice": is_nice(rs, i)})
    if args.format == "json":
        data = {
            "type": rs.name,
            "positive_roots": [rs.fmt(r) for r in rs.positive_roots],
            "highest_roots": [rs.fmt(r) for r in rs.highest_roots],
            "simple_roots": rows,
        }
        _emit(args, json.dumps(data, indent=2) + "\n")
        return EXIT_OK
    if args.format not in ("text",):
        raise UsageError("roots supports --format text or json")
    lines = [f"type {rs.name}", f"positive roots {len(rs.positive_roots)}"]
    lines += [f"highest root {rs.fmt(r)}" for r in rs.highest_roots]
    for row in rows:
        lines.append(f"{row['root']:>4}  {row['class']}{'  nice' if row['nice'] else ''}")
    if args.list:
        lines += [rs.fmt(r) for r in rs.positive_roots]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_expand(args) -> int:
    rs = build(args.type)
    bourbaki = args.enum is None or args.enum.strip().lower() == "bourbaki"
    order = _enumeration(rs, args.enum)
    if args.rep == "min":
        tree = expansion.expand_min(rs, order, recursive=not args.top)
    elif bourbaki and len(rs.factors) == 1 and args.top:
        tree = expansion.expand_ntm_bourbaki(rs)
    else:
        tree = expansion.expand_ntm(rs, order, recursive=not args.top)
    if args.audit:
        rep = expansion.audit_supports(tree)
        _emit(args, json.dumps(rep.to_json(rs), indent=2) + "\n")
        return EXIT_OK if rep.ok else EXIT_FAIL
    _emit(args, _render_tree(args, tree))
    return EXIT_OK


def cmd_fourier(args) -> int:
    rs = build(args.type)
    alpha = _simple(rs, args.alpha)
    phi = Covector.parse(rs, args.phi or "")
    if args.choices:
        nf = nilorbit.normal_form_ntm(rs, phi, alpha)
        out = []
        for w, i, j in expansion.pair_choices(rs, rs.simple_root(alpha), nf.beta):
            v = v_gamma(rs, w, rs.S(alpha))
            out.append({"pair": [f"a{i + 1}", f"a{j + 1}"], "word": str(w), "v": [rs.fmt(r) for r in v]})
        _emit(args, json.dumps(out, indent=2) + "\n")
        return EXIT_OK
    if args.rep == "min":
        tree = expansion.fourier_coeff_min(rs, alpha, phi)
    else:
        enum = _enumeration(rs, args.enum) if args.enum else None
        pair = tuple(_simple(rs, p) for p in args.pair.split(",")) if args.pair else None
        tree = expansion.fourier_coeff_ntm(rs, alpha, phi, enum, pair)
    _emit(args, _render_tree(args, tree))
    return EXIT_OK


def cmd_theorem_d(args) -> int:
    rs = build(args.type)
    tree = expansion.theorem_d(rs, _simple(rs, args.alpha))
    _emit(args, _render_tree(args, tree))
    return EXIT_OK


def cmd_heisenberg(args) -> int:
    rs = build(args.type)
    tree = expansion.heisenberg_decomposition(rs, _simple(rs, args.alpha))
    _emit(args, _render_tree(args, tree))
    return EXIT_OK


def cmd_orbit(args) -> int:
    rs = build(args.type)
    text = args.support.strip()
    phi = Covector(rs) if text in ("", "-", "0") else Covector.parse(rs, text)
    lab = nilorbit.classify(rs, phi)
    data = {"type": rs.name, "support": phi.to_json(), **lab.to_json()}
    if args.format == "json":
        _emit(args, json.dumps(data, indent=2) + "\n")
    else:
        part = f"  partition {lab.partition}" if lab.partition else ""
        _emit(args, f"{lab.cls}  {lab.bala_carter}  dim {lab.dim}{part}\n")
    return EXIT_OK


def cmd_hasse(args) -> int:
    rs = build(args.type)
    if len(rs.factors) != 1:
        raise UsageError("hasse needs a single simple factor of type D")
    series, n = rs.requested[0]
    if series != "D":
        raise UsageError("hasse is available for type D only")
    note = ""
    if rs.factors[0] != ("D", n):
        note = f"D{n} is handled as {rs.name}; partitions are those of so({2 * n})"
    cat = nilorbit.dn_catalog(n)
    if args.format == "dot":
        text = nilorbit.hasse_dot(cat)
        if note:
            text = f"// {note}\n" + text
    elif args.format == "json":
        data = nilorbit.hasse_json(cat)
        if note:
            data["note"] = note
        text = json.dumps(data, indent=2) + "\n"
    else:
        lines = [f"{o.name}  dim {o.dim}" for o in cat.orbits]
        lines += [f"{x.name} < {y.name}" for x, y in nilorbit.hasse_edges(cat)]
        if note:
            lines.insert(0, note)
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    types = verify.expand_types(args.types) if args.types else None
    if args.suite not in list(verify.SUITES) + ["all"]:
        raise UsageError(f"unknown suite {args.suite!r}")
    cases = verify.run(args.suite, types)
    lines = [f"{'PASS' if c.ok else 'FAIL'} {c.id}" + (f"  {c.detail}" if c.detail else "") for c in cases]
    failed = sum(1 for c in cases if not c.ok)
    lines.append(f"{len(cases) - failed}/{len(cases)} passed")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_FAIL if failed else EXIT_OK


# parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lieexp", description="Fourier expansions of small automorphic forms on simply-laced groups.",
                epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"lieexp {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("json", "latex", "text"), default="text"):
        sp.add_argument("--type", required=True, help="root system, e.g. E8, D5, A2xA1")
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        sp.add_argument("--config", help="JSON file with default option values")

    def tree_opts(sp):
        sp.add_argument("--standalone", action="store_true", help="wrap LaTeX in a compilable document")
        sp.add_argument("--no-labels", action="store_true", help="omit underbrace labels in LaTeX")
        sp.add_argument("--no-collapse", action="store_true", help="keep sums over trivial cosets")
        sp.add_argument("--flatten", action="store_true", help="replace constant terms by their expansions")

    sp = sub.add_parser("roots", help="list roots and the abelian/Heisenberg classification")
    common(sp, ("text", "json"))
    sp.add_argument("--list", action="store_true", help="also print every positive root")
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("expand", help="Whittaker expansion of a minimal or next-to-minimal form")
    common(sp, default="json")
    tree_opts(sp)
    sp.add_argument("--rep", choices=("min", "ntm"), required=True)
    sp.add_argument("--enum", help='"bourbaki" or a list like a1,a3,a4,a2')
    sp.add_argument("--top", action="store_true", help="leave the constant term unexpanded")
    sp.add_argument("--audit", action="store_true", help="print the character-support audit instead")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("fourier", help="one Fourier coefficient along a maximal parabolic")
    common(sp, default="json")
    tree_opts(sp)
    sp.add_argument("--rep", choices=("min", "ntm"), default="ntm")
    sp.add_argument("--alpha", required=True, help="simple root, e.g. a1")
    sp.add_argument("--phi", default="", help="covector at level 2, e.g. a1:1,a1+a2+a3:1")
    sp.add_argument("--enum", help="enumeration of the roots orthogonal to alpha")
    sp.add_argument("--pair", help="target simple pair in the next-to-minimal case, e.g. a4,a5")
    sp.add_argument("--choices", action="store_true", help="list every reachable pair with its V-domain")
    sp.set_defaults(func=cmd_fourier)

    sp = sub.add_parser("theorem-d", help="expansion through Fourier coefficients along a nice root")
    common(sp, default="json")
    tree_opts(sp)
    sp.add_argument("--alpha", required=True)
    sp.set_defaults(func=cmd_theorem_d)

    sp = sub.add_parser("heisenberg", help="abelian and Omega blocks along a Heisenberg root")
    common(sp, default="json")
    tree_opts(sp)
    sp.add_argument("--alpha", required=True)
    sp.set_defaults(func=cmd_heisenberg)

    sp = sub.add_parser("orbit", help="classify a covector")
    common(sp, ("text", "json"))
    sp.add_argument("--support", default="", help='e.g. "a4:1,a5:1"; empty for zero')
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("hasse", help="nilpotent orbits of type D and their closure order")
    common(sp, ("dot", "json", "text"), default="dot")
    sp.set_defaults(func=cmd_hasse)

    sp = sub.add_parser("verify", help="run invariant suites")
    sp.add_argument("--suite", default="all", help=", ".join(list(verify.SUITES) + ["all"]))
    sp.add_argument("--types", help='e.g. "A1..A8,D4..D8,E6,E7,E8"')
    sp.add_argument("--output", "-o")
    sp.add_argument("--config")
    sp.set_defaults(func=cmd_verify)
    return p


def _apply_config(parser, argv, args):
    if not getattr(args, "config", None):
        return args
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read config: {e}")
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    given = {a.split("=", 1)[0][2:].replace("-", "_") for a in argv if a.startswith("--")}
    for k, v in data.items():
        key = k.replace("-", "_")
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {k!r}")
        if key not in given:
            setattr(args, key, v)
    return args


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(parser, argv, args)
        return args.func(args)
    except (UsageError, LieExpError, RootSystemError, KeyError) as e:
        msg = e.args[0] if e.args else type(e).__name__
        sys.stderr.write(f"lieexp: error: {msg}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
