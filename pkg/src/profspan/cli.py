"""Command-line surface.

Exit codes: 0 computed/verified, 1 a check found a counterexample (the
report contains a FAIL line with a witness), 2 input error.  Reports are
deterministic: the same inputs and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

from . import formats as fm
from . import groups as g
from . import mackey as mk
from . import spans as sp
from . import verify as vf
from .errors import ParseError, UnknownVerb


def _parse_tower_flag(value: str) -> tuple[int, int]:
    try:
        p_str, depth_str = value.split(",")
        p, depth = int(p_str), int(depth_str)
    except ValueError:
        raise ParseError("<args>", 0, "--tower expects `p,depth`")
    if p < 2 or depth < 1:
        raise ParseError("<args>", 0, "--tower needs p >= 2 and depth >= 1")
    return p, depth


def _matrix_lines(rows) -> list[str]:
    return [" ".join(str(v) for v in row) for row in rows]


def cmd_group_show(args) -> tuple[str, int]:
    G = fm.load_group(args.file)
    lat = g.subgroup_lattice(G)
    lines = [
        f"group of order {G.order}",
        "abelian: "
        + str(
            all(
                G.mul(a, b) == G.mul(b, a)
                for a in G.elements()
                for b in G.elements()
            )
        ),
        f"subgroup conjugacy classes: {lat.num_classes}",
        "inverses: " + " ".join(str(G.inv(x)) for x in G.elements()),
    ]
    return "\n".join(lines), 0


def cmd_subgroups(args) -> tuple[str, int]:
    G = fm.load_group(args.file)
    lat = g.subgroup_lattice(G)
    lines = [f"subgroups of a group of order {G.order}"]
    for c in range(lat.num_classes):
        rep = lat.class_rep(c)
        normal = lat.normal[lat.classes[c][0]]
        lines.append(
            f"class {c}: order {rep.order}, size {len(lat.classes[c])}, "
            f"normal {normal}, representative {{{' '.join(str(x) for x in rep.elements)}}}"
        )
    return "\n".join(lines), 0


def cmd_tom(args) -> tuple[str, int]:
    G = fm.load_group(args.file)
    t = sp.burnside_tables(G)
    lines = [
        "table of marks (rows: orbits G/K, columns: fixed points of H)",
        "class orders: " + " ".join(str(o) for o in t.class_orders),
    ] + _matrix_lines(t.marks)
    return "\n".join(lines), 0


def cmd_burnside(args) -> tuple[str, int]:
    G = fm.load_group(args.file)
    t = sp.burnside_tables(G)
    n = len(t.class_orders)
    lines = ["Burnside ring structure constants (basis: endo-spans of the point)"]
    for i in range(n):
        for j in range(n):
            coeffs = " ".join(str(v) for v in t.ring[i][j])
            lines.append(f"b{i} * b{j} = {coeffs}")
    return "\n".join(lines), 0


def cmd_span_hom(args) -> tuple[str, int]:
    X = fm.load_gset(args.left)
    Y = fm.load_gset(args.right)
    if X.group != Y.group:
        raise ParseError(args.right, 1, "G-sets are over different groups")
    basis = sp.span_basis(X, Y)
    lines = [f"span hom basis: {len(basis)} classes"]
    for b in basis:
        apex, legL, legR = b.key
        lines.append(
            f"apex class {apex}, left {' '.join(str(v) for v in legL)}, "
            f"right {' '.join(str(v) for v in legR)}"
        )
    return "\n".join(lines), 0


def cmd_mackey_check(args) -> tuple[str, int]:
    M = fm.load_mackey(args.file)
    verdict = mk.check_mackey(M)
    if verdict:
        return f"PASS\nlevels: {len(M.levels)}, generators: {len(M.gen_action)}", 0
    return f"FAIL {verdict.reason} (witness {verdict.witness})", 1


def cmd_mackey_fixed(args) -> tuple[str, int]:
    M = fm.load_mackey(args.file)
    try:
        elems = tuple(sorted(int(v) for v in args.kernel.split(",")))
        N = g.make_subgroup(M.group, elems)
    except ValueError as exc:
        raise ParseError("<args>", 0, f"invalid kernel: {exc}")
    fixed = mk.categorical_fixed_points(M, N)
    return fm.serialize_mackey(fixed, args.group_file).rstrip("\n"), 0


_VERIFY = {
    "colim-gset": lambda cap, seed, tower: vf.verify_colim_gset(*tower, cap),
    "colim-span": lambda cap, seed, tower: vf.verify_colim_span(
        tower[0], min(tower[1], 2), min(cap, 3), seed
    ),
    "limit-span": lambda cap, seed, tower: vf.verify_limit_span(
        tower[0], min(tower[1], 2), min(cap, 3)
    ),
    "adjunction": lambda cap, seed, tower: vf.verify_adjunction(cap),
    "mackey-limit": lambda cap, seed, tower: vf.verify_mackey_limit(*tower),
    "funcat": lambda cap, seed, tower: vf.verify_funcat(seed),
}


def cmd_verify(args) -> tuple[str, int]:
    tower = _parse_tower_flag(args.tower)
    if args.check == "all":
        reports = [
            _VERIFY[name](args.cap, args.seed, tower)
            for name in (
                "colim-gset",
                "colim-span",
                "limit-span",
                "adjunction",
                "mackey-limit",
                "funcat",
            )
        ]
    elif args.check in _VERIFY:
        reports = [_VERIFY[args.check](args.cap, args.seed, tower)]
    else:
        raise UnknownVerb(f"unknown verify check: {args.check}")
    blocks = [f"[{r.name}]\n{r.render()}" for r in reports]
    code = 0 if all(r.ok for r in reports) else 1
    return "\n\n".join(blocks), code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profspan",
        description="exact span-category and Mackey-functor computations",
    )
    parser.add_argument("--cap", type=int, default=6, help="G-set size cap")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    parser.add_argument(
        "--tower", default="2,3", help="cyclic tower parameters `p,depth`"
    )
    parser.add_argument("--format", choices=["text"], default="text")
    subs = parser.add_subparsers(dest="verb")

    subs.add_parser("group-show").add_argument("file")
    subs.add_parser("subgroups").add_argument("file")
    subs.add_parser("tom").add_argument("file")
    subs.add_parser("burnside").add_argument("file")
    span_hom = subs.add_parser("span-hom")
    span_hom.add_argument("left")
    span_hom.add_argument("right")
    subs.add_parser("mackey-check").add_argument("file")
    fixed = subs.add_parser("mackey-fixed")
    fixed.add_argument("file")
    fixed.add_argument("kernel", help="kernel elements, comma separated")
    fixed.add_argument(
        "--group-file", default="quotient.grp", help="group file name to embed"
    )
    subs.add_parser("verify").add_argument(
        "check",
        nargs="?",
        default="all",
        help="colim-gset, colim-span, limit-span, adjunction, mackey-limit, funcat, all",
    )
    return parser


_COMMANDS = {
    "group-show": cmd_group_show,
    "subgroups": cmd_subgroups,
    "tom": cmd_tom,
    "burnside": cmd_burnside,
    "span-hom": cmd_span_hom,
    "mackey-check": cmd_mackey_check,
    "mackey-fixed": cmd_mackey_fixed,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.verb is None:
        parser.print_usage()
        return 2
    try:
        report, code = _COMMANDS[args.verb](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnknownVerb as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
