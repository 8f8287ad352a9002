"""Command-line front end.

Exit codes: 0 success, 2 conformance failure under --strict (or a failed
guy verification), 3 resource cap exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import constructions, escalator, lattice, localdensity
from .errors import ResourceCapError

USAGE_EXIT = 64
CONFORMANCE_EXIT = 2
RESOURCE_EXIT = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped onto exit code 64."""

    def error(self, message):  # noqa: D102 (argparse hook)
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _range_list(text: str) -> list[int]:
    """Either 'lo..hi' (inclusive) or a comma-separated list."""
    if ".." in text:
        lo_text, _, hi_text = text.partition("..")
        try:
            lo, hi = int(lo_text), int(hi_text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad range {text!r}") from exc
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return _int_list(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mgonal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_tree = sub.add_parser("tree", help="build an escalator tree and write it as JSON")
    p_tree.add_argument("--m", type=int, required=True)
    p_tree.add_argument("--depth", type=int, default=4)
    p_tree.add_argument("--bound", type=int, default=100_000)
    p_tree.add_argument("--node-cap", type=int, default=escalator.DEFAULT_NODE_CAP)
    p_tree.add_argument("--out", help="output path (stdout when omitted)")

    p_gamma = sub.add_parser("gamma", help="largest truant of the escalator tree")
    p_gamma.add_argument("--m", type=int, required=True)
    p_gamma.add_argument("--bound", type=int, default=100_000)
    p_gamma.add_argument("--depth-cap", type=int, default=12)
    p_gamma.add_argument("--node-cap", type=int, default=escalator.DEFAULT_NODE_CAP)

    p_density = sub.add_parser("density", help="local densities over a range of targets")
    p_density.add_argument("--gram", type=_int_list, required=True)
    p_density.add_argument("--N", type=int, default=1)
    p_density.add_argument("--c", type=int, default=0)
    p_density.add_argument("--p", type=_int_list, required=True)
    p_density.add_argument("--h", type=_range_list, default=list(range(1, 51)),
                           help="targets, as 'lo..hi' or a comma list (default 1..50)")
    p_density.add_argument("--out", help="CSV path (stdout when omitted)")
    p_density.add_argument("--strict", action="store_true",
                           help="exit 2 when any row fails")
    p_density.add_argument("--no-oracle", action="store_true",
                           help="skip the counting-oracle cross-check columns")

    p_guy = sub.add_parser("guy", help="verify a single-gap construction")
    p_guy.add_argument("--m", type=int, required=True)
    p_guy.add_argument("--ell", type=int, required=True)
    p_guy.add_argument("--bound", type=int, default=constructions.DEFAULT_GUY_BOUND)

    p_tau = sub.add_parser("tau", help="numerically evaluate one unit Gauss sum")
    p_tau.add_argument("--p", type=int, required=True)
    p_tau.add_argument("--t", type=int, required=True)
    p_tau.add_argument("--alpha", type=int, default=1)
    p_tau.add_argument("--N", type=int, required=True)
    p_tau.add_argument("--c", type=int, default=1)

    return parser


def _write(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _cmd_tree(args, parser: argparse.ArgumentParser) -> int:
    if args.m < 3 or args.depth < 1 or args.bound < 1:
        parser.error("need m >= 3, depth >= 1, bound >= 1")
    tree = escalator.build_tree(
        args.m, args.depth, args.bound, node_cap=args.node_cap, on_cap="error"
    )
    _write(escalator.serialize_tree(tree), args.out)
    leaves = sum(1 for n in tree.nodes if n.truant is None)
    frontier = sum(1 for n in tree.nodes if n.depth == args.depth)
    internal_max = max(
        (n.truant for n in tree.nodes if n.children and n.truant is not None),
        default=tree.nodes[0].truant,
    )
    print(
        f"tree m={args.m} depth={args.depth} bound={args.bound}: "
        f"nodes={tree.node_count} depth{args.depth}_nodes={frontier} leaves={leaves} "
        f"max_truant={tree.gamma_estimate} internal_max_truant={internal_max} "
        f"complete={str(tree.complete).lower()}"
    )
    return 0


def _cmd_gamma(args, parser: argparse.ArgumentParser) -> int:
    if args.m < 3 or args.bound < 1 or args.depth_cap < 1:
        parser.error("need m >= 3, bound >= 1, depth-cap >= 1")
    tree = escalator.build_tree(
        args.m, args.depth_cap, args.bound, node_cap=args.node_cap, on_cap="truncate"
    )
    value = tree.gamma_estimate
    if tree.complete:
        print(
            f"gamma_{args.m} = {value} (empirical for bound {args.bound}; "
            f"{tree.node_count} nodes, every frontier form universal up to the bound)"
        )
    else:
        print(
            f"gamma_{args.m} >= {value} (lower bound; tree incomplete at "
            f"depth cap {args.depth_cap} / node cap {args.node_cap})"
        )
    return 0


def _cmd_density(args, parser: argparse.ArgumentParser) -> int:
    try:
        X = lattice.ShiftedDiagonalLattice(tuple(args.gram), args.c, args.N)
    except ValueError as exc:
        parser.error(str(exc))
    for p in args.p:
        if not localdensity._is_prime(p):
            parser.error(f"--p entries must be prime, got {p}")
        if X.N % p != 0 and (X.n < 4 or X.n % 2):
            parser.error(f"p={p} does not divide N={X.N}: rank must be even and >= 4")
    rows: list[localdensity.ConformanceRow] = []
    failed = False
    for p in args.p:
        for h_int in args.h:
            h = Fraction(h_int)
            if h <= 0 or not lattice.admissible(X, h):
                rows.append(
                    localdensity.ConformanceRow(
                        p, X.gram, X.N, X.c, h, "not_admissible", None, None, None
                    )
                )
                continue
            result = localdensity.local_density(X, h, p)
            if X.N % p == 0 or args.no_oracle:
                reference, passed = None, True
            else:
                t = localdensity.stabilization_threshold(p, X.gram, h)
                oracle = localdensity.siegel_count_density(p, X.gram, h, t, c=X.c, N=X.N)
                reference = oracle.value
                passed = bool(oracle.stabilized and oracle.value == result.value)
            failed = failed or not passed
            rows.append(
                localdensity.ConformanceRow(
                    p, X.gram, X.N, X.c, h, result.method, result.value, reference, passed
                )
            )
    _write(localdensity.conformance_csv(rows), args.out)
    if args.strict and failed:
        return CONFORMANCE_EXIT
    return 0


def _cmd_guy(args, parser: argparse.ArgumentParser) -> int:
    try:
        gf = constructions.guy_form(args.m, args.ell)
    except ValueError as exc:
        parser.error(str(exc))
    if args.bound < args.ell:
        parser.error("bound must be at least ell")
    report = constructions.verify_guy(gf, args.bound)
    if report.passed:
        print(
            f"guy m={args.m} ell={args.ell} bound={args.bound}: "
            f"misses exactly {{{args.ell}}}: PASS"
        )
        return 0
    print(
        f"guy m={args.m} ell={args.ell} bound={args.bound}: "
        f"missing {sorted(report.missing)}: FAIL"
    )
    return CONFORMANCE_EXIT


def _cmd_tau(args, parser: argparse.ArgumentParser) -> int:
    try:
        value = localdensity.tau_gauss_sum(args.p, args.t, args.alpha, args.N, args.c)
    except ValueError as exc:
        parser.error(str(exc))
    expected = localdensity.tau_lemma_value(args.p, args.t, args.N)
    line = (
        f"tau p={args.p} t={args.t} alpha={args.alpha} N={args.N} c={args.c}: "
        f"{value.real:+.12f}{value.imag:+.12f}i"
    )
    if expected is not None:
        line += f" (closed value {expected}, |err| = {abs(value - expected):.3e})"
    print(line)
    return 0


_COMMANDS = {
    "tree": _cmd_tree,
    "gamma": _cmd_gamma,
    "density": _cmd_density,
    "guy": _cmd_guy,
    "tau": _cmd_tau,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args, parser)
    except ResourceCapError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return RESOURCE_EXIT


if __name__ == "__main__":
    sys.exit(main())
