"""Command line interface.

Exit status: 0 on success, 1 on user error, 2 when an internal invariant
fails (including a ``--verify`` cross-check against the oracles).
"""

from __future__ import annotations

import argparse
import sys

from .core import Flavor, series_mul
from .diophantine import borel_normal_form, expand_normal_form, hilbert_basis, minimal_solutions
from .errors import GradedError
from .euler import euler_apply, is_homogeneous
from .filtration import (
    bound_kl,
    bound_lk,
    example_family,
    increments,
    sequence_orders,
    series_order,
    truncate,
)
from .morphisms import jet_prolong, jet_signature, morphism_apply, morphism_compose
from .oracle import oracle_ideal_membership, oracle_minimal_solutions, oracle_substitute
from .parsing import (
    format_expr,
    format_morphism,
    format_normal_form,
    load_morphism,
    load_signature,
    parse_expr,
    parse_normal_form,
    parse_truncation,
)


class UsageError(GradedError):
    pass


class InvariantFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fmt_order(o):
    return "inf" if o == float("inf") else str(o)


def _read_stdin_once(state={}):
    if "text" not in state:
        state["text"] = sys.stdin.read()
    return state["text"]


def _exprs(args, sig):
    if not args.expr:
        raise UsageError("at least one --expr is required")
    trunc = parse_truncation(args.trunc) if getattr(args, "trunc", None) else None
    out = []
    for text in args.expr:
        if text == "-":
            text = _read_stdin_once()
        out.append(parse_expr(sig, text, truncation=trunc))
    return out


def _one_expr(args, sig):
    exprs = _exprs(args, sig)
    if len(exprs) != 1:
        raise UsageError("exactly one --expr is expected")
    return exprs[0]


def cmd_basis(args, out):
    basis = hilbert_basis(args.alpha, args.beta)
    if args.verify:
        expected = oracle_minimal_solutions(args.alpha, args.beta, 0, args.box)
        if {(v.p, v.q) for v in basis} != expected:
            raise InvariantFailure("hilbert_basis disagrees with the exhaustive oracle")
    for v in basis:
        print(v, file=out)


def cmd_minimal(args, out):
    sols = minimal_solutions(args.alpha, args.beta, args.weight)
    if args.verify:
        expected = oracle_minimal_solutions(args.alpha, args.beta, args.weight, args.box)
        if args.weight == 0:
            expected = {((0,) * len(args.alpha), (0,) * len(args.beta))}
        if {(v.p, v.q) for v in sols} != expected:
            raise InvariantFailure("minimal_solutions disagrees with the exhaustive oracle")
    for v in sols:
        print(v, file=out)


def cmd_mul(args, out):
    sig = load_signature(args.sig)
    exprs = _exprs(args, sig)
    acc = exprs[0]
    for f in exprs[1:]:
        acc = series_mul(sig, acc, f)
    print(format_expr(sig, acc), file=out)


def cmd_add(args, out):
    sig = load_signature(args.sig)
    exprs = _exprs(args, sig)
    acc = exprs[0]
    for f in exprs[1:]:
        acc = acc + f
    print(format_expr(sig, acc), file=out)


def cmd_order(args, out):
    sig = load_signature(args.sig)
    f = _one_expr(args, sig)
    flavor = Flavor(args.flavor)
    order = series_order(sig, f, flavor)
    if args.verify and f:
        inside = all(oracle_ideal_membership(sig, m, flavor, order) for m in f.terms)
        beyond = all(oracle_ideal_membership(sig, m, flavor, order + 1) for m in f.terms)
        if not inside or beyond:
            raise InvariantFailure("series_order disagrees with ideal membership oracle")
    print(_fmt_order(order), file=out)


def cmd_truncate(args, out):
    sig = load_signature(args.sig)
    f = _one_expr(args, sig)
    print(format_expr(sig, truncate(sig, f, Flavor(args.flavor), args.at)), file=out)


def cmd_bounds(args, out):
    sig = load_signature(args.sig)
    if (args.k is None) == (args.l is None):
        raise UsageError("give exactly one of --k and --l")
    if args.k is not None:
        print(bound_lk(sig, args.weight, args.k), file=out)
    else:
        print(bound_kl(sig, args.weight, args.l), file=out)


def cmd_borel(args, out):
    sig = load_signature(args.sig)
    f = _one_expr(args, sig)
    nf = borel_normal_form(sig, f, args.weight)
    if args.verify and expand_normal_form(sig, nf) != f:
        raise InvariantFailure("normal form does not expand back to the input")
    print(format_normal_form(nf), file=out)


def cmd_expand_borel(args, out):
    sig = load_signature(args.sig)
    if args.nf == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.nf) as fh:
                text = fh.read()
        except OSError as exc:
            raise GradedError(f"cannot read {args.nf}: {exc.strerror}") from None
    nf = parse_normal_form(sig, text)
    print(format_expr(sig, expand_normal_form(sig, nf)), file=out)


def cmd_euler(args, out):
    sig = load_signature(args.sig)
    print(format_expr(sig, euler_apply(sig, _one_expr(args, sig))), file=out)


def cmd_check_homogeneous(args, out):
    sig = load_signature(args.sig)
    print("true" if is_homogeneous(sig, _one_expr(args, sig), args.weight) else "false", file=out)


def cmd_apply_morphism(args, out):
    phi = load_morphism(args.morphism[0])
    if len(args.morphism) != 1:
        raise UsageError("apply-morphism takes exactly one --morphism")
    f = _one_expr(args, phi.target)
    g = morphism_apply(phi, f)
    if args.verify and oracle_substitute(phi, f.untagged()).retag(g.truncation) != g:
        raise InvariantFailure("morphism_apply disagrees with naive substitution")
    print(format_expr(phi.source, g), file=out)


def cmd_compose(args, out):
    if len(args.morphism) < 2:
        raise UsageError("compose needs at least two --morphism files (A->B, then B->C, ...)")
    phis = [load_morphism(p) for p in args.morphism]
    acc = phis[0]
    for psi in phis[1:]:
        acc = morphism_compose(acc, psi)
    print(format_morphism(acc), file=out)


def cmd_jet(args, out):
    sig = load_signature(args.sig)
    f = _one_expr(args, sig)
    print(format_expr(jet_signature(sig), jet_prolong(sig, f, args.order)), file=out)


def cmd_orders_profile(args, out):
    if args.family is not None:
        if args.family < 1:
            raise UsageError("--family needs a positive size")
        sig, incs = example_family(args.family)
    else:
        if args.sig is None:
            raise UsageError("give --family N or --sig with a sequence of --expr terms")
        sig = load_signature(args.sig)
        incs = increments(_exprs(args, sig))
    for fo, uo in sequence_orders(sig, incs):
        print(f"F={_fmt_order(fo)} UF={_fmt_order(uo)}", file=out)


def build_parser():
    p = _Parser(prog="zgraded", description="Exact arithmetic for Z-graded supercommutative algebras.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def cmd(name, func, *, sig=True, expr=True, trunc=True, help=None):
        sp = sub.add_parser(name, help=help)
        if sig:
            sp.add_argument("--sig", required=sig == "required", help="signature file (.gsig)")
        if expr:
            sp.add_argument("--expr", action="append", help="expression text, or '-' for stdin")
        if trunc:
            sp.add_argument("--trunc", help="truncate inputs, e.g. UF:4")
        sp.set_defaults(func=func)
        return sp

    def diophantine(sp):
        sp.add_argument("--alpha", type=_int_list, required=True)
        sp.add_argument("--beta", type=_int_list, required=True)
        sp.add_argument("--verify", action="store_true", help="cross-check with the exhaustive oracle")
        sp.add_argument("--box", type=int, default=12)

    diophantine(cmd("basis", cmd_basis, sig=False, expr=False, trunc=False,
                    help="Hilbert basis of alpha.p = beta.q"))
    sp = cmd("minimal", cmd_minimal, sig=False, expr=False, trunc=False,
             help="minimal solutions of alpha.p - beta.q = r")
    diophantine(sp)
    sp.add_argument("--weight", type=int, required=True)

    cmd("mul", cmd_mul, sig="required", help="product of the expressions")
    cmd("add", cmd_add, sig="required", help="sum of the expressions")
    sp = cmd("order", cmd_order, sig="required", help="filtration order")
    sp.add_argument("--flavor", choices=["F", "UF"], required=True)
    sp.add_argument("--verify", action="store_true")
    sp = cmd("truncate", cmd_truncate, sig="required")
    sp.add_argument("--flavor", choices=["F", "UF"], required=True)
    sp.add_argument("--at", type=int, required=True)
    sp = cmd("bounds", cmd_bounds, sig="required", expr=False, trunc=False,
             help="cofinal bounds l_k (--k) or k_l (--l)")
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--l", type=int)
    sp = cmd("borel", cmd_borel, sig="required", help="weight-0 normal form")
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--verify", action="store_true")
    sp = cmd("expand-borel", cmd_expand_borel, sig="required", expr=False, trunc=False)
    sp.add_argument("--nf", required=True, help="normal form file, or '-' for stdin")
    cmd("euler", cmd_euler, sig="required")
    sp = cmd("check-homogeneous", cmd_check_homogeneous, sig="required")
    sp.add_argument("--weight", type=int, required=True)
    sp = cmd("apply-morphism", cmd_apply_morphism, sig=False)
    sp.add_argument("--morphism", action="append", required=True, help="morphism file (.gmor)")
    sp.add_argument("--verify", action="store_true")
    sp = cmd("compose", cmd_compose, sig=False, expr=False, trunc=False)
    sp.add_argument("--morphism", action="append", required=True)
    sp = cmd("jet", cmd_jet, sig="required")
    sp.add_argument("--order", type=int, required=True)
    sp = cmd("orders-profile", cmd_orders_profile, help="orders of sequence increments")
    sp.add_argument("--family", type=int, help="use xi_i (weight i), eta_i (weight -i), i <= N")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
        args.func(args, out)
    except InvariantFailure as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return 2
    except GradedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - anything else is a bug
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
