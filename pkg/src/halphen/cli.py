"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .exactalg import ExactMatrix, format_poly, format_scalar
from .parse import ParseError, parse_poly, parse_value
from .report import Report
from .serialize import (
    operator_from_json,
    report_to_json,
    to_jsonable,
    tuple_from_json,
)


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _value(text: str):
    try:
        return parse_value(text)
    except ParseError as exc:
        raise InputError(str(exc)) from exc


def _poly(text: str):
    try:
        return parse_poly(text)
    except ParseError as exc:
        raise InputError(str(exc)) from exc


def _read_json(text: str):
    if text == "-":
        return json.load(sys.stdin)
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    with open(text, encoding="utf-8") as fh:
        return json.load(fh)


def _lame(args):
    from .ode import LameEquation

    if args.p0 is None or args.nu is None or args.H is None:
        raise InputError("a Lamé equation needs --p0, --nu and --H")
    return LameEquation(_poly(args.p0), _value(args.nu), _value(args.H))


def _add_lame(p, required=True):
    p.add_argument("--p0", required=required, help="cubic, e.g. \"x*(x-1)*(x-81)\"")
    p.add_argument("--nu", required=required)
    p.add_argument("--H", required=required)


def _add_operator(p):
    _add_lame(p, required=False)
    p.add_argument("--coeff", action="append", metavar="POLY", help="operator coefficient, lowest order first (repeat)")
    p.add_argument("--op-json", metavar="FILE", help="operator as JSON (file, literal or - for stdin)")


def _operator(args):
    from .ode import DiffOperator

    if args.coeff:
        return DiffOperator([_poly(c) for c in args.coeff])
    if args.op_json:
        return operator_from_json(_read_json(args.op_json))
    return _lame(args).as_operator()


def _fricke(values):
    if len(values) != 7:
        raise InputError(f"expected 7 values a1 a2 a3 a4 x y z, got {len(values)}")
    from .monodromy import FrickeData

    return FrickeData(*(_value(v) for v in values))


def _tuple(args):
    from .golden import matrix, golden_tuples
    from .monodromy import MatrixTuple

    if getattr(args, "label", None):
        for e in golden_tuples():
            if e["label"] == args.label:
                return MatrixTuple([matrix(m) for m in e["matrices"]])
        raise InputError(f"unknown tuple label {args.label!r}")
    if getattr(args, "tuple", None):
        return tuple_from_json(_read_json(args.tuple))
    raise InputError("give --label or --tuple")


def _add_tuple(p):
    p.add_argument("--label", help="golden tuple label, e.g. N=6")
    p.add_argument("--tuple", help="tuple JSON: file, literal, or - for stdin")


# ---------------------------------------------------------------------------
# output


class Result:
    def __init__(self, command: str, ok: bool = True, report: Report | None = None, **values):
        self.command = command
        self.ok = ok if report is None else (ok and report.ok)
        self.report = report
        self.values = values
        self.lines: list[str] = []

    def text(self, *lines):
        self.lines.extend(lines)
        return self

    def as_json(self) -> dict:
        out = {"command": self.command, "ok": self.ok, "result": to_jsonable(self.values)}
        if self.report is not None:
            out["report"] = report_to_json(self.report)
        return out


def _fmt_detail(v) -> str:
    j = to_jsonable(v)
    return j if isinstance(j, str) else json.dumps(j)


def _report_lines(rep: Report) -> list[str]:
    lines = []
    for c in rep.checks:
        extra = ", ".join(f"{k}={_fmt_detail(v)}" for k, v in c.detail.items())
        lines.append(f"{'PASS' if c.ok else 'FAIL'} {c.name}" + (f": {extra}" if extra else ""))
    return lines


def _op_lines(op) -> list[str]:
    lines = [str(op)]
    for k, c in enumerate(op.coeffs):
        lines.append(f"  coeff[{k}] = {format_poly(c)}")
    return lines


def _matrix_str(m: ExactMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(format_scalar(v) for v in r) + "]" for r in m.rows) + "]"


# ---------------------------------------------------------------------------
# commands


def cmd_halphen(args) -> Result:
    from .transforms import halphen_a, halphen_bc

    eq = _lame(args)
    if args.case == "a":
        op = halphen_a(eq)
    else:
        if args.n is not None:
            n = _value(args.n)
        else:
            n = eq.n_values()[0]
        op = halphen_bc(eq, n, args.case)
    return Result(f"halphen {args.case}", operator=op).text(*_op_lines(op))


def cmd_sym2(args) -> Result:
    from .transforms import sym_square_2nd

    op = sym_square_2nd(_operator(args))
    return Result("sym2", operator=op).text(*_op_lines(op))


def cmd_euler(args) -> Result:
    from .transforms import euler_third_order, euler_transform

    mu = _value(args.mu)
    if args.coeff or args.op_json:
        op = euler_transform(_operator(args), mu)
    else:
        op = euler_third_order(_lame(args), mu)
    return Result("euler", operator=op).text(*_op_lines(op))


def cmd_riemann(args) -> Result:
    from .ode import riemann_scheme

    op = _operator(args)
    s = riemann_scheme(op)
    defect = s.fuchs_defect(op.order)
    lines = [f"{e.label()}: {{{', '.join(format_scalar(x) for x in e.exponents)}}}" for e in s.entries]
    lines.append(f"exponent sum {format_scalar(s.exponent_sum())}, Fuchs defect {format_scalar(defect)}")
    return Result("riemann", scheme=s, exponent_sum=s.exponent_sum(), fuchs_defect=defect).text(*lines)


def cmd_heun2lame(args) -> Result:
    from .ode import HeunEquation
    from .transforms import heun_to_lame

    h = HeunEquation(_poly(args.p0), _value(args.ab), _value(args.Ht), _value(args.lam))
    eq = heun_to_lame(h)
    return Result("heun2lame", lame=eq).text(
        f"p0 = {format_poly(eq.p0)}", f"nu = {format_scalar(eq.nu)}", f"H = {format_scalar(eq.H)}"
    )


def cmd_lame2heun(args) -> Result:
    from .transforms import lame_to_heun

    h = lame_to_heun(_lame(args))
    return Result("lame2heun", heun=h).text(
        f"p0 = {format_poly(h.p0)}", f"lam = {format_scalar(h.lam)}",
        f"ab = {format_scalar(h.ab)}", f"Ht = {format_scalar(h.Ht)}",
    )


def cmd_tables(args) -> Result:
    from .transforms import reproduce_tables

    perturb = {}
    for item in args.perturb or []:
        row, _, delta = item.partition(":")
        if not delta or not row.isdigit():
            raise InputError(f"--perturb expects ROW:DELTA, got {item!r}")
        perturb[int(row)] = _value(delta)
    rep = reproduce_tables(perturb=perturb, workers=args.workers)
    m, t = rep.summary["matched"], rep.summary["total"]
    return Result("tables verify", report=rep).text(*_report_lines(rep), f"{m}/{t} rows match")


def cmd_pullback(args) -> Result:
    from .golden import belyi_rows
    from .pullback import verify_pullback_row

    rows = list(belyi_rows()) if args.row == "all" else [args.row]
    rep = Report("pullback")
    for r in rows:
        try:
            sub = verify_pullback_row(r, perturb_a=None if args.perturb_a is None else _value(args.perturb_a))
        except KeyError as exc:
            raise InputError(exc.args[0]) from exc
        rep.extend(sub, prefix=f"{r}: ")
    return Result(f"pullback verify {args.row}", report=rep).text(*_report_lines(rep), f"{rep.passed}/{len(rep.checks)} checks pass")


def cmd_fricke(args) -> Result:
    from . import monodromy as M

    if args.action == "check":
        f = _fricke(args.values)
        res = M.fricke_residual(f)
        return Result("fricke check", ok=res == 0, fricke=f, residual=res).text(
            f"fricke {f}", f"residual {format_scalar(res)}"
        )
    if args.action == "braid":
        try:
            M.parse_braid_word(args.word)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        f = _fricke(args.values)
        g = M.braid_fricke(f, args.word)
        return Result("fricke braid", fricke=g, residual=M.fricke_residual(g)).text(str(g))
    if args.action == "descend":
        case = M.TripleCase(args.case, args.N)
        n = tuple(int(_value(v)) for v in args.values)
        if len(n) != 3:
            raise InputError("descend takes three integers")
        low = M.descend_minimal(n, case)
        return Result("fricke descend", triple=list(low), case=str(case)).text(f"({', '.join(map(str, low))})")
    sols = M.enumerate_minimal(args.case, args.bound, workers=args.workers)
    items = [{"N": s.N, "triple": list(s.n)} if s.N else {"triple": list(s.n)} for s in sols]
    return Result("fricke enumerate", solutions=items, count=len(sols)).text(*(str(s) for s in sols), f"{len(sols)} minimal triples")


def cmd_tuple(args) -> Result:
    from . import monodromy as M

    if args.action == "verify":
        rep = M.verify_paper_tuples()
        return Result("tuple verify", report=rep).text(*_report_lines(rep), f"{rep.passed}/{len(rep.checks)} checks pass")
    if args.action == "construct":
        c = M.construct_tuple(_fricke(args.values))
        return Result("tuple construct", tuple=c.tuple, fricke=c.fricke, matches_input=c.matches_input, note=c.note).text(
            *(f"A{k} = {_matrix_str(m)}" for k, m in enumerate(c.tuple, 1)), f"traces {c.fricke}", c.note
        )
    t = _tuple(args)
    if args.action == "mc":
        if args.sym2:
            t = M.sym_square_tuple(t)
        out = M.middle_convolution(t, _value(args.lam))
        lines = [f"B{k} = {_matrix_str(m)}" for k, m in enumerate(out, 1)]
        vals = {"tuple": out, "dimension": out.size}
        if out.size == 2 and len(out) == 4:
            vals["fricke"] = M.fricke_params(out)
            lines.append(f"traces {vals['fricke']}")
        return Result("tuple mc", **vals).text(*lines)
    form = M.invariant_form(t)
    lines = [f"dimension {form.dimension}", f"signature {form.signature}"]
    if form.form is not None:
        lines.append(f"H = {_matrix_str(form.form)}")
    return Result("tuple form", dimension=form.dimension, signature=form.signature, form=form.form,
                  irreducible=M.is_irreducible(t)).text(*lines)


def _random_involution(rng: random.Random, det: int) -> ExactMatrix:
    a = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    b = Fraction(rng.choice((-1, 1)) * rng.randint(1, 6), rng.randint(1, 3))
    return ExactMatrix([[a, b], [(-det - a * a) / b, -a]])


def cmd_pipeline(args) -> Result:
    from . import monodromy as M

    if args.check:
        rng = random.Random(args.seed)
        rep = Report("trace-map pipeline")
        for k in range(args.check):
            det = (-1, 1)[k % 2]
            t = M.MatrixTuple.closing([_random_involution(rng, det) for _ in range(3)])
            out = M.trace_pipeline(t)
            want = M.trace_map(M.fricke_params(t), det=det)
            got = M.fricke_params(out) if out.size == 2 else None
            rep.add(f"sample {k + 1}", got == want and out.size == 2, det=det, dimension=out.size, fricke=got, expected=want)
        return Result("pipeline trace-map", report=rep).text(*_report_lines(rep), f"{rep.passed}/{len(rep.checks)} samples match")
    g = M.trace_map(_fricke(args.values), det=args.det)
    return Result("pipeline trace-map", fricke=g).text(str(g))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="halphen", description="Exact Halphen transforms and monodromy computations.")
    ap.add_argument("--version", action="version", version=f"halphen {__version__}")
    ap.add_argument("--json", action="store_true", help="print a JSON document instead of text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("halphen", help="Halphen transforms of a Lamé equation")
    p.add_argument("case", choices=["a", "b", "c"])
    _add_lame(p)
    p.add_argument("--n", help="root of n(n+1) = nu (cases b, c)")
    p.set_defaults(func=cmd_halphen)

    p = sub.add_parser("sym2", help="symmetric square of a second-order operator")
    _add_operator(p)
    p.set_defaults(func=cmd_sym2)

    p = sub.add_parser("euler", help="Euler transform (third-order closed form for Lamé input)")
    _add_operator(p)
    p.add_argument("--mu", required=True)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("riemann", help="Riemann scheme of an operator")
    _add_operator(p)
    p.set_defaults(func=cmd_riemann)

    p = sub.add_parser("heun2lame", help="Heun row to Lamé row")
    p.add_argument("--p0", required=True)
    p.add_argument("--ab", required=True)
    p.add_argument("--Ht", required=True)
    p.add_argument("--lam", default="1")
    p.set_defaults(func=cmd_heun2lame)

    p = sub.add_parser("lame2heun", help="Lamé row to Heun row")
    _add_lame(p)
    p.set_defaults(func=cmd_lame2heun)

    p = sub.add_parser("tables", help="reproduce the Heun/Lamé tables")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--perturb", action="append", metavar="ROW:DELTA", help="add DELTA to a row's Ht (fault injection)")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("pullback", help="verify Belyi pullback rows")
    p.add_argument("action", choices=["verify"])
    p.add_argument("row", help="i, ii, iii, iv, v, ex3.8 or all")
    p.add_argument("--perturb-a", help="add to the hypergeometric a (fault injection)")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("fricke", help="Fricke coordinates under braid moves and Vieta descent")
    p.add_argument("action", choices=["check", "braid", "descend", "enumerate"])
    p.add_argument("values", nargs="*")
    p.add_argument("--word", default="", help="braid word, e.g. \"b1 b2^-1\" (rightmost acts first)")
    p.add_argument("--case", choices=["i", "ii", "iii", "iv"])
    p.add_argument("--N", type=int)
    p.add_argument("--bound", type=int, default=30)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_fricke)

    p = sub.add_parser("tuple", help="monodromy tuples")
    p.add_argument("action", choices=["verify", "construct", "mc", "form"])
    p.add_argument("values", nargs="*")
    _add_tuple(p)
    p.add_argument("--lam", default="-1", help="middle convolution parameter")
    p.add_argument("--sym2", action="store_true", help="take the symmetric square first")
    p.set_defaults(func=cmd_tuple)

    p = sub.add_parser("pipeline", help="symmetric square then MC_{-1}")
    p.add_argument("action", choices=["trace-map"])
    p.add_argument("values", nargs="*")
    p.add_argument("--det", type=int, choices=[-1, 1], default=-1)
    p.add_argument("--check", type=int, default=0, metavar="K", help="run K random tuples through the pipeline")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_pipeline)
    return ap


def _validate(args):
    if args.command == "fricke":
        if args.action in ("descend", "enumerate") and args.case is None:
            raise InputError(f"fricke {args.action} needs --case")
        if args.action == "braid" and not args.word:
            raise InputError("fricke braid needs --word")
    if args.command in ("fricke", "tuple") and args.action == "enumerate" and args.bound < 1:
        raise InputError("--bound must be at least 1")


_FLAGS = {"--json", "--sym2", "--help", "-h", "--version"}
_GLOBAL = {"--json", "--version"}


def _normalize_argv(argv: list[str]) -> list[str]:
    """Bind every option to its value and move bare values behind "--".

    Values such as "-2/9" or "-10" then reach the parser as values, and
    positional values may follow options.
    """
    glob, opts, pos = [], [], []
    it = iter(argv)
    for tok in it:
        if tok == "--":
            pos.extend(it)
            break
        if tok.startswith("--") or tok in _FLAGS:
            if tok in _GLOBAL or (tok in ("-h", "--help") and not pos):
                glob.append(tok)
            elif tok in _FLAGS or "=" in tok:
                opts.append(tok)
            else:
                val = next(it, None)
                opts.append(tok if val is None else f"{tok}={val}")
        else:
            pos.append(tok)
    if not pos:
        return glob + opts
    return glob + pos[:1] + opts + (["--"] + pos[1:] if pos[1:] else [])


def main(argv=None) -> int:
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = ap.parse_args(_normalize_argv(argv))
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help or --version
        return int(exc.code or 0)
    try:
        _validate(args)
        res = args.func(args)
    except (InputError, ValueError, ArithmeticError, OSError, json.JSONDecodeError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"halphen: error: {msg}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(res.as_json(), indent=2))
    else:
        print("\n".join(res.lines))
    return 0 if res.ok else 1


if __name__ == "__main__":
    sys.exit(main())
