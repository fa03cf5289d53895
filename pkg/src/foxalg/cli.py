"""Command-line driver: ``foxalg <command> [flags] args``.

Exit codes: 0 on success, 2 on usage or parse errors, 3 when a bounded
search gave up (retry with a larger ``--max-len``).  With ``--json`` every
result is one JSON object whose ``"status"`` tells these cases apart.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import List, Optional, Sequence

from .errors import BoundedVerdict, FoxError, ParseError, UsageError
from .expr import format_poly, parse_expr
from .factor import divide_right, factorize, gcd, is_irreducible, lattice_of, similar
from .fox import higher_derivative
from .freepoly import FreePolynomial, order_of, strictly_maximal
from .leavitt import LeavittElement, canonical_form, parse_leavitt
from .leavitt import multiply as leavitt_multiply
from .scalars import Field, PrimeField, field_from_spec, format_scalar
from .series import (
    RationalRep,
    TruncatedSeries,
    magnus_embed,
    rat_eval,
    rat_product,
    rat_quasi_inverse,
    rat_sum,
    solve_affine_system,
)
from .words import format_word, word_to_json

__all__ = ["main", "run_command", "build_parser", "format_series"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BOUNDED = 3
DEFAULT_CUTOFF = 4


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _status_name(exc: Exception) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", type(exc).__name__).lower()


# argument decoding ---------------------------------------------------------------


def _read(text: str) -> str:
    return sys.stdin.read() if text == "-" else text


def _poly(text: str, args) -> FreePolynomial:
    s = _read(text).strip()
    if s.startswith("{"):
        g = FreePolynomial.from_json(s)
        if g.rank != args.rank or g.field != args.field:
            raise UsageError("JSON polynomial disagrees with --rank/--field")
        return g
    return parse_expr(s, args.rank, args.field)


_LETTER_RE = re.compile(r"^t(\d+)(\^-1)?$")


def _wrt(text: str):
    """``t1``, ``t1^-1`` or a comma/space separated sequence of them."""
    out = []
    for tok in re.split(r"[,\s]+", text.strip()):
        m = _LETTER_RE.match(tok)
        if not m:
            raise UsageError(f"--wrt: expected t<i> or t<i>^-1, got {tok!r}")
        out.append((int(m.group(1)), -1 if m.group(2) else 1))
    return tuple(out)


def _json_arg(text: str, what: str):
    try:
        return json.loads(_read(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: invalid JSON ({exc.msg})", exc.pos) from exc


def _series_entry(data, args) -> TruncatedSeries:
    # series are given as JSON or as a polynomial whose Magnus image is used
    if isinstance(data, dict):
        return TruncatedSeries.from_json(data, args.rank, args.field).truncate(args.cutoff)
    return magnus_embed(parse_expr(str(data), args.rank, args.field), args.cutoff)


def _rep(text: str, args) -> RationalRep:
    s = _read(text).strip()
    if s.startswith("{"):
        rep = RationalRep.from_json(s)
        if rep.rank != args.rank or rep.field != args.field:
            raise UsageError("JSON representation disagrees with --rank/--field")
        return rep
    return RationalRep.atom(parse_expr(s, args.rank, args.field))


def _leavitt(text: str, args) -> LeavittElement:
    return parse_leavitt(_read(text), args.rank, args.field)


# formatting ----------------------------------------------------------------------------


def format_series(s: TruncatedSeries) -> str:
    """Text form such as ``1 - x1 + x1*x1``, lowest degree first."""
    if s.is_zero():
        return "0"
    signed = not isinstance(s.field, PrimeField)
    out = []
    for k, (m, c) in enumerate(s.sorted_terms()):
        neg = signed and c < 0
        mag = -c if neg else c
        name = "*".join(f"x{i}" for i in m)
        if not name:
            body = format_scalar(mag)
        else:
            body = name if mag == 1 else f"{format_scalar(mag)}*{name}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _poly_result(g: FreePolynomial):
    return format_poly(g), {"result": format_poly(g), "poly": g.to_json()}


# commands ------------------------------------------------------------------------------
# each returns (text, payload); payload gets "status": "ok" unless it sets one


def _cmd_eval(args):
    return _poly_result(_poly(args.expr, args))


def _cmd_derive(args):
    return _poly_result(higher_derivative(_wrt(args.wrt), _poly(args.expr, args)))


def _cmd_order(args):
    n = order_of(_poly(args.expr, args))
    return str(n), {"result": n}


def _cmd_length(args):
    n = _poly(args.expr, args).length()
    return str(n), {"result": n}


def _cmd_maximal(args):
    words, heads, special = strictly_maximal(_poly(args.expr, args))
    words = sorted(words, key=lambda w: (len(w), w))
    text = "words: " + ", ".join(format_word(w) for w in words) + f"\nspecial: {str(special).lower()}"
    return text, {
        "words": [word_to_json(w) for w in words],
        "heads": sorted([list(h) for h in heads]),
        "special": special,
    }


def _cmd_gcd(args):
    return _poly_result(gcd(_poly(args.a, args), _poly(args.b, args), seed=args.seed))


def _cmd_divide(args):
    rho = divide_right(_poly(args.dividend, args), _poly(args.divisor, args), args.max_len)
    return _poly_result(rho)


def _cmd_factor(args):
    f = factorize(_poly(args.expr, args), seed=args.seed)
    lines = [f"unit: {format_scalar(f.unit)}"]
    if f.unit_word:
        lines.append(f"unit word: {format_word(f.unit_word)}")
    lines += [f"factor {k}: {format_poly(p)}" for k, p in enumerate(f.factors, start=1)]
    status = "verified" if f.verified else "unverified"
    lines.append(f"{f.length} factors, {status}")
    payload = f.to_json()
    payload["factors_text"] = [format_poly(p) for p in f.factors]
    payload["status"] = status
    return "\n".join(lines), payload


def _cmd_irreducible(args):
    v = is_irreducible(_poly(args.expr, args), seed=args.seed)
    return str(v).lower(), {"result": v}


def _cmd_similar(args):
    v = similar(_poly(args.a, args), _poly(args.b, args), seed=args.seed)
    return str(v).lower(), {"result": v}


def _cmd_lattice(args):
    lat = lattice_of(_poly(args.expr, args).normalized())
    one = "outside" if lat.one_class is None else "[" + ", ".join(format_scalar(x) for x in lat.one_class) + "]"
    text = f"dimension: {lat.module.dim}\nclass of 1: {one}"
    return text, lat.to_json()


def _cmd_series_magnus(args):
    s = magnus_embed(_poly(args.expr, args), args.cutoff)
    return format_series(s), {"result": format_series(s), "series": s.to_json()}


def _cmd_series_solve(args):
    data = _json_arg(args.system, "system")
    if not isinstance(data, dict) or "P" not in data or "Q" not in data:
        raise ParseError('system must be a JSON object {"P": [...], "Q": [[...]]}')
    P = [_series_entry(x, args) for x in data["P"]]
    Q = [[_series_entry(x, args) for x in row] for row in data["Q"]]
    Z = solve_affine_system(P, Q)
    return "\n".join(format_series(z) for z in Z), {
        "result": [format_series(z) for z in Z],
        "Z": [z.to_json() for z in Z],
    }


def _cmd_series_rational(args):
    a = _rep(args.rep, args)
    if args.combine in ("sum", "product"):
        if args.other is None:
            raise UsageError(f"--combine {args.combine} needs a second representation")
        b = _rep(args.other, args)
        a = rat_sum(a, b) if args.combine == "sum" else rat_product(a, b)
    elif args.other is not None:
        raise UsageError(f"--combine {args.combine} takes one representation")
    if args.combine == "quasi-inverse":
        a = rat_quasi_inverse(a)
    s = rat_eval(a, args.cutoff)
    return format_series(s), {"result": format_series(s), "series": s.to_json(), "rep": a.to_json()}


def _cmd_leavitt_normalize(args):
    a = _leavitt(args.elem, args)
    out = canonical_form(a, a.depth if args.depth is None else args.depth)
    return str(out), out.to_json()


def _cmd_leavitt_mul(args):
    out = leavitt_multiply(_leavitt(args.a, args), _leavitt(args.b, args))
    return str(out), out.to_json()


# parser --------------------------------------------------------------------------------


def _field_arg(text: str) -> Field:
    try:
        return field_from_spec(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _nonneg(text: str) -> int:
    try:
        k = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if k < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {k}")
    return k


def _positive(text: str) -> int:
    k = _nonneg(text)
    if k == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return k


def _common_flags(default_field: str) -> argparse.ArgumentParser:
    # SUPPRESS defaults let flags appear before or after the command name
    p = _ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--rank", type=_positive, help="number of generators (default 2)")
    p.add_argument("--field", type=_field_arg, help=f"Q or gf:P (default {default_field})")
    p.add_argument("--json", action="store_true", help="emit one JSON object")
    p.add_argument("--seed", type=int, help="seed for randomized steps (default 0)")
    p.add_argument("--max-len", dest="max_len", type=_nonneg, help="length bound for bounded searches")
    p.add_argument("--cutoff", type=_nonneg, help=f"series truncation degree (default {DEFAULT_CUTOFF})")
    return p


COMMANDS = {
    "eval": (_cmd_eval, "normalize an expression", ["expr"]),
    "derive": (_cmd_derive, "Fox derivative (--wrt t1, t1^-1 or a sequence)", ["expr"]),
    "order": (_cmd_order, "order of a polynomial", ["expr"]),
    "length": (_cmd_length, "length of a polynomial", ["expr"]),
    "maximal": (_cmd_maximal, "strictly maximal words", ["expr"]),
    "gcd": (_cmd_gcd, "greatest common right divisor", ["a", "b"]),
    "divide": (_cmd_divide, "quotient rho with dividend = rho * divisor", ["dividend", "divisor"]),
    "factor": (_cmd_factor, "factor into irreducibles", ["expr"]),
    "irreducible": (_cmd_irreducible, "irreducibility test", ["expr"]),
    "similar": (_cmd_similar, "similarity test", ["a", "b"]),
    "lattice": (_cmd_lattice, "smallest lattice of the cokernel", ["expr"]),
    "series-magnus": (_cmd_series_magnus, "Magnus expansion", ["expr"]),
    "series-solve": (_cmd_series_solve, 'solve Z = P + QZ given {"P": [...], "Q": [[...]]}', ["system"]),
    "series-rational": (_cmd_series_rational, "evaluate a rational representation", ["rep"]),
    "leavitt-normalize": (_cmd_leavitt_normalize, "canonical form of a Leavitt element", ["elem"]),
    "leavitt-mul": (_cmd_leavitt_mul, "product of two Leavitt elements", ["a", "b"]),
}


def build_parser() -> argparse.ArgumentParser:
    default_field = os.environ.get("FOX_DEFAULT_FIELD", "Q")
    common = _common_flags(default_field)
    parser = _ArgumentParser(prog="foxalg", description="Fox calculus over free group algebras.", parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for name, (_, help_text, positionals) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, parents=[common])
        for pos in positionals:
            sp.add_argument(pos, help='expression, JSON, or "-" for stdin')
        if name == "derive":
            sp.add_argument("--wrt", required=True, help="t<i> or t<i>^-1, or a sequence")
        elif name == "series-rational":
            sp.add_argument("other", nargs="?", help="second representation for sum/product")
            sp.add_argument(
                "--combine", choices=["eval", "sum", "product", "quasi-inverse"], default="eval"
            )
        elif name == "leavitt-normalize":
            sp.add_argument("--depth", type=_nonneg, help="star length of every term (default: current depth)")
    return parser


def _defaults(ns) -> None:
    fixed = {"rank": 2, "json": False, "seed": 0, "max_len": None, "cutoff": DEFAULT_CUTOFF}
    for key, value in fixed.items():
        if not hasattr(ns, key):
            setattr(ns, key, value)
    if not hasattr(ns, "field"):
        spec = os.environ.get("FOX_DEFAULT_FIELD", "Q")
        try:
            ns.field = field_from_spec(spec)
        except ParseError as exc:
            raise UsageError(f"FOX_DEFAULT_FIELD: {exc}") from exc


def run_command(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    try:
        ns = build_parser().parse_args(argv)
        _defaults(ns)
        text, payload = COMMANDS[ns.command][0](ns)
    except BoundedVerdict as exc:
        return _fail(exc, EXIT_BOUNDED, want_json, stdout, stderr)
    except (UsageError, ValueError) as exc:
        return _fail(exc, EXIT_USAGE, want_json, stdout, stderr)
    except FoxError as exc:
        return _fail(exc, EXIT_USAGE, want_json, stdout, stderr)
    if ns.json:
        payload.setdefault("status", "ok")
        print(json.dumps(payload, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return EXIT_OK


def _fail(exc: Exception, code: int, want_json: bool, stdout, stderr) -> int:
    status = _status_name(exc) if not type(exc) is UsageError else "usage_error"
    if want_json:
        print(json.dumps({"status": status, "error": type(exc).__name__, "message": str(exc)}), file=stdout)
    else:
        print(f"foxalg: {exc}", file=stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    return run_command(argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
