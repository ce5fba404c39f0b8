"""Command-line verification reports.

Subcommands: product-formula, carlitz, genus1, zeta.  All numerics are exact
rational strings (num/den); --float adds decimal renderings for convenience
but never participates in pass/fail logic.  Exit codes: 0 pass, 1 verification
failure, 2 input error, 3 precision insufficient.  The default precision is 64
unless FFPERIODS_PREC_DEFAULT overrides it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .ffield import FFError, fq
from .funcfield import Curve, FieldElement, product_formula_check, random_element
from .genus1 import final_cancellation
from .series import PrecisionInsufficiency
from .zeta_periods import (
    ZetaClosedForm,
    carlitz_product_formula_report,
    euler_product_series,
    z_inf_trivial_at_0,
)


class InputError(ValueError):
    pass


def _frac_str(x):
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def parse_field(qstr):
    try:
        q = int(qstr)
    except (TypeError, ValueError):
        raise InputError("q must be an integer, got %r" % (qstr,))
    try:
        return fq(q)
    except FFError as e:
        raise InputError(str(e))


def parse_coefficient(field, token):
    """An integer (canonical F_p embedding) or g^k (generator power)."""
    token = token.strip()
    if token.startswith("g"):
        if field.gen is None:
            raise InputError("the prime field F_%d has no ring generator g" % field.q)
        k = 1
        if token != "g":
            if not token.startswith("g^"):
                raise InputError("bad coefficient %r" % token)
            k = int(token[2:])
        return field.pow(field.gen, k)
    return int(token) % field.p


def parse_curve(field, spec):
    if spec == "p1":
        return Curve.p1(field)
    if spec.startswith("ell:"):
        parts = spec[4:].split(",")
        if len(parts) != 5:
            raise InputError("elliptic spec needs 5 coefficients a1,a2,a3,a4,a6")
        a = [parse_coefficient(field, p) for p in parts]
        try:
            return Curve.elliptic(field, *a)
        except FFError as e:
            raise InputError(str(e))
    raise InputError("curve must be 'p1' or 'ell:a1,a2,a3,a4,a6', got %r" % (spec,))


# -- a tiny expression parser for --elem -------------------------------------


class _ElemParser:
    def __init__(self, curve, text):
        self.curve = curve
        self.text = text
        self.pos = 0

    def parse(self):
        out = self._expr()
        self._skip()
        if self.pos != len(self.text):
            raise InputError("trailing input at %r" % self.text[self.pos :])
        return out

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self):
        acc = self._term()
        while self._peek() and self._peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self._term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def _term(self):
        acc = self._power()
        while self._peek() and self._peek() in "*/":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self._power()
            if op == "*":
                acc = acc * rhs
            else:
                if rhs.is_zero():
                    raise InputError("division by zero in element expression")
                acc = acc / rhs
        return acc

    def _power(self):
        base = self._atom()
        if self._peek() == "^":
            self.pos += 1
            exp = self._int()
            acc = FieldElement.const(self.curve, 1)
            for _ in range(exp):
                acc = acc * base
            return acc
        return base

    def _int(self):
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise InputError("expected an integer at %r" % self.text[start:])
        return int(self.text[start : self.pos])

    def _atom(self):
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            inner = self._expr()
            if self._peek() != ")":
                raise InputError("unbalanced parentheses")
            self.pos += 1
            return inner
        if ch == "t":
            self.pos += 1
            return FieldElement.t(self.curve)
        if ch == "y":
            self.pos += 1
            try:
                return FieldElement.y(self.curve)
            except FFError as e:
                raise InputError(str(e))
        if ch == "g":
            self.pos += 1
            k = 1
            if self._peek() == "^":
                self.pos += 1
                k = self._int()
            F = self.curve.field
            if F.gen is None:
                raise InputError("the prime field has no ring generator g")
            return FieldElement.const(self.curve, F.pow(F.gen, k))
        if ch.isdigit():
            return FieldElement.const(self.curve, self._int() % self.curve.field.p)
        raise InputError("unexpected character %r in element" % ch)


def parse_element(curve, text):
    return _ElemParser(curve, text).parse()


# -- report envelope ----------------------------------------------------------


def envelope(command, inputs, entries, total, status, started):
    return {
        "command": command,
        "input": inputs,
        "ledger": entries,
        "total": _frac_str(total) if total is not None else None,
        "status": status,
        "wall_time_ms": int((time.monotonic() - started) * 1000),
    }


def emit(env, args):
    if args.json:
        print(json.dumps(env, sort_keys=True, separators=(",", ":")))
        return
    print("command: %s" % env["command"])
    for k, v in env["input"].items():
        print("  %s = %s" % (k, v))
    for entry in env["ledger"]:
        label, value = entry["label"], entry["value"]
        line = "  %-52s %s" % (label, value)
        if args.float:
            parts = str(value).split("/")
            if len(parts) == 2:
                try:
                    line += "   (~%.6f)" % (int(parts[0]) / int(parts[1]))
                except ValueError:
                    pass
        print(line)
    if env["total"] is not None:
        print("  %-52s %s" % ("TOTAL (coefficient of log q)", env["total"]))
    print("status: %s   [%d ms]" % (env["status"], env["wall_time_ms"]))


# -- subcommands ---------------------------------------------------------------


def cmd_product_formula(args):
    started = time.monotonic()
    field = parse_field(args.q)
    curve = parse_curve(field, args.curve)
    elements = []
    if args.elem is not None:
        el = parse_element(curve, args.elem)
        if el.is_zero():
            raise InputError("zero element has no divisor")
        elements.append(("elem", el))
    elif args.random:
        import random as _random

        rng = _random.Random(args.seed)
        for i in range(args.random):
            elements.append(("random[%d]" % i, random_element(curve, rng)))
    else:
        raise InputError("provide --elem or --random N")
    entries = []
    all_hold = True
    for label, el in elements:
        rep = product_formula_check(el)
        all_hold = all_hold and rep.holds
        detail = ", ".join(
            "deg%d:%+d" % (p.degree, v) for p, v in rep.entries
        )
        entries.append(
            {
                "label": "%s sum d_v*v(f)" % label,
                "value": "%d/1" % rep.total,
                "places": detail,
            }
        )
    env = envelope(
        "product-formula",
        {"q": field.q, "curve": args.curve, "count": len(elements)},
        entries,
        Fraction(0) if all_hold else Fraction(1),
        "pass" if all_hold else "fail",
        started,
    )
    emit(env, args)
    return 0 if all_hold else 1


def cmd_carlitz(args):
    started = time.monotonic()
    field = parse_field(args.q)
    ledger = carlitz_product_formula_report(
        field, prec=args.prec, max_place_degree=args.max_place_degree
    )
    entries = [
        {"label": label, "value": _frac_str(v.coeff)} for label, v in ledger.entries
    ]
    for place, vhat, v, zv in ledger.spot_checks:
        entries.append(
            {
                "label": "spot check %r: (vhat, v) vs Z_v" % (place,),
                "value": "(%d, %s) == %s" % (vhat, _frac_str(v), _frac_str(zv)),
            }
        )
    total = ledger.total
    env = envelope(
        "carlitz",
        {"q": field.q, "prec": args.prec, "max_place_degree": args.max_place_degree},
        entries,
        total.coeff,
        "pass" if total.is_zero() else "fail",
        started,
    )
    emit(env, args)
    return 0 if total.is_zero() else 1


def cmd_genus1(args):
    started = time.monotonic()
    field = parse_field(args.q)
    try:
        curve = Curve.elliptic(
            field,
            *(
                parse_coefficient(field, str(a))
                for a in (args.a1, args.a2, args.a3, args.a4, args.a6)
            ),
        )
    except FFError as e:
        raise InputError(str(e))
    report = final_cancellation(curve, prec=args.prec, I=args.product_truncation)
    entries = [
        {"label": "N = #C(F_q)", "value": "%d/1" % report.n_points},
        {"label": "v(alpha), v(beta)", "value": "%d, %d" % (report.v_alpha, report.v_beta)},
        {"label": "v(m)", "value": "%d/1" % report.v_m},
        {"label": "v(xi)", "value": "%d/1" % report.v_xi},
        {
            "label": "slope expressions agree through",
            "value": "%d terms" % report.slope_agreement_terms,
        },
        {"label": "v((sigma* delta)(Xi))", "value": "%d/1" % report.delta_valuation},
        {
            "label": "factor valuations i=1..%d" % len(report.factor_valuations),
            "value": ",".join(_frac_str(f) for f in report.factor_valuations),
        },
        {
            "label": "log|period|_inf (identity twist)",
            "value": _frac_str(report.inf_log_magnitude.coeff),
        },
    ]
    for rec in report.eta:
        entries.append(
            {
                "label": "eta at P=%s: log|sigma*g|, log|period|" % (rec.point,),
                "value": "%s, %s"
                % (
                    _frac_str(rec.g_log_magnitude.coeff),
                    _frac_str(rec.period_log_magnitude.coeff),
                ),
            }
        )
    for label, v in report.ledger:
        entries.append({"label": "ledger: " + label, "value": _frac_str(v.coeff)})
    env = envelope(
        "genus1",
        {
            "q": field.q,
            "a": [args.a1, args.a2, args.a3, args.a4, args.a6],
            "prec": args.prec,
            "product_truncation": args.product_truncation,
        },
        entries,
        report.total.coeff,
        "pass" if report.cancels else "fail",
        started,
    )
    emit(env, args)
    return 0 if report.cancels else 1


def cmd_zeta(args):
    started = time.monotonic()
    field = parse_field(args.q)
    curve = parse_curve(field, args.curve)
    zeta = ZetaClosedForm.for_curve(curve)
    zinf = z_inf_trivial_at_0(zeta)
    entries = [
        {"label": "zeta_A closed form in T = q^(-s)", "value": repr(zeta)},
        {"label": "zeta'_A(0)/zeta_A(0) (coeff of log q)", "value": _frac_str(zinf.coeff)},
    ]
    status = "pass"
    if args.eval and args.eval[0] == "euler-product":
        D = int(args.eval[1])
        euler = euler_product_series(curve, D)
        closed = zeta.series(D)
        ok = euler == closed
        status = "pass" if ok else "fail"
        entries.append(
            {
                "label": "euler product vs closed form through T^%d" % D,
                "value": "%s vs %s" % (euler, closed),
            }
        )
    env = envelope(
        "zeta",
        {"q": field.q, "curve": args.curve},
        entries,
        None,
        status,
        started,
    )
    emit(env, args)
    return 0 if status == "pass" else 1


def build_parser():
    default_prec = int(os.environ.get("FFPERIODS_PREC_DEFAULT", "64"))
    top = argparse.ArgumentParser(
        prog="ffperiods",
        description="Exact period valuations and regularized product formulas "
        "over function fields.  All pass/fail numerics are exact rationals.",
    )
    top.add_argument("--json", action="store_true", help="machine-readable output")
    top.add_argument(
        "--float",
        action="store_true",
        help="append decimal renderings (display only, never used for checks)",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("product-formula", help="sum of d_v * v(f) over all places")
    p.add_argument("--q", required=True, help="field size (prime power)")
    p.add_argument(
        "--curve",
        default="p1",
        help="p1 or ell:a1,a2,a3,a4,a6 (integers via the F_p embedding, or g^k "
        "generator powers for extension fields)",
    )
    p.add_argument("--elem", help="element expression in t (and y), e.g. '(t^2+1)/t'")
    p.add_argument("--random", type=int, help="check N random nonzero elements")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for --random")
    p.set_defaults(func=cmd_product_formula)

    p = sub.add_parser("carlitz", help="regularized product formula for F_q(t)")
    p.add_argument("--q", required=True)
    p.add_argument("--prec", type=int, default=default_prec)
    p.add_argument("--max-place-degree", type=int, default=2)
    p.set_defaults(func=cmd_carlitz)

    p = sub.add_parser("genus1", help="the elliptic-curve cancellation ledger")
    p.add_argument("--q", required=True)
    for name in ("a1", "a2", "a3", "a4", "a6"):
        p.add_argument("--" + name, default="0", help="Weierstrass coefficient")
    p.add_argument("--prec", type=int, default=default_prec)
    p.add_argument("--product-truncation", type=int, default=3)
    p.set_defaults(func=cmd_genus1)

    p = sub.add_parser("zeta", help="zeta closed form and its log derivative")
    p.add_argument("--q", required=True)
    p.add_argument("--curve", default="p1")
    p.add_argument(
        "--eval",
        nargs=2,
        metavar=("MODE", "ARG"),
        help="'euler-product D' cross-checks the closed form through T^D",
    )
    p.set_defaults(func=cmd_zeta)
    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        return args.func(args)
    except InputError as e:
        print("input error: %s" % e, file=sys.stderr)
        return 2
    except PrecisionInsufficiency as e:
        env = envelope(
            args.command,
            {},
            [{"label": "error", "value": str(e)}],
            None,
            "precision_insufficient",
            started,
        )
        emit(env, args)
        print("precision insufficient: %s" % e, file=sys.stderr)
        return 3
    except FFError as e:
        print("verification failure: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
