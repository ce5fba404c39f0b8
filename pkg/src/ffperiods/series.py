"""Truncated Laurent series with explicit precision, Newton polygons, and the
two-stage valuation on series centered at z_v = zeta_v.

A :class:`TruncLaurent` stores finitely many terms c_k * u^(k/e) with raw-int
coefficients in a fixed finite field; exponents live in (1/e)Z for a declared
ramification index e, and everything at exponent >= the absolute precision is
unknown.  ``prec=None`` means the series is exact (a Laurent polynomial).

Precision propagates the standard way: addition keeps the minimum precision,
a product of series with valuations w_a, w_b and precisions N_a, N_b is known
to min(N_a + w_b, N_b + w_a), and inversion of a series of valuation w known
to N is known to N - 2w.

The two-stage valuation (vhat, v) of a series sum b_i (z_v - zeta_v)^i is
vhat = the least i with b_i nonzero and v = the valuation of b_vhat, i.e. of
the evaluation at z_v = zeta_v of the normalized leading part.  Coefficients
b_i may be exact TruncLaurent values or :class:`Magnitude` placeholders that
carry only a valuation; sums of the latter refuse to guess cancellations and
raise :class:`PrecisionInsufficiency` on ties.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .ffield import FFError


class PrecisionInsufficiency(ArithmeticError):
    """Raised when a result is not determined by the available precision."""


class ZeroSeries(ArithmeticError):
    """Raised when an operation needs a visible leading term and there is none."""


def _lcm(a, b):
    return a * b // gcd(a, b)


def _floor_scaled(exponent, e):
    """floor(exponent * e) as an int; conservative for precision bounds."""
    x = Fraction(exponent) * e
    return x.numerator // x.denominator


class TruncLaurent:
    """Truncated Laurent series over an FqField; exponents in (1/e)Z.

    `terms` maps scaled exponents (exponent * e) to raw nonzero coefficients;
    `prec` is the scaled absolute precision, or None for exact series.
    """

    __slots__ = ("field", "e", "terms", "prec", "var")

    def __init__(self, field, terms, prec=None, e=1, var="u"):
        self.field = field
        self.e = e
        self.var = var
        if prec is not None:
            terms = {k: c for k, c in terms.items() if c and k < prec}
        else:
            terms = {k: c for k, c in terms.items() if c}
        self.terms = terms
        self.prec = prec

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_dict(cls, field, data, prec=None, var="u"):
        """Build from {exponent: coefficient} with Fraction or int exponents."""
        e = 1
        for k in data:
            if isinstance(k, Fraction):
                e = _lcm(e, k.denominator)
        if isinstance(prec, Fraction):
            e = _lcm(e, prec.denominator)
        terms = {}
        for k, c in data.items():
            key = int(k * e)
            terms[key] = c if isinstance(c, int) else c.val
        sp = None if prec is None else _floor_scaled(prec, e)
        return cls(field, terms, sp, e, var)

    @classmethod
    def zero(cls, field, prec=None, e=1, var="u"):
        return cls(field, {}, None if prec is None else _floor_scaled(prec, e), e, var)

    @classmethod
    def const(cls, field, c, var="u"):
        return cls(field, {0: c}, None, 1, var)

    @classmethod
    def one(cls, field, var="u"):
        return cls.const(field, 1, var)

    @classmethod
    def monomial(cls, field, exponent, coeff=1, prec=None, var="u"):
        return cls.from_dict(field, {exponent: coeff}, prec, var)

    @classmethod
    def generator(cls, field, prec, var="u"):
        """The uniformizer u itself, known to absolute precision `prec`."""
        return cls.from_dict(field, {1: 1}, prec, var)

    # -- inspection ------------------------------------------------------------

    def is_zero(self):
        """True if no nonzero term is stored (zero to precision, or exactly)."""
        return not self.terms

    def is_exact_zero(self):
        return not self.terms and self.prec is None

    def valuation(self):
        """Leading exponent as a Fraction; raises ZeroSeries if none visible."""
        if not self.terms:
            raise ZeroSeries("series is zero to precision %r" % (self.precision,))
        return Fraction(min(self.terms), self.e)

    def _w(self):
        # scaled valuation for precision propagation; prec stands in for zero
        if self.terms:
            return min(self.terms)
        return self.prec

    @property
    def precision(self):
        return None if self.prec is None else Fraction(self.prec, self.e)

    def leading_coeff(self):
        return self.terms[min(self.terms)]

    def coefficient(self, exponent):
        key = exponent * Fraction(self.e)
        if key.denominator != 1:
            return 0
        return self.terms.get(int(key), 0)

    def known_to(self, exponent):
        return self.prec is None or exponent * self.e < self.prec

    def num_known_terms(self):
        """Number of exponent slots between the valuation and the precision."""
        if self.prec is None:
            return None
        if not self.terms:
            return 0
        return self.prec - min(self.terms)

    # -- ramification/field plumbing -------------------------------------------

    def with_e(self, e2):
        if e2 == self.e:
            return self
        if e2 % self.e:
            raise FFError("ramification %d does not refine %d" % (e2, self.e))
        f = e2 // self.e
        return TruncLaurent(
            self.field,
            {k * f: c for k, c in self.terms.items()},
            None if self.prec is None else self.prec * f,
            e2,
            self.var,
        )

    def map_coeffs(self, target, embed=None):
        """Re-express the coefficients inside an extension field."""
        if embed is None:
            embed = target.embed
        return TruncLaurent(
            target,
            {k: embed(c) for k, c in self.terms.items()},
            self.prec,
            self.e,
            self.var,
        )

    def _unify(self, other):
        if self.field != other.field:
            raise FFError("mixed coefficient fields")
        e = _lcm(self.e, other.e)
        return self.with_e(e), other.with_e(e)

    def truncate(self, prec):
        """Forget everything at exponent >= prec (a Fraction or int)."""
        sp = _floor_scaled(prec, self.e)
        if self.prec is not None:
            sp = min(sp, self.prec)
        return TruncLaurent(self.field, dict(self.terms), sp, self.e, self.var)

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncLaurent.const(self.field, other % self.field.p)
        a, b = self._unify(other)
        F = a.field
        if a.prec is None:
            prec = b.prec
        elif b.prec is None:
            prec = a.prec
        else:
            prec = min(a.prec, b.prec)
        terms = dict(a.terms)
        for k, c in b.terms.items():
            s = F.add(terms.get(k, 0), c)
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return TruncLaurent(F, terms, prec, a.e, a.var)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return TruncLaurent(
            F, {k: F.neg(c) for k, c in self.terms.items()}, self.prec, self.e, self.var
        )

    def __sub__(self, other):
        if isinstance(other, int):
            other = TruncLaurent.const(self.field, other % self.field.p)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other % self.field.p)
        a, b = self._unify(other)
        F = a.field
        wa, wb = a._w(), b._w()
        if a.prec is None and b.prec is None:
            prec = None
        elif a.prec is None:
            prec = None if wa is None else b.prec + wa
        elif b.prec is None:
            prec = None if wb is None else a.prec + wb
        else:
            prec = min(a.prec + wb, b.prec + wa)
        terms = {}
        add, mul = F.add, F.mul
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                k = k1 + k2
                if prec is not None and k >= prec:
                    continue
                s = add(terms.get(k, 0), mul(c1, c2))
                if s:
                    terms[k] = s
                else:
                    terms.pop(k, None)
        return TruncLaurent(F, terms, prec, a.e, a.var)

    __rmul__ = __mul__

    def scale(self, c):
        F = self.field
        if not c:
            return TruncLaurent(F, {}, self.prec, self.e, self.var)
        return TruncLaurent(
            F, {k: F.mul(v, c) for k, v in self.terms.items()}, self.prec, self.e, self.var
        )

    def inverse(self, prec=None):
        """Multiplicative inverse by Newton iteration; exact for monomials.

        `prec` (a Fraction) is required when the series is exact with more
        than one term, since the inverse is then an infinite series.
        """
        if not self.terms:
            raise ZeroSeries("cannot invert a series that is zero to precision")
        F = self.field
        w = min(self.terms)
        if len(self.terms) == 1 and self.prec is None:
            return TruncLaurent(F, {-w: F.inv(self.terms[w])}, None, self.e, self.var)
        if self.prec is not None:
            target = self.prec - 2 * w
            if prec is not None:
                target = min(target, _floor_scaled(prec, self.e))
        else:
            if prec is None:
                raise FFError("inverse of an exact multi-term series needs a precision")
            target = _floor_scaled(prec, self.e)
        need = target + w  # required scaled valuation of the residual 1 - b*x
        cut = lambda s, bound: TruncLaurent(
            F, {k: c for k, c in s.terms.items() if k < bound}, None, self.e, self.var
        )
        # run the iteration on exact snapshots; Newton self-corrects, so the
        # conservative precision tracker would only get in the way here
        x = TruncLaurent(F, {-w: F.inv(self.terms[w])}, None, self.e, self.var)
        one = TruncLaurent(F, {0: 1}, None, self.e, self.var)
        b = TruncLaurent(F, dict(self.terms), None, self.e, self.var)
        acc = 1  # 1 - b*x0 has scaled valuation >= 1 (term gap)
        while acc < need:
            nxt = min(2 * acc, need)
            bt = cut(b, w + nxt)
            xt = cut(x, -w + nxt)
            err = one - bt * xt
            x = cut(xt + xt * err, -w + nxt)
            acc = nxt
        return TruncLaurent(
            F,
            {k: c for k, c in x.terms.items() if k < target},
            target,
            self.e,
            self.var,
        )

    def div(self, other, prec=None):
        if isinstance(other, int):
            return self.scale(self.field.inv(other % self.field.p))
        a, b = self._unify(other)
        if not b.terms:
            raise ZeroSeries("division by a series that is zero to precision")
        wb = b._w()
        if b.prec is None and len(b.terms) > 1 and prec is None:
            if a.prec is None:
                raise FFError("exact/exact division needs a precision")
            prec = Fraction(a.prec - wb, a.e)
        binv = b.inverse(prec if prec is not None else None)
        out = a * binv
        if prec is not None:
            out = out.truncate(prec)
        return out

    def __truediv__(self, other):
        return self.div(other)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncLaurent(self.field, {0: 1}, None, self.e, self.var)
        a = self
        while k:
            if k & 1:
                out = out * a
            a = a * a if k > 1 else a
            k >>= 1
        return out

    def qpow(self, i=1, q=None):
        """The q-power map sum c u^k -> sum c^(q^i) u^(k q^i); exact in char p.

        Default q is the coefficient field's own size (then c^(q^i) = c).
        """
        F = self.field
        if q is None:
            q = F.q
        s = q**i
        if F.q == 2:
            cmap = lambda c: c
        else:
            exp = pow(q, i, F.q - 1)
            cmap = lambda c: F.pow(c, exp)
        return TruncLaurent(
            F,
            {k * s: cmap(c) for k, c in self.terms.items()},
            None if self.prec is None else self.prec * s,
            self.e,
            self.var,
        )

    def compose(self, g):
        """Substitute u -> g; requires integral exponents and v(g) > 0."""
        if any(k % self.e for k in self.terms):
            raise FFError("compose needs integral exponents in the outer series")
        if not g.terms or min(g.terms) <= 0:
            raise FFError("composition requires a positive-valuation inner series")
        wg = g._w()
        ks = sorted(k // self.e for k in self.terms)
        lo, hi = ks[0], ks[-1]
        F = self.field
        coeff = lambda k: self.terms.get(k * self.e, 0)
        # Horner from the top down to exponent 0
        acc = TruncLaurent(F, {}, None, g.e, g.var)
        for k in range(hi, max(lo, 0) - 1, -1):
            acc = acc * g + TruncLaurent.const(F, coeff(k), g.var)
        if lo < 0:
            if g.prec is None:
                if self.prec is None:
                    raise FFError(
                        "compose with negative exponents needs a truncated series"
                    )
                g = g.truncate(Fraction(self.prec * wg, self.e * g.e))
            ginv = g.inverse()
            for k in range(lo, 0):
                c = coeff(k)
                if c:
                    acc = acc + (ginv ** (-k)).scale(c)
        if self.prec is not None:
            # the unknown tail of the outer series starts at prec * v(g)
            acc = acc.truncate(Fraction(self.prec * wg, self.e * g.e))
        return acc

    # -- comparison ----------------------------------------------------------------

    def __eq__(self, other):
        """Equality of stored data (same terms, precision, ramification)."""
        if not isinstance(other, TruncLaurent):
            return NotImplemented
        a, b = self._unify(other)
        return a.terms == b.terms and a.prec == b.prec

    def agrees_with(self, other):
        """True if self - other is zero to the joint precision."""
        return (self - other).is_zero()

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for k in sorted(self.terms)[:8]:
                exp = Fraction(k, self.e)
                c = self.terms[k]
                head = "" if c == 1 and exp != 0 else str(c)
                if exp == 0:
                    parts.append(str(c))
                elif exp == 1:
                    parts.append("%s%s" % (head and head + "*", self.var))
                else:
                    parts.append("%s%s^%s" % (head and head + "*", self.var, exp))
            if len(self.terms) > 8:
                parts.append("...")
            body = " + ".join(parts)
        tail = "" if self.prec is None else " + O(%s^%s)" % (self.var, Fraction(self.prec, self.e))
        return body + tail


def arith(a, b, op, prec=None):
    """Spec-surface dispatcher for binary series arithmetic.

    op is one of 'add', 'mul', 'div', 'compose', or ('q_power', i); the
    q_power form ignores b.
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a.div(b, prec)
    if op == "compose":
        return a.compose(b)
    if isinstance(op, tuple) and op[0] == "q_power":
        return a.qpow(op[1])
    raise FFError("unknown series operation %r" % (op,))


# ---------------------------------------------------------------------------
# valuation-only elements of C_v


class Magnitude:
    """A nonzero element of C_v known only through its valuation.

    Used where the value itself lives in an infinitely ramified extension;
    sums insist on a strict minimum and raise PrecisionInsufficiency rather
    than guess at cancellation.
    """

    __slots__ = ("val",)

    def __init__(self, val):
        self.val = Fraction(val)

    def is_zero(self):
        return False

    def valuation(self):
        return self.val

    def __mul__(self, other):
        return Magnitude(self.val + other.val)

    def __pow__(self, k):
        return Magnitude(self.val * k)

    def __add__(self, other):
        if self.val == other.val:
            raise PrecisionInsufficiency(
                "sum of magnitudes with equal valuation %s: cannot rule out "
                "cancellation" % self.val
            )
        return Magnitude(min(self.val, other.val))

    @staticmethod
    def sum(items):
        items = list(items)
        if not items:
            raise ZeroSeries("empty magnitude sum")
        vals = sorted(m.val for m in items)
        if len(vals) > 1 and vals[0] == vals[1]:
            raise PrecisionInsufficiency(
                "magnitude sum attains its minimum twice at %s" % vals[0]
            )
        return Magnitude(vals[0])

    def __repr__(self):
        return "Magnitude(v=%s)" % self.val


# ---------------------------------------------------------------------------
# Newton polygons


def newton_valuations(points):
    """Root valuations, with multiplicity, from a Newton polygon.

    `points` is an iterable of (exponent k, coefficient valuation w_k) with
    w_k a Fraction/int or None for a zero coefficient.  Returns the negated
    slopes of the lower convex hull, each repeated by its horizontal length,
    sorted ascending.
    """
    pts = sorted((int(k), Fraction(w)) for k, w in points if w is not None)
    if len(pts) < 2:
        raise FFError("Newton polygon needs at least two finite points")
    # lower convex hull, left to right
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        out.extend([-slope] * (x2 - x1))
    return sorted(out)


# ---------------------------------------------------------------------------
# the two-stage valuation


class TwoStageValue(NamedTuple):
    vhat: int
    v: Fraction


class CenteredLaurent:
    """A Laurent series in (z_v - zeta_v) whose coefficients live in C_v.

    Coefficients are TruncLaurent values (exact approximations) or Magnitude
    placeholders; `prec` bounds the known range of (z_v - zeta_v)-exponents.
    """

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec=None):
        self.coeffs = {k: c for k, c in coeffs.items() if not _coeff_is_exact_zero(c)}
        self.prec = prec

    def __mul__(self, other):
        prec = None
        ws, wo = self._w(), other._w()
        if self.prec is not None:
            prec = self.prec + wo
        if other.prec is not None:
            p2 = other.prec + ws
            prec = p2 if prec is None else min(prec, p2)
        out = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                if prec is not None and k >= prec:
                    continue
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return CenteredLaurent(out, prec)

    def _w(self):
        return min(self.coeffs) if self.coeffs else (self.prec or 0)

    def __repr__(self):
        inner = ", ".join("%d: %r" % (k, self.coeffs[k]) for k in sorted(self.coeffs))
        return "CenteredLaurent({%s}, prec=%r)" % (inner, self.prec)


def _coeff_is_exact_zero(c):
    return isinstance(c, TruncLaurent) and c.is_exact_zero()


def two_stage_valuation(f):
    """(vhat, v) of a CenteredLaurent per the two-stage construction.

    vhat is the order in (z_v - zeta_v); v is the valuation of the
    evaluation at z_v = zeta_v of f * (z_v - zeta_v)^(-vhat), which is the
    leading coefficient itself.  Raises PrecisionInsufficiency when a
    coefficient is zero to its precision without being structurally zero.
    """
    if not f.coeffs:
        raise ZeroSeries("two-stage valuation of a series with no visible terms")
    for k in sorted(f.coeffs):
        c = f.coeffs[k]
        if isinstance(c, TruncLaurent):
            if c.is_zero():
                raise PrecisionInsufficiency(
                    "coefficient of (z_v - zeta_v)^%d is zero to precision; "
                    "retry with more terms" % k
                )
            return TwoStageValue(k, c.valuation())
        return TwoStageValue(k, c.valuation())
    raise ZeroSeries("unreachable")


def expand_at_place(f, v, precision):
    """Laurent-expand a function-field element at a place (delegates to funcfield)."""
    from . import funcfield

    return funcfield.expand_at_place(f, v, precision)
