"""Function fields of the projective line and of elliptic Weierstrass curves:
places, normalized valuations, divisors of elements, and the product formula.

A curve is either P^1 over F_q (coordinate ring F_q[t]) or a smooth Weierstrass
curve y^2 + a1*t*y + a3*y = t^3 + a2*t^2 + a4*t + a6 (coordinate ring
F_q[t,y] modulo that relation).  Field elements are numerator/denominator
pairs of coordinate-ring elements; on the elliptic curve these are reduced to
y-degree <= 1 and the denominator is rationalized down to F_q[t].

Places are closed points: the infinite place plus, for P^1, monic irreducible
polynomials, and for an elliptic curve, Frobenius orbits of affine points over
F_{q^d}.  Valuations are normalized so the uniformizer has valuation 1 and are
computed by Laurent-expanding in the uniformizer; where the residue field
would exceed the ffield desk-scale bound, the provably-equal factorization
multiplicity (P^1) or norm multiplicity (elliptic) route is used instead.
"""

from __future__ import annotations

from fractions import Fraction

from .ffield import (
    FFError,
    FqField,
    FqPoly,
    build_extension,
    factor,
    monic_irreducibles,
    roots,
)
from .series import PrecisionInsufficiency, TruncLaurent, ZeroSeries

_EXPANSION_FIELD_LIMIT = 1 << 20
# expansions are the primary valuation route up to this residue-field size;
# beyond it the factorization/norm multiplicity routes (provably equal, and
# cross-checked in the tests) take over to keep bulk checks fast
_EXPANSION_FAST_LIMIT = 1 << 12


class Curve:
    """P^1 or a smooth elliptic Weierstrass curve over F_q.

    Elliptic coefficients are raw int encodings of base-field elements.
    """

    def __init__(self, field, kind, a=None):
        self.field = field
        self.kind = kind  # "p1" | "elliptic"
        if kind == "elliptic":
            for x in a:
                if not 0 <= x < field.q:
                    raise FFError("coefficient %r is not an F_%d encoding" % (x, field.q))
            self.a1, self.a2, self.a3, self.a4, self.a6 = a
            if self.discriminant() == 0:
                raise FFError("singular Weierstrass equation (discriminant 0)")
        elif kind != "p1":
            raise FFError("unknown curve kind %r" % (kind,))

    @classmethod
    def p1(cls, field):
        return cls(field, "p1")

    @classmethod
    def elliptic(cls, field, a1=0, a2=0, a3=0, a4=0, a6=0):
        return cls(field, "elliptic", (a1, a2, a3, a4, a6))

    def discriminant(self):
        F = self.field
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        mul = F.mul

        def nmul(k, x):
            # integer multiple k*x in characteristic p
            acc = 0
            for _ in range(k % F.p):
                acc = F.add(acc, x)
            return acc

        b2 = F.add(mul(a1, a1), nmul(4, a2))
        b4 = F.add(nmul(2, a4), mul(a1, a3))
        b6 = F.add(mul(a3, a3), nmul(4, a6))
        b8 = F.add(
            F.add(mul(mul(a1, a1), a6), nmul(4, mul(a2, a6))),
            F.add(
                F.sub(mul(a2, mul(a3, a3)), mul(mul(a1, a3), a4)),
                F.neg(mul(a4, a4)),
            ),
        )
        # delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
        return F.add(
            F.sub(F.neg(mul(mul(b2, b2), b8)), nmul(8, mul(mul(b4, b4), b4))),
            F.sub(nmul(9, mul(mul(b2, b4), b6)), nmul(27, mul(b6, b6))),
        )

    def rhs_poly(self, R=None):
        """t^3 + a2 t^2 + a4 t + a6 over R (default: the base field)."""
        R = R or self.field
        embed = (lambda c: c) if R == self.field else R.embed
        return FqPoly(R, (embed(self.a6), embed(self.a4), embed(self.a2), 1))

    def ylin_poly(self, R=None):
        """a1 t + a3 over R."""
        R = R or self.field
        embed = (lambda c: c) if R == self.field else R.embed
        return FqPoly(R, (embed(self.a3), embed(self.a1)))

    def point_on_curve(self, R, t0, y0):
        lhs = R.add(R.mul(y0, y0), R.mul(self.ylin_poly(R).evaluate(t0), y0))
        return lhs == self.rhs_poly(R).evaluate(t0)

    def __eq__(self, other):
        if not isinstance(other, Curve):
            return NotImplemented
        if self.kind != other.kind or self.field != other.field:
            return False
        if self.kind == "elliptic":
            return (self.a1, self.a2, self.a3, self.a4, self.a6) == (
                other.a1, other.a2, other.a3, other.a4, other.a6,
            )
        return True

    def __hash__(self):
        extra = (
            (self.a1, self.a2, self.a3, self.a4, self.a6)
            if self.kind == "elliptic"
            else ()
        )
        return hash((self.kind, self.field.q) + extra)

    def __repr__(self):
        if self.kind == "p1":
            return "P1/F_%d" % self.field.q
        return "E(%d,%d,%d,%d,%d)/F_%d" % (
            self.a1, self.a2, self.a3, self.a4, self.a6, self.field.q,
        )


# ---------------------------------------------------------------------------
# coordinate-ring elements (c0(t) + c1(t)*y) and field elements


def _apoly_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _apoly_mul(curve, a, b):
    """(a0 + a1 y)(b0 + b1 y) reduced by y^2 = rhs - (a1 t + a3) y."""
    a0, a1 = a
    b0, b1 = b
    c0 = a0 * b0
    c1 = a0 * b1 + a1 * b0
    yy = a1 * b1
    if not yy.is_zero():
        c0 = c0 + yy * curve.rhs_poly()
        c1 = c1 - yy * curve.ylin_poly()
    return (c0, c1)


def _apoly_conj(curve, a):
    """Image under y -> -y - a1 t - a3 (the other root of the quadratic)."""
    a0, a1 = a
    return (a0 - a1 * curve.ylin_poly(), -a1)


def _apoly_norm(curve, a):
    """Norm down to F_q[t]: a * conj(a); the y part cancels identically."""
    c0, c1 = _apoly_mul(curve, a, _apoly_conj(curve, a))
    if not c1.is_zero():
        raise FFError("norm left a y part (internal)")
    return c0


class FieldElement:
    """An element of the function field as a reduced numerator/denominator pair.

    On P^1 both parts are y-free and the fraction is in lowest terms with a
    monic denominator; on an elliptic curve the denominator is rationalized to
    a monic element of F_q[t] and common F_q[t] content is cancelled.
    """

    __slots__ = ("curve", "num", "den")

    def __init__(self, curve, num, den, reduce=True):
        zero = FqPoly(curve.field, ())
        if isinstance(num, FqPoly):
            num = (num, zero)
        if isinstance(den, FqPoly):
            den = (den, zero)
        if curve.kind == "p1" and (not num[1].is_zero() or not den[1].is_zero()):
            raise FFError("P^1 elements cannot involve y")
        if den[0].is_zero() and den[1].is_zero():
            raise ZeroDivisionError("zero denominator")
        self.curve = curve
        if reduce:
            num, den = self._reduce(curve, num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(curve, num, den):
        zero = FqPoly(curve.field, ())
        if curve.kind == "elliptic" and not den[1].is_zero():
            conj = _apoly_conj(curve, den)
            num = _apoly_mul(curve, num, conj)
            den = (_apoly_norm(curve, den), zero)
        d = den[0]
        g = num[0].gcd(num[1]).gcd(d)
        if g.deg > 0:
            num = (num[0] // g, num[1] // g)
            d = d // g
        lead_inv = curve.field.inv(d.leading())
        num = (num[0].scale(lead_inv), num[1].scale(lead_inv))
        return num, (d.monic(), zero)

    @classmethod
    def from_poly(cls, curve, c0, c1=None):
        zero = FqPoly(curve.field, ())
        one = FqPoly(curve.field, (1,))
        return cls(curve, (c0, c1 if c1 is not None else zero), (one, zero))

    @classmethod
    def t(cls, curve):
        return cls.from_poly(curve, FqPoly.x(curve.field))

    @classmethod
    def y(cls, curve):
        if curve.kind != "elliptic":
            raise FFError("y only exists on the elliptic curve")
        return cls.from_poly(curve, FqPoly(curve.field, ()), FqPoly(curve.field, (1,)))

    @classmethod
    def const(cls, curve, c):
        return cls.from_poly(curve, FqPoly.const(curve.field, c))

    @classmethod
    def poly_in_y(cls, curve, poly):
        """poly(y) reduced to y-degree <= 1 via the curve relation (Horner)."""
        acc = cls.const(curve, 0)
        yel = cls.y(curve)
        for c in reversed(poly.coeffs):
            acc = acc * yel + cls.const(curve, c)
        return acc

    def is_zero(self):
        return self.num[0].is_zero() and self.num[1].is_zero()

    def __add__(self, other):
        c = self.curve
        num = _apoly_add(
            _apoly_mul(c, self.num, other.den), _apoly_mul(c, other.num, self.den)
        )
        return FieldElement(c, num, _apoly_mul(c, self.den, other.den))

    def __neg__(self):
        return FieldElement(self.curve, (-self.num[0], -self.num[1]), self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        c = self.curve
        return FieldElement(
            c, _apoly_mul(c, self.num, other.num), _apoly_mul(c, self.den, other.den)
        )

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero element")
        c = self.curve
        return FieldElement(
            c, _apoly_mul(c, self.num, other.den), _apoly_mul(c, self.den, other.num)
        )

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        def side(pair):
            c0, c1 = pair
            if c1.is_zero():
                return repr(c0) if not c0.is_zero() else "0"
            if c0.is_zero():
                return "(%r)*y" % (c1,)
            return "(%r) + (%r)*y" % (c0, c1)

        if self.den[0].coeffs == (1,) and self.den[1].is_zero():
            return side(self.num)
        return "(%s)/(%s)" % (side(self.num), side(self.den))


# ---------------------------------------------------------------------------
# places


class Place:
    """A closed point of the curve.

    kind "infinite": the distinguished F_q-rational point at infinity.
    kind "finite" on P^1: data is a monic irreducible polynomial.
    kind "finite" on an elliptic curve: data is (residue_field, orbit) with
    orbit the tuple of Frobenius-conjugate affine points, anchored at its
    least member; or (h, "inert") bookkeeping for a place above h whose
    residue field exceeds the expansion bound.
    """

    __slots__ = ("curve", "kind", "degree", "data")

    def __init__(self, curve, kind, degree, data=None):
        self.curve = curve
        self.kind = kind
        self.degree = degree
        self.data = data

    @property
    def qv(self):
        return self.curve.field.q**self.degree

    def _key(self):
        if self.kind == "infinite":
            return ("inf",)
        if self.curve.kind == "p1":
            return ("p1", self.data.coeffs)
        if isinstance(self.data[0], FqField):
            return ("orb", self.degree, self.data[1][0])
        return ("norm", self.degree, self.data[0].coeffs, self.data[1])

    def __eq__(self, other):
        return (
            isinstance(other, Place)
            and self.curve == other.curve
            and self._key() == other._key()
        )

    def __hash__(self):
        return hash(self._key())

    @property
    def uniformizer(self):
        """A function with valuation exactly 1 at this place.

        On P^1 and at infinity this is a global FieldElement; at an affine
        elliptic place it is the minimal polynomial over F_q of t0 (smooth
        non-vertical case) or of y0 (vertical-tangent case), which again lies
        in the global function field.
        """
        c = self.curve
        zero = FqPoly(c.field, ())
        one = FqPoly(c.field, (1,))
        if self.kind == "infinite":
            if c.kind == "p1":
                return FieldElement(c, (one, zero), (FqPoly.x(c.field), zero))
            return FieldElement.t(c) / FieldElement.y(c)
        if c.kind == "p1":
            return FieldElement.from_poly(c, self.data)
        if not isinstance(self.data[0], FqField):
            raise FFError("norm-route place stores no uniformizer")
        R, orbit = self.data
        t0, y0 = orbit[0]
        if not _is_vertical(c, R, t0, y0):
            return FieldElement.from_poly(c, _min_poly(c.field, R, t0))
        return FieldElement.poly_in_y(c, _min_poly(c.field, R, y0))

    def __repr__(self):
        if self.kind == "infinite":
            return "Place(inf)"
        if self.curve.kind == "p1":
            return "Place(%r)" % (self.data,)
        if isinstance(self.data[0], FqField):
            return "Place(deg %d at %s)" % (self.degree, (self.data[1][0],))
        return "Place(deg %d above %r, %s)" % (self.degree, self.data[0], self.data[1])


def _is_vertical(curve, R, t0, y0):
    # dF/dy = 2y + a1 t + a3 vanishes at the point
    return R.add(R.add(y0, y0), curve.ylin_poly(R).evaluate(t0)) == 0


def _qfrob(R, q, x, i=1):
    """x^(q^i) inside R for an explicit base size q (R contains F_q)."""
    if R.q == q or x == 0:
        return x
    return R.pow(x, pow(q, i, R.q - 1))


def _min_poly(base, R, x0):
    """Minimal polynomial over the base field of x0 in the extension R."""
    q = base.q
    orbit = [x0]
    cur = _qfrob(R, q, x0)
    while cur != x0:
        orbit.append(cur)
        cur = _qfrob(R, q, cur)
    out = FqPoly(R, (1,))
    for r in orbit:
        out = out * FqPoly(R, (R.neg(r), 1))
    return FqPoly(base, tuple(_unembed(base, R, c) for c in out.coeffs))


def _unembed(base, R, c):
    """Inverse of R.embed on the embedded copy of the base field."""
    if R == base:
        return c
    if R.frob(c, 1) != c:
        raise FFError("element is not in the embedded base field")
    for x in base.elements():
        if R.embed(x) == c:
            return x
    raise FFError("unembed failed (internal)")


def _quad_roots(R, A, B):
    """Roots in R of y^2 + A*y - B (the fiber of the curve over t0), sorted."""
    if R.q <= 64:
        return sorted(y for y in R.elements() if R.add(R.mul(y, y), R.mul(A, y)) == B)
    return roots(FqPoly(R, (R.neg(B), A, 1)))


def _orbit_of(R, q, t0, y0):
    """The orbit of an affine point under the q-power Frobenius on R."""
    orbit = [(t0, y0)]
    cur = (_qfrob(R, q, t0), _qfrob(R, q, y0))
    while cur != (t0, y0):
        orbit.append(cur)
        cur = (_qfrob(R, q, cur[0]), _qfrob(R, q, cur[1]))
    anchor = min(orbit)
    idx = orbit.index(anchor)
    return tuple(orbit[idx:] + orbit[:idx])


def enumerate_places(curve, max_degree):
    """All places of degree <= max_degree, each exactly once.

    The infinite place first, then finite places by (degree, canonical data).
    """
    if max_degree > 4:
        raise FFError("place enumeration bound is degree 4 (desk scale)")
    out = [Place(curve, "infinite", 1)]
    F = curve.field
    if curve.kind == "p1":
        for d in range(1, max_degree + 1):
            for h in monic_irreducibles(F, d):
                out.append(Place(curve, "finite", d, h))
        return out
    for d in range(1, max_degree + 1):
        R = build_extension(F, d) if d > 1 else F
        seen = set()
        pls = []
        for t0 in R.elements():
            ylin = curve.ylin_poly(R).evaluate(t0)
            rhs = curve.rhs_poly(R).evaluate(t0)
            for y0 in _quad_roots(R, ylin, rhs):
                if (t0, y0) in seen:
                    continue
                orbit = _orbit_of(R, F.q, t0, y0)
                seen.update(orbit)
                if len(orbit) == d:
                    pls.append(Place(curve, "finite", d, (R, orbit)))
        pls.sort(key=lambda P: P.data[1][0])
        out.extend(pls)
    return out


def count_points(curve, d=1):
    """#C(F_{q^d}) by exhaustive enumeration (P^1: q^d + 1)."""
    F = curve.field
    if F.q**d > _EXPANSION_FIELD_LIMIT:
        raise FFError("point count over F_{%d^%d} exceeds desk scale" % (F.q, d))
    if curve.kind == "p1":
        return F.q**d + 1
    R = build_extension(F, d) if d > 1 else F
    count = 1  # the point at infinity
    for t0 in R.elements():
        ylin = curve.ylin_poly(R).evaluate(t0)
        rhs = curve.rhs_poly(R).evaluate(t0)
        count += len(_quad_roots(R, ylin, rhs))
    return count


# ---------------------------------------------------------------------------
# Weierstrass expansions at infinity (u = t/y, w = 1/y)


_WEIERSTRASS_CACHE = {}


def weierstrass_expansions(curve, prec):
    """(t(u), y(u), w(u)) at infinity with v(t) = -2, v(y) = -3, v(w) = 3.

    Solves w = u^3 - a1 u w - a3 w^2 + a2 u^2 w + a4 u w^2 + a6 w^3 by fixed
    point iteration, then y = 1/w and t = u*y; all to absolute precision prec.
    Results are cached per curve and precision, and the curve-equation
    residual is asserted once on every fresh computation.
    """
    if curve.kind != "elliptic":
        raise FFError("formal expansions live on the elliptic curve")
    key = (curve, int(prec))
    if key in _WEIERSTRASS_CACHE:
        return _WEIERSTRASS_CACHE[key]
    F = curve.field
    prec = int(prec)
    target = prec + 6
    u = TruncLaurent.from_dict(F, {1: 1}, prec=target)
    a1, a2, a3, a4, a6 = curve.a1, curve.a2, curve.a3, curve.a4, curve.a6
    u2 = u * u
    u3 = u2 * u
    w = u3
    for _ in range(target):
        w2 = w * w
        nxt = (
            u3
            - (u * w).scale(a1)
            - w2.scale(a3)
            + (u2 * w).scale(a2)
            + (u * w2).scale(a4)
            + (w2 * w).scale(a6)
        ).truncate(target)
        if (nxt - w).is_zero():
            w = nxt
            break
        w = nxt
    y = w.inverse()
    t = (u * y).truncate(prec)
    out = (t, y.truncate(prec), w.truncate(prec))
    if not curve_relation_residual(curve, out[0], out[1]).is_zero():
        raise FFError("formal coordinates left the curve (internal)")
    _WEIERSTRASS_CACHE[key] = out
    return out


def curve_relation_residual(curve, t, y):
    """F(t, y) for series coordinates; zero (to precision) iff on the curve."""
    a1, a2, a3, a4, a6 = curve.a1, curve.a2, curve.a3, curve.a4, curve.a6
    return (
        y * y
        + (t * y).scale(a1)
        + y.scale(a3)
        - t * t * t
        - (t * t).scale(a2)
        - t.scale(a4)
        - TruncLaurent.const(t.field, a6)
    )


# ---------------------------------------------------------------------------
# the chord-tangent group law over any coefficient carrier


def ec_add(curve, P, Q):
    """Chord-tangent addition; points are None (infinity) or (t, y) pairs.

    Coordinates may be FqElem wrappers or TruncLaurent series; both points
    must use the same carrier.  Raises PrecisionInsufficiency if coordinates
    agree to precision without being structurally equal.
    """
    if P is None:
        return Q
    if Q is None:
        return P
    t1, y1 = P
    t2, y2 = Q
    a1, a2, a3, a4 = curve.a1, curve.a2, curve.a3, curve.a4
    dt = t2 - t1
    if _struct_zero(dt):
        if _struct_zero(y2 - _neg_y(curve, t1, y1)):
            return None  # vertical chord
        # tangent: lambda = (3t^2 + 2 a2 t + a4 - a1 y) / (2y + a1 t + a3)
        num = (
            _nmul(3, t1 * t1)
            + _nmul(2, _smul(t1, a2))
            + _cst(t1, a4)
            - _smul(y1, a1)
        )
        den = _nmul(2, y1) + _smul(t1, a1) + _cst(t1, a3)
        if _struct_zero(den):
            return None  # 2-torsion
        lam = num / den
    else:
        lam = (y2 - y1) / dt
    t3 = lam * lam + _smul(lam, a1) - _cst(t1, a2) - t1 - t2
    y3 = lam * (t1 - t3) - y1 - _smul(t3, a1) - _cst(t1, a3)
    return (t3, y3)


def ec_neg(curve, P):
    if P is None:
        return None
    t, y = P
    return (t, _neg_y(curve, t, y))


def _neg_y(curve, t, y):
    return -y - _smul(t, curve.a1) - _cst(t, curve.a3)


def _struct_zero(x):
    if isinstance(x, TruncLaurent):
        if x.is_zero():
            if x.prec is not None and not x.is_exact_zero():
                raise PrecisionInsufficiency(
                    "coordinates agree to precision; cannot resolve the group-law case"
                )
            return True
        return False
    return not bool(x)


def _nmul(k, x):
    """Integer multiple k*x (repeated addition, characteristic-safe)."""
    acc = None
    for _ in range(k):
        acc = x if acc is None else acc + x
    return acc if acc is not None else x - x


def _smul(x, c):
    """Scale by the raw base-field encoding c."""
    if isinstance(x, TruncLaurent):
        return x.scale(c)
    return x * type(x)(x.field, c)


def _cst(like, c):
    """The base-field constant with encoding c, in the carrier of `like`."""
    if isinstance(like, TruncLaurent):
        return TruncLaurent.const(like.field, c)
    return type(like)(like.field, c)


# ---------------------------------------------------------------------------
# expansions at places


def _poly_on_series(poly, s, R=None):
    """Evaluate an FqPoly at a TruncLaurent argument, embedding coefficients."""
    R = R or s.field
    embed = (lambda c: c) if poly.field == R else R.embed
    acc = TruncLaurent.zero(R, prec=None, var=s.var)
    for c in reversed(poly.coeffs):
        acc = acc * s + TruncLaurent.const(R, embed(c), var=s.var)
    return acc


def _cut(s, bound):
    """Exact truncation: keep scaled keys < bound, drop precision tracking."""
    return TruncLaurent(
        s.field, {k: c for k, c in s.terms.items() if k < bound}, None, s.e, s.var
    )


def _hensel_root_of_modulus(h, R, prec):
    """T(u) in R[[u]] with h(T) = u and T(0) the least root of h in R."""
    r = roots(h, R)[0]
    hp = h.derivative()
    u = TruncLaurent.from_dict(R, {1: 1})
    T = TruncLaurent.const(R, r)
    acc = 1
    while acc < prec:
        acc = min(2 * acc, prec)
        val = _cut(_poly_on_series(h, T, R) - u, acc)
        der = _cut(_poly_on_series(hp, T, R), acc)
        T = _cut(T - val.div(der, prec=Fraction(acc)), acc)
    return T.truncate(prec)


def _hensel_y_of_t(curve, R, t0, y0, prec):
    """Y(u) with F(t0 + u, Y(u)) = 0, Y(0) = y0; needs dF/dy(P) != 0."""
    u = TruncLaurent.from_dict(R, {1: 1})
    tS = TruncLaurent.const(R, t0) + u
    ylin = _poly_on_series(curve.ylin_poly(R), tS, R)
    rhs = _poly_on_series(curve.rhs_poly(R), tS, R)
    Y = TruncLaurent.const(R, y0)
    acc = 1
    while acc < prec:
        acc = min(2 * acc, prec)
        val = _cut(Y * Y + ylin * Y - rhs, acc)
        der = _cut(_nmul(2, Y) + ylin, acc)
        Y = _cut(Y - val.div(der, prec=Fraction(acc)), acc)
    return tS.truncate(prec), Y.truncate(prec)


def _hensel_t_of_y(curve, R, t0, y0, prec):
    """T(u) with F(T(u), y0 + u) = 0, T(0) = t0; needs dF/dt(P) != 0."""
    u = TruncLaurent.from_dict(R, {1: 1})
    yS = TruncLaurent.const(R, y0) + u
    a2 = curve.a2
    T = TruncLaurent.const(R, t0)
    acc = 1
    while acc < prec:
        acc = min(2 * acc, prec)
        Tt = _cut(T, acc)
        val = _cut(curve_relation_residual(curve, Tt, yS), acc)
        # dF/dt = a1 y - 3 t^2 - 2 a2 t - a4
        der = _cut(
            yS.scale(curve.a1)
            - _nmul(3, Tt * Tt)
            - _nmul(2, Tt.scale(a2))
            - TruncLaurent.const(R, R.embed(curve.a4) if R != curve.field else curve.a4),
            acc,
        )
        T = _cut(Tt - val.div(der, prec=Fraction(acc)), acc)
    return T.truncate(prec), yS.truncate(prec)


def _eval_bivariate(f, tS, yS, R):
    num = _poly_on_series(f.num[0], tS, R) + _poly_on_series(f.num[1], tS, R) * yS
    den = _poly_on_series(f.den[0], tS, R) + _poly_on_series(f.den[1], tS, R) * yS
    return num / den


def _expand(f, place, precision):
    curve = place.curve
    F = curve.field
    prec = int(precision)
    if curve.kind == "p1":
        if place.kind == "infinite":
            uinv = TruncLaurent.from_dict(F, {-1: 1})
            num = _poly_on_series(f.num[0], uinv)
            den = _poly_on_series(f.den[0], uinv)
            return num.div(den, prec=Fraction(prec))
        h = place.data
        if F.q**h.deg > _EXPANSION_FIELD_LIMIT:
            raise FFError("residue field exceeds the expansion bound")
        R = build_extension(F, h.deg) if h.deg > 1 else F
        inner = prec + f.den[0].deg + 2
        T = _hensel_root_of_modulus(h, R, inner)
        return _poly_on_series(f.num[0], T, R) / _poly_on_series(f.den[0], T, R)
    if place.kind == "infinite":
        degs = [f.num[0].deg, f.num[1].deg, f.den[0].deg, f.den[1].deg, 1]
        inner = prec + 3 * (max(degs) + 2) + 6
        inner += -inner % 16  # bucket so the expansion cache gets hits
        t, y, _ = weierstrass_expansions(curve, inner)
        return _eval_bivariate(f, t, y, F)
    if not isinstance(place.data[0], FqField):
        raise FFError("place %r carries no expansion data (norm route)" % (place,))
    R, orbit = place.data
    t0, y0 = orbit[0]
    degs = [f.num[0].deg, f.num[1].deg, f.den[0].deg, f.den[1].deg, 1]
    inner = prec + 2 * (max(degs) + 3) + 4
    if not _is_vertical(curve, R, t0, y0):
        tS, yS = _hensel_y_of_t(curve, R, t0, y0, inner)
    else:
        tS, yS = _hensel_t_of_y(curve, R, t0, y0, inner)
    return _eval_bivariate(f, tS, yS, R)


def expand_at_place(f, place, precision):
    """Laurent expansion of f in the place's uniformizer, coefficients in F_v.

    The leading exponent equals valuation_at(place, f); requesting a precision
    at or below the leading term is an error.
    """
    if f.is_zero():
        raise FFError("cannot expand the zero element")
    s = _expand(f, place, precision)
    if not s.terms:
        raise PrecisionInsufficiency(
            "no terms of the expansion visible below precision %s" % (precision,)
        )
    if Fraction(precision) <= s.valuation():
        raise FFError(
            "requested precision %s is below the leading term %s"
            % (precision, s.valuation())
        )
    return s.truncate(Fraction(precision))


# ---------------------------------------------------------------------------
# valuations and the product formula


def valuation_at(place, f):
    """The normalized valuation v(f) at a place (v(uniformizer) = 1)."""
    if f.is_zero():
        raise FFError("valuation of the zero element")
    curve = place.curve
    F = curve.field
    if curve.kind == "p1":
        if place.kind == "finite" and F.q**place.degree > _EXPANSION_FAST_LIMIT:
            return _p1_factor_valuation(place.data, f)
        return _valuation_by_expansion(place, f)
    if place.kind == "finite" and not isinstance(place.data[0], FqField):
        h, flavor = place.data
        agg = _ord_h_of_norm(curve, h, f)
        if flavor == "inert":
            v, r = divmod(agg, 2)
            if r:
                raise FFError("odd norm multiplicity at an inert place (internal)")
            return v
        return agg
    return _valuation_by_expansion(place, f)


def _valuation_by_expansion(place, f):
    prec = 8
    for _ in range(10):
        try:
            s = _expand(f, place, prec)
        except ZeroSeries:
            prec *= 2
            continue
        if s.terms:
            return int(s.valuation())
        prec *= 2
    raise PrecisionInsufficiency("no leading term visible for the valuation")


def _p1_factor_valuation(h, f):
    def mult(poly):
        if poly.is_zero() or poly.deg < h.deg:
            return 0
        m = 0
        while True:
            quo, rem = poly.divmod(h)
            if not rem.is_zero():
                return m
            poly = quo
            m += 1

    return mult(f.num[0]) - mult(f.den[0])


def _ord_h_of_norm(curve, h, f):
    def mult(poly):
        m = 0
        while not poly.is_zero():
            quo, rem = poly.divmod(h)
            if not rem.is_zero():
                return m
            poly, m = quo, m + 1
        return m

    return mult(_apoly_norm(curve, f.num)) - mult(_apoly_norm(curve, f.den))


def _places_above(curve, h):
    """The places of the elliptic curve above the monic irreducible h(t)."""
    F = curve.field
    d = h.deg
    if F.q**d > _EXPANSION_FIELD_LIMIT:
        raise FFError("residue field F_{%d^%d} exceeds the desk bound" % (F.q, d))
    R = build_extension(F, d) if d > 1 else F
    r = roots(h, R)[0]
    A = curve.ylin_poly(R).evaluate(r)
    B = curve.rhs_poly(R).evaluate(r)
    ys = _quad_roots(R, A, B)
    if ys:
        return [Place(curve, "finite", d, (R, _orbit_of(R, F.q, r, y0))) for y0 in ys]
    return [Place(curve, "finite", 2 * d, (h, "inert"))]


class ProductFormulaReport:
    """Per-place valuations of a nonzero element and their degree-weighted sum."""

    def __init__(self, element, entries, total):
        self.element = element
        self.entries = entries  # list of (Place, valuation), nonzero only
        self.total = total

    @property
    def holds(self):
        return self.total == 0

    def __repr__(self):
        rows = ", ".join("%r: %d" % (p, v) for p, v in self.entries)
        return "ProductFormulaReport({%s}, total=%d)" % (rows, self.total)


def product_formula_check(f):
    """Locate all zeros and poles of f and check sum_v d_v * v(f) = 0."""
    if f.is_zero():
        raise FFError("the zero element has no divisor")
    curve = f.curve
    entries = []
    if curve.kind == "p1":
        for h, _m in factor(f.num[0] * f.den[0]):
            pl = Place(curve, "finite", h.deg, h)
            v = valuation_at(pl, f)
            if v:
                entries.append((pl, v))
        vinf = f.den[0].deg - f.num[0].deg
        if vinf:
            entries.append((Place(curve, "infinite", 1), vinf))
    else:
        candidates = _apoly_norm(curve, f.num) * _apoly_norm(curve, f.den)
        for h, _m in factor(candidates):
            for pl in _places_above(curve, h):
                v = valuation_at(pl, f)
                if v:
                    entries.append((pl, v))
        pinf = Place(curve, "infinite", 1)
        vinf = valuation_at(pinf, f)
        if vinf:
            entries.append((pinf, vinf))
    total = sum(pl.degree * v for pl, v in entries)
    return ProductFormulaReport(f, entries, total)


def random_element(curve, rng, max_deg=4):
    """A random nonzero element, for product-formula exercising."""
    F = curve.field

    def rand_poly(deg):
        return FqPoly(F, [rng.randrange(F.q) for _ in range(deg + 1)])

    while True:
        if curve.kind == "p1":
            num = rand_poly(rng.randrange(max_deg + 1))
            den = rand_poly(rng.randrange(max_deg + 1))
            if num.is_zero() or den.is_zero():
                continue
            return FieldElement(curve, num, den)
        num = (rand_poly(rng.randrange(max_deg + 1)), rand_poly(rng.randrange(max(1, max_deg - 1))))
        den = (rand_poly(rng.randrange(max_deg + 1)), rand_poly(rng.randrange(max(1, max_deg - 1))))
        if (num[0].is_zero() and num[1].is_zero()) or (den[0].is_zero() and den[1].is_zero()):
            continue
        el = FieldElement(curve, num, den)
        if not el.is_zero():
            return el
