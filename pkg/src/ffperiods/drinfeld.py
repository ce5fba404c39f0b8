"""Twisted polynomial rings K{tau} with tau*b = b^q*tau, Drinfeld modules over
F_q[t] given by the image of t, the Carlitz module and its exponential, torsion
kernels over finite A-fields, and the Carlitz period series at infinity.

Coefficient rings are anything whose elements support +, -, *, == and a
``qpow(i)`` method computing the q-power Frobenius x -> x^(q^i): finite-field
elements (FqElem), unreduced rational functions in theta (RatFunc), and
truncated Laurent series all qualify.

Rational functions deliberately stay unreduced: the Carlitz exponential's
denominators only ever multiply, and reducing would force enormous gcds for
nothing.  Equality cross-multiplies.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .ffield import FFError, FqElem, FqPoly, build_extension
from .series import (
    CenteredLaurent,
    Magnitude,
    TruncLaurent,
    newton_valuations,
    two_stage_valuation,
)


class RatFunc:
    """num/den over F_q[theta], not reduced to lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = FqPoly.const(num.field, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def const(cls, field, c):
        return cls(FqPoly.const(field, c))

    @classmethod
    def theta(cls, field):
        return cls(FqPoly.x(field))

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __add__(self, other):
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def qpow(self, i=1):
        """x -> x^(q^i); for F_q coefficients this stretches exponents by q^i."""
        q = self.field.q
        s = q**i
        return RatFunc(_stretch(self.num, s), _stretch(self.den, s))

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def at_infinity(self, prec):
        """Expansion in pi = 1/theta as an exact-coefficient TruncLaurent."""
        F = self.field
        num = TruncLaurent(F, {-i: c for i, c in enumerate(self.num.coeffs) if c})
        den = TruncLaurent(F, {-i: c for i, c in enumerate(self.den.coeffs) if c})
        return num.div(den, prec=Fraction(prec))

    def __repr__(self):
        from .ffield import _poly_str

        num = _poly_str(self.num.coeffs, "theta")
        if self.den.coeffs == (1,):
            return "(%s)" % num
        return "(%s)/(%s)" % (num, _poly_str(self.den.coeffs, "theta"))


def _stretch(poly, s):
    """f(x) -> f(x^s) for F_q-coefficient polynomials (coefficients fixed)."""
    if poly.is_zero():
        return poly
    out = [0] * (poly.deg * s + 1)
    for i, c in enumerate(poly.coeffs):
        out[i * s] = c
    return FqPoly(poly.field, out)


def _is_zero_coeff(c):
    if isinstance(c, TruncLaurent):
        return c.is_zero()
    return not bool(c)


class TwistedPoly:
    """sum b_i tau^i with tau*b = b^q*tau; coefficients low to high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and _is_zero_coeff(coeffs[-1]):
            coeffs.pop()
        self.coeffs = coeffs

    @property
    def deg_tau(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return TwistedPoly(out)

    def __neg__(self):
        return TwistedPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """(a tau^i)(b tau^j) = a * b^(q^i) tau^(i+j)."""
        if self.is_zero() or other.is_zero():
            return TwistedPoly([])
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero_coeff(a):
                continue
            for j, b in enumerate(other.coeffs):
                if _is_zero_coeff(b):
                    continue
                term = a * b.qpow(i)
                k = i + j
                out[k] = term if out[k] is None else out[k] + term
        zero = self.coeffs[0] - self.coeffs[0]
        return TwistedPoly([zero if c is None else c for c in out])

    def __pow__(self, e):
        if e == 0:
            raise FFError("tau-polynomial unit power needs an explicit one")
        out = self
        for _ in range(e - 1):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TwistedPoly):
            return NotImplemented
        return (self - other).is_zero()

    def apply(self, x, qpow):
        """Evaluate sum b_i x^(q^i) for a raw field element x; qpow(x, i)."""
        acc = None
        for i, b in enumerate(self.coeffs):
            term = b * qpow(x, i)
            acc = term if acc is None else acc + term
        return acc

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(
            "%r" % c if i == 0 else ("(%r)*tau^%d" % (c, i) if i > 1 else "(%r)*tau" % c)
            for i, c in enumerate(self.coeffs)
        )


def twisted_mul(a, b):
    return a * b


class DrinfeldModule:
    """A Drinfeld F_q[t]-module given by the image of t.

    `const` embeds raw F_q scalars into the coefficient ring; gamma(t) is the
    tau^0 coefficient of phi_t, and the rank is deg_tau(phi_t) (the infinite
    place of F_q(t) has degree 1 and v_inf(t) = -1).
    """

    def __init__(self, q, phi_t, const):
        self.q = q
        self.phi_t = phi_t
        self.const = const
        self.gamma_t = phi_t.coeffs[0]
        self.rank = phi_t.deg_tau

    @classmethod
    def carlitz_generic(cls, field):
        """The Carlitz module phi_t = theta + tau over F_q(theta)."""
        theta = RatFunc.theta(field)
        one = RatFunc.const(field, 1)
        return cls(field.q, TwistedPoly([theta, one]), lambda c: RatFunc.const(field, c))

    @classmethod
    def carlitz_over_field(cls, E, gamma_t):
        """The Carlitz module phi_t = gamma(t) + tau over a finite A-field E.

        E must be built over the base F_q (E.base) so that FqElem.qpow is the
        right Frobenius; gamma_t is a raw encoding in E.
        """
        return cls(
            E.base.q,
            TwistedPoly([FqElem(E, gamma_t), FqElem(E, 1)]),
            lambda c: FqElem(E, E.embed(c)),
        )

    def phi_of(self, a):
        """The ring-homomorphism image of a in F_q[t] (an FqPoly over F_q)."""
        if a.is_zero():
            return TwistedPoly([])
        acc = TwistedPoly([self.const(a.coeffs[-1])])
        for c in reversed(a.coeffs[:-1]):
            acc = acc * self.phi_t + TwistedPoly([self.const(c)])
        return acc

    def gamma_of(self, a):
        """gamma(a): the Lie coefficient of phi_a."""
        phi = self.phi_of(a)
        return phi.coeffs[0] if phi.coeffs else self.const(0)


def validate_elliptic_module(curve, phi_t, phi_y, const):
    """Check the two structure constraints of a Drinfeld module for elliptic A:
    phi_t and phi_y commute, and they satisfy the Weierstrass relation in K{tau}.

    Returns (commutes, relation_holds).
    """
    commutes = phi_t * phi_y == phi_y * phi_t
    a1, a2, a3, a4, a6 = (const(c) for c in (curve.a1, curve.a2, curve.a3, curve.a4, curve.a6))
    rel = (
        phi_y * phi_y
        + TwistedPoly([a1]) * phi_t * phi_y
        + TwistedPoly([a3]) * phi_y
        - phi_t * phi_t * phi_t
        - TwistedPoly([a2]) * phi_t * phi_t
        - TwistedPoly([a4]) * phi_t
        - TwistedPoly([a6])
    )
    return commutes, rel.is_zero()


def torsion_certificate(module, a):
    """Degree and separability facts for phi_a without solving anything.

    phi_a(x) is a q-polynomial of degree q^(r * deg a); it is separable iff
    its linear coefficient gamma(a) is nonzero.
    """
    phi = module.phi_of(a)
    return {
        "x_degree": module.q ** phi.deg_tau,
        "expected_degree": module.q ** (module.rank * a.deg),
        "separable": not _is_zero_coeff(module.gamma_of(a)),
    }


# ---------------------------------------------------------------------------
# torsion kernels over finite A-fields (F_q-linear algebra)


def _fq_coordinates_setup(E):
    """Solve-for-coordinates machinery of E over its designated base F_q.

    Returns (basis, coords) with basis the raw powers of E's ring generator
    and coords(x) the list of base-field encodings of x in that basis.
    """
    base = E.base
    if E is base or E == base:
        return [1], lambda x: [x]
    p = E.p
    n_total, n_base = E.n, base.n
    m = n_total // n_base
    gen = E.gen
    basis = [E.pow(gen, j) for j in range(m)]
    base_basis = [base.pow(base.gen, k) if base.n > 1 else 1 for k in range(n_base)]
    # T columns: embed(beta_k) * g^j expressed in F_p digits
    cols = []
    for j in range(m):
        for k in range(n_base):
            v = E.mul(E.embed(base_basis[k]), basis[j])
            cols.append(_digits_fixed(v, p, n_total))
    # invert T over F_p by Gaussian elimination (augmented with identity)
    N = n_total
    aug = [[cols[c][r] for c in range(N)] + [1 if i == r else 0 for i in range(N)] for r in range(N)]
    for col in range(N):
        piv = next(r for r in range(col, N) if aug[r][col] % p)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [x * inv % p for x in aug[col]]
        for r in range(N):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    tinv = [row[N:] for row in aug]

    def coords(x):
        d = _digits_fixed(x, p, N)
        sol = [sum(tinv[r][c] * d[c] for c in range(N)) % p for r in range(N)]
        out = []
        for j in range(m):
            chunk = sol[j * n_base : (j + 1) * n_base]
            enc = 0
            for k, dk in enumerate(chunk):
                if base.n > 1:
                    enc = base.add(enc, base._scale(base_basis[k], dk))
                else:
                    enc = (enc + dk) % p
            out.append(enc)
        return out

    return basis, coords


def _digits_fixed(x, p, n):
    out = []
    for _ in range(n):
        out.append(x % p)
        x //= p
    return out


def torsion_kernel(module, a):
    """The kernel of x -> phi_a(x) on the (finite) coefficient field.

    The map is F_q-linear, so the kernel is the nullspace of its matrix in an
    F_q-basis; returns the sorted list of raw kernel elements.
    """
    E = module.phi_t.coeffs[0].field
    base = E.base
    basis, coords = _fq_coordinates_setup(E)
    m = len(basis)
    phi = module.phi_of(a)
    qpow = lambda x, i: E.frob(x, i)

    def apply_raw(x):
        acc = 0
        for i, b in enumerate(phi.coeffs):
            acc = E.add(acc, E.mul(b.val, qpow(x, i)))
        return acc

    # matrix columns = coords(phi_a(basis_j)) over F_q
    M = [[0] * m for _ in range(m)]
    for j, bj in enumerate(basis):
        col = coords(apply_raw(bj))
        for r in range(m):
            M[r][j] = col[r]
    # nullspace over F_q by Gaussian elimination
    Fq = base
    rows = [row[:] for row in M]
    pivots = {}
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fq.inv(rows[r][c])
        rows[r] = [Fq.mul(x, inv) for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [Fq.sub(x, Fq.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(m) if c not in pivots]
    if Fq.q ** len(free) > 1 << 16:
        raise FFError("torsion kernel too large to enumerate at desk scale")
    kernel = []
    combos = [[]]
    for _ in free:
        combos = [cur + [v] for cur in combos for v in range(Fq.q)]
    for combo in combos:
        vec = [0] * m
        for fc, v in zip(free, combo):
            vec[fc] = v
        for c, rr in pivots.items():
            s = 0
            for fc, v in zip(free, combo):
                s = Fq.add(s, Fq.mul(rows[rr][fc], v))
            vec[c] = Fq.neg(s)
        x = 0
        for cj, bj in zip(vec, basis):
            x = E.add(x, E.mul(E.embed(cj), bj))
        kernel.append(x)
    assert all(apply_raw(x) == 0 for x in kernel)
    return sorted(set(kernel))


# ---------------------------------------------------------------------------
# the Carlitz exponential


class ExpSeries:
    """Coefficients e_0..e_N of sum e_i z^(q^i), as rational functions."""

    def __init__(self, coeffs):
        self.coeffs = coeffs

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)


def carlitz_exp(field, N):
    """exp coefficients via e_i = e_{i-1}^q / (theta^(q^i) - theta).

    The recursion is forced by matching z^(q^i) coefficients in
    phi_t(exp(z)) = exp(theta z); denominators are kept factored-in-place
    (never expanded against the numerator by a gcd).
    """
    q = field.q
    theta = FqPoly.x(field)
    out = [RatFunc.const(field, 1)]
    for i in range(1, N + 1):
        prev = out[-1]
        den_factor = _stretch(theta, q**i) - theta
        out.append(RatFunc(_stretch(prev.num, q), _stretch(prev.den, q) * den_factor))
    return ExpSeries(out)


def twisted_on_exp(tp, exp, N):
    """Coefficient list of tp(exp(z)) in powers z^(q^i), i = 0..N."""
    zero = exp[0] - exp[0]
    out = []
    for i in range(N + 1):
        acc = zero
        for j, b in enumerate(tp.coeffs):
            if j > i:
                break
            acc = acc + b * exp[i - j].qpow(j)
        out.append(acc)
    return out


def exp_of_scalar(exp, scalar, N):
    """Coefficient list of exp(scalar * z) in powers z^(q^i), i = 0..N."""
    return [exp[i] * scalar.qpow(i) for i in range(N + 1)]


def carlitz_functional_equation_residuals(field, N):
    """phi_t(exp(z)) - exp(theta z) coefficients through z^(q^N); all zero."""
    module = DrinfeldModule.carlitz_generic(field)
    exp = carlitz_exp(field, N)
    lhs = twisted_on_exp(module.phi_t, exp, N)
    rhs = exp_of_scalar(exp, RatFunc.theta(field), N)
    return [a - b for a, b in zip(lhs, rhs)]


# ---------------------------------------------------------------------------
# Carlitz periods: the infinite place


def _q1_root_of_minus_one(field):
    """(field2, c) with c^(q-1) = -1; widens to F_{q^2} when q is odd."""
    q = field.q
    if field.p == 2:
        return field, 1
    F2 = build_extension(field, 2)
    minus_one = F2.neg(1)
    for c in F2.elements():
        if c and F2.pow(c, q - 1) == minus_one:
            return F2, c
    raise FFError("no (q-1)-st root of -1 found (internal)")


def carlitz_betti_de_rham_image(field, prec):
    """The series eta^q * prod_{i>=1} (1 - theta^(1-q^i)) at infinity.

    eta satisfies eta^(1-q) = -theta and is realized as c * pi^(1/(q-1)) in
    the ramified variable pi = 1/theta, with c^(q-1) = -1 (c lies in F_{q^2}
    for odd q).  The leading exponent is exactly q/(q-1): the magnitude of
    the pairing image is q^(-q/(q-1)).
    """
    q = field.q
    F2, c = _q1_root_of_minus_one(field)
    e = q - 1
    eta_q = TruncLaurent.from_dict(
        F2, {Fraction(q, e): F2.pow(c, q)}, var="pi"
    )
    prod = TruncLaurent.one(F2, var="pi").truncate(prec)
    i = 1
    while q**i - 1 < prec:
        prod = prod * TruncLaurent.from_dict(F2, {0: 1, q**i - 1: F2.neg(1)}, var="pi")
        i += 1
    return (eta_q * prod.truncate(prec)).with_e(e)


def carlitz_period_lattice_generator(field, prec):
    """The Carlitz period theta * (-theta)^(1/(q-1)) * prod (1-theta^(1-q^i))^(-1).

    Returned as a ramified TruncLaurent in pi = 1/theta with exponent
    denominator q-1; its valuation is exactly -q/(q-1).
    """
    q = field.q
    F2, c = _q1_root_of_minus_one(field)
    e = q - 1
    head = TruncLaurent.from_dict(F2, {Fraction(-q, e): c}, var="pi")
    prod = TruncLaurent.one(F2, var="pi").truncate(prec)
    i = 1
    while q**i - 1 < prec:
        prod = prod * TruncLaurent.from_dict(F2, {0: 1, q**i - 1: F2.neg(1)}, var="pi")
        i += 1
    return head * prod.inverse()


def lattice_exp_partial(lam, D, base_field):
    """Coefficients of z * prod_{0 != a, deg a <= D} (1 - z / (a(theta) lam)).

    The lattice is A*lam for A = F_q[t] with F_q = base_field; lam's
    coefficient field is base_field or an extension of it.  Returns
    {k: TruncLaurent} mapping z-exponents to coefficients; successive D
    values converge coefficientwise in the infinity-adic topology.
    """
    F = lam.field
    if D < 0:
        return {1: TruncLaurent.one(F, var=lam.var)}
    q = base_field.q
    embed = (lambda c: c) if F == base_field else F.embed
    coeffs = {0: TruncLaurent.one(F, var=lam.var)}
    for code in range(1, q ** (D + 1)):
        digits = []
        c = code
        for _ in range(D + 1):
            digits.append(c % q)
            c //= q
        a_theta = TruncLaurent(
            F, {-i: embed(d) for i, d in enumerate(digits) if d}, None, 1, lam.var
        )
        lam_inv = (a_theta.with_e(lam.e) * lam).inverse()
        new = {}
        for k, ck in coeffs.items():
            _acc(new, k, ck)
            _acc(new, k + 1, -(ck * lam_inv))
        coeffs = new
    return {k + 1: v for k, v in coeffs.items()}


def _acc(d, k, v):
    d[k] = d[k] + v if k in d else v


# ---------------------------------------------------------------------------
# Carlitz periods: the v-adic ladder


def carlitz_vadic_ladder(q_v, depth):
    """Valuations of the tower roots t_0, t_1, ..., t_{depth-1}.

    t_0^(q_v - 1) = -zeta_v gives v(t_0) = 1/(q_v - 1) from the polygon of
    X^(q_v-1) + zeta_v; each t_i^(q_v) + zeta_v t_i = t_{i-1} divides the
    previous valuation by q_v (minimal polygon slope).
    """
    vals = [min(newton_valuations([(0, 1), (q_v - 1, 0)]))]
    for _ in range(1, depth):
        slopes = newton_valuations([(0, vals[-1]), (1, 1), (q_v, 0)])
        vals.append(min(slopes))
    return vals


def carlitz_vadic_inverse_period(q, d_v, depth=6):
    """The two-stage expansion of (z_v - zeta_v) * t_v at a place of degree d_v.

    t_v = sum t_i z_v^i is rewritten around z_v = zeta_v; the coefficient of
    (z_v - zeta_v)^(j+1) is sum_i C(i, j) t_i zeta_v^(i-j), carried as
    Magnitude sums (the tower lives in an infinitely ramified extension, so
    only valuations are constructed).  Binomials vanishing mod p are dropped.
    """
    p = _char_of(q)
    q_v = q**d_v
    vals = carlitz_vadic_ladder(q_v, depth)
    coeffs = {}
    for j in range(min(depth, 4)):
        parts = [
            Magnitude(vals[i] + (i - j))
            for i in range(j, depth)
            if comb(i, j) % p
        ]
        coeffs[j + 1] = Magnitude.sum(parts)
    return CenteredLaurent(coeffs, prec=min(depth, 4) + 1)


def carlitz_vadic_two_stage(q, d_v, depth=6):
    """(vhat, v) of the inverse v-adic Carlitz period: (1, 1/(q_v - 1))."""
    return two_stage_valuation(carlitz_vadic_inverse_period(q, d_v, depth))


def _char_of(q):
    for p in range(2, q + 1):
        if q % p == 0:
            return p
    raise FFError("bad q")
