"""Exact arithmetic in finite fields F_q and univariate polynomials over them.

Field elements are represented as plain ints: the element with F_p-coordinates
(c_0, ..., c_{n-1}) relative to the field generator is encoded as the integer
c_0 + c_1*p + ... + c_{n-1}*p^(n-1).  The zero and one of every field are the
ints 0 and 1.  An :class:`FqField` object interprets the ints and provides the
raw arithmetic (``add``, ``mul``, ...); the thin :class:`FqElem` wrapper adds
operator overloading for code that prefers expressions over method calls.

Fields of size up to 2**16 precompute exp/log tables relative to a fixed
multiplicative generator, which makes multiplication and inversion table
lookups.  Larger fields (the desk-scale bound is 2**20 elements) fall back to
direct polynomial arithmetic on the digit encoding.

Extension fields are always re-expressed over the prime field: the modulus of
F_{p^n} is the lexicographically least monic irreducible of degree n over F_p
(least int encoding, which orders coefficient tuples from the top degree
down), and an extension built on top of another field stores the image of the
base generator explicitly, so towers have unambiguous embeddings.
"""

from __future__ import annotations

import itertools

_TABLE_LIMIT = 1 << 12
_DESK_LIMIT = 1 << 20


class FFError(ValueError):
    pass


def _is_prime(m):
    if m < 2:
        return False
    for d in range(2, int(m**0.5) + 1):
        if m % d == 0:
            return False
    return True


class FqField:
    """The finite field F_q, q = p^n, with int-encoded elements.

    Instances are immutable and arithmetically self-contained; all raw
    operations take and return ints in [0, q).
    """

    def __init__(self, p, modulus=None, _base=None, _base_gen_image=None):
        if not _is_prime(p):
            raise FFError("characteristic must be prime, got %r" % (p,))
        self.p = p
        if modulus is None:
            modulus = (0, 1)  # the polynomial x; prime field
        modulus = tuple(c % p for c in modulus)
        if modulus[-1] != 1:
            raise FFError("modulus must be monic")
        self.n = len(modulus) - 1
        self.q = p**self.n
        if self.q > _DESK_LIMIT:
            raise FFError("field size %d exceeds desk-scale bound 2^20" % self.q)
        self.modulus = modulus
        # base field designated for q-Frobenius and embeddings
        self.base = _base if _base is not None else self
        self.base_gen_image = _base_gen_image
        self._reduction_rows = None
        self._exp = None
        self._log = None
        self.gen = self.p if self.n > 1 else None  # class of x
        if self.n > 1 and not self._modulus_irreducible():
            raise FFError("modulus is reducible over F_%d" % p)
        if self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _modulus_irreducible(self):
        # no irreducible factor of degree k <= n/2, via gcd with x^(p^k) - x
        base = FqField(self.p)
        f = FqPoly(base, self.modulus)
        x = FqPoly(base, (0, 1))
        xp = x.powmod(self.p, f)
        cur = xp
        for _ in range(self.n // 2):
            if (cur - x).gcd(f).deg > 0:
                return False
            cur = cur.powmod(self.p, f)
        return True

    def _build_tables(self):
        q = self.q
        if q == 2:
            self._exp, self._log = [1, 1], [0, 0, 0]
            return
        # find a multiplicative generator by order testing
        facs = _factor_int(q - 1)
        g = 2 if self.n == 1 else self.gen
        while True:
            if all(self._pow_direct(g, (q - 1) // f) != 1 for f in facs):
                break
            g += 1
            if g >= q:
                raise FFError("no generator found (internal)")
        exp = [0] * (2 * q)
        log = [0] * q
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            log[acc] = i
            acc = self._mul_direct(acc, g)
        for i in range(q - 1, 2 * q - 2):
            exp[i] = exp[i - (q - 1)]
        self._exp, self._log = exp, log

    # -- raw arithmetic on int encodings ------------------------------------

    def add(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % p
        out, mult = 0, 1
        while a or b:
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a):
        p = self.p
        if p == 2:
            return a
        if self.n == 1:
            return (-a) % p
        out, mult = 0, 1
        while a:
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _mul_direct(self, a, b):
        p, n = self.p, self.n
        if n == 1:
            return a * b % p
        if p == 2:
            # carry-less multiply then reduce by the modulus bit pattern
            acc = 0
            x = a
            while b:
                if b & 1:
                    acc ^= x
                x <<= 1
                b >>= 1
            mbits = self._modulus_int()
            top = 1 << (2 * n - 2)
            for shift in range(n - 2, -1, -1):
                if acc & (top >> (n - 2 - shift)):
                    acc ^= mbits << shift
            return acc
        da = _digits(a, p)
        db = _digits(b, p)
        conv = [0] * (len(da) + len(db) - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    conv[i + j] += ca * cb
        conv = [c % p for c in conv]
        rows = self._reduction_table()
        out = 0
        for k in range(min(n, len(conv))):
            out += conv[k] * p**k
        for k in range(n, len(conv)):
            if conv[k]:
                out = self.add(out, self._scale(rows[k - n], conv[k]))
        return out

    def _modulus_int(self):
        v = 0
        for i, c in enumerate(self.modulus):
            v += c * (1 << i) if self.p == 2 else 0
        return v

    def _reduction_table(self):
        # x^(n+k) mod modulus for k in [0, n), as int encodings
        if self._reduction_rows is None:
            p, n = self.p, self.n
            rows = []
            cur = [(-c) % p for c in self.modulus[:-1]]  # x^n mod m
            for _ in range(n):
                rows.append(sum(c * p**i for i, c in enumerate(cur)))
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    for i in range(n):
                        cur[i] = (cur[i] + top * ((-self.modulus[i]) % p)) % p
            self._reduction_rows = rows
        return self._reduction_rows

    def _scale(self, a, c):
        # multiply encoding a by the F_p scalar c
        p = self.p
        out, mult = 0, 1
        while a:
            out += (a % p) * c % p * mult
            a //= p
            mult *= p
        return out

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_direct(a, b)

    def _pow_direct(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._mul_direct(r, a)
            a = self._mul_direct(a, a)
            e >>= 1
        return r

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 has no negative powers")
            return 0
        e %= self.q - 1
        if self._exp is not None:
            return self._exp[self._log[a] * e % (self.q - 1)]
        return self._pow_direct(a, e)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.q)
        if self._exp is not None:
            return self._exp[(self.q - 1) - self._log[a]] if self._log[a] else 1
        return self._pow_direct(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frob(self, a, i=1):
        """The q-Frobenius x -> x^(q_base^i) relative to the designated base field."""
        return self.pow(a, pow(self.base.q, i, self.q - 1) if self.q > 2 else 1)

    def elements(self):
        return range(self.q)

    def coordinates(self, a):
        """F_p-coordinates of a relative to the field generator (length n)."""
        d = _digits(a, self.p)
        return tuple(d + [0] * (self.n - len(d)))

    def embed(self, a):
        """Embed an element of the designated base field into this field."""
        base = self.base
        if base is self:
            return a
        img = self.base_gen_image
        out = 0
        for c in reversed(_digits(a, base.p)):
            out = self.add(self.mul(out, img), c)
        return out

    def __call__(self, a):
        return FqElem(self, a % self.p if self.n == 1 else a)

    def __eq__(self, other):
        return (
            isinstance(other, FqField)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return "F_%d" % self.q if self.n == 1 else "F_%d=F_%d[x]/%s" % (
            self.q,
            self.p,
            _poly_str(self.modulus),
        )


def _digits(a, p):
    out = []
    while a:
        out.append(a % p)
        a //= p
    return out


def _poly_str(coeffs, var="x"):
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else "%d*" % c
            parts.append("%s%s" % (head, var) if i == 1 else "%s%s^%d" % (head, var, i))
    return " + ".join(parts) if parts else "0"


def _factor_int(m):
    out = set()
    d = 2
    while d * d <= m:
        while m % d == 0:
            out.add(d)
            m //= d
        d += 1
    if m > 1:
        out.add(m)
    return out


class FqElem:
    """Operator-friendly wrapper around a raw field element."""

    __slots__ = ("field", "val")

    def __init__(self, field, val):
        self.field = field
        self.val = val

    @property
    def coordinates(self):
        return self.field.coordinates(self.val)

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise FFError("mixed fields %r and %r" % (self.field, other.field))
            return other.val
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FqElem(self.field, self.field.add(self.val, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FqElem(self.field, self.field.sub(self.val, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        return FqElem(self.field, self.field.sub(v, self.val))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FqElem(self.field, self.field.mul(self.val, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        return FqElem(self.field, self.field.div(self.val, v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        return FqElem(self.field, self.field.div(v, self.val))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.val))

    def __pow__(self, e):
        return FqElem(self.field, self.field.pow(self.val, e))

    def qpow(self, i=1):
        return FqElem(self.field, self.field.frob(self.val, i))

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field == other.field and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.val))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return "%r(%d)" % (self.field, self.val)


def frobenius_pow(x, i):
    """x^(q^i) for x an FqElem, q the size of the designated base field."""
    return x.qpow(i)


# ---------------------------------------------------------------------------
# univariate polynomials


class FqPoly:
    """Dense univariate polynomial over an FqField; coefficients are raw ints.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        while coeffs and not coeffs[-1]:
            coeffs = coeffs[:-1]
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_ints(cls, field, ints):
        p = field.p
        return cls(field, tuple(c % p for c in ints))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @property
    def deg(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            raise FFError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        return (
            isinstance(other, FqPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return FqPoly(F, out)

    def __neg__(self):
        F = self.field
        return FqPoly(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return FqPoly(F, ())
        if F.n == 1:
            return FqPoly(F, _kronecker_mul(a, b, F.p))
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] = F.add(out[i + j], F.mul(ca, cb))
        return FqPoly(F, out)

    def __pow__(self, e):
        out = FqPoly(self.field, (1,))
        a = self
        while e:
            if e & 1:
                out = out * a
            a = a * a
            e >>= 1
        return out

    def scale(self, c):
        F = self.field
        return FqPoly(F, tuple(F.mul(a, c) for a in self.coeffs))

    def shift(self, k):
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return FqPoly(self.field, (0,) * k + self.coeffs)

    def divmod(self, other):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.deg < other.deg:
            return FqPoly(F, ()), self
        rem = list(self.coeffs)
        dv = other.coeffs
        inv_lead = F.inv(dv[-1])
        qcoeffs = [0] * (len(rem) - len(dv) + 1)
        for i in range(len(rem) - len(dv), -1, -1):
            c = rem[i + len(dv) - 1]
            if c:
                factor = F.mul(c, inv_lead)
                qcoeffs[i] = factor
                for j, d in enumerate(dv):
                    rem[i + j] = F.sub(rem[i + j], F.mul(factor, d))
        return FqPoly(F, qcoeffs), FqPoly(F, rem[: len(dv) - 1])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading()))

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, e, mod):
        F = self.field
        r = FqPoly(F, (1,))
        a = self % mod
        while e:
            if e & 1:
                r = (r * a) % mod
            a = (a * a) % mod
            e >>= 1
        return r

    def derivative(self):
        F = self.field
        p = F.p
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(F._scale(self.coeffs[i], i % p) if F.n > 1 else self.coeffs[i] * i % p)
        return FqPoly(F, out)

    def evaluate(self, x, field=None, embed=None):
        """Evaluate at raw element x of `field` (default: own field).

        `embed` maps this polynomial's coefficients into `field`; defaults to
        the identity (same field) or field.embed for a designated extension.
        """
        F = field or self.field
        if embed is None:
            embed = (lambda c: c) if F == self.field else F.embed
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), embed(c))
        return acc

    def map_to(self, field, embed=None):
        """Re-express the coefficients inside an extension field."""
        if embed is None:
            embed = field.embed
        return FqPoly(field, tuple(embed(c) for c in self.coeffs))

    def frob_coeffs(self, i=1):
        """Apply the base-q Frobenius to every coefficient."""
        F = self.field
        return FqPoly(F, tuple(F.frob(c, i) for c in self.coeffs))

    def is_irreducible(self):
        """No irreducible factor of degree k <= deg/2, via gcd with x^(q^k) - x."""
        F = self.field
        n = self.deg
        if n <= 0:
            return False
        if n == 1:
            return True
        f = self.monic()
        x = FqPoly.x(F)
        cur = x.powmod(F.q, f)
        for _ in range(n // 2):
            if (cur - x).gcd(f).deg > 0:
                return False
            cur = cur.powmod(F.q, f)
        return True

    def __repr__(self):
        return _poly_str(self.coeffs, "t")


def _kronecker_mul(a, b, p):
    """Multiply coefficient tuples over F_p by packing into one big int."""
    m = min(len(a), len(b))
    bound = m * (p - 1) * (p - 1) + 1
    B = max(bound.bit_length(), 1)
    pa = 0
    for c in reversed(a):
        pa = (pa << B) | c
    pb = 0
    for c in reversed(b):
        pb = (pb << B) | c
    prod = pa * pb
    mask = (1 << B) - 1
    out = []
    for _ in range(len(a) + len(b) - 1):
        out.append((prod & mask) % p)
        prod >>= B
    return out


# ---------------------------------------------------------------------------
# factorization (desk scale: distinct-degree + equal-degree splitting)


def _pth_root(field, a):
    # inverse of x -> x^p on F_{p^n} is x -> x^(p^(n-1))
    return field.pow(a, field.p ** (field.n - 1)) if field.n > 1 else a


def squarefree_decomposition(f):
    """Yield (squarefree factor, multiplicity) pairs, Yun-style with p-th roots."""
    F = f.field
    p = F.p
    out = {}

    def rec(g, mult):
        if g.deg < 1:
            return
        d = g.derivative()
        if d.is_zero():
            # g = h(x^p); take p-th root of coefficients
            root = FqPoly(F, tuple(_pth_root(F, c) for c in g.coeffs[::p]))
            rec(root, mult * p)
            return
        c = g.gcd(d)
        w = g // c
        k = 1
        while w.deg > 0:
            y = w.gcd(c)
            z = w // y
            if z.deg > 0:
                out[z] = out.get(z, 0) + mult * k
            w = y
            c = c // y
            k += 1
        if c.deg > 0:
            rec(c, mult)

    rec(f.monic(), 1)
    return sorted(out.items(), key=lambda kv: (kv[0].deg, kv[0].coeffs))


def _distinct_degree(f):
    """Split a squarefree monic f into products of irreducibles of equal degree."""
    F = f.field
    x = FqPoly.x(F)
    out = []
    h = x.powmod(F.q, f)
    cur = h
    d = 1
    rest = f
    while rest.deg >= 2 * d:
        g = (cur - x).gcd(rest)
        if g.deg > 0:
            out.append((g, d))
            rest = rest // g
            cur = cur % rest
        d += 1
        cur = cur.powmod(F.q, rest) if d > 1 and rest.deg > 0 else cur
    if rest.deg > 0:
        out.append((rest, rest.deg))
    return out


def _equal_degree_split(f, d):
    """Split monic squarefree f (all factors of degree d) into irreducibles.

    Deterministic: sweeps shift elements in a fixed order, so factor lists are
    reproducible across runs.
    """
    F = f.field
    if f.deg == d:
        return [f]
    q = F.q
    x = FqPoly.x(F)
    for trial in itertools.count():
        # deterministic trial polynomial of degree < 2d
        coeffs = []
        t = trial + 1
        width = 2 * d
        for _ in range(width):
            coeffs.append(t % q)
            t //= q
        a = FqPoly(F, coeffs + [1])
        if F.p == 2:
            # trace map splitting over char 2
            tr = FqPoly(F, ())
            cur = a % f
            total_deg = F.n * d
            for _ in range(total_deg):
                tr = tr + cur
                cur = cur.powmod(2, f)
            g = tr.gcd(f)
        else:
            e = (q**d - 1) // 2
            g = (a.powmod(e, f) - FqPoly(F, (1,))).gcd(f)
        if 0 < g.deg < f.deg:
            return sorted(
                _equal_degree_split(g, d) + _equal_degree_split(f // g, d),
                key=lambda h: h.coeffs,
            )


def factor(f):
    """Factor a nonzero FqPoly into monic irreducibles with multiplicities.

    Returns a list of (irreducible FqPoly, multiplicity) sorted by (degree,
    coefficient encoding); the product times the leading coefficient equals f.
    """
    if f.is_zero():
        raise FFError("cannot factor the zero polynomial")
    if f.deg > 64:
        raise FFError("factorization degree %d exceeds desk-scale bound 64" % f.deg)
    out = []
    for g, mult in squarefree_decomposition(f):
        for piece, d in _distinct_degree(g):
            for irr in _equal_degree_split(piece, d):
                out.append((irr, mult))
    return sorted(out, key=lambda kv: (kv[0].deg, kv[0].coeffs))


def roots(f, field=None):
    """Roots of f in `field` (default: coefficient field), sorted by encoding."""
    target = field or f.field
    g = f if target == f.field else f.map_to(target)
    if target.q <= _TABLE_LIMIT:
        return sorted(x for x in target.elements() if g.evaluate(x) == 0)
    out = []
    for irr, _ in factor(g):
        if irr.deg == 1:
            # monic x + c has root -c
            out.append(target.neg(irr.coeffs[0]))
    return sorted(out)


def irreducible_poly(field, d):
    """The lexicographically least monic irreducible of degree d (int-encoding order)."""
    p = field.p
    if field.n != 1:
        raise FFError("modulus search is over the prime field")
    for k in itertools.count():
        coeffs = _digits(k, p)
        if len(coeffs) > d:
            raise FFError("no irreducible of degree %d found (internal)" % d)
        cand = FqPoly(field, tuple(coeffs) + (0,) * (d - len(coeffs)) + (1,))
        if cand.is_irreducible():
            return cand


def monic_irreducibles(field, d):
    """All monic irreducibles of exact degree d over `field`, sorted by encoding."""
    out = []
    for k in range(field.q**d):
        coeffs = []
        t = k
        for _ in range(d):
            coeffs.append(t % field.q)
            t //= field.q
        cand = FqPoly(field, tuple(coeffs) + (1,))
        if cand.is_irreducible():
            out.append(cand)
    return out


_EXT_CACHE = {}


def build_extension(base, m):
    """The field F_{q^m} containing `base` = F_q through a designated embedding.

    The result is re-expressed over the prime field with the lexicographically
    least monic irreducible modulus of degree n*m; the embedding sends the base
    generator to the least root of the base modulus in the new field.  Results
    are cached: the construction is deterministic, so sharing is sound.
    """
    if m < 1:
        raise FFError("extension degree must be >= 1")
    if m == 1:
        return base
    key = (base.p, base.modulus, m)
    if key in _EXT_CACHE:
        return _EXT_CACHE[key]
    p = base.p
    ntot = base.n * m
    if p**ntot > _DESK_LIMIT:
        raise FFError("extension size %d^%d exceeds desk-scale bound" % (p, ntot))
    modulus = irreducible_poly(FqField(p), ntot)
    ext = FqField(p, tuple(modulus.coeffs))
    if base.n == 1:
        img = 1  # prime subfield embeds as the constants
    else:
        base_mod = FqPoly(FqField(p), base.modulus)
        rs = roots(base_mod, ext)
        if not rs:
            raise FFError("embedding root not found (internal)")
        img = rs[0]
    out = FqField(p, tuple(modulus.coeffs), _base=base, _base_gen_image=img)
    _EXT_CACHE[key] = out
    return out


def fq(q):
    """The field with q elements, built deterministically over the prime field."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    if not _is_prime(p):
        raise FFError("%d is not a prime power" % q)
    n = 0
    m = q
    while m > 1:
        if m % p:
            raise FFError("%d is not a prime power" % q)
        m //= p
        n += 1
    base = FqField(p)
    return base if n == 1 else build_extension(base, n)
