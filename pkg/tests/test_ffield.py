import random

import pytest

from ffperiods.ffield import (
    FFError,
    FqField,
    FqPoly,
    build_extension,
    factor,
    fq,
    frobenius_pow,
    irreducible_poly,
    monic_irreducibles,
    roots,
)


def brute_irreducible(field, coeffs):
    """Oracle: monic poly of degree <= 3 is irreducible iff it has no root
    (degree 2, 3) or, for degree 4, no root and no quadratic factor found by
    exhaustive trial division."""
    f = FqPoly(field, coeffs)
    if f.deg <= 1:
        return f.deg == 1
    if any(f.evaluate(x) == 0 for x in field.elements()):
        return False
    if f.deg <= 3:
        return True
    for g in monic_irreducibles(field, 2):
        if (f % g).is_zero():
            return False
    return True


def test_extension_identity_case():
    F2 = FqField(2)
    assert build_extension(F2, 1) is F2


def test_f4_modulus_is_unique_irreducible_quadratic():
    # oracle: enumerate all monic quadratics over F_2 and check roots
    F2 = FqField(2)
    irr = [g for g in monic_irreducibles(F2, 2)]
    assert len(irr) == 1 and irr[0].coeffs == (1, 1, 1)  # x^2 + x + 1
    F4 = build_extension(F2, 2)
    assert F4.q == 4 and F4.modulus == (1, 1, 1)


def test_f9_multiplicative_order():
    # oracle: brute-force multiplicative order of every nonzero element
    F9 = build_extension(FqField(3), 2)
    for x in range(1, 9):
        acc = 1
        for _ in range(8):
            acc = F9.mul(acc, x)
        assert acc == 1


def test_field_arithmetic_axioms_random():
    rng = random.Random(7)
    for q in (2, 3, 4, 5, 8, 9, 16, 25):
        F = fq(q)
        for _ in range(60):
            a, b, c = (rng.randrange(q) for _ in range(3))
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            if a:
                assert F.mul(a, F.inv(a)) == 1
            # freshman's dream: (a+b)^p = a^p + b^p
            assert F.pow(F.add(a, b), F.p) == F.add(F.pow(a, F.p), F.pow(b, F.p))


def test_frobenius_examples():
    F2 = FqField(2)
    F4 = build_extension(F2, 2)
    g = F4(F4.gen)
    # g^2 = g + 1 in F_4 with modulus x^2+x+1 (oracle: direct arithmetic)
    assert frobenius_pow(g, 1) == g * g
    assert (g * g).val == F4.add(F4.gen, 1)
    # full orbit closes
    for x in range(4):
        assert frobenius_pow(F4(x), 2) == F4(x)
    # prime field is fixed
    F5 = FqField(5)
    for x in range(5):
        assert frobenius_pow(F5(x), 3) == F5(x)


def test_frobenius_is_additive_bijection():
    rng = random.Random(3)
    for q in (4, 8, 9):
        F = fq(q)
        imgs = {F.frob(x) for x in F.elements()}
        assert len(imgs) == F.q
        for _ in range(30):
            a, b = rng.randrange(q), rng.randrange(q)
            assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
            assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))


def test_kernel_of_frobenius_minus_identity():
    # {x : x^q = x} in F_{q^m} has exactly q elements
    for q, m in ((2, 2), (2, 3), (3, 2), (4, 2)):
        F = fq(q)
        E = build_extension(F, m)
        fixed = [x for x in E.elements() if E.frob(x, 1) == x]
        assert len(fixed) == q


def test_embedding_is_a_ring_homomorphism():
    rng = random.Random(11)
    for q, m in ((2, 2), (3, 2), (4, 2), (5, 2), (2, 4)):
        F = fq(q)
        E = build_extension(F, m)
        for _ in range(40):
            a, b = rng.randrange(q), rng.randrange(q)
            assert E.embed(F.add(a, b)) == E.add(E.embed(a), E.embed(b))
            assert E.embed(F.mul(a, b)) == E.mul(E.embed(a), E.embed(b))
        assert E.embed(1) == 1 and E.embed(0) == 0


def test_poly_factor_examples():
    F3 = FqField(3)
    # t^2 + 1 over F_3: oracle brute_irreducible (no root among 0,1,2)
    f = FqPoly(F3, (1, 0, 1))
    assert brute_irreducible(F3, (1, 0, 1))
    assert factor(f) == [(f, 1)]
    F2 = FqField(2)
    # t^2 + t = t(t+1)
    fac = factor(FqPoly(F2, (0, 1, 1)))
    assert fac == [(FqPoly(F2, (0, 1)), 1), (FqPoly(F2, (1, 1)), 1)]
    # t^4 + t = t (t+1) (t^2+t+1), oracle: exhaustive trial division
    fac = factor(FqPoly(F2, (0, 1, 0, 0, 1)))
    assert fac == [
        (FqPoly(F2, (0, 1)), 1),
        (FqPoly(F2, (1, 1)), 1),
        (FqPoly(F2, (1, 1, 1)), 1),
    ]


def test_factor_roundtrip_random():
    rng = random.Random(123)
    for q in (2, 3, 4, 5, 9):
        F = fq(q)
        for _ in range(25):
            deg = rng.randrange(1, 9)
            coeffs = [rng.randrange(q) for _ in range(deg)] + [rng.randrange(1, q)]
            f = FqPoly(F, coeffs)
            prod = FqPoly.const(F, f.leading())
            for g, m in factor(f):
                assert g.is_irreducible()
                assert g.leading() == 1
                for _ in range(m):
                    prod = prod * g
            assert prod == f


def test_factor_with_multiplicities_and_pth_powers():
    F2 = FqField(2)
    t = FqPoly.x(F2)
    one = FqPoly.const(F2, 1)
    f = (t + one) * (t + one) * t * (t * t + t + one) ** 2
    fac = dict(factor(f))
    assert fac[t] == 1
    assert fac[t + one] == 2
    assert fac[t * t + t + one] == 2


def test_factor_rejects_zero():
    with pytest.raises(FFError):
        factor(FqPoly(FqField(2), ()))


def test_irreducibility_agrees_with_bruteforce():
    rng = random.Random(5)
    for q in (2, 3, 4):
        F = fq(q)
        for _ in range(40):
            deg = rng.randrange(1, 5)
            coeffs = tuple(rng.randrange(q) for _ in range(deg)) + (1,)
            f = FqPoly(F, coeffs)
            assert f.is_irreducible() == brute_irreducible(F, coeffs)


def test_lex_least_modulus_choices():
    # degree 3 over F_2: x^3+x+1 (encoding 11) precedes x^3+x^2+1 (encoding 13)
    assert irreducible_poly(FqField(2), 3).coeffs == (1, 1, 0, 1)
    assert irreducible_poly(FqField(2), 2).coeffs == (1, 1, 1)


def test_roots_in_extension():
    F2 = FqField(2)
    F16 = build_extension(F2, 4)
    h = FqPoly(F2, (1, 1, 0, 0, 1))  # x^4+x+1, irreducible
    assert h.is_irreducible()
    rs = roots(h, F16)
    assert len(rs) == 4
    for r in rs:
        assert h.evaluate(r, F16) == 0


def test_poly_divmod_and_gcd():
    rng = random.Random(9)
    F = fq(9)
    for _ in range(25):
        a = FqPoly(F, [rng.randrange(9) for _ in range(rng.randrange(1, 8))])
        b = FqPoly(F, [rng.randrange(9) for _ in range(rng.randrange(1, 5))])
        if b.is_zero():
            continue
        quo, rem = a.divmod(b)
        assert quo * b + rem == a
        assert rem.deg < b.deg
        g = a.gcd(b)
        if not a.is_zero():
            assert (a % g).is_zero() and (b % g).is_zero()


def test_degree_of_product_adds():
    rng = random.Random(21)
    F = fq(5)
    for _ in range(25):
        a = FqPoly(F, [rng.randrange(5) for _ in range(rng.randrange(3))] + [rng.randrange(1, 5)])
        b = FqPoly(F, [rng.randrange(5) for _ in range(rng.randrange(3))] + [rng.randrange(1, 5)])
        assert (a * b).deg == a.deg + b.deg


def test_large_field_without_tables():
    # F_2^18 exceeds the table threshold; arithmetic must still be exact
    F = build_extension(FqField(2), 18)
    rng = random.Random(2)
    for _ in range(15):
        a, b = rng.randrange(F.q), rng.randrange(F.q)
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.pow(F.add(a, b), 2) == F.add(F.pow(a, 2), F.pow(b, 2))


def test_fq_convenience_and_bounds():
    assert fq(25).q == 25
    with pytest.raises(FFError):
        fq(6)
    with pytest.raises(FFError):
        build_extension(fq(4), 11)  # 4^11 = 2^22 over the desk bound
