import random
from fractions import Fraction as Fr

import pytest

from ffperiods.ffield import FqField, fq
from ffperiods.series import (
    CenteredLaurent,
    Magnitude,
    PrecisionInsufficiency,
    TruncLaurent,
    ZeroSeries,
    arith,
    newton_valuations,
    two_stage_valuation,
)


def rand_series(field, rng, lo=-3, n=8, prec=None, e=1):
    terms = {}
    for _ in range(n):
        terms[rng.randrange(lo * e, 12 * e)] = rng.randrange(field.q)
    return TruncLaurent(field, terms, prec if prec is None else prec * e, e)


def test_geometric_series():
    F = FqField(5)
    one = TruncLaurent.one(F)
    u = TruncLaurent.generator(F, 4)
    inv = (one - u).inverse()
    # 1/(1-u) = 1 + u + u^2 + u^3 + O(u^4)
    assert inv.coefficient(0) == 1
    assert inv.coefficient(1) == 1
    assert inv.coefficient(2) == 1
    assert inv.coefficient(3) == 1
    assert inv.precision == 4


def test_qpow_is_exponent_doubling_over_f2():
    F = FqField(2)
    s = TruncLaurent.from_dict(F, {1: 1, 2: 1}, prec=8)
    t = arith(s, None, ("q_power", 1))
    assert t.coefficient(2) == 1 and t.coefficient(4) == 1
    assert t.precision == 16
    # cross-check against repeated multiplication
    assert (s * s).agrees_with(t.truncate((s * s).precision))


def test_mul_exponent_shift():
    F = FqField(3)
    a = TruncLaurent.from_dict(F, {-2: 1, 0: 1})
    b = TruncLaurent.from_dict(F, {2: 1})
    c = a * b
    assert c.coefficient(0) == 1 and c.coefficient(2) == 1
    assert c.prec is None


def test_mul_precision_rule():
    F = FqField(3)
    a = TruncLaurent.from_dict(F, {2: 1}, prec=10)  # val 2, prec 10
    b = TruncLaurent.from_dict(F, {-1: 2}, prec=4)  # val -1, prec 4
    c = a * b
    # min(Na + wb, Nb + wa) = min(10 - 1, 4 + 2) = 6
    assert c.precision == 6
    assert c.coefficient(1) == 2


def test_add_keeps_min_precision():
    F = FqField(2)
    a = TruncLaurent.from_dict(F, {0: 1}, prec=5)
    b = TruncLaurent.from_dict(F, {1: 1}, prec=9)
    assert (a + b).precision == 5


def test_inverse_roundtrip_random():
    rng = random.Random(42)
    for q in (2, 3, 4, 5):
        F = fq(q)
        for _ in range(20):
            s = rand_series(F, rng, lo=-3, n=6, prec=15)
            if s.is_zero():
                continue
            inv = s.inverse()
            prod = s * inv
            assert prod.coefficient(0) == 1
            assert (prod - TruncLaurent.one(F)).is_zero()


def test_division_and_exactness():
    F = FqField(3)
    num = TruncLaurent.from_dict(F, {0: 1, 2: 1})
    mono = TruncLaurent.from_dict(F, {1: 2})
    quo = num / mono
    assert quo.coefficient(-1) == 2 and quo.coefficient(1) == 2
    assert quo.prec is None  # division by a monomial stays exact
    with pytest.raises(ZeroSeries):
        num.div(TruncLaurent.zero(F, prec=5))


def test_compose_geometric():
    F = FqField(5)
    # f = 1/(1-u) to precision 6, composed with g = u^2 + u^3
    one = TruncLaurent.one(F)
    u = TruncLaurent.generator(F, 6)
    f = (one - u).inverse()
    g = TruncLaurent.from_dict(F, {2: 1, 3: 1}, prec=12)
    h = f.compose(g)
    # oracle: sum_k g^k directly
    acc = TruncLaurent.zero(F, prec=12)
    for k in range(6):
        acc = acc + g**k
    assert h.agrees_with(acc.truncate(h.precision))


def test_ramified_arithmetic():
    F = FqField(3)
    a = TruncLaurent.from_dict(F, {Fr(1, 2): 1}, prec=Fr(5, 2))
    b = TruncLaurent.from_dict(F, {Fr(1, 3): 2})
    c = a * b
    assert c.coefficient(Fr(5, 6)) == 2
    assert c.e == 6


def test_precision_monotonicity_inverse():
    # recomputing with higher precision never changes reported coefficients
    F = FqField(2)
    s_lo = TruncLaurent.from_dict(F, {0: 1, 1: 1, 3: 1}, prec=8)
    s_hi = TruncLaurent.from_dict(F, {0: 1, 1: 1, 3: 1}, prec=16)
    inv_lo, inv_hi = s_lo.inverse(), s_hi.inverse()
    assert (inv_hi.truncate(inv_lo.precision) - inv_lo).is_zero()


def test_newton_valuations_examples():
    # hull of (0,1),(1,1),(2,0): slopes give {1/2, 1/2}
    assert newton_valuations([(0, 1), (1, 1), (2, 0)]) == [Fr(1, 2), Fr(1, 2)]
    # linear y - c with v(c)=3
    assert newton_valuations([(0, 3), (1, 0)]) == [Fr(3)]
    # y^2 - c with v(c)=1
    assert newton_valuations([(0, 1), (2, 0)]) == [Fr(1, 2), Fr(1, 2)]
    # zero coefficients are skipped
    assert newton_valuations([(0, 2), (1, None), (3, 0)]) == [Fr(2, 3)] * 3


def test_newton_valuations_against_constructed_roots():
    # roots constructed in F_q((pi)) with a ramified exponent; their valuations
    # must match the polygon exactly.  poly: (y - pi)(y - pi)(y - pi^-2) over F_5
    F = FqField(5)
    pi = TruncLaurent.from_dict(F, {1: 1})
    r3 = TruncLaurent.from_dict(F, {-2: 1})
    # expand (y-pi)^2 (y-r3) = y^3 - (2pi+r3) y^2 + (pi^2 + 2 pi r3) y - pi^2 r3
    c2 = -(pi + pi + r3)
    c1 = pi * pi + (pi * r3).scale(2)
    c0 = -(pi * pi * r3)
    pts = [(0, c0.valuation()), (1, c1.valuation()), (2, c2.valuation()), (3, 0)]
    assert newton_valuations(pts) == [Fr(-2), Fr(1), Fr(1)]


def test_newton_valuations_ramified_roots_degree_4():
    # (y^2 - pi)(y^2 - pi^3): roots +-pi^(1/2), +-pi^(3/2) live at ramification
    # index 2; expand the polynomial genuinely and compare polygon vs roots
    F = FqField(5)
    pi = TruncLaurent.from_dict(F, {1: 1})
    c2 = -(pi + pi * pi * pi)  # -(pi + pi^3)
    c0 = (pi * pi) * (pi * pi)  # pi^4
    pts = [(0, c0.valuation()), (2, c2.valuation()), (4, 0)]
    predicted = newton_valuations(pts)
    assert predicted == [Fr(1, 2), Fr(1, 2), Fr(3, 2), Fr(3, 2)]
    # construct the roots explicitly in the ramified extension and check that
    # substituting them in kills the polynomial
    for root_exp in (Fr(1, 2), Fr(3, 2)):
        for sign in (1, 4):  # +-1 in F_5
            r = TruncLaurent.from_dict(F, {root_exp: sign})
            val = (r * r * r * r) + c2.with_e(2) * (r * r) + c0.with_e(2)
            assert val.is_zero()
            assert r.valuation() in predicted


def test_newton_degenerate_input():
    with pytest.raises(Exception):
        newton_valuations([(2, 0)])


def test_two_stage_examples():
    F = FqField(3)
    one = TruncLaurent.one(F)
    # f = 1 -> (0, 0)
    vhat, v = two_stage_valuation(CenteredLaurent({0: one}))
    assert (vhat, v) == (0, 0)
    # f = (z-zeta)^2 -> (2, 0)
    vhat, v = two_stage_valuation(CenteredLaurent({2: one}))
    assert (vhat, v) == (2, 0)
    # magnitude coefficient
    vhat, v = two_stage_valuation(CenteredLaurent({1: Magnitude(Fr(1, 2))}))
    assert (vhat, v) == (1, Fr(1, 2))


def test_two_stage_multiplicative():
    rng = random.Random(17)
    F = FqField(3)
    for _ in range(30):
        f = CenteredLaurent(
            {
                rng.randrange(0, 3): rand_series(F, rng, lo=-2, n=4, prec=9),
                rng.randrange(3, 6): rand_series(F, rng, lo=-2, n=4, prec=9),
            }
        )
        g = CenteredLaurent({rng.randrange(0, 4): rand_series(F, rng, lo=-2, n=4, prec=9)})
        try:
            a = two_stage_valuation(f)
            b = two_stage_valuation(g)
            c = two_stage_valuation(f * g)
        except (PrecisionInsufficiency, ZeroSeries):
            continue
        assert c.vhat == a.vhat + b.vhat
        assert c.v == a.v + b.v


def test_two_stage_generator_independence():
    # replacing (z-zeta) by (z-zeta)*unit with Theta(unit) a unit leaves v fixed
    rng = random.Random(23)
    F = FqField(3)
    for _ in range(20):
        base = rand_series(F, rng, lo=-2, n=5, prec=10)
        if base.is_zero():
            continue
        f = CenteredLaurent({2: base})
        val = two_stage_valuation(f)
        # unit u(z-zeta) = unit0 + unit1 (z-zeta): Theta(u) = unit0, a unit
        unit0 = TruncLaurent.from_dict(F, {0: rng.randrange(1, 3), 1: 1}, prec=10)
        unit1 = rand_series(F, rng, lo=0, n=3, prec=10)
        u = CenteredLaurent({0: unit0, 1: unit1})
        # f * u^2 corresponds to rewriting in the generator (z-zeta)*u
        shifted = f * (u * u)
        val2 = two_stage_valuation(shifted)
        assert val2.vhat == val.vhat
        assert val2.v == val.v  # v(Theta(u)) = 0 since unit0 has valuation 0


def test_two_stage_tie_raises():
    with pytest.raises(PrecisionInsufficiency):
        Magnitude(Fr(1, 2)) + Magnitude(Fr(1, 2))
    F = FqField(2)
    zero_to_prec = TruncLaurent.zero(F, prec=4)
    with pytest.raises(PrecisionInsufficiency):
        two_stage_valuation(CenteredLaurent({1: zero_to_prec, 2: TruncLaurent.one(F)}))


def test_magnitude_sum_strict_min():
    s = Magnitude.sum([Magnitude(Fr(1, 2)), Magnitude(2), Magnitude(5)])
    assert s.val == Fr(1, 2)
    with pytest.raises(PrecisionInsufficiency):
        Magnitude.sum([Magnitude(1), Magnitude(1)])
