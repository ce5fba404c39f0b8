from fractions import Fraction as Fr

import pytest

from ffperiods.ffield import FFError, FqField, fq
from ffperiods.funcfield import Curve, Place, count_points
from ffperiods.zeta_periods import (
    LogQuantity,
    ZetaClosedForm,
    carlitz_product_formula_report,
    euler_product_series,
    regularize_constant,
    z_inf_trivial_at_0,
    z_v_trivial_at_1,
)


def test_z_v_values():
    c = Curve.p1(FqField(2))
    p1 = Place(c, "finite", 1, None)
    assert z_v_trivial_at_1(p1) == 1  # q_v = 2
    c3 = Curve.p1(FqField(3))
    assert z_v_trivial_at_1(Place(c3, "finite", 1, None)) == Fr(1, 2)
    assert z_v_trivial_at_1(Place(c3, "finite", 2, None)) == Fr(1, 8)
    with pytest.raises(FFError):
        z_v_trivial_at_1(Place(c, "infinite", 1))


def test_z_inf_p1():
    for q in (2, 3, 4, 5):
        zeta = ZetaClosedForm.for_curve(Curve.p1(fq(q)))
        assert z_inf_trivial_at_0(zeta) == LogQuantity(Fr(q, q - 1))


def test_z_inf_elliptic():
    # ((1 - N - q)/N + q/(q-1)) log q with N = #C(F_q)
    for curve in (Curve.elliptic(FqField(2), a3=1), Curve.elliptic(FqField(3), a4=1)):
        q = curve.field.q
        n = count_points(curve, 1)
        zeta = ZetaClosedForm.for_curve(curve)
        expected = Fr(1 - n - q, n) + Fr(q, q - 1)
        assert z_inf_trivial_at_0(zeta) == LogQuantity(expected)


def test_z_inf_p1_is_special_case_of_elliptic_formula():
    # the general formula with constant numerator 1 degenerates to q/(q-1)
    q = 3
    zeta = ZetaClosedForm(q, [1], [1, -q])
    assert z_inf_trivial_at_0(zeta).coeff == Fr(q, q - 1)


def test_regularize_constant():
    q = 3
    c = Curve.p1(FqField(q))
    zeta = ZetaClosedForm.for_curve(c)
    ledger = regularize_constant([], zeta)
    assert ledger.total == LogQuantity(Fr(-q, q - 1))
    # elliptic, no deviations
    e = Curve.elliptic(FqField(2), a3=1)
    n = count_points(e, 1)
    ledger_e = regularize_constant([], ZetaClosedForm.for_curve(e))
    assert ledger_e.total.coeff == -(Fr(1 - n - 2, n) + Fr(2, 1))
    # a single deviation shifts the total linearly
    pl = Place(c, "finite", 1, None)
    ledger_d = regularize_constant([(pl, 1)], zeta)
    assert ledger_d.total == ledger.total + LogQuantity.of(1)


def test_euler_product_matches_closed_form():
    for curve in (
        Curve.p1(FqField(2)),
        Curve.p1(FqField(3)),
        Curve.elliptic(FqField(2), a3=1),
        Curve.elliptic(FqField(3), a4=1),
    ):
        zeta = ZetaClosedForm.for_curve(curve)
        for D in (1, 2, 3, 4):
            assert euler_product_series(curve, D) == zeta.series(D)


def test_carlitz_report_totals():
    for q, inf_coeff in ((2, Fr(2)), (3, Fr(3, 2)), (4, Fr(4, 3))):
        ledger = carlitz_product_formula_report(fq(q), prec=48, max_place_degree=2)
        assert ledger.total.is_zero()
        label, value = ledger.entries[0]
        assert "infinity" in label and value == LogQuantity(inf_coeff)
        assert ledger.spot_checks  # v-adic checks actually ran


def test_carlitz_report_place_count():
    ledger = carlitz_product_formula_report(fq(4), prec=48, max_place_degree=2)
    # 4 linear + (16-4)/2 = 6 quadratic monic irreducibles over F_4
    assert len(ledger.spot_checks) == 4 + 6


def test_log_quantity_exactness():
    a = LogQuantity.of(Fr(1, 3))
    b = LogQuantity.of(Fr(1, 6))
    assert (a + b).coeff == Fr(1, 2)
    assert (a - a).is_zero()
    assert a.scaled(3).coeff == 1
