"""Places, valuations, and the product formula.

Every nonzero function on a curve over F_q has a divisor of degree zero:
summing d_v * v(f) over all places gives exactly 0.  This script walks the
places of the projective line and of an elliptic curve and checks the formula
on explicit and random elements.
"""

import random

from ffperiods import (
    Curve,
    FieldElement,
    enumerate_places,
    product_formula_check,
    valuation_at,
)
from ffperiods.ffield import FqField, FqPoly
from ffperiods.funcfield import random_element

# -- 1. places of the projective line over F_3 --------------------------------

F3 = FqField(3)
p1 = Curve.p1(F3)
print("places of P^1/F_3 of degree <= 2:")
for place in enumerate_places(p1, 2):
    print("   ", place)

# -- 2. the divisor of (t^2 + 1)/t ---------------------------------------------

f = FieldElement(p1, FqPoly(F3, (1, 0, 1)), FqPoly(F3, (0, 1)))
print("\nvaluations of (t^2+1)/t:")
for place in enumerate_places(p1, 2):
    v = valuation_at(place, f)
    if v:
        print("    %-22r v = %+d  (degree %d)" % (place, v, place.degree))
rep = product_formula_check(f)
print("degree-weighted total:", rep.total, "->", "holds" if rep.holds else "FAILS")

# -- 3. the elliptic curve y^2 + y = t^3 over F_2 -------------------------------

F2 = FqField(2)
curve = Curve.elliptic(F2, a3=1)
print("\n%r has %d places of degree 1 (the rational points)" % (curve, 3))
t = FieldElement.t(curve)
y = FieldElement.y(curve)
inf = enumerate_places(curve, 1)[0]
print("pole orders at infinity: v(t) = %d, v(y) = %d" % (
    valuation_at(inf, t), valuation_at(inf, y)))
print("divisor of t:", product_formula_check(t).entries)

# -- 4. the formula on random elements ------------------------------------------

rng = random.Random(0)
for kind, c in (("P^1/F_5", Curve.p1(FqField(5))), ("elliptic/F_2", curve)):
    ok = all(
        product_formula_check(random_element(c, rng, max_deg=3)).holds
        for _ in range(20)
    )
    print("20 random elements of %-14s all satisfy sum d_v v(f) = 0: %s" % (kind, ok))
