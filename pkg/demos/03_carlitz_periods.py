"""Carlitz period valuations and the regularized product formula.

At the infinite place the Betti-de Rham pairing image is
eta^q * prod_{i>=1} (1 - theta^(1-q^i)) with eta^(1-q) = -theta; its
magnitude is q^(-q/(q-1)), computed here from the actual series with the
ramified exponent tracked exactly.  At a finite place v the inverse period
has two-stage valuation (1, 1/(q_v-1)), which the Newton-polygon ladder
produces without ever constructing the infinitely ramified tower.  Summing
log-magnitudes over all places diverges; the zeta-regularization assigns the
tail -zeta'_A(0)/zeta_A(0) and everything cancels.
"""

from ffperiods.ffield import fq
from ffperiods.drinfeld import (
    carlitz_betti_de_rham_image,
    carlitz_vadic_ladder,
    carlitz_vadic_two_stage,
)
from ffperiods.zeta_periods import carlitz_product_formula_report

# -- 1. the infinite place ---------------------------------------------------------

for q in (2, 3, 4):
    image = carlitz_betti_de_rham_image(fq(q), 32)
    print("q=%d: leading term of eta^q * prod(...) has exponent %s  "
          "(magnitude q^-%s)" % (q, image.valuation(), image.valuation()))

# -- 2. the v-adic ladder ----------------------------------------------------------

print("\ntower valuations at a degree-1 place of F_3(t) (q_v = 3):")
print("   ", carlitz_vadic_ladder(3, 5))
print("two-stage valuation of the inverse period (vhat, v):",
      tuple(carlitz_vadic_two_stage(3, 1)))

# -- 3. the regularized ledger -----------------------------------------------------

for q in (2, 3):
    print("\n=== regularized Carlitz ledger, q = %d ===" % q)
    ledger = carlitz_product_formula_report(fq(q), prec=48, max_place_degree=2)
    for label, value in ledger.entries:
        print("  %-44s %r" % (label, value))
    for place, vhat, v, zv in ledger.spot_checks:
        print("  spot %-39r (vhat,v)=(%d,%s) == Z_v %s" % (place, vhat, v, zv))
    print("  TOTAL:", ledger.total)
