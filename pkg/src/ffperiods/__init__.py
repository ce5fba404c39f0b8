"""Exact-arithmetic period valuations and regularized product formulas for
rank-1 objects over function fields.

The library computes, with every logarithmic quantity an exact rational
multiple of log q: the product formula over F_q(t) and over elliptic function
fields; the Carlitz module's exponential, torsion, and its infinite- and
v-adic period valuations; the zeta-regularized product formula ledger; and
the full genus-1 cancellation pipeline on an elliptic curve.
"""

from .ffield import FqElem, FqField, FqPoly, build_extension, factor, fq
from .funcfield import (
    Curve,
    FieldElement,
    Place,
    count_points,
    enumerate_places,
    expand_at_place,
    product_formula_check,
    valuation_at,
)
from .series import (
    CenteredLaurent,
    Magnitude,
    PrecisionInsufficiency,
    TruncLaurent,
    newton_valuations,
    two_stage_valuation,
)
from .drinfeld import (
    DrinfeldModule,
    RatFunc,
    TwistedPoly,
    carlitz_exp,
    lattice_exp_partial,
    torsion_kernel,
    twisted_mul,
)
from .zeta_periods import (
    LogQuantity,
    RegularizedLedger,
    ZetaClosedForm,
    carlitz_product_formula_report,
    regularize_constant,
    z_inf_trivial_at_0,
    z_v_trivial_at_1,
)
from .genus1 import (
    Genus1Report,
    eta_corrections,
    final_cancellation,
    formal_expansions,
    group_law_add,
    infinity_period_valuation,
    slope_m,
    solve_V,
)

__version__ = "0.1.0"
