"""The Carlitz module: twisted polynomials, the exponential, and torsion.

The skew ring K{tau} multiplies by the rule tau * b = b^q * tau.  The Carlitz
module sends t to theta + tau; its exponential sum e_i z^(q^i) is pinned down
by the functional equation phi_t(exp(z)) = exp(theta z), which forces
e_i = e_{i-1}^q / (theta^(q^i) - theta).
"""

from ffperiods.ffield import FqField, FqPoly, fq
from ffperiods.drinfeld import (
    DrinfeldModule,
    carlitz_exp,
    carlitz_functional_equation_residuals,
    lattice_exp_partial,
    carlitz_period_lattice_generator,
    torsion_kernel,
)

# -- 1. twisted multiplication ----------------------------------------------------

F3 = FqField(3)
m = DrinfeldModule.carlitz_generic(F3)
t = FqPoly.x(F3)
print("phi_t       =", m.phi_t)
print("phi_(t^2)   =", m.phi_of(t * t))
print("  (the tau-coefficient is theta + theta^q: the commutation rule at work)")

# -- 2. the exponential and its functional equation -------------------------------

exp = carlitz_exp(F3, 3)
print("\ne_0 =", exp[0])
print("e_1 =", exp[1])
res = carlitz_functional_equation_residuals(F3, 4)
print("phi_t(exp) - exp(theta z) residuals through z^(3^4) all zero:",
      all(r.is_zero() for r in res))

# -- 3. the lattice route converges to the same exponential ------------------------

F2 = FqField(2)
lam = carlitz_period_lattice_generator(F2, 24)
print("\nCarlitz period generator valuation:", lam.valuation(), "(= -q/(q-1))")
e1 = carlitz_exp(F2, 1)[1].at_infinity(14)
for D in (0, 1, 2):
    cq = lattice_exp_partial(lam, D, F2)[2]
    gap = (cq - e1.with_e(cq.e))
    where = gap.valuation() if gap.terms else gap.precision
    print("deg <= %d lattice points: z^2-coefficient matches e_1 up to O(pi^%s)"
          % (D, where))

# -- 4. torsion kernels over a finite A-field ---------------------------------------

F4 = fq(4)
print("\nCarlitz over F_4 with gamma(t) = 1: phi_t(x) = x + x^2")
mod = DrinfeldModule.carlitz_over_field(F4, 1)
print("kernel of phi_t:", torsion_kernel(mod, FqPoly.x(FqField(2))))
mod0 = DrinfeldModule.carlitz_over_field(F4, 0)
print("with gamma(t) = 0 the map is purely inseparable; kernel:",
      torsion_kernel(mod0, FqPoly.x(FqField(2))))
