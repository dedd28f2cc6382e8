"""Quadrature solution of the affine symmetry system.

On the rank-2 affine algebra the symmetry system is triangular, so with
constant f0 = k and gauge zero the remaining channels reduce to one
integrating factor and two cumulative integrals.  The closed form is
returned as a sampled candidate; the residual check below is blind to
how it was produced.
"""

from fractions import Fraction

from liesym import make
from liesym.expr import Expr
from liesym.liesys import aff_closed_form, build_symmetry_system, \
    symmetry_residual

t = Expr.var("t")
a = 1 + t * t          # drift coefficient of the translation field
b = Expr.const(Fraction(1, 2)) * t - 1

entry = make("aff_generic", a=a, b=b)
built = build_symmetry_system(entry.system)
print("symmetry system on (f0, f1, f2):")
for fname, rhs in zip(built.system.vars, built.rhs_exprs):
    print(f"  d{fname}/dt = {rhs}")
print()

for k, c1, c2 in ((1, 0, 0), (2, -1, 1), (0, 1, -2)):
    cand = aff_closed_form(a, b, k, c1, c2, t_span=(0.0, 1.0), step=1e-3)
    rep = symmetry_residual(cand, entry.system, nt=20, nx=20)
    print(f"k={k:2d} c1={c1:2d} c2={c2:2d}: residual {rep.max_abs:.3e}")

# The same check with a corrupted channel fails loudly.
import numpy as np

cand = aff_closed_form(a, b, 1, 0, 0, t_span=(0.0, 1.0), step=1e-3)
vals = cand.values.copy()
vals[:, 1] += 0.05 * cand.grid
bad = cand.sampled(cand.grid, vals, cand.dvalues)
rep = symmetry_residual(bad, entry.system, nt=20, nx=20)
print(f"corrupted channel: residual {rep.max_abs:.3e}")
