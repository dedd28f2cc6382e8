"""Systems with several time variables: curvature, paths, symmetries.

With s commuting time directions the system dx/dt_l = X_l(t, x) is only
solvable when the zero-curvature condition holds; then the endpoint of
an integral curve depends on the endpoint of the time path alone.  The
symmetry construction carries over, and its own curvature must vanish
too before the result means anything.
"""

import numpy as np

from liesym import make
from liesym.errors import NotIntegrable
from liesym.pdesys import (TimePath, build_pde_symmetry_system,
                           curvature_residual, integrate_along_path,
                           pde_symmetry_residual)

entry = make("partial_riccati")
system = entry.system
print(f"system: {system.name}, r={system.r}, times={system.times}")
print(f"curvature: {curvature_residual(system).max_abs} "
      f"(exact={curvature_residual(system).exact})")
print()

# Three different routes through time space, one shared endpoint.
paths = {
    "staircase": TimePath(((0, 0), (1, 0), (1, 1)), steps=400),
    "reversed": TimePath(((0, 0), (0, 1), (1, 1)), steps=400),
    "chord": TimePath(((0, 0), (1, 1)), steps=400),
}
for label, path in paths.items():
    end = integrate_along_path(system, (0.2,), path).states[-1]
    print(f"  {label:10s} endpoint {end}")
print()

built = build_pde_symmetry_system(system)
print(f"built symmetry system curvature: "
      f"{curvature_residual(built.system).max_abs}")
for fam in entry.families:
    rep = pde_symmetry_residual(fam.candidate, system)
    print(f"family {fam.name}: residual {rep.max_abs}, exact={rep.exact}")
print()

# Perturbing one coefficient breaks integrability and the builder refuses.
bad = make("partial_riccati",
           coeffs=(("1", "2"), ("1/2", "1"), ("-1/3", "-1/6"))).system
print(f"perturbed curvature: {curvature_residual(bad).max_abs}")
try:
    build_pde_symmetry_system(bad)
except NotIntegrable as exc:
    print(f"builder refused: {exc}")
