"""Finite-dimensional Lie algebras of vector fields.

Structure constants are extracted by matching monomial coefficients
exactly over the rationals; opaque leaves count as independent symbols,
which keeps the match exact for bases like Buchdahl's f(x)-dependent
fields.  When exact matching fails and opaque leaves are present, a
64-point least-squares fallback is attempted and the result is flagged
as numerical.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import rlinalg
from .errors import DependentBasis, NotClosed
from .expr import Expr, OpaqueNoEvaluator, UnboundSymbol, compile_numeric
from .vectorfield import VectorField, lie_bracket

Triple = Tuple[int, int, int]


class StructureTensor:
    """Antisymmetric structure constants c[alpha][beta][gamma], exact.

    Indices are 0-based internally; entries are stored for alpha < beta
    only and mirrored with a sign on access.
    """

    __slots__ = ("r", "data")

    def __init__(self, r: int, entries: Optional[Dict[Triple, Fraction]] = None):
        self.r = r
        self.data: Dict[Triple, Fraction] = {}
        for (a, b, g), v in (entries or {}).items():
            self.set(a, b, g, v)

    def set(self, a: int, b: int, g: int, value) -> None:
        value = Fraction(value)
        if a == b:
            if value:
                raise ValueError("c[a][a][g] must vanish")
            return
        if a > b:
            a, b, value = b, a, -value
        key = (a, b, g)
        if value:
            self.data[key] = value
        else:
            self.data.pop(key, None)

    def c(self, a: int, b: int, g: int) -> Fraction:
        if a == b:
            return Fraction(0)
        if a < b:
            return self.data.get((a, b, g), Fraction(0))
        return -self.data.get((b, a, g), Fraction(0))

    def __eq__(self, other):
        return (isinstance(other, StructureTensor)
                and self.r == other.r and self.data == other.data)

    def __hash__(self):
        return hash((self.r, tuple(sorted(self.data.items()))))

    def __repr__(self):
        items = ", ".join(
            f"c{a + 1}{b + 1}{g + 1}={v}" for (a, b, g), v in sorted(self.data.items()))
        return f"StructureTensor(r={self.r}, {items or 'abelian'})"

    def to_triples(self) -> List[list]:
        """JSON form: 1-based [alpha, beta, gamma, "p/q"] with alpha < beta."""
        return [[a + 1, b + 1, g + 1, str(v)]
                for (a, b, g), v in sorted(self.data.items())]

    @staticmethod
    def from_triples(r: int, triples: Sequence[Sequence]) -> "StructureTensor":
        t = StructureTensor(r)
        for a, b, g, v in triples:
            t.set(int(a) - 1, int(b) - 1, int(g) - 1, Fraction(str(v)))
        return t


def jacobi_residual(tensor: StructureTensor) -> Fraction:
    """Max abs of the Jacobi sums; exactly zero for a Lie algebra."""
    r = tensor.r
    worst = Fraction(0)
    for a in range(r):
        for b in range(a + 1, r):
            for g in range(b + 1, r):
                for tau in range(r):
                    s = sum(
                        (tensor.c(a, b, m) * tensor.c(m, g, tau)
                         + tensor.c(b, g, m) * tensor.c(m, a, tau)
                         + tensor.c(g, a, m) * tensor.c(m, b, tau)
                         for m in range(r)),
                        Fraction(0))
                    worst = max(worst, abs(s))
    return worst


def center(tensor: StructureTensor) -> List[List[Fraction]]:
    """Exact basis of the center: vectors v with sum_a v_a c[a][b][g] = 0."""
    r = tensor.r
    rows = []
    for b in range(r):
        for g in range(r):
            rows.append([tensor.c(a, b, g) for a in range(r)])
    return rlinalg.nullspace(rows)


def transform_tensor(tensor: StructureTensor, a_matrix) -> StructureTensor:
    """Structure constants in the basis new_i = sum_j A[i][j] old_j."""
    r = tensor.r
    a = [[Fraction(v) for v in row] for row in a_matrix]
    inv = rlinalg.invert(a)
    if inv is None:
        raise DependentBasis("change of basis matrix is singular")
    out = StructureTensor(r)
    for al in range(r):
        for be in range(al + 1, r):
            for mu in range(r):
                total = Fraction(0)
                for g in range(r):
                    if not a[al][g]:
                        continue
                    for d in range(r):
                        if not a[be][d]:
                            continue
                        for e in range(r):
                            ce = tensor.c(g, d, e)
                            if ce:
                                total += a[al][g] * a[be][d] * ce * inv[e][mu]
                if total:
                    out.set(al, be, mu, total)
    return out


def _cleared_rows(exprs_per_field: List[List[Expr]]):
    """Clear denominators per component and tabulate monomial coefficients.

    exprs_per_field[j][i] is component i of field j.  Per component the
    product of the distinct denominators multiplies everything, which is
    exact because each denominator divides the product.  Returns one
    coefficient dict (monomial-key -> Fraction) per field.
    """
    nfields = len(exprs_per_field)
    ncomps = len(exprs_per_field[0])
    tables: List[Dict[tuple, Fraction]] = [dict() for _ in range(nfields)]
    one = {(): Fraction(1)}
    for i in range(ncomps):
        dens = []
        for j in range(nfields):
            d = exprs_per_field[j][i].den
            if d != one and all(d != seen for seen in dens):
                dens.append(d)
        clear = Expr.one()
        for d in dens:
            clear = clear * Expr(dict(d), dict(one))
        for j in range(nfields):
            e = exprs_per_field[j][i] * clear
            if e.den != one:
                raise NotClosed(
                    "could not clear component denominators exactly")
            for mono, coeff in e.num.items():
                tables[j][(i, mono)] = coeff
    return tables


def match_in_span(fields: Sequence[VectorField],
                  target: VectorField) -> Optional[List[Fraction]]:
    """Exact coefficients writing target = sum_g c_g fields[g], or None."""
    exprs = [list(f.components) for f in fields] + [list(target.components)]
    tables = _cleared_rows(exprs)
    keys = sorted({k for tab in tables for k in tab},
                  key=lambda k: (k[0], str(k[1])))
    matrix = [[tables[j].get(key, Fraction(0)) for j in range(len(fields))]
              for key in keys]
    rhs = [tables[-1].get(key, Fraction(0)) for key in keys]
    return rlinalg.solve(matrix, rhs)


def field_rank(fields: Sequence[VectorField]) -> int:
    """Rank of the fields as vectors of exact monomial coefficients."""
    tables = _cleared_rows([list(f.components) for f in fields])
    keys = sorted({k for tab in tables for k in tab},
                  key=lambda k: (k[0], str(k[1])))
    matrix = [[tab.get(key, Fraction(0)) for tab in tables] for key in keys]
    return rlinalg.rank(matrix)


def extract_structure_constants(fields: Sequence[VectorField],
                                seed: int = 0) -> Tuple[StructureTensor, str]:
    """Expand every bracket in the given basis; returns (tensor, method).

    method is "exact" when every bracket matched by monomial
    coefficients, "numerical" when a sampled least-squares fallback was
    needed for some pair.  Raises DependentBasis or NotClosed.
    """
    fields = list(fields)
    if not fields:
        raise DependentBasis("empty basis")
    vars0 = fields[0].vars
    for f in fields:
        if f.vars != vars0:
            raise DependentBasis("basis fields live on different coordinates")
    r = len(fields)
    if field_rank(fields) < r:
        raise DependentBasis("basis fields are linearly dependent")

    tensor = StructureTensor(r)
    method = "exact"
    for a in range(r):
        for b in range(a + 1, r):
            bracket = lie_bracket(fields[a], fields[b])
            sol = match_in_span(fields, bracket)
            if sol is None:
                opaque = any(c.has_opaque for f in list(fields) + [bracket]
                             for c in f.components)
                if not opaque:
                    raise NotClosed(
                        f"bracket [X{a + 1}, X{b + 1}] is outside the span "
                        f"of the basis")
                sol = _numeric_fallback(fields, bracket, a, b, seed)
                method = "numerical"
            for g, v in enumerate(sol):
                if v:
                    tensor.set(a, b, g, v)
    return tensor, method


def _numeric_fallback(fields, bracket, a, b, seed, npoints=64, tol=1e-9):
    """Sampled least-squares solve of [Xa, Xb] = sum_g c_g Xg."""
    vars0 = fields[0].vars
    symbols = set()
    for f in list(fields) + [bracket]:
        for c in f.components:
            symbols |= c.free_symbols()
    order = list(vars0) + sorted(symbols - set(vars0))
    try:
        compiled = [f.compiled(order) for f in fields]
        btarget = bracket.compiled(order)
    except (OpaqueNoEvaluator, UnboundSymbol) as exc:
        raise NotClosed(
            f"bracket [X{a + 1}, X{b + 1}] left the exact span and the "
            f"numerical fallback cannot evaluate the fields: {exc}") from exc
    rng = np.random.default_rng(seed)
    rows, rhs = [], []
    attempts = 0
    while len(rows) < npoints * len(vars0) and attempts < npoints * 10:
        attempts += 1
        pt = rng.uniform(0.3, 1.7, size=len(order))
        try:
            vals = [[fn(pt) for fn in comp] for comp in compiled]
            tvals = [fn(pt) for fn in btarget]
        except Exception:
            continue
        for i in range(len(vars0)):
            rows.append([vals[g][i] for g in range(len(fields))])
            rhs.append(tvals[i])
    mat = np.array(rows)
    vec = np.array(rhs)
    sol, *_ = np.linalg.lstsq(mat, vec, rcond=None)
    resid = float(np.max(np.abs(mat @ sol - vec))) if len(rows) else float("inf")
    if resid > tol:
        raise NotClosed(
            f"bracket [X{a + 1}, X{b + 1}] is outside the span "
            f"(sampled residual {resid:.3e})", residual=resid)
    snapped = [Fraction(float(v)).limit_denominator(10 ** 6) for v in sol]
    snap_vec = np.array([float(v) for v in snapped])
    if float(np.max(np.abs(mat @ snap_vec - vec))) <= tol:
        return snapped
    return [Fraction(float(v)) for v in sol]


class LieAlgebraBasis:
    """A basis of vector fields with its extracted structure tensor."""

    __slots__ = ("fields", "tensor", "method", "seed")

    def __init__(self, fields: Sequence[VectorField], seed: int = 0):
        self.fields = tuple(fields)
        self.seed = seed
        self.tensor, self.method = extract_structure_constants(self.fields, seed)

    @property
    def r(self) -> int:
        return len(self.fields)

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.fields[0].vars

    def jacobi_residual(self) -> Fraction:
        return jacobi_residual(self.tensor)

    def center(self) -> List[List[Fraction]]:
        return center(self.tensor)
