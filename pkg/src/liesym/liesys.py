"""Lie systems and their symmetry systems.

A Lie system is a time-dependent vector field X(t,x) = sum_a b_a(t) X_a
whose X_a span a finite-dimensional Lie algebra.  For every choice of a
gauge function b0(t), the time-dependent symmetries of the form
Y = f0(t) d/dt + sum_a f_a(t) X_a, with [Y, Xbar] = -b0 Xbar for the
autonomized field Xbar = d/dt + X, are exactly the solutions of another
Lie system on the coefficient space (f0, f1, ..., fr):

    df0/dt = b0
    dfa/dt = f0 b_a' + b_a b0 + sum_{b,g} b_b f_g c_{gba}

build_symmetry_system constructs that system from the structure tensor;
symmetry_residual re-checks any candidate through honest vector-field
brackets that never touch the builder's formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DependentInitialConditions,
    DimensionMismatch,
    GridEmpty,
    MissingDerivative,
    QuadratureDiverged,
    TransportLeftDomain,
)
from .expr import Expr, ZeroStatus, compile_numeric
from .integrate import Trajectory, cumulative_simpson, rk4_solve
from .liealg import LieAlgebraBasis, StructureTensor, match_in_span
from .vectorfield import VectorField, autonomize, lie_bracket


@dataclass(frozen=True)
class LieSystem:
    """dx/dt = sum_a coeffs[a](t) algebra.fields[a](x), plus a gauge b0."""

    algebra: LieAlgebraBasis
    coeffs: Tuple[Expr, ...]
    gauge: Expr = field(default_factory=Expr.zero)
    time: str = "t"
    name: str = ""
    state_box: Optional[Tuple[Tuple[float, float], ...]] = None
    excluded: Optional[Callable[[np.ndarray], bool]] = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           tuple(Expr._coerce(c) for c in self.coeffs))
        object.__setattr__(self, "gauge", Expr._coerce(self.gauge))
        if len(self.coeffs) != self.algebra.r:
            raise DimensionMismatch(
                f"{self.algebra.r} basis fields but {len(self.coeffs)} "
                f"coefficient functions")
        if self.time in self.algebra.vars:
            raise DimensionMismatch(
                f"time symbol {self.time} clashes with a state coordinate")

    @property
    def r(self) -> int:
        return self.algebra.r

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.algebra.vars

    def drift_field(self) -> VectorField:
        """The field sum_a b_a(t) X_a on state space, time as a parameter."""
        out = VectorField(self.vars, [0] * len(self.vars))
        for b, f in zip(self.coeffs, self.algebra.fields):
            out = out + b * f
        return out

    def autonomized(self) -> VectorField:
        """Xbar = d/dt + X(t, x) over (t, x)."""
        return autonomize(self.drift_field(), self.time)

    def rhs(self) -> Callable[[float, np.ndarray], np.ndarray]:
        order = (self.time,) + self.vars
        fns = self.drift_field().compiled(order)

        def f(t, y):
            args = np.empty(len(y) + 1)
            args[0] = t
            args[1:] = y
            return np.array([fn(args) for fn in fns])

        return f

    def default_box(self) -> Tuple[Tuple[float, float], ...]:
        return self.state_box or tuple((-2.0, 2.0) for _ in self.vars)


def integrate(sys: LieSystem, x0: Sequence[float],
              t_span: Tuple[float, float], step: float) -> Trajectory:
    """Fixed-step RK4 trajectory of the system itself."""
    return rk4_solve(sys.rhs(), x0, t_span, step, varnames=sys.vars,
                     excluded=sys.excluded)


# -- symmetry system construction ------------------------------------------


def symmetry_system_basis(tensor: StructureTensor, prefix: str = "f"):
    """The generating fields of the symmetry system on (f0, ..., fr).

    Returns (z_fields, w_fields, y_fields):
      Z_a = d/df_a                    for a = 0..r,
      W_a = f0 d/df_a                 for a = 1..r,
      Y_a = sum_{b,g} f_b c_{bag} d/df_g   for a = 1..r.
    """
    r = tensor.r
    names = tuple(f"{prefix}{i}" for i in range(r + 1))
    f0 = Expr.var(names[0])

    def unit(i):
        comps = [Expr.zero()] * (r + 1)
        comps[i] = Expr.one()
        return VectorField(names, comps)

    z_fields = [unit(i) for i in range(r + 1)]
    w_fields = [f0 * unit(i) for i in range(1, r + 1)]
    y_fields = []
    for a in range(r):
        comps = [Expr.zero()] * (r + 1)
        for b in range(r):
            for g in range(r):
                c = tensor.c(b, a, g)
                if c:
                    comps[g + 1] = comps[g + 1] + Expr.const(c) * Expr.var(names[b + 1])
        y_fields.append(VectorField(names, comps))
    return z_fields, w_fields, y_fields


@dataclass(frozen=True)
class SymmetrySystem:
    """The symmetry system as a Lie system on f-space, plus provenance."""

    system: LieSystem
    source: LieSystem
    z_fields: Tuple[VectorField, ...]
    w_fields: Tuple[VectorField, ...]
    y_fields: Tuple[VectorField, ...]

    @property
    def rhs_exprs(self) -> Tuple[Expr, ...]:
        return self.system.drift_field().components


def build_symmetry_system(sys: LieSystem, prefix: str = "f") -> SymmetrySystem:
    """Construct the symmetry system of a Lie system with gauge sys.gauge.

    The Vessiot-Guldberg generators are the Z, W and Y fields; linearly
    dependent Y fields (present whenever the algebra has a center) are
    folded into the kept ones with exact coefficient rewriting, so the
    returned basis is a genuine basis.
    """
    tensor = sys.algebra.tensor
    r = tensor.r
    t = sys.time
    b = sys.coeffs
    b0 = sys.gauge
    z_fields, w_fields, y_fields = symmetry_system_basis(tensor, prefix)

    fields: List[VectorField] = list(z_fields) + list(w_fields)
    coeffs: List[Expr] = [b0] + [b0 * ba for ba in b] + [ba.diff(t) for ba in b]

    kept: List[VectorField] = []
    kept_coeffs: List[Expr] = []
    for a in range(r):
        y = y_fields[a]
        if y.is_zero() is ZeroStatus.ZERO:
            continue
        combo = match_in_span(kept, y) if kept else None
        if combo is None:
            kept.append(y)
            kept_coeffs.append(b[a])
        else:
            for j, c in enumerate(combo):
                if c:
                    kept_coeffs[j] = kept_coeffs[j] + Expr.const(c) * b[a]
    fields += kept
    coeffs += kept_coeffs

    algebra = LieAlgebraBasis(fields)
    inner = LieSystem(algebra, tuple(coeffs), gauge=Expr.zero(), time=t,
                      name=f"symmetry-system({sys.name})" if sys.name else "symmetry-system")
    return SymmetrySystem(inner, sys, tuple(z_fields), tuple(w_fields),
                          tuple(y_fields))


def vertical_symmetry_dimension(tensor: StructureTensor) -> int:
    """Rank of the span of the Y fields: r minus the center dimension."""
    from .liealg import field_rank

    _, _, y_fields = symmetry_system_basis(tensor)
    nonzero = [y for y in y_fields if y.is_zero() is not ZeroStatus.ZERO]
    if not nonzero:
        return 0
    return field_rank(nonzero)


# -- candidates --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SymmetryCandidate:
    """A candidate symmetry Y = f0 d/dt + sum_a f_a X_a.

    Either closed form (exprs in the time symbol) or sampled on a grid
    with explicit derivative channels.  The gauge channel is b0 = df0/dt;
    the multiplier in [Y, Xbar] = h Xbar is h = -b0.
    """

    time: str = "t"
    f_exprs: Optional[Tuple[Expr, ...]] = None
    grid: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    dvalues: Optional[np.ndarray] = None

    @staticmethod
    def closed(f_exprs: Sequence, time: str = "t") -> "SymmetryCandidate":
        return SymmetryCandidate(
            time=time, f_exprs=tuple(Expr._coerce(e) for e in f_exprs))

    @staticmethod
    def sampled(grid: np.ndarray, values: np.ndarray, dvalues: np.ndarray,
                time: str = "t") -> "SymmetryCandidate":
        values = np.asarray(values, dtype=float)
        dvalues = np.asarray(dvalues, dtype=float)
        if values.shape != dvalues.shape or len(grid) != len(values):
            raise DimensionMismatch("candidate channel shapes disagree")
        return SymmetryCandidate(time=time, grid=np.asarray(grid, dtype=float),
                                 values=values, dvalues=dvalues)

    @property
    def is_closed_form(self) -> bool:
        return self.f_exprs is not None

    @property
    def r(self) -> int:
        if self.is_closed_form:
            return len(self.f_exprs) - 1
        return self.values.shape[1] - 1

    def gauge_expr(self) -> Expr:
        if not self.is_closed_form:
            raise MissingDerivative("sampled candidate has no gauge expression")
        return self.f_exprs[0].diff(self.time)

    def channels_at(self, ts: np.ndarray):
        """(values, dvalues) arrays at the given times."""
        if self.is_closed_form:
            fs = [compile_numeric(e, [self.time]) for e in self.f_exprs]
            dfs = [compile_numeric(e.diff(self.time), [self.time])
                   for e in self.f_exprs]
            vals = np.array([[f([t]) for f in fs] for t in ts])
            dvals = np.array([[f([t]) for f in dfs] for t in ts])
            return vals, dvals
        if len(ts) != len(self.grid) or not np.allclose(ts, self.grid):
            raise DimensionMismatch(
                "sampled candidate is bound to its own time grid")
        return self.values, self.dvalues


def candidate_from_trajectory(built: SymmetrySystem,
                              traj: Trajectory) -> SymmetryCandidate:
    """Wrap an integrated symmetry-system trajectory as a candidate.

    Derivative channels come from the built system's right-hand side
    evaluated along the trajectory, which is the exact derivative of the
    flow the integrator approximates.
    """
    rhs = built.system.rhs()
    dvals = np.array([rhs(t, y) for t, y in zip(traj.ts, traj.states)])
    return SymmetryCandidate.sampled(traj.ts, traj.states, dvals,
                                     time=built.system.time)


# -- the bracket oracle -------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of an independent verification."""

    max_abs: float
    exact: bool
    npoints: int = 0

    def __float__(self):
        return float(self.max_abs)


def _sample_states(sys: LieSystem, nx: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    box = sys.default_box()
    pts = np.empty((nx, len(box)))
    for j, (lo, hi) in enumerate(box):
        pts[:, j] = rng.uniform(lo, hi, size=nx)
    return pts


def _pairwise_brackets(fields: Sequence[VectorField]):
    out = {}
    for a in range(len(fields)):
        for b in range(a + 1, len(fields)):
            out[(a, b)] = lie_bracket(fields[a], fields[b])
    return out


def symmetry_residual(candidate: SymmetryCandidate, sys: LieSystem,
                      t_span: Tuple[float, float] = (0.0, 1.0),
                      nt: int = 20, nx: int = 20,
                      seed: int = 0, check_gauge: bool = True) -> ResidualReport:
    """Residual of [Y, Xbar] + f0' Xbar, an oracle independent of the builder.

    The multiplier is the candidate's own f0' (forced by the t-component
    of the bracket); with check_gauge the report also includes the
    mismatch between f0' and the system's declared gauge.  For
    closed-form candidates the combination is computed as an honest
    vector-field bracket on (t, x) and tested for structural zero; exact
    cancellation reports (0.0, exact=True).  Otherwise the same quantity
    is evaluated numerically on a (t, x) sample grid, with the bracket
    part assembled from precomputed pairwise brackets [X_a, X_b] rather
    than from structure constants.
    """
    r = sys.r
    if candidate.r != r:
        raise DimensionMismatch(
            f"candidate has {candidate.r} coefficient functions, system has {r}")
    t = sys.time

    if candidate.is_closed_form:
        f0 = candidate.f_exprs[0]
        b0 = candidate.gauge_expr()
        xbar = sys.autonomized()
        y_comps = [f0]
        for i in range(len(sys.vars)):
            acc = Expr.zero()
            for a in range(r):
                acc = acc + candidate.f_exprs[a + 1] * sys.algebra.fields[a].components[i]
            y_comps.append(acc)
        y = VectorField(xbar.vars, y_comps)
        resid = lie_bracket(y, xbar) + b0 * xbar
        statuses = {c.is_zero() for c in resid.components}
        if check_gauge:
            statuses.add((sys.gauge - b0).is_zero())
        if statuses <= {ZeroStatus.ZERO}:
            return ResidualReport(0.0, exact=True)

    if nt < 1 or nx < 1:
        raise GridEmpty("residual grid has no sample points")
    if candidate.is_closed_form:
        ts = np.linspace(t_span[0], t_span[1], nt)
        vals, dvals = candidate.channels_at(ts)
    else:
        stride = max(1, len(candidate.grid) // nt)
        idx = np.arange(0, len(candidate.grid), stride)
        ts = candidate.grid[idx]
        vals, dvals = candidate.values[idx], candidate.dvalues[idx]
    xs = _sample_states(sys, nx, seed)

    b_fns = [compile_numeric(b, [t]) for b in sys.coeffs]
    db_fns = [compile_numeric(b.diff(t), [t]) for b in sys.coeffs]
    b0_fn = compile_numeric(sys.gauge, [t])
    basis_fns = [f.compiled(sys.vars) for f in sys.algebra.fields]
    bracket_fns = {k: v.compiled(sys.vars)
                   for k, v in _pairwise_brackets(sys.algebra.fields).items()}

    worst = 0.0
    n = len(sys.vars)
    for k, tk in enumerate(ts):
        bv = [fn([tk]) for fn in b_fns]
        dbv = [fn([tk]) for fn in db_fns]
        f0v = vals[k][0]
        fv = vals[k][1:]
        df0v = dvals[k][0]
        dfv = dvals[k][1:]
        if check_gauge:
            worst = max(worst, abs(b0_fn([tk]) - df0v))
        lin = [f0v * dbv[a] - dfv[a] + df0v * bv[a] for a in range(r)]
        pair = {(a, b): fv[a] * bv[b] - fv[b] * bv[a]
                for a in range(r) for b in range(a + 1, r)}
        for x in xs:
            for i in range(n):
                acc = 0.0
                for a in range(r):
                    if lin[a]:
                        acc += lin[a] * basis_fns[a][i](x)
                for key, w in pair.items():
                    if w:
                        acc += w * bracket_fns[key][i](x)
                worst = max(worst, abs(acc))
    return ResidualReport(worst, exact=False, npoints=len(ts) * len(xs))


# -- flow transport ------------------------------------------------------------


@dataclass(frozen=True)
class TransportReport:
    """Euler-step flow transport of a solution along a candidate symmetry.

    For a genuine symmetry the transported curve misses being a solution
    only by the Euler step's own O(eps^2), so halving eps divides the
    defect by about 4; a non-symmetry leaves an O(eps) defect and the
    ratio collapses to about 2.
    """

    ratio: float
    defect_eps: float
    defect_half: float
    eps: float
    classification: str


def flow_transport_check(candidate: SymmetryCandidate, sys: LieSystem,
                         traj: Trajectory, eps: float = 1e-3) -> TransportReport:
    defect_eps = _transport_defect(candidate, sys, traj, eps)
    defect_half = _transport_defect(candidate, sys, traj, eps / 2)
    if defect_eps < 1e-13 and defect_half < 1e-13:
        return TransportReport(math.nan, defect_eps, defect_half, eps, "exact")
    ratio = defect_eps / defect_half if defect_half else math.inf
    if 3.2 <= ratio <= 4.8:
        cls = "second_order"
    elif ratio <= 2.6:
        cls = "first_order"
    else:
        cls = "inconclusive"
    return TransportReport(ratio, defect_eps, defect_half, eps, cls)


def _transport_defect(candidate: SymmetryCandidate, sys: LieSystem,
                      traj: Trajectory, eps: float) -> float:
    t = sys.time
    n = len(sys.vars)
    r = sys.r
    ts = traj.ts
    vals, dvals = candidate.channels_at(ts)

    order = (t,) + sys.vars
    drift = sys.drift_field()
    drift_fns = drift.compiled(order)
    basis_fns = [f.compiled(sys.vars) for f in sys.algebra.fields]
    jac_fns = [[[compile_numeric(f.components[i].diff(v), sys.vars)
                 for v in sys.vars] for i in range(n)]
               for f in sys.algebra.fields]

    worst = 0.0
    for k, tk in enumerate(ts):
        s = traj.states[k]
        f0v, fv = vals[k][0], vals[k][1:]
        df0v, dfv = dvals[k][0], dvals[k][1:]
        args = np.concatenate(([tk], s))
        sdot = np.array([fn(args) for fn in drift_fns])
        xa = [np.array([basis_fns[a][i](s) for i in range(n)]) for a in range(r)]
        u = sum(fv[a] * xa[a] for a in range(r)) if r else np.zeros(n)
        du = np.zeros(n)
        for a in range(r):
            du += dfv[a] * xa[a]
            jac = np.array([[jac_fns[a][i][j](s) for j in range(n)]
                            for i in range(n)])
            du += fv[a] * (jac @ sdot)
        t_new = tk + eps * f0v
        z_new = s + eps * u
        dt_dt = 1.0 + eps * df0v
        dz_dt = sdot + eps * du
        if not np.all(np.isfinite(z_new)):
            raise TransportLeftDomain(f"transport left the domain at t={tk}")
        if sys.excluded is not None and sys.excluded(z_new):
            raise TransportLeftDomain(f"transport hit the excluded locus at t={tk}")
        args_new = np.concatenate(([t_new], z_new))
        x_new = np.array([fn(args_new) for fn in drift_fns])
        defect = np.max(np.abs(dz_dt / dt_dt - x_new))
        worst = max(worst, float(defect))
    return worst


# -- named closed forms ---------------------------------------------------------


def function_bracket(f: Expr, g: Expr, time: str = "t") -> Expr:
    """{f, g} = f g' - g f', the bracket on time-dependent coefficients."""
    f, g = Expr._coerce(f), Expr._coerce(g)
    return f * g.diff(time) - g * f.diff(time)


def candidate_bracket(y1: SymmetryCandidate, y2: SymmetryCandidate,
                      tensor: StructureTensor,
                      d2values: Optional[Tuple[np.ndarray, np.ndarray]] = None
                      ) -> SymmetryCandidate:
    """Bracket of two candidates on the same system.

    Closed form: new f0 = {f0, f0*}, new f_g = (f0 f_g*' - f0* f_g')
    + sum_{a,b} f_a f_b* c_{abg}.  Sampled candidates need second
    derivative channels to produce the new derivative channel.
    """
    t = y1.time
    r = tensor.r
    if y1.is_closed_form and y2.is_closed_form:
        f, g = y1.f_exprs, y2.f_exprs
        new = [function_bracket(f[0], g[0], t)]
        for gm in range(r):
            e = f[0] * g[gm + 1].diff(t) - g[0] * f[gm + 1].diff(t)
            for a in range(r):
                for b in range(r):
                    c = tensor.c(a, b, gm)
                    if c:
                        e = e + Expr.const(c) * f[a + 1] * g[b + 1]
            new.append(e)
        return SymmetryCandidate.closed(new, time=t)
    if y1.is_closed_form or y2.is_closed_form:
        raise DimensionMismatch("mixing closed and sampled candidates")
    if d2values is None:
        raise MissingDerivative(
            "sampled candidate bracket needs second derivative channels")
    if not np.allclose(y1.grid, y2.grid):
        raise DimensionMismatch("candidates live on different grids")
    v1, d1 = y1.values, y1.dvalues
    v2, d2 = y2.values, y2.dvalues
    dd1, dd2 = d2values
    m = len(y1.grid)
    vals = np.zeros((m, r + 1))
    dvals = np.zeros((m, r + 1))
    vals[:, 0] = v1[:, 0] * d2[:, 0] - v2[:, 0] * d1[:, 0]
    dvals[:, 0] = v1[:, 0] * dd2[:, 0] - v2[:, 0] * dd1[:, 0]
    for gm in range(r):
        j = gm + 1
        vals[:, j] = v1[:, 0] * d2[:, j] - v2[:, 0] * d1[:, j]
        dvals[:, j] = (d1[:, 0] * d2[:, j] + v1[:, 0] * dd2[:, j]
                       - d2[:, 0] * d1[:, j] - v2[:, 0] * dd1[:, j])
        for a in range(r):
            for b in range(r):
                c = tensor.c(a, b, gm)
                if c:
                    cf = float(c)
                    vals[:, j] += cf * v1[:, a + 1] * v2[:, b + 1]
                    dvals[:, j] += cf * (d1[:, a + 1] * v2[:, b + 1]
                                         + v1[:, a + 1] * d2[:, b + 1])
    return SymmetryCandidate.sampled(y1.grid, vals, dvals, time=t)


def riccati_f3_ode_residual(f0: Expr, f3: Expr, eta: Expr, b0: Expr,
                            time: str = "t",
                            aux: Optional[Tuple[str, Expr]] = None,
                            t_samples: Optional[np.ndarray] = None,
                            seed: int = 0) -> ResidualReport:
    """Residual of the third-order reduction of the Riccati symmetry system:

        f3''' = f0''' + 4 b0 eta + 2 eta' f0 - 2 eta' f3 - 4 eta f3'

    All inputs are expressions in `time`; alternatively, pass
    aux=(u, T(u)) when the inputs are written in an auxiliary variable u
    with time = T(u), which turns fractional powers of time into
    polynomial data.  Exact zero is reported when the normal form
    cancels; otherwise the residual is sampled.
    """
    f0, f3, eta, b0 = (Expr._coerce(e) for e in (f0, f3, eta, b0))
    if aux is None:
        var = time

        def d(e):
            return e.diff(time)
    else:
        var, t_of_u = aux
        t_of_u = Expr._coerce(t_of_u)
        dt_du = t_of_u.diff(var)

        def d(e):
            return e.diff(var) / dt_du

    deta = d(eta)
    resid = (d(d(d(f3))) - d(d(d(f0))) - 4 * b0 * eta - 2 * deta * f0
             + 2 * deta * f3 + 4 * eta * d(f3))
    if resid.is_zero() is ZeroStatus.ZERO:
        return ResidualReport(0.0, exact=True)
    if t_samples is None:
        t_samples = np.linspace(0.1, 1.0, 19)
    fn = compile_numeric(resid, [var])
    worst = max(abs(fn([tv])) for tv in t_samples)
    return ResidualReport(float(worst), exact=False, npoints=len(t_samples))


def aff_closed_form(a: Expr, b: Expr, k, c1, c2,
                    t_span: Tuple[float, float] = (0.0, 1.0),
                    step: float = 1e-3, time: str = "t") -> SymmetryCandidate:
    """Quadrature solution of the affine symmetry system with gauge zero.

    For dx/dt = a(t) X1 + b(t) X2 with [X1, X2] = X1 and b0 = 0:
        f0 = k,
        f2 = k b(t) + c1,
        f1 = e^{B(t)} ( c2 + int_0^t (k a' - a (k b + c1)) e^{-B} ),
    with B the cumulative integral of b.  Integrals use the fixed-step
    Simpson rule on the returned grid.
    """
    a, b = Expr._coerce(a), Expr._coerce(b)
    kf, c1f, c2f = float(k), float(c1), float(c2)
    t0, t1 = float(t_span[0]), float(t_span[1])
    m = int(round((t1 - t0) / step))
    if m < 2:
        raise GridEmpty("aff_closed_form needs at least two grid points")
    ts = t0 + step * np.arange(m + 1)
    a_fn = compile_numeric(a, [time])
    da_fn = compile_numeric(a.diff(time), [time])
    b_fn = compile_numeric(b, [time])
    db_fn = compile_numeric(b.diff(time), [time])
    av = np.array([a_fn([t]) for t in ts])
    dav = np.array([da_fn([t]) for t in ts])
    bv = np.array([b_fn([t]) for t in ts])
    dbv = np.array([db_fn([t]) for t in ts])

    big_b = cumulative_simpson(bv, step)
    decay = np.exp(-big_b)
    grow = np.exp(big_b)
    f2 = kf * bv + c1f
    inner = (kf * dav - av * f2) * decay
    integral = cumulative_simpson(inner, step)
    f1 = (integral + c2f) * grow
    if not np.all(np.isfinite(f1)):
        raise QuadratureDiverged("affine quadrature produced non-finite values")

    vals = np.column_stack([np.full(m + 1, kf), f1, f2])
    dvals = np.column_stack([np.zeros(m + 1),
                             bv * f1 + kf * dav - av * f2,
                             kf * dbv])
    return SymmetryCandidate.sampled(ts, vals, dvals, time=time)


# -- the f0 = 0 reduced flow -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class VerticalFamilyReport:
    """Closure check for the t-dependent symmetry fields with f0 = 0."""

    max_residual: float
    sample_times: Tuple[float, ...]
    trajectories: Tuple[Trajectory, ...]


def symmetry_algebra_f0_zero(sys: LieSystem,
                             t_span: Tuple[float, float] = (0.0, 1.0),
                             step: float = 1e-3,
                             n_sample_times: int = 5,
                             nx: int = 10,
                             seed: int = 0,
                             inits: Optional[np.ndarray] = None
                             ) -> VerticalFamilyReport:
    """Integrate the reduced system df_a/dt = sum b_b f_g c_{gba} from a
    fundamental set of initial vectors and verify numerically that the
    resulting t-dependent fields close with the structure constants of
    the algebra (the isomorphism given by evaluation at the start time).
    """
    tensor = sys.algebra.tensor
    r = sys.r
    t = sys.time
    if inits is None:
        inits = np.eye(r)
    inits = np.asarray(inits, dtype=float)
    if np.linalg.matrix_rank(inits) < r:
        raise DependentInitialConditions(
            "initial coefficient vectors do not span the algebra")

    b_fns = [compile_numeric(b, [t]) for b in sys.coeffs]

    def rhs(tv, f):
        bv = [fn([tv]) for fn in b_fns]
        out = np.zeros(r)
        for al in range(r):
            acc = 0.0
            for be in range(r):
                if not bv[be]:
                    continue
                for de in range(r):
                    c = tensor.c(de, be, al)
                    if c:
                        acc += bv[be] * f[de] * float(c)
            out[al] = acc
        return out

    names = tuple(f"f{i + 1}" for i in range(r))
    trajs = [rk4_solve(rhs, inits[i], t_span, step, varnames=names)
             for i in range(r)]

    basis_fns = [f.compiled(sys.vars) for f in sys.algebra.fields]
    bracket_fns = {k: v.compiled(sys.vars)
                   for k, v in _pairwise_brackets(sys.algebra.fields).items()}
    xs = _sample_states(sys, nx, seed)
    m = len(trajs[0].ts)
    sample_idx = np.linspace(0, m - 1, n_sample_times).astype(int)

    worst = 0.0
    n = len(sys.vars)
    for idx in sample_idx:
        fvecs = [traj.states[idx] for traj in trajs]
        for i in range(r):
            for j in range(i + 1, r):
                pair = {(a, b): fvecs[i][a] * fvecs[j][b] - fvecs[i][b] * fvecs[j][a]
                        for a in range(r) for b in range(a + 1, r)}
                for x in xs:
                    for comp in range(n):
                        lhs = 0.0
                        for key, w in pair.items():
                            if w:
                                lhs += w * bracket_fns[key][comp](x)
                        rhs_val = 0.0
                        for g in range(r):
                            c = tensor.c(i, j, g)
                            if c:
                                acc = 0.0
                                for al in range(r):
                                    acc += fvecs[g][al] * basis_fns[al][comp](x)
                                rhs_val += float(c) * acc
                        worst = max(worst, abs(lhs - rhs_val))
    return VerticalFamilyReport(worst,
                                tuple(float(trajs[0].ts[i]) for i in sample_idx),
                                tuple(trajs))
