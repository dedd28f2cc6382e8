"""Lie systems over several time variables.

A multi-time system prescribes one drift per time direction,

    dx/dt_l = sum_a b[a][l](t1..ts) X_a(x),      l = 1..s,

with the X_a spanning a finite-dimensional Lie algebra.  A joint
solution through every initial point exists exactly when the
zero-curvature condition

    d(b_gk)/dt_l - d(b_gl)/dt_k + sum_{a,b} b_al b_bk c_abg = 0

holds for every field index g and every time pair k < l.  A vertical
field Y = sum_a f_a(t) X_a is a symmetry of the system precisely when
it commutes with each one-direction suspension d/dt_l + X_l; expanding
those brackets in the basis turns the condition into another multi-time
system on the coefficients,

    df_p/dt_l = sum_{a,d} b[a][l] f_d c_dap,

which build_pde_symmetry_system constructs and whose own curvature it
re-checks rather than assumes.  pde_symmetry_residual verifies
candidates through two independent routes: the direct brackets
[d/dt_l + X_l, Y], and the first jet prolongation of Y applied to the
defining equations restricted to their zero set.  The two routes agree
identically; the report carries both so the agreement stays observable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BadParams,
    DimensionMismatch,
    MissingDerivative,
    NotIntegrable,
    NotVertical,
    OpaqueNoDerivative,
)
from .expr import Expr, ZeroStatus, compile_numeric
from .integrate import Trajectory, rk4_solve
from .liealg import LieAlgebraBasis, StructureTensor, match_in_span
from .liesys import _pairwise_brackets, _sample_states
from .vectorfield import VectorField, jet_var, lie_bracket, prolong_first


@dataclass(frozen=True)
class PDELieSystem:
    """dx/dt_l = sum_a coeffs[a][l](times) algebra.fields[a](x).

    coeffs is an r-by-s matrix of expressions in the time symbols; row a
    holds the coefficients of basis field a across the s directions.
    """

    algebra: LieAlgebraBasis
    coeffs: Tuple[Tuple[Expr, ...], ...]
    times: Tuple[str, ...] = ("t1", "t2")
    name: str = ""
    time_box: Optional[Tuple[Tuple[float, float], ...]] = None
    state_box: Optional[Tuple[Tuple[float, float], ...]] = None
    excluded: Optional[Callable[[np.ndarray], bool]] = None

    def __post_init__(self):
        times = tuple(self.times)
        object.__setattr__(self, "times", times)
        if not 1 <= len(times) <= 3:
            # residual grids are dense lattices, 5^s points
            raise BadParams(f"between 1 and 3 time variables, got {len(times)}")
        if len(set(times)) != len(times):
            raise DimensionMismatch(f"repeated time symbol in {times}")
        clash = set(times) & set(self.algebra.vars)
        if clash:
            raise DimensionMismatch(
                f"time symbols {sorted(clash)} clash with state coordinates")
        rows = tuple(tuple(Expr._coerce(c) for c in row) for row in self.coeffs)
        object.__setattr__(self, "coeffs", rows)
        if len(rows) != self.algebra.r:
            raise DimensionMismatch(
                f"{self.algebra.r} basis fields but {len(rows)} coefficient rows")
        for a, row in enumerate(rows):
            if len(row) != len(times):
                raise DimensionMismatch(
                    f"coefficient row {a} has {len(row)} entries for "
                    f"{len(times)} time directions")
        if self.time_box is not None and len(self.time_box) != len(times):
            raise DimensionMismatch(
                f"time box has {len(self.time_box)} intervals for "
                f"{len(times)} time directions")

    @property
    def r(self) -> int:
        return self.algebra.r

    @property
    def s(self) -> int:
        return len(self.times)

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.algebra.vars

    def drift_field(self, l: int) -> VectorField:
        """sum_a coeffs[a][l] X_a on state space, times as parameters."""
        out = VectorField(self.vars, [0] * len(self.vars))
        for row, f in zip(self.coeffs, self.algebra.fields):
            out = out + row[l] * f
        return out

    def suspension(self, l: int) -> VectorField:
        """d/dt_l + X_l over the joint coordinates (times, x)."""
        head = [Expr.zero()] * self.s
        head[l] = Expr.one()
        drift = self.drift_field(l)
        return VectorField(self.times + self.vars,
                           tuple(head) + drift.components)

    def default_time_box(self) -> Tuple[Tuple[float, float], ...]:
        return self.time_box or tuple((0.0, 1.0) for _ in self.times)

    def default_box(self) -> Tuple[Tuple[float, float], ...]:
        return self.state_box or tuple((-2.0, 2.0) for _ in self.vars)


def time_grid(sys: PDELieSystem, per_axis: int = 5) -> np.ndarray:
    """Dense lattice over the declared time box, shape (per_axis**s, s)."""
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in sys.default_time_box()]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class TimePath:
    """Piecewise-linear path in time space with a fixed step count per leg."""

    waypoints: Tuple[Tuple[float, ...], ...]
    steps: int = 200

    def __post_init__(self):
        pts = tuple(tuple(float(v) for v in w) for w in self.waypoints)
        object.__setattr__(self, "waypoints", pts)
        if len(pts) < 2:
            raise BadParams("a path needs at least two waypoints")
        dims = {len(w) for w in pts}
        if len(dims) != 1:
            raise DimensionMismatch(f"waypoints of mixed dimension {sorted(dims)}")
        for w0, w1 in zip(pts, pts[1:]):
            if max(abs(a - b) for a, b in zip(w0, w1)) == 0.0:
                raise BadParams(f"consecutive waypoints coincide at {w0}")
        if int(self.steps) < 1:
            raise BadParams(f"steps per leg must be at least 1, got {self.steps}")
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def s(self) -> int:
        return len(self.waypoints[0])

    @property
    def nseg(self) -> int:
        return len(self.waypoints) - 1

    def point(self, u: float) -> np.ndarray:
        """Map the global parameter u in [0, nseg] to a time point."""
        if not 0.0 <= u <= self.nseg + 1e-12:
            raise BadParams(f"path parameter {u} outside [0, {self.nseg}]")
        i = min(int(u), self.nseg - 1)
        frac = u - i
        w0 = np.asarray(self.waypoints[i], dtype=float)
        w1 = np.asarray(self.waypoints[i + 1], dtype=float)
        return w0 + frac * (w1 - w0)


# -- zero-curvature check -----------------------------------------------------


@dataclass(frozen=True)
class CurvatureReport:
    """Worst absolute value of the zero-curvature combination.

    exact means every entry simplified to the zero expression; worst
    names the (field, time k, time l) indices of the largest entry when
    a grid evaluation was needed.
    """

    max_abs: float
    exact: bool
    npoints: int
    worst: Optional[Tuple[int, int, int]] = None

    def __float__(self) -> float:
        return float(self.max_abs)


def curvature_exprs(sys: PDELieSystem) -> Dict[Tuple[int, int, int], Expr]:
    """Entries d(b_gk)/dt_l - d(b_gl)/dt_k + sum b_al b_bk c_abg, k < l."""
    tensor = sys.algebra.tensor
    r, s = sys.r, sys.s
    out: Dict[Tuple[int, int, int], Expr] = {}
    for k in range(s):
        for l in range(k + 1, s):
            for g in range(r):
                try:
                    e = (sys.coeffs[g][k].diff(sys.times[l])
                         - sys.coeffs[g][l].diff(sys.times[k]))
                except OpaqueNoDerivative as exc:
                    raise MissingDerivative(
                        f"coefficient b[{g}] is not differentiable: {exc}"
                    ) from exc
                for a in range(r):
                    for b in range(r):
                        c = tensor.c(a, b, g)
                        if c:
                            e = e + Expr.const(c) * sys.coeffs[a][l] * sys.coeffs[b][k]
                out[(g, k, l)] = e
    return out


def curvature_residual(sys: PDELieSystem,
                       grid: Optional[np.ndarray] = None,
                       per_axis: int = 5) -> CurvatureReport:
    """Max absolute curvature entry, symbolically when possible.

    With a single time direction there is nothing to check.  When every
    entry simplifies to zero the report is exact; otherwise the entries
    are evaluated on the given time grid (default: dense lattice on the
    declared box) and the worst point wins.
    """
    if sys.s == 1:
        return CurvatureReport(0.0, exact=True, npoints=0)
    entries = curvature_exprs(sys)
    statuses = {e.is_zero() for e in entries.values()}
    if statuses <= {ZeroStatus.ZERO}:
        return CurvatureReport(0.0, exact=True, npoints=0)
    pts = time_grid(sys, per_axis) if grid is None else np.asarray(grid, float)
    worst_val = 0.0
    worst_key: Optional[Tuple[int, int, int]] = None
    for key, e in entries.items():
        fn = compile_numeric(e, sys.times)
        for row in pts:
            v = abs(fn(row))
            if v > worst_val:
                worst_val = v
                worst_key = key
    return CurvatureReport(worst_val, exact=False, npoints=len(pts),
                           worst=worst_key)


# -- symmetry system construction ---------------------------------------------


def pde_symmetry_basis(tensor: StructureTensor,
                       prefix: str = "f") -> List[VectorField]:
    """Generators Y_a = sum_{b,g} f_b c_bag d/df_g on (f1, ..., fr)."""
    r = tensor.r
    names = tuple(f"{prefix}{i}" for i in range(1, r + 1))
    fields = []
    for a in range(r):
        comps = [Expr.zero()] * r
        for b in range(r):
            for g in range(r):
                c = tensor.c(b, a, g)
                if c:
                    comps[g] = comps[g] + Expr.const(c) * Expr.var(names[b])
        fields.append(VectorField(names, comps))
    return fields


@dataclass(frozen=True)
class PDESymmetrySystem:
    """The symmetry system as a multi-time Lie system on f-space."""

    system: PDELieSystem
    source: PDELieSystem
    y_fields: Tuple[VectorField, ...]


def build_pde_symmetry_system(sys: PDELieSystem, prefix: str = "f",
                              tol: float = 1e-9) -> PDESymmetrySystem:
    """Construct df_p/dt_l = sum_{a,d} b[a][l] f_d c_dap on (f1..fr).

    Refuses non-integrable input, and re-checks the curvature of the
    constructed system before returning it.  Linearly dependent
    generators (one per central direction of the algebra) are folded
    into the kept ones exactly, as in the single-time builder; when the
    algebra is abelian every generator vanishes and the result keeps
    unit translation fields with zero coefficients so the zero dynamics
    stays a well-formed system.
    """
    rep = curvature_residual(sys)
    if not rep.max_abs <= tol:
        raise NotIntegrable(
            f"curvature residual {rep.max_abs:g} exceeds {tol:g}"
            + (f" at entry {rep.worst}" if rep.worst else ""),
            residual=rep.max_abs)
    tensor = sys.algebra.tensor
    r, s = sys.r, sys.s
    y_fields = pde_symmetry_basis(tensor, prefix)

    kept: List[VectorField] = []
    kept_rows: List[List[Expr]] = []
    for a in range(r):
        y = y_fields[a]
        if y.is_zero() is ZeroStatus.ZERO:
            continue
        combo = match_in_span(kept, y) if kept else None
        if combo is None:
            kept.append(y)
            kept_rows.append(list(sys.coeffs[a]))
        else:
            for j, c in enumerate(combo):
                if c:
                    for l in range(s):
                        kept_rows[j][l] = kept_rows[j][l] \
                            + Expr.const(c) * sys.coeffs[a][l]
    if not kept:
        names = tuple(f"{prefix}{i}" for i in range(1, r + 1))
        for i in range(r):
            comps = [Expr.zero()] * r
            comps[i] = Expr.one()
            kept.append(VectorField(names, comps))
            kept_rows.append([Expr.zero()] * s)

    inner = PDELieSystem(
        LieAlgebraBasis(kept),
        tuple(tuple(row) for row in kept_rows),
        times=sys.times,
        name=f"symmetry-system({sys.name})" if sys.name else "symmetry-system",
        time_box=sys.time_box)
    own = curvature_residual(inner)
    if not own.max_abs <= tol:
        raise NotIntegrable(
            f"constructed system has curvature residual {own.max_abs:g}",
            residual=own.max_abs)
    return PDESymmetrySystem(inner, sys, tuple(y_fields))


# -- path integration ---------------------------------------------------------


def integrate_along_path(sys: PDELieSystem, x0: Sequence[float],
                         path: TimePath) -> Trajectory:
    """RK4 trajectory of the system pulled back to a piecewise-linear path.

    Along the leg t(u) = w0 + u (w1 - w0) the chain rule gives
    dx/du = sum_l (w1 - w0)_l X_l(t(u), x), which is integrated leg by
    leg; the returned trajectory is parameterized by the global path
    parameter, leg i covering [i, i+1].
    """
    if path.s != sys.s:
        raise DimensionMismatch(
            f"path in {path.s} time dimensions, system has {sys.s}")
    order = sys.times + sys.vars
    n = len(sys.vars)
    dfns = [[compile_numeric(c, order) for c in sys.drift_field(l).components]
            for l in range(sys.s)]

    ts_parts: List[np.ndarray] = []
    state_parts: List[np.ndarray] = []
    err_parts: List[np.ndarray] = []
    y = np.asarray(x0, dtype=float)
    for i in range(path.nseg):
        w0 = np.asarray(path.waypoints[i], dtype=float)
        d = np.asarray(path.waypoints[i + 1], dtype=float) - w0

        def rhs(u, yy, w0=w0, d=d):
            args = np.concatenate([w0 + u * d, yy])
            return np.array([
                sum(d[l] * dfns[l][j](args) for l in range(sys.s))
                for j in range(n)])

        leg = rk4_solve(rhs, y, (0.0, 1.0), 1.0 / path.steps,
                        varnames=sys.vars, excluded=sys.excluded)
        y = leg.states[-1]
        skip = 1 if i > 0 else 0
        ts_parts.append(leg.ts[skip:] + i)
        state_parts.append(leg.states[skip:])
        err_parts.append(leg.err_est[skip:])
    return Trajectory(np.concatenate(ts_parts), np.vstack(state_parts),
                      np.concatenate(err_parts), sys.vars, 1.0 / path.steps)


# -- symmetry candidates and the dual residual oracle -------------------------


@dataclass(frozen=True, eq=False)
class PDESymmetryCandidate:
    """A vertical candidate Y = sum_a f_a(t1..ts) X_a.

    Closed form carries one expression per basis field; sampled form
    carries time points (m, s), values (m, r) and the claimed partial
    derivatives (m, r, s).
    """

    times: Tuple[str, ...]
    f_exprs: Optional[Tuple[Expr, ...]] = None
    tpoints: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    dvalues: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(self.times))
        if self.f_exprs is not None:
            object.__setattr__(
                self, "f_exprs", tuple(Expr._coerce(e) for e in self.f_exprs))
            if any(v is not None
                   for v in (self.tpoints, self.values, self.dvalues)):
                raise DimensionMismatch(
                    "candidate carries both closed-form and sampled data")
            return
        if self.tpoints is None or self.values is None or self.dvalues is None:
            raise DimensionMismatch(
                "sampled candidate needs tpoints, values and dvalues")
        tp = np.asarray(self.tpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        dvals = np.asarray(self.dvalues, dtype=float)
        if tp.ndim != 2 or tp.shape[1] != len(self.times):
            raise DimensionMismatch(
                f"tpoints must have shape (m, {len(self.times)})")
        if vals.ndim != 2 or vals.shape[0] != tp.shape[0]:
            raise DimensionMismatch("values must have shape (m, r)")
        if dvals.shape != vals.shape + (len(self.times),):
            raise DimensionMismatch("dvalues must have shape (m, r, s)")
        object.__setattr__(self, "tpoints", tp)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "dvalues", dvals)

    @staticmethod
    def closed(f_exprs: Sequence,
               times: Sequence[str] = ("t1", "t2")) -> "PDESymmetryCandidate":
        return PDESymmetryCandidate(
            times=tuple(times), f_exprs=tuple(Expr._coerce(e) for e in f_exprs))

    @staticmethod
    def sampled(tpoints, values, dvalues,
                times: Sequence[str] = ("t1", "t2")) -> "PDESymmetryCandidate":
        return PDESymmetryCandidate(times=tuple(times), tpoints=tpoints,
                                    values=values, dvalues=dvalues)

    @property
    def is_closed_form(self) -> bool:
        return self.f_exprs is not None

    @property
    def r(self) -> int:
        if self.f_exprs is not None:
            return len(self.f_exprs)
        return self.values.shape[1]


def pde_candidate_from_path(built: PDESymmetrySystem, traj: Trajectory,
                            path: TimePath) -> PDESymmetryCandidate:
    """Sampled candidate from a trajectory of the built symmetry system.

    The derivative channels are the built system's right-hand sides
    evaluated along the trajectory, one per time direction, so the
    residual check stays independent of the integrator.
    """
    sysf = built.system
    tpoints = np.vstack([path.point(u) for u in traj.ts])
    values = traj.states
    order = sysf.times + sysf.vars
    dfns = [[compile_numeric(c, order)
             for c in sysf.drift_field(l).components] for l in range(sysf.s)]
    m, r = values.shape
    dvalues = np.empty((m, r, sysf.s))
    for k in range(m):
        args = np.concatenate([tpoints[k], values[k]])
        for l in range(sysf.s):
            for j in range(r):
                dvalues[k, j, l] = dfns[l][j](args)
    return PDESymmetryCandidate.sampled(tpoints, values, dvalues,
                                        times=sysf.times)


@dataclass(frozen=True)
class PDESymmetryReport:
    """Residual of the per-direction symmetry brackets.

    For closed-form candidates jet_max_abs and oracle_gap report the
    independent jet-prolongation route and its pointwise distance from
    the bracket route; sampled candidates only support the bracket
    route, so both stay None.
    """

    max_abs: float
    exact: bool
    npoints: int
    jet_max_abs: Optional[float] = None
    oracle_gap: Optional[float] = None

    def __float__(self) -> float:
        return float(self.max_abs)


CandidateLike = Union[PDESymmetryCandidate, VectorField, Sequence]


def _vertical_components(candidate: CandidateLike,
                         sys: PDELieSystem) -> Tuple[Expr, ...]:
    """Normalize a closed-form candidate to components over state space."""
    if isinstance(candidate, VectorField):
        if candidate.vars == sys.times + sys.vars:
            for tv in sys.times:
                if candidate.component(tv).is_zero() is not ZeroStatus.ZERO:
                    raise NotVertical(
                        f"candidate has a d/d{tv} component; the symmetry "
                        f"criterion covers vertical fields only")
            return candidate.components[sys.s:]
        if candidate.vars == sys.vars:
            return candidate.components
        raise DimensionMismatch(
            f"candidate field lives on {candidate.vars}, expected "
            f"{sys.vars} or {sys.times + sys.vars}")
    f_exprs = tuple(Expr._coerce(e) for e in candidate)
    if len(f_exprs) != sys.r:
        raise DimensionMismatch(
            f"{sys.r} basis fields but {len(f_exprs)} coefficients")
    comps = [Expr.zero()] * len(sys.vars)
    for fa, xa in zip(f_exprs, sys.algebra.fields):
        for i, c in enumerate(xa.components):
            comps[i] = comps[i] + fa * c
    return tuple(comps)


def _closed_residual(eta: Tuple[Expr, ...], sys: PDELieSystem,
                     t_grid: Optional[np.ndarray], per_axis: int,
                     nx: int, seed: int) -> PDESymmetryReport:
    joint = sys.times + sys.vars
    y_joint = VectorField(joint, (Expr.zero(),) * sys.s + tuple(eta))
    bracket_comps: List[Expr] = []
    for l in range(sys.s):
        br = lie_bracket(sys.suspension(l), y_joint)
        bracket_comps.extend(br.components)

    y_vert = VectorField(sys.vars, eta)
    jet = prolong_first(y_vert, sys.times)
    onshell = {jet_var(xv, tv): sum(
        (sys.coeffs[a][q] * sys.algebra.fields[a].component(xv)
         for a in range(sys.r)), Expr.zero())
        for xv in sys.vars for q, tv in enumerate(sys.times)}
    jet_comps: List[Expr] = []
    for l in range(sys.s):
        drift = sys.drift_field(l)
        for i, xv in enumerate(sys.vars):
            f_il = Expr.var(jet_var(xv, sys.times[l])) - drift.components[i]
            jet_comps.append(jet.field.apply(f_il).subs(onshell))

    # bracket components on the time directions are structurally zero;
    # pair them with zero jet entries so the gap list lines up
    paired: List[Tuple[Expr, Expr]] = []
    pos = 0
    for l in range(sys.s):
        time_part = bracket_comps[pos:pos + sys.s]
        state_part = bracket_comps[pos + sys.s:pos + sys.s + len(sys.vars)]
        pos += sys.s + len(sys.vars)
        for e in time_part:
            paired.append((e, Expr.zero()))
        for i, e in enumerate(state_part):
            paired.append((e, jet_comps[l * len(sys.vars) + i]))

    statuses = {e.is_zero() for e, _ in paired}
    gap_statuses = {(e - j).is_zero() for e, j in paired}
    if statuses <= {ZeroStatus.ZERO} and gap_statuses <= {ZeroStatus.ZERO}:
        return PDESymmetryReport(0.0, exact=True, npoints=0,
                                 jet_max_abs=0.0, oracle_gap=0.0)

    pts = time_grid(sys, per_axis) if t_grid is None else np.asarray(t_grid, float)
    xs = _sample_states(sys, nx, seed)
    br_fns = [compile_numeric(e, joint) for e, _ in paired]
    jet_fns = [compile_numeric(j, joint) for _, j in paired]
    worst = 0.0
    jet_worst = 0.0
    gap = 0.0
    args = np.empty(len(joint))
    for tp in pts:
        args[:sys.s] = tp
        for x in xs:
            args[sys.s:] = x
            for bf, jf in zip(br_fns, jet_fns):
                bv = bf(args)
                jv = jf(args)
                worst = max(worst, abs(bv))
                jet_worst = max(jet_worst, abs(jv))
                gap = max(gap, abs(bv - jv))
    return PDESymmetryReport(worst, exact=False, npoints=len(pts) * len(xs),
                             jet_max_abs=jet_worst, oracle_gap=gap)


def _sampled_residual(cand: PDESymmetryCandidate, sys: PDELieSystem,
                      nt: int, nx: int, seed: int) -> PDESymmetryReport:
    if cand.r != sys.r:
        raise DimensionMismatch(
            f"{sys.r} basis fields but candidate has {cand.r} channels")
    joint = sys.times + sys.vars
    field_fns = [[compile_numeric(c, joint) for c in f.components]
                 for f in sys.algebra.fields]
    pair_fns = {k: [compile_numeric(c, joint) for c in v.components]
                for k, v in _pairwise_brackets(sys.algebra.fields).items()}
    b_fns = [[compile_numeric(sys.coeffs[a][l], sys.times)
              for l in range(sys.s)] for a in range(sys.r)]
    xs = _sample_states(sys, nx, seed)
    stride = max(1, len(cand.tpoints) // nt)
    idx = np.arange(0, len(cand.tpoints), stride)
    n = len(sys.vars)
    worst = 0.0
    args = np.empty(len(joint))
    for k in idx:
        tp = cand.tpoints[k]
        fv = cand.values[k]
        dv = cand.dvalues[k]
        bv = np.array([[fn(tp) for fn in row] for row in b_fns])
        for x in xs:
            args[:sys.s] = tp
            args[sys.s:] = x
            for l in range(sys.s):
                resid = np.zeros(n)
                for a in range(sys.r):
                    for i in range(n):
                        resid[i] += dv[a, l] * field_fns[a][i](args)
                for (a, b), fns in pair_fns.items():
                    w = bv[a, l] * fv[b] - bv[b, l] * fv[a]
                    if w:
                        for i in range(n):
                            resid[i] += w * fns[i](args)
                worst = max(worst, float(np.max(np.abs(resid))))
    return PDESymmetryReport(worst, exact=False, npoints=len(idx) * len(xs))


def pde_symmetry_residual(candidate: CandidateLike, sys: PDELieSystem,
                          t_grid: Optional[np.ndarray] = None,
                          per_axis: int = 5, nt: int = 25, nx: int = 20,
                          seed: int = 0) -> PDESymmetryReport:
    """Residual of [d/dt_l + X_l, Y] over all directions, worst entry.

    Closed-form candidates (coefficient tuples, vertical fields, or
    PDESymmetryCandidate.closed) are checked symbolically first and
    cross-checked against the jet-prolongation oracle; sampled
    candidates are checked pointwise through honest pairwise brackets,
    with the claimed partial derivatives feeding the linear part.
    """
    if isinstance(candidate, PDESymmetryCandidate):
        if candidate.times != sys.times:
            raise DimensionMismatch(
                f"candidate over times {candidate.times}, system has "
                f"{sys.times}")
        if not candidate.is_closed_form:
            return _sampled_residual(candidate, sys, nt, nx, seed)
        eta = _vertical_components(candidate.f_exprs, sys)
    else:
        eta = _vertical_components(candidate, sys)
    return _closed_residual(eta, sys, t_grid, per_axis, nx, seed)
