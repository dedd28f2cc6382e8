"""Command-line front end: define or load systems, run checks, emit CSV.

Subcommands: list, show, check-algebra, symmetrize, verify, integrate,
pde.  Exit codes: 0 success, 1 failed check (algebra not closed,
residual above tolerance, non-integrable coefficients), 2 unreadable
input, 3 pole encountered, 64 usage error.  With a fixed seed (flag or
LIESYM_SEED) every run is byte-for-byte reproducible.

Input files are JSON.  A system document has "vars", "basis" (one list
of component expressions per field), "coeffs" and optional "gauge_b0",
"time", "name"; coefficient strings may use @fn(t) for opaque profiles,
which get a formal derivative chain and no evaluator.  A multi-time
document replaces "time" with "times" and makes "coeffs" a matrix with
one row per basis field and one column per time.  A path document has
"waypoints" and per-segment "steps"; a candidate document has "f" and
"time" (or "times").
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import re
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .catalog import CatalogEntry, make, names
from .errors import (
    BadParams,
    DependentBasis,
    DivisionByZero,
    LiesymError,
    NotClosed,
    NotIntegrable,
    ParseError,
    PoleEncountered,
    UnknownName,
)
from .expr import Expr, OpaqueFunction, parse
from .liealg import LieAlgebraBasis, center, extract_structure_constants, \
    jacobi_residual
from .liesys import (
    LieSystem,
    SymmetryCandidate,
    build_symmetry_system,
    candidate_from_trajectory,
    integrate,
    symmetry_residual,
)
from .pdesys import (
    PDELieSystem,
    PDESymmetryCandidate,
    TimePath,
    build_pde_symmetry_system,
    curvature_residual,
    integrate_along_path,
    pde_symmetry_residual,
)
from .vectorfield import VectorField

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_PARSE = 2
EXIT_POLE = 3
EXIT_USAGE = 64

CSV_HEADER = "# liesym-csv v1"


class UsageError(LiesymError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """argparse maps usage problems to exit 2; the contract wants 64."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand run depends on, validated up front."""

    subcommand: str
    catalog: Optional[str] = None
    input: Optional[str] = None
    params: Tuple[Tuple[str, str], ...] = ()
    t_span: Tuple[float, float] = (0.0, 1.0)
    step: float = 1e-3
    tol: float = 1e-6
    agree_tol: float = 1e-6
    seed: int = 0
    out: Optional[str] = None
    report: Optional[str] = None
    b0: Optional[str] = None
    f_init: Optional[Tuple[float, ...]] = None
    x0: Optional[Tuple[float, ...]] = None
    candidate: Optional[str] = None
    family: Optional[str] = None
    path: Optional[str] = None
    name: Optional[str] = None
    check_gauge: bool = True

    def __post_init__(self):
        if self.step <= 0:
            raise UsageError("step must be positive")
        if self.tol <= 0 or self.agree_tol <= 0:
            raise UsageError("tolerances must be positive")
        if self.t_span[1] == self.t_span[0]:
            raise UsageError("t-span must have nonzero length")


# -- input documents ------------------------------------------------------------

_OPAQUE_NAME = re.compile(r"@([A-Za-z_][A-Za-z_0-9]*)")


def _opaque_registry(texts: Sequence[str], depth: int = 3):
    found = set()
    for s in texts:
        found.update(_OPAQUE_NAME.findall(s))
    registry = {}
    for name in sorted(found):
        link = None
        for k in range(depth, -1, -1):
            link = OpaqueFunction(name + "'" * k, derivative=link)
        registry[name] = link
    return registry


def _load_doc(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path} must hold a JSON object")
    return doc


def _system_from_doc(doc: dict) -> Union[LieSystem, PDELieSystem]:
    try:
        coords = tuple(str(v) for v in doc["vars"])
        basis_rows = doc["basis"]
        coeff_rows = doc["coeffs"]
        name = str(doc.get("name", ""))
        fields = tuple(
            VectorField(coords, [parse(str(c), coords) for c in row])
            for row in basis_rows)
        algebra = LieAlgebraBasis(fields)
        if "times" in doc:
            times = tuple(str(v) for v in doc["times"])
            flat = [str(e) for row in coeff_rows for e in row]
            registry = _opaque_registry(flat)
            coeffs = tuple(
                tuple(parse(str(e), times, registry=registry) for e in row)
                for row in coeff_rows)
            return PDELieSystem(algebra, coeffs=coeffs, times=times, name=name)
        time = str(doc.get("time", "t"))
        texts = [str(e) for e in coeff_rows] + [str(doc.get("gauge_b0", "0"))]
        registry = _opaque_registry(texts)
        coeffs = tuple(parse(t_, [time], registry=registry) for t_ in texts[:-1])
        gauge = parse(texts[-1], [time], registry=registry)
        return LieSystem(algebra, coeffs=coeffs, gauge=gauge, time=time,
                         name=name)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad system document: {exc}") from exc


def _resolve_system(cfg: RunConfig):
    """Returns (system, entry-or-None) from --catalog or --input."""
    if cfg.catalog is not None:
        entry = make(cfg.catalog, **dict(cfg.params))
        return entry.system, entry
    if cfg.input is None:
        raise UsageError("give --catalog NAME or --input FILE")
    return _system_from_doc(_load_doc(cfg.input)), None


def _candidate_from_doc(doc: dict, pde: bool):
    try:
        rows = [str(e) for e in doc["f"]]
        if pde:
            times = tuple(str(v) for v in doc.get("times", ("t1", "t2")))
            registry = _opaque_registry(rows)
            return PDESymmetryCandidate.closed(
                [parse(e, times, registry=registry) for e in rows], times)
        time = str(doc.get("time", "t"))
        registry = _opaque_registry(rows)
        return SymmetryCandidate.closed(
            [parse(e, [time], registry=registry) for e in rows], time=time)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad candidate document: {exc}") from exc


def _path_from_doc(doc: dict) -> TimePath:
    try:
        waypoints = [tuple(float(v) for v in w) for w in doc["waypoints"]]
        steps = int(doc.get("steps", 200))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad path document: {exc}") from exc
    return TimePath(tuple(waypoints), steps=steps)


# -- output artifacts ------------------------------------------------------------

def _fmt(value: float) -> str:
    return repr(float(value))


def _write_csv(path: str, colnames: Sequence[str],
               rows: Sequence[Sequence[float]]) -> None:
    lines = [CSV_HEADER, ",".join(colnames)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_gnuplot(path, len(colnames))


def _write_gnuplot(csv_path: str, ncols: int) -> None:
    gp = csv_path + ".gp"
    base = os.path.basename(csv_path)
    text = "\n".join([
        "# companion plot script; run: gnuplot -p " + os.path.basename(gp),
        'set datafile separator ","',
        "set key autotitle columnhead",
        f'plot for [i=2:{ncols - 1}] "{base}" using 1:i with lines',
    ]) + "\n"
    with open(gp, "w", encoding="utf-8") as fh:
        fh.write(text)


def _trajectory_rows(traj) -> List[List[float]]:
    return [[t] + [float(v) for v in state] + [float(e)]
            for t, state, e in zip(traj.ts, traj.states, traj.err_est)]


def _report_payload(rep) -> dict:
    out = {"max_abs": float(rep.max_abs), "exact": bool(rep.exact)}
    if getattr(rep, "npoints", 0):
        out["npoints"] = int(rep.npoints)
    return out


# -- subcommands -----------------------------------------------------------------

def _cmd_list(cfg: RunConfig, stdout) -> int:
    for n in names():
        entry = make(n)
        print(f"{n:16s} {entry.kind:4s} {entry.description}", file=stdout)
    return EXIT_OK


def _cmd_show(cfg: RunConfig, stdout) -> int:
    entry = make(cfg.name, **dict(cfg.params))
    sysobj = entry.system
    print(f"name: {entry.name}", file=stdout)
    print(f"kind: {entry.kind}", file=stdout)
    print(f"description: {entry.description}", file=stdout)
    print(f"state vars: {', '.join(sysobj.vars)}", file=stdout)
    if entry.kind == "pde":
        print(f"times: {', '.join(sysobj.times)}", file=stdout)
    else:
        print(f"time: {sysobj.time}", file=stdout)
    print("basis:", file=stdout)
    for i, f in enumerate(sysobj.algebra.fields, start=1):
        comps = ", ".join(str(c) for c in f.components)
        print(f"  X{i} = [{comps}]", file=stdout)
    if entry.kind == "pde":
        for a, row in enumerate(sysobj.coeffs, start=1):
            print(f"coeff row {a}: " + ", ".join(str(e) for e in row),
                  file=stdout)
    else:
        print("coeffs: " + ", ".join(str(e) for e in sysobj.coeffs),
              file=stdout)
        print(f"gauge b0: {sysobj.gauge}", file=stdout)
    print(f"tensor: {entry.expected!r}", file=stdout)
    if entry.families:
        print("families:", file=stdout)
        for fam in entry.families:
            note = f"  ({fam.note})" if fam.note else ""
            print(f"  {fam.name}{note}", file=stdout)
    if entry.excluded_note:
        print(f"excluded: {entry.excluded_note}", file=stdout)
    return EXIT_OK


def _cmd_check_algebra(cfg: RunConfig, stdout) -> int:
    sysobj, _ = _resolve_system(cfg)
    tensor, method = extract_structure_constants(sysobj.algebra.fields)
    jac = jacobi_residual(tensor)
    cdim = len(center(tensor))
    print(f"closed, r={tensor.r}, jacobi={jac}, center={cdim}", file=stdout)
    print(f"extraction: {method}", file=stdout)
    for a, b, g, v in tensor.to_triples():
        print(f"  c{a}{b}{g} = {v}", file=stdout)
    return EXIT_OK


def _cmd_symmetrize(cfg: RunConfig, stdout) -> int:
    sysobj, _ = _resolve_system(cfg)
    if isinstance(sysobj, PDELieSystem):
        raise UsageError("multi-time systems go through the pde subcommand")
    if cfg.b0 is not None:
        gauge = parse(cfg.b0, [sysobj.time],
                      registry=_opaque_registry([cfg.b0]))
        sysobj = dataclasses.replace(sysobj, gauge=gauge)
    built = build_symmetry_system(sysobj)
    f_init = cfg.f_init if cfg.f_init is not None else (0.0,) * (sysobj.r + 1)
    if len(f_init) != sysobj.r + 1:
        raise UsageError(
            f"f-init needs {sysobj.r + 1} values (f0 .. f{sysobj.r}), "
            f"got {len(f_init)}")
    traj = integrate(built.system, f_init, cfg.t_span, cfg.step)
    out = cfg.out or "symmetrize.csv"
    _write_csv(out, (sysobj.time,) + built.system.vars + ("err_est",),
               _trajectory_rows(traj))
    cand = candidate_from_trajectory(built, traj)
    rep = symmetry_residual(cand, sysobj, seed=cfg.seed)
    verdict = "PASS" if float(rep) <= cfg.tol else "FAIL"
    print(f"wrote {out} ({len(traj.ts)} rows)", file=stdout)
    print(f"symmetry residual max {float(rep):.6e} "
          f"(exact={rep.exact}, tol {cfg.tol:g}): {verdict}", file=stdout)
    return EXIT_OK if verdict == "PASS" else EXIT_CHECK


def _cmd_verify(cfg: RunConfig, stdout) -> int:
    sysobj, entry = _resolve_system(cfg)
    pde = isinstance(sysobj, PDELieSystem)
    if cfg.family is not None:
        if entry is None:
            raise UsageError("--family needs --catalog")
        match = [f for f in entry.families if f.name == cfg.family]
        if not match:
            known = ", ".join(f.name for f in entry.families) or "none"
            raise UsageError(f"no family {cfg.family!r}; known: {known}")
        cand = match[0].candidate
    elif cfg.candidate is not None:
        cand = _candidate_from_doc(_load_doc(cfg.candidate), pde)
    else:
        raise UsageError("give --family NAME or --candidate FILE")
    if pde:
        rep = pde_symmetry_residual(cand, sysobj, seed=cfg.seed)
    else:
        rep = symmetry_residual(cand, sysobj, seed=cfg.seed,
                                check_gauge=cfg.check_gauge)
    verdict = "PASS" if float(rep) <= cfg.tol else "FAIL"
    print(f"symmetry residual max {float(rep):.6e} "
          f"(exact={rep.exact}, tol {cfg.tol:g}): {verdict}", file=stdout)
    return EXIT_OK if verdict == "PASS" else EXIT_CHECK


def _cmd_integrate(cfg: RunConfig, stdout) -> int:
    sysobj, _ = _resolve_system(cfg)
    if isinstance(sysobj, PDELieSystem):
        raise UsageError("multi-time systems go through the pde subcommand")
    x0 = cfg.x0 if cfg.x0 is not None else (0.0,) * len(sysobj.vars)
    if len(x0) != len(sysobj.vars):
        raise UsageError(f"x0 needs {len(sysobj.vars)} values, got {len(x0)}")
    traj = integrate(sysobj, x0, cfg.t_span, cfg.step)
    out = cfg.out or "integrate.csv"
    _write_csv(out, (sysobj.time,) + sysobj.vars + ("err_est",),
               _trajectory_rows(traj))
    print(f"wrote {out} ({len(traj.ts)} rows)", file=stdout)
    return EXIT_OK


def _staircase(s: int, reverse: bool) -> TimePath:
    """Axis-by-axis corner path across the unit time box."""
    point = [0.0] * s
    waypoints = [tuple(point)]
    axes = range(s - 1, -1, -1) if reverse else range(s)
    for ax in axes:
        point[ax] = 1.0
        waypoints.append(tuple(point))
    return TimePath(tuple(waypoints), steps=200)


def _cmd_pde(cfg: RunConfig, stdout) -> int:
    sysobj, _ = _resolve_system(cfg)
    if not isinstance(sysobj, PDELieSystem) or sysobj.s < 2:
        raise UsageError("the pde subcommand needs a system with at least "
                         "two time directions; use symmetrize/integrate "
                         "for a single time")
    x0 = cfg.x0 if cfg.x0 is not None else (0.0,) * len(sysobj.vars)
    if len(x0) != len(sysobj.vars):
        raise UsageError(f"x0 needs {len(sysobj.vars)} values, got {len(x0)}")
    if cfg.path is not None:
        path_a = _path_from_doc(_load_doc(cfg.path))
        path_b = TimePath((path_a.waypoints[0], path_a.waypoints[-1]),
                          steps=path_a.steps)
    else:
        path_a = _staircase(sysobj.s, reverse=False)
        path_b = _staircase(sysobj.s, reverse=True)

    curv = curvature_residual(sysobj)
    traj_a = integrate_along_path(sysobj, x0, path_a)
    traj_b = integrate_along_path(sysobj, x0, path_b)
    end_a = [float(v) for v in traj_a.states[-1]]
    end_b = [float(v) for v in traj_b.states[-1]]
    gap = max(abs(p - q) for p, q in zip(end_a, end_b))

    integrable = True
    built_curv = None
    try:
        built = build_pde_symmetry_system(sysobj, tol=cfg.tol)
        built_curv = curvature_residual(built.system)
    except NotIntegrable:
        integrable = False

    out = cfg.out or "pde.csv"
    _write_csv(out, ("u",) + sysobj.vars + ("err_est",),
               _trajectory_rows(traj_a))
    code = EXIT_OK if integrable and gap <= cfg.agree_tol else EXIT_CHECK
    payload = {
        "curvature": _report_payload(curv),
        "endpoint_a": end_a,
        "endpoint_b": end_b,
        "endpoint_gap": gap,
        "agree_tol": cfg.agree_tol,
        "integrable": integrable,
        "built_curvature": (_report_payload(built_curv)
                            if built_curv is not None else None),
        "exit": code,
    }
    report = cfg.report or "pde_report.json"
    with open(report, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out} ({len(traj_a.ts)} rows) and {report}", file=stdout)
    print(f"curvature max {float(curv):.6e} (exact={curv.exact})",
          file=stdout)
    print(f"endpoint gap {gap:.6e} (tol {cfg.agree_tol:g}); "
          f"integrable={integrable}", file=stdout)
    return code


_COMMANDS = {
    "list": _cmd_list,
    "show": _cmd_show,
    "check-algebra": _cmd_check_algebra,
    "symmetrize": _cmd_symmetrize,
    "verify": _cmd_verify,
    "integrate": _cmd_integrate,
    "pde": _cmd_pde,
}


# -- argument parsing ------------------------------------------------------------

def _floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _span(text: str) -> Tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("t-span must look like A:B")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _kv(text: str) -> Tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError("parameters must look like key=value")
    key, value = text.split("=", 1)
    return key, value


def _build_parser() -> argparse.ArgumentParser:
    top = _ArgumentParser(
        prog="liesym",
        description="Construct, integrate and verify the symmetry systems "
                    "of Lie systems.")
    sub = top.add_subparsers(dest="subcommand", required=True)

    def add_source(p):
        p.add_argument("--catalog", help="built-in system name")
        p.add_argument("--input", help="system definition JSON file")
        p.add_argument("--param", action="append", type=_kv, default=[],
                       metavar="KEY=VALUE", help="catalog entry parameter")

    def add_run(p):
        p.add_argument("--t-span", type=_span, default=(0.0, 1.0),
                       metavar="A:B")
        p.add_argument("--step", type=float, default=1e-3)
        p.add_argument("--tol", type=float, default=1e-6,
                       help="residual tolerance (default 1e-6)")
        p.add_argument("--seed", type=int, default=None,
                       help="sampling seed; default env LIESYM_SEED or 0")
        p.add_argument("--out", help="CSV output path")

    sub.add_parser("list", help="enumerate built-in systems")

    p = sub.add_parser("show", help="print one entry in full")
    p.add_argument("name")
    p.add_argument("--param", action="append", type=_kv, default=[],
                   metavar="KEY=VALUE")

    p = sub.add_parser("check-algebra",
                       help="closure, tensor, Jacobi, center")
    add_source(p)

    p = sub.add_parser("symmetrize",
                       help="build and integrate the symmetry system")
    add_source(p)
    add_run(p)
    p.add_argument("--b0", help="gauge override, expression in t")
    p.add_argument("--f-init", type=_floats, metavar="F0,F1,...",
                   help="initial symmetry channels (default zeros)")

    p = sub.add_parser("verify", help="residual check of a candidate")
    add_source(p)
    p.add_argument("--candidate", help="candidate JSON file")
    p.add_argument("--family", help="bundled family name")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--no-gauge-check", action="store_true",
                   help="skip the f0' vs declared-gauge comparison")

    p = sub.add_parser("integrate", help="integrate the system itself")
    add_source(p)
    add_run(p)
    p.add_argument("--x0", type=_floats, metavar="X1,X2,...")

    p = sub.add_parser("pde", help="multi-time checks and path comparison")
    add_source(p)
    p.add_argument("--x0", type=_floats, metavar="X1,X2,...")
    p.add_argument("--path", help="path JSON file (compared to the chord)")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="curvature tolerance for the builder (default 1e-9)")
    p.add_argument("--agree-tol", type=float, default=1e-6,
                   help="endpoint agreement tolerance (default 1e-6)")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--seed", type=int, default=None)
    return top


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    seed = getattr(args, "seed", None)
    if seed is None:
        try:
            seed = int(os.environ.get("LIESYM_SEED", "0"))
        except ValueError:
            raise UsageError("LIESYM_SEED must be an integer")
    return RunConfig(
        subcommand=args.subcommand,
        catalog=getattr(args, "catalog", None),
        input=getattr(args, "input", None),
        params=tuple(getattr(args, "param", []) or []),
        t_span=getattr(args, "t_span", (0.0, 1.0)),
        step=getattr(args, "step", 1e-3),
        tol=getattr(args, "tol", 1e-6),
        agree_tol=getattr(args, "agree_tol", 1e-6),
        seed=seed,
        out=getattr(args, "out", None),
        report=getattr(args, "report", None),
        b0=getattr(args, "b0", None),
        f_init=getattr(args, "f_init", None),
        x0=getattr(args, "x0", None),
        candidate=getattr(args, "candidate", None),
        family=getattr(args, "family", None),
        path=getattr(args, "path", None),
        name=getattr(args, "name", None),
        check_gauge=not getattr(args, "no_gauge_check", False),
    )


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[cfg.subcommand](cfg, stdout)
    except UsageError as exc:
        print(f"liesym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnknownName, BadParams) as exc:
        print(f"liesym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"liesym: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PoleEncountered, DivisionByZero) as exc:
        print(f"liesym: pole: {exc}", file=sys.stderr)
        return EXIT_POLE
    except (NotClosed, DependentBasis, NotIntegrable) as exc:
        print(f"liesym: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
