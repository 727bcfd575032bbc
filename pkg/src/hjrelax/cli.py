"""Command line entry point.

Exit codes: 0 success, 1 invalid input, 2 failed identity, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from typing import Callable, Optional, Sequence

from .corpus import verify_corpus
from .errors import InternalMismatch, InvalidInputs, ValidationError
from .godunov import (
    Dirichlet,
    Dynamic,
    GodunovAction,
    Neumann,
    bln_check,
    dirichlet_relaxed,
    germ,
    godunov_flux,
    godunov_operator,
    neumann_relaxed,
)
from .guerand import characteristic_points, guerand_operator, limiter_points, lower_point, upper_point
from .pl import PLFunction, fmt
from .problem import ProblemSpec, load_spec
from .relaxation import relax
from .solver import GridConfig, refinement_study, solve, strong_boundary
from .svg import relaxation_figure

EXIT_OK, EXIT_VALIDATION, EXIT_IDENTITY, EXIT_IO = 0, 1, 2, 3

COMMANDS = (
    "relax",
    "guerand",
    "godunov-apply",
    "charpoints",
    "limiters",
    "germ",
    "neumann",
    "dirichlet",
    "bln",
    "solve",
    "refine",
    "verify-corpus",
    "plot",
)


class IdentityFailure(Exception):
    pass


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def function_csv(f: PLFunction) -> str:
    return csv_text(["x", "y", "slope_after"], [(str(x), str(y), str(f.slope_after(x))) for x, y in f.breakpoints])


def _dynamic_F0(spec: ProblemSpec) -> PLFunction:
    bc = spec.boundary
    if isinstance(bc, Dynamic):
        return bc.F0
    if isinstance(bc, Dirichlet):
        return PLFunction.constant(bc.A0)
    if isinstance(bc, Neumann):
        return neumann_relaxed(spec.hamiltonian, bc.h)
    raise ValidationError("this command needs a boundary block")


def _need(spec: ProblemSpec, kind: type, what: str):
    if not isinstance(spec.boundary, kind):
        raise ValidationError(f"this command needs a {what} boundary")
    return spec.boundary


def _need_solver(spec: ProblemSpec):
    if spec.solver is None:
        raise ValidationError("this command needs a solver block")
    return spec.solver


# -- commands: each returns {filename: text} -----------------------------------


def cmd_relax(spec, args):
    return {"function.csv": function_csv(relax(spec.hamiltonian, _dynamic_F0(spec)))}


def cmd_guerand(spec, args):
    H, F0 = spec.hamiltonian, _dynamic_F0(spec)
    J = guerand_operator(H, F0, envelope=not args.strict_semicoercive)
    if J != relax(H, F0):
        raise IdentityFailure("Guerand's operator differs from the relaxation")
    return {"function.csv": function_csv(J)}


def cmd_godunov_apply(spec, args):
    H, F0 = spec.hamiltonian, _dynamic_F0(spec)
    G = godunov_operator(H, F0, strict=args.strict_semicoercive)
    if G != relax(H, F0):
        raise IdentityFailure("the Godunov operator differs from the relaxation")
    files = {"function.csv": function_csv(G)}
    if spec.points:
        act = GodunovAction(H, F0, strict=args.strict_semicoercive)
        rows = []
        for p in spec.points:
            lam, q = act.root(p)
            rows.append((str(p), str(lam), str(q)))
        files["points.csv"] = csv_text(["p", "value", "witness"], rows)
    return files


def cmd_charpoints(spec, args):
    H = spec.hamiltonian
    R = relax(H, _dynamic_F0(spec))
    rows = [
        (str(c.location), c.sign, fmt(lower_point(H, c.location)), fmt(upper_point(H, c.location)))
        for c in characteristic_points(H, R)
    ]
    return {"charpoints.csv": csv_text(["p", "sign", "p_minus", "p_plus"], rows)}


def cmd_limiters(spec, args):
    H = spec.hamiltonian
    pts = limiter_points(H, _dynamic_F0(spec), envelope=not args.strict_semicoercive)
    rows = [(str(a.p), a.sign, fmt(a.p_minus), fmt(a.p_plus)) for a in pts]
    return {"limiters.csv": csv_text(["p", "sign", "p_minus", "p_plus"], rows)}


def cmd_germ(spec, args):
    g = germ(spec.hamiltonian, _dynamic_F0(spec))
    return {"germ.csv": csv_text(["lo", "hi"], [(fmt(c.lo), fmt(c.hi)) for c in g.components])}


def cmd_neumann(spec, args):
    H = spec.hamiltonian
    bc = _need(spec, Neumann, "neumann")
    N = neumann_relaxed(H, bc.h)
    if relax(H, N) != N:
        raise IdentityFailure("the relaxed Neumann condition is not self-relaxed")
    return {"function.csv": function_csv(N)}


def cmd_dirichlet(spec, args):
    H = spec.hamiltonian
    bc = _need(spec, Dirichlet, "dirichlet")
    D = dirichlet_relaxed(H, bc.A0)
    if relax(H, PLFunction.constant(bc.A0)) != D:
        raise IdentityFailure("the relaxed Dirichlet condition differs from the relaxation of its constant")
    return {"function.csv": function_csv(D)}


def cmd_bln(spec, args):
    H = spec.hamiltonian
    bc = _need(spec, Neumann, "neumann")
    g = germ(H, neumann_relaxed(H, bc.h))
    points = spec.points or tuple(sorted(set(H.xs) | {bc.h}))
    rows = []
    for p in points:
        ok = bln_check(H, bc.h, p)
        flux = godunov_flux(H, bc.h, p)
        if ok != (H(p) == flux) or ok != (p in g):
            raise IdentityFailure(f"BLN routes disagree at p={p}")
        rows.append((str(p), str(H(p)), str(flux), str(ok).lower()))
    return {"bln.csv": csv_text(["p", "H", "G", "bln"], rows)}


def _float(v: float) -> str:
    return repr(float(v))


def cmd_solve(spec, args):
    s = _need_solver(spec)
    if spec.boundary is None:
        raise ValidationError("this command needs a boundary block")
    sol = solve(
        spec.hamiltonian,
        spec.boundary,
        s.u0,
        s.config,
        neumann_mode=s.neumann_mode,
        dirichlet_mode=s.dirichlet_mode,
    )
    x = sol.x
    rows = ((_float(t), _float(x[j]), _float(u[j])) for t, u in zip(sol.times, sol.frames) for j in range(len(x)))
    return {"solution.csv": csv_text(["t", "x", "u"], rows)}


def cmd_refine(spec, args):
    s = _need_solver(spec)
    H = spec.hamiltonian
    bc = _need(spec, Dynamic, "dynamic")
    cfg = s.config
    ladder = [GridConfig(L=cfg.L, dx=dx, T=cfg.T, cfl=cfg.cfl) for dx in s.ladder]
    study = refinement_study(H, bc, strong_boundary(H, bc), s.u0, ladder)
    files = {"refine.csv": csv_text(["dx", "sup_diff"], [(_float(lv.dx), _float(lv.sup_diff)) for lv in study.levels])}
    if not study.non_increasing():
        write_outputs(args.out, files)
        raise IdentityFailure(f"differences grow under refinement: {study.diffs}")
    return files


def cmd_verify_corpus(spec, args):
    seed = args.seed if args.seed is not None else (spec.seed if spec and spec.seed is not None else 0)
    report = verify_corpus(args.cases, seed)
    files = {
        "report.json": json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
        "timing.txt": f"wall_time_seconds {report.wall_time:.3f}\n",
    }
    if report.failures:
        write_outputs(args.out, files)
        raise IdentityFailure(f"corpus case {report.failures[0]['index']} failed; replay bundle in report.json")
    return files


def cmd_plot(spec, args):
    H, F0 = spec.hamiltonian, _dynamic_F0(spec)
    return {"plot.svg": relaxation_figure(H, F0, relax(H, F0))}


HANDLERS: dict[str, Callable] = {
    "relax": cmd_relax,
    "guerand": cmd_guerand,
    "godunov-apply": cmd_godunov_apply,
    "charpoints": cmd_charpoints,
    "limiters": cmd_limiters,
    "germ": cmd_germ,
    "neumann": cmd_neumann,
    "dirichlet": cmd_dirichlet,
    "bln": cmd_bln,
    "solve": cmd_solve,
    "refine": cmd_refine,
    "verify-corpus": cmd_verify_corpus,
    "plot": cmd_plot,
}


def write_outputs(out: str, files: dict[str, str]) -> None:
    for name, text in sorted(files.items()):
        write_atomic(os.path.join(out, name), text)


def run_command(spec: Optional[ProblemSpec], command: str, args: argparse.Namespace) -> dict[str, str]:
    if spec is None and command != "verify-corpus":
        raise ValidationError(f"'{command}' needs --spec")
    return HANDLERS[command](spec, args)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hjrelax", description="Exact relaxation of boundary conditions for 1D HJ equations")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--spec", help="JSON problem file")
    ap.add_argument("--out", default=".", help="output directory (default: current directory)")
    ap.add_argument("--cases", type=int, default=200, help="verify-corpus: number of random cases")
    ap.add_argument("--seed", type=int, default=None, help="verify-corpus: seed (default: spec seed, else 0)")
    ap.add_argument(
        "--strict-semicoercive",
        action="store_true",
        help="reject non semi-coercive F0 instead of replacing it by max(F0, H_-)",
    )
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.spec) if args.spec else None
        files = run_command(spec, args.command, args)
        write_outputs(args.out, files)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidInputs as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (IdentityFailure, InternalMismatch) as exc:
        print(f"identity failure: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    for name in sorted(files):
        print(os.path.join(args.out, name))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
