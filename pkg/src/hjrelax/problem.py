"""JSON problem files.

Schema::

    {
      "hamiltonian": {"breakpoints": [[x, y], ...], "slope_left": r, "slope_right": r},
      "boundary": {"type": "dynamic", "F0": <PL>}
                | {"type": "neumann", "h": r}
                | {"type": "dirichlet", "g": r, "A0": r},
      "solver": {"L": r, "dx": r, "T": r, "cfl": r,
                 "u0": {"type": "linear", "slope": r, "offset": r} | {"type": "pl", <PL>},
                 "ladder": [dx, ...], "neumann_mode": ..., "dirichlet_mode": ...},
      "points": [r, ...],
      "seed": n
    }

Every rational ``r`` may be a JSON integer, a decimal literal (converted
exactly) or an ``"n/d"`` string.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from .errors import InvalidInputs, ParseError, ValidationError
from .godunov import Dirichlet, Dynamic, Neumann
from .pl import PLFunction, is_coercive, is_nonincreasing, to_rational
from .solver import DIRICHLET_MODES, NEUMANN_MODES, BoundarySpec, FloatPL, GridConfig


@dataclass(frozen=True)
class InitialData:
    kind: str
    slope: Fraction = Fraction(0)
    offset: Fraction = Fraction(0)
    profile: Optional[PLFunction] = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "linear":
            return float(self.slope) * x + float(self.offset)
        return FloatPL(self.profile)(x)


@dataclass(frozen=True)
class SolverSpec:
    config: GridConfig
    u0: InitialData
    ladder: tuple[float, ...] = (1 / 50, 1 / 100, 1 / 200)
    neumann_mode: str = "godunov"
    dirichlet_mode: str = "obstacle"


@dataclass(frozen=True)
class ProblemSpec:
    hamiltonian: PLFunction
    boundary: Optional[BoundarySpec] = None
    solver: Optional[SolverSpec] = None
    points: tuple[Fraction, ...] = field(default_factory=tuple)
    seed: Optional[int] = None


def _rational(value: Any, where: str) -> Fraction:
    try:
        return to_rational(value)
    except InvalidInputs as exc:
        raise ParseError(f"{where}: {exc}") from None


def _require(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in obj:
        raise ParseError(f"{where}: missing field '{key}'")
    return obj[key]


def _pl(obj: Any, where: str) -> PLFunction:
    bps = _require(obj, "breakpoints", where)
    if not isinstance(bps, list) or not bps:
        raise ParseError(f"{where}.breakpoints: expected a nonempty list of [x, y] pairs")
    pts = []
    for i, bp in enumerate(bps):
        if not isinstance(bp, list) or len(bp) != 2:
            raise ParseError(f"{where}.breakpoints[{i}]: expected [x, y]")
        pts.append((_rational(bp[0], f"{where}.breakpoints[{i}][0]"), _rational(bp[1], f"{where}.breakpoints[{i}][1]")))
    xs = [x for x, _ in pts]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ParseError(f"{where}.breakpoints: abscissas must be strictly increasing")
    sl = _rational(_require(obj, "slope_left", where), f"{where}.slope_left")
    sr = _rational(_require(obj, "slope_right", where), f"{where}.slope_right")
    return PLFunction(pts, sl, sr)


def _boundary(obj: Any) -> BoundarySpec:
    kind = _require(obj, "type", "boundary")
    if kind == "dynamic":
        F0 = _pl(_require(obj, "F0", "boundary"), "boundary.F0")
        if not is_nonincreasing(F0):
            raise ValidationError("boundary.F0: boundary function must be non-increasing")
        return Dynamic(F0)
    if kind == "neumann":
        return Neumann(_rational(_require(obj, "h", "boundary"), "boundary.h"))
    if kind == "dirichlet":
        g = _rational(_require(obj, "g", "boundary"), "boundary.g")
        return Dirichlet(g, _rational(obj.get("A0", 0), "boundary.A0"))
    raise ParseError(f"boundary.type: expected 'dynamic', 'neumann' or 'dirichlet', got {kind!r}")


def _initial(obj: Any) -> InitialData:
    kind = _require(obj, "type", "solver.u0")
    if kind == "linear":
        return InitialData(
            "linear",
            slope=_rational(_require(obj, "slope", "solver.u0"), "solver.u0.slope"),
            offset=_rational(obj.get("offset", 0), "solver.u0.offset"),
        )
    if kind == "pl":
        return InitialData("pl", profile=_pl(obj, "solver.u0"))
    raise ParseError(f"solver.u0.type: expected 'linear' or 'pl', got {kind!r}")


def _solver(obj: Any) -> SolverSpec:
    def num(key: str, default=None) -> float:
        if key not in obj:
            if default is None:
                raise ParseError(f"solver: missing field '{key}'")
            return default
        return float(_rational(obj[key], f"solver.{key}"))

    if not isinstance(obj, dict):
        raise ParseError("solver: expected an object")
    try:
        cfg = GridConfig(L=num("L"), dx=num("dx"), T=num("T"), cfl=num("cfl", 0.9))
    except ParseError:
        raise
    except InvalidInputs as exc:
        raise ValidationError(f"solver: {exc}") from None
    u0 = _initial(obj.get("u0", {"type": "linear", "slope": 0}))
    ladder = tuple(float(_rational(v, f"solver.ladder[{i}]")) for i, v in enumerate(obj.get("ladder", [])))
    nm = obj.get("neumann_mode", "godunov")
    dm = obj.get("dirichlet_mode", "obstacle")
    if nm not in NEUMANN_MODES:
        raise ParseError(f"solver.neumann_mode: expected one of {NEUMANN_MODES}")
    if dm not in DIRICHLET_MODES:
        raise ParseError(f"solver.dirichlet_mode: expected one of {DIRICHLET_MODES}")
    return SolverSpec(cfg, u0, ladder or SolverSpec.ladder, nm, dm)


def parse_spec(text: str) -> ProblemSpec:
    """Parse and validate a JSON problem description."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    H = _pl(_require(doc, "hamiltonian", "top level"), "hamiltonian")
    if not is_coercive(H):
        raise ValidationError("hamiltonian: Hamiltonian must be coercive (slope_left < 0 < slope_right)")
    boundary = _boundary(doc["boundary"]) if "boundary" in doc else None
    solver = _solver(doc["solver"]) if "solver" in doc else None
    points = tuple(_rational(v, f"points[{i}]") for i, v in enumerate(doc.get("points", [])))
    seed = doc.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
        raise ParseError("seed: expected an unsigned integer")
    return ProblemSpec(H, boundary, solver, points, seed)


def load_spec(path: str) -> ProblemSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def spec_to_dict(spec: ProblemSpec) -> dict:
    out: dict[str, Any] = {"hamiltonian": spec.hamiltonian.to_dict()}
    bc = spec.boundary
    if isinstance(bc, Dynamic):
        out["boundary"] = {"type": "dynamic", "F0": bc.F0.to_dict()}
    elif isinstance(bc, Neumann):
        out["boundary"] = {"type": "neumann", "h": str(bc.h)}
    elif isinstance(bc, Dirichlet):
        out["boundary"] = {"type": "dirichlet", "g": str(bc.g), "A0": str(bc.A0)}
    if spec.points:
        out["points"] = [str(p) for p in spec.points]
    if spec.seed is not None:
        out["seed"] = spec.seed
    return out

