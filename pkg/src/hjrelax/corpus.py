"""Seeded random (H, F0) pairs and the exact identity suite run over them."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .godunov import (
    GodunovAction,
    bln_check,
    germ,
    godunov_flux,
    godunov_operator,
    germ_certifier,
    lower_semiflux_operator,
    neumann_relaxed,
    upper_semiflux_operator,
)
from .guerand import characteristic_points, guerand_operator, limiter_points, lower_point, upper_point
from .pl import (
    PLFunction,
    contact_set,
    is_coercive,
    is_nonincreasing,
    is_semicoercive,
    le,
    pl_abs,
    pointwise_max,
    pointwise_min,
)
from .relaxation import lower_envelope, relax, sub_relax, super_relax


def _half(rng, lo: int, hi: int) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), 2)


def _random_hamiltonian(rng) -> PLFunction:
    while True:
        n = int(rng.integers(3, 10))
        xs = sorted(Fraction(int(v), 2) for v in rng.choice(np.arange(-12, 13), size=n, replace=False))
        ys = [_half(rng, -6, 6) for _ in xs]
        sl = -Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 3)))
        sr = Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 3)))
        H = PLFunction(zip(xs, ys), sl, sr)
        if len(H.xs) >= 3:
            return H


def _decreasing_from(rng, x0: Fraction, y0: Fraction, count: int, direction: int) -> list[tuple[Fraction, Fraction]]:
    """``count`` points marching away from ``(x0, y0)`` keeping monotonicity."""
    pts = []
    x, y = x0, y0
    for _ in range(count):
        x += direction * Fraction(int(rng.integers(1, 5)), 2)
        y -= direction * Fraction(int(rng.integers(0, 4)), 2)
        pts.append((x, y))
    return pts


def _tail_slopes(rng) -> tuple[Fraction, Fraction]:
    sl = -Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 3)))
    sr = -Fraction(int(rng.integers(0, 3)), 2)
    return sl, sr


def _extreme_points(H: PLFunction, kind: str) -> list[tuple[Fraction, Fraction]]:
    out = []
    for x, y in H.breakpoints:
        a, b = H.slope_before(x), H.slope_after(x)
        if kind == "max" and a > 0 >= b or kind == "min" and a < 0 <= b:
            out.append((x, y))
    return out


def random_boundary(rng, H: PLFunction) -> PLFunction:
    """A non-increasing semi-coercive ``F0`` with 0 to 6 breakpoints.

    Recipes: generic staircase; flat touch at a local max or min of ``H``
    (tangential contact from above or below); a shared decreasing piece of ``H``.
    """
    recipe = int(rng.integers(0, 4))
    sl, sr = _tail_slopes(rng)
    if recipe in (1, 2):
        ext = _extreme_points(H, "max" if recipe == 1 else "min")
        if ext:
            x, y = ext[int(rng.integers(0, len(ext)))]
            w1, w2 = Fraction(int(rng.integers(0, 3)), 2), Fraction(int(rng.integers(1, 3)), 2)
            core = [(x - w1, y)] if w1 else []
            core += [(x, y), (x + w2, y)]
            left = _decreasing_from(rng, core[0][0], core[0][1], int(rng.integers(0, 2)), -1)
            right = _decreasing_from(rng, core[-1][0], core[-1][1], int(rng.integers(0, 2)), 1)
            return PLFunction(list(reversed(left)) + core + right, sl, sr)
    if recipe == 3:
        segs = [(a, b) for a, b in zip(H.xs, H.xs[1:]) if H(b) < H(a)]
        if segs:
            a, b = segs[int(rng.integers(0, len(segs)))]
            core = [(a, H(a)), (b, H(b))]
            right = _decreasing_from(rng, b, H(b), int(rng.integers(0, 3)), 1)
            return PLFunction(core + right, min(sl, -1), sr)
    m = int(rng.integers(0, 7))
    if m == 0:
        return PLFunction.line(sl, _half(rng, -4, 8))
    x0, y0 = _half(rng, -10, 2), _half(rng, -2, 10)
    return PLFunction([(x0, y0)] + _decreasing_from(rng, x0, y0, m - 1, 1), sl, sr)


def random_pair(seed: int, index: int) -> tuple[PLFunction, PLFunction]:
    """Deterministic coercive ``H`` and semi-coercive ``F0`` for ``(seed, index)``."""
    rng = np.random.default_rng([seed, index])
    H = _random_hamiltonian(rng)
    return H, random_boundary(rng, H)


def second_boundary(seed: int, index: int, H: PLFunction) -> PLFunction:
    return random_boundary(np.random.default_rng([seed, index, 1]), H)


def random_neumann(seed: int, index: int) -> tuple[PLFunction, Fraction]:
    rng = np.random.default_rng([seed, index, 2])
    H = _random_hamiltonian(rng)
    return H, Fraction(int(rng.integers(-24, 25)), 4)


def random_probes(seed: int, index: int, count: int, lo=-8, hi=8) -> list[Fraction]:
    rng = np.random.default_rng([seed, index, 3])
    return [Fraction(int(rng.integers(lo * 12, hi * 12 + 1)), int(rng.integers(1, 13))) for _ in range(count)]


def has_tangential_contact(H: PLFunction, F0: PLFunction) -> bool:
    """Some contact of ``H`` and ``F0`` does not change the sign of ``H - F0``."""
    d = H - F0
    for comp in contact_set(H, F0):
        if not comp.is_point:
            return True
        e = comp.lo
        if (-d.slope_before(e) > 0) == (d.slope_after(e) > 0):
            return True
    return False


# -- identities -----------------------------------------------------------------

IDENTITIES = (
    "sandwich",
    "idempotence",
    "contraction",
    "commutation",
    "envelope",
    "minimality",
    "ordering",
    "local-constancy",
    "charpoint-plateau",
    "charpoint-values",
    "coincidence",
    "limiter-charpoints",
    "godunov-equivalence",
    "semiflux-identification",
    "semiflux-closure",
    "composition",
    "germ-agreement",
    "bln-equivalence",
    "godunov-monotonicity",
)


def _is_constant_on(f: PLFunction, a, b, level) -> bool:
    inner = [x for x in f.xs if a < x < b]
    ok = all(f(x) == level for x in inner)
    if a != -np.inf:
        ok &= f(a) == level
    else:
        ok &= f.slope_left == 0 and f(f.xs[0]) == level
    if b != np.inf:
        ok &= f(b) == level
    else:
        ok &= f.slope_right == 0 and f(f.xs[-1]) == level
    return ok


def _ordering(H, F0, R) -> bool:
    pts = sorted(set(H.xs) | set(F0.xs) | set(R.xs) | {e for c in contact_set(H, F0) for e in c.finite_ends()})
    probes = pts + [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [pts[0] - 1, pts[-1] + 1]
    for p in probes:
        f, h, r = F0(p), H(p), R(p)
        if f <= h and not f <= r <= h:
            return False
        if f >= h and not f >= r >= h:
            return False
    return True


def check_relaxation_identities(H: PLFunction, F0: PLFunction, Fb: PLFunction) -> dict[str, bool]:
    lo, hi, R = sub_relax(H, F0), super_relax(H, F0), relax(H, F0)
    Hm = lower_envelope(H)
    res = {}
    res["sandwich"] = (
        le(pointwise_min(F0, H), lo) and le(lo, F0) and le(F0, hi) and le(hi, pointwise_max(F0, H))
    )
    res["idempotence"] = sub_relax(H, lo) == lo and super_relax(H, hi) == hi and relax(H, R) == R
    res["contraction"] = le(pl_abs(R - H), pl_abs(F0 - H))
    Rb = relax(H, Fb)
    res["commutation"] = relax(H, pointwise_min(F0, Fb)) == pointwise_min(R, Rb) and relax(
        H, pointwise_max(F0, Fb)
    ) == pointwise_max(R, Rb)
    res["envelope"] = relax(H, pointwise_max(F0, Hm)) == R
    res["minimality"] = le(Hm, R)
    res["ordering"] = _ordering(H, F0, R)
    gaps_ok = True
    comps = contact_set(H, R)
    edges = [-np.inf] + [e for c in comps for e in (c.lo, c.hi)] + [np.inf]
    for a, b in zip(edges[::2], edges[1::2]):
        if a < b:
            m = R(a) if a != -np.inf else R(b) if b != np.inf else R(0)
            gaps_ok &= _is_constant_on(R, a, b, m)
    res["local-constancy"] = gaps_ok
    chars = characteristic_points(H, R)
    plateau_ok = values_ok = True
    for c in chars:
        level = H(c.location)
        if c.positive:
            plateau_ok &= _is_constant_on(R, c.location, upper_point(H, c.location), level)
            values_ok &= R(c.location) >= F0(c.location)
        else:
            plateau_ok &= _is_constant_on(R, lower_point(H, c.location), c.location, level)
            values_ok &= R(c.location) <= F0(c.location)
    res["charpoint-plateau"] = plateau_ok
    res["charpoint-values"] = values_ok
    return res


def check_operator_identities(H: PLFunction, F0: PLFunction, probes: list[Fraction]) -> dict[str, bool]:
    R = relax(H, F0)
    lo, hi = sub_relax(H, F0), super_relax(H, F0)
    res = {}
    res["coincidence"] = guerand_operator(H, F0) == R
    lim = [(a.p, a.sign) for a in limiter_points(H, F0, check=False)]
    res["limiter-charpoints"] = lim == [(c.location, c.sign) for c in characteristic_points(H, R)]
    G = godunov_operator(H, F0)
    act = GodunovAction(H, F0)
    res["godunov-equivalence"] = G == R and all(act.godunov(p) == R(p) for p in probes)
    Gl, Gu = lower_semiflux_operator(H, F0), upper_semiflux_operator(H, F0)
    res["semiflux-identification"] = Gl == lo and Gu == hi
    res["semiflux-closure"] = all(is_semicoercive(f) and is_nonincreasing(f) for f in (Gl, Gu))
    res["composition"] = lower_semiflux_operator(H, Gu) == G == upper_semiflux_operator(H, Gl)
    g, member = germ(H, F0), germ_certifier(H, F0)
    res["germ-agreement"] = all((p in g) == member(p) for p in probes + g.endpoints())
    res["godunov-monotonicity"] = all(
        godunov_flux(H, q, p) <= godunov_flux(H, q + 1, p) and godunov_flux(H, q, p) >= godunov_flux(H, q, p + 1)
        for q, p in zip(probes, reversed(probes))
    )
    return res


def check_bln_identities(H: PLFunction, h: Fraction, probes: list[Fraction]) -> dict[str, bool]:
    N = neumann_relaxed(H, h)
    g, member = germ(H, N), germ_certifier(H, N)
    ok = relax(H, N) == N
    for p in probes + g.endpoints() + [h]:
        a = bln_check(H, h, p)
        ok &= a == (H(p) == godunov_flux(H, h, p)) == (p in g) == member(p)
    return {"bln-equivalence": bool(ok)}


def run_case(seed: int, index: int) -> tuple[dict[str, bool], dict]:
    H, F0 = random_pair(seed, index)
    Fb = second_boundary(seed, index, H)
    probes = random_probes(seed, index, 25)
    Hn, h = random_neumann(seed, index)
    res = {}
    res.update(check_relaxation_identities(H, F0, Fb))
    res.update(check_operator_identities(H, F0, probes))
    res.update(check_bln_identities(Hn, h, probes))
    inputs = {
        "seed": seed,
        "index": index,
        "H": H.to_dict(),
        "F0": F0.to_dict(),
        "Fb": Fb.to_dict(),
        "neumann_H": Hn.to_dict(),
        "h": str(h),
    }
    return res, inputs


@dataclass
class CorpusReport:
    seed: int
    cases: int
    results: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.results if not all(r["identities"].values())]

    @property
    def passed(self) -> int:
        return self.cases - len(self.failures)

    def to_dict(self) -> dict:
        # wall time is left out so that reports are reproducible byte for byte
        return {
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.passed,
            "identities": list(IDENTITIES),
            "results": self.results,
        }


def verify_corpus(cases: int, seed: int, *, stop_on_failure: bool = True) -> CorpusReport:
    report = CorpusReport(seed=seed, cases=cases)
    t0 = time.perf_counter()
    for index in range(cases):
        try:
            res, inputs = run_case(seed, index)
            error = None
        except Exception as exc:  # any exception here is a failed identity
            res = {name: False for name in IDENTITIES}
            H, F0 = random_pair(seed, index)
            inputs = {"seed": seed, "index": index, "H": H.to_dict(), "F0": F0.to_dict()}
            error = f"{type(exc).__name__}: {exc}"
        entry = {"index": index, "identities": res}
        if not all(res.values()):
            entry["replay"] = inputs
            if error:
                entry["error"] = error
        report.results.append(entry)
        if stop_on_failure and not all(res.values()):
            report.cases = index + 1
            break
    report.wall_time = time.perf_counter() - t0
    return report


def generator_sanity(seed: int, count: int) -> dict:
    tangential = coercive = 0
    for i in range(count):
        H, F0 = random_pair(seed, i)
        coercive += is_coercive(H) and is_semicoercive(F0)
        tangential += has_tangential_contact(H, F0)
    return {"count": count, "valid": coercive, "tangential": tangential}
