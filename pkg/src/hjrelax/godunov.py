"""Godunov flux, its semi-fluxes and their action on boundary functions;
germs, the BLN condition, and the relaxed Neumann and Dirichlet conditions.

The action ``F0 G`` at ``p`` is the common value ``F0(q) = G(q, p)``. It is
found by walking the affine pieces of ``q -> F0(q) - G(q, p)`` away from
``q = p``; the walk to the left is the walk to the right for the reflected
pair ``x -> -H(-x)``, ``x -> -F0(-x)``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .errors import InternalMismatch, InvalidHamiltonian, NotSemiCoercive, RootNotFound
from .pl import (
    NEG_INF,
    POS_INF,
    ExtendedInterval,
    PLFunction,
    contact_points,
    freeze_left,
    freeze_right,
    interval_max,
    interval_min,
    is_coercive,
    is_semicoercive,
    level_points,
    pointwise_max,
    running_inf_left,
    running_sup_right,
    to_rational,
    zero_set,
)
from .relaxation import check_pair, envelope_upgrade, lower_envelope, relax, sub_relax, super_relax


def _require_coercive(H: PLFunction) -> None:
    if not is_coercive(H):
        raise InvalidHamiltonian("Hamiltonian must be coercive (slope_left < 0 < slope_right)")


def godunov_flux(H: PLFunction, q, p) -> Fraction:
    """``max H`` on ``[p, q]`` when ``p <= q``, ``min H`` on ``[q, p]`` otherwise."""
    _require_coercive(H)
    q, p = to_rational(q), to_rational(p)
    if p <= q:
        return interval_max(H, p, q)
    return interval_min(H, q, p)


def lower_semiflux(H: PLFunction, q, p) -> ExtendedInterval:
    _require_coercive(H)
    q, p = to_rational(q), to_rational(p)
    if q < p:
        return ExtendedInterval(NEG_INF, NEG_INF)
    if q == p:
        return ExtendedInterval(NEG_INF, H(p))
    v = interval_max(H, p, q)
    return ExtendedInterval(v, v)


def upper_semiflux(H: PLFunction, q, p) -> ExtendedInterval:
    _require_coercive(H)
    q, p = to_rational(q), to_rational(p)
    if q > p:
        return ExtendedInterval(POS_INF, POS_INF)
    if q == p:
        return ExtendedInterval(H(p), POS_INF)
    v = interval_min(H, q, p)
    return ExtendedInterval(v, v)


class _RightScan:
    """Smallest ``q >= p`` with ``F0(q) = max_{[p, q]} H``, given ``F0(p) >= H(p)``.

    ``H`` need not be coercive here: the reflected problem used for left walks
    is anti-coercive, and there the root exists only for semi-coercive ``F0``.
    """

    def __init__(self, H: PLFunction, F0: PLFunction):
        self.H, self.F0 = H, F0
        self.xs = sorted(set(H.xs) | set(F0.xs))
        self.hv = [H(x) for x in self.xs]
        self.fv = [F0(x) for x in self.xs]

    def __call__(self, p: Fraction) -> tuple[Fraction, Fraction]:
        H, F0 = self.H, self.F0
        m = H(p)
        a, ha, fa = p, m, F0(p)
        if fa == m:
            return fa, p
        for i in range(bisect_right(self.xs, p), len(self.xs)):
            b, hb, fb = self.xs[i], self.hv[i], self.fv[i]
            mb = max(m, hb)
            if fb <= mb:
                return self._root(a, ha, fa, (hb - ha) / (b - a), (fb - fa) / (b - a), m, b)
            a, ha, fa, m = b, hb, fb, mb
        return self._root(a, ha, fa, H.slope_right, F0.slope_right, m, POS_INF)

    @staticmethod
    def _root(a, ha, fa, sh, sf, m, b) -> tuple[Fraction, Fraction]:
        # on [a, b]: phi(q) = (fa + sf (q - a)) - max(m, ha + sh (q - a)), phi(a) > 0
        cands = []
        if sf != 0:
            cands.append(a + (m - fa) / sf)
        if sh != sf:
            cands.append(a + (fa - ha) / (sh - sf))
        for c in sorted(cands):
            if a <= c <= b:
                t = c - a
                f = fa + sf * t
                if f == max(m, ha + sh * t):
                    return f, c
        raise RootNotFound(f"no root of F0 - G(., p) on [{a}, {b}]")


class GodunovAction:
    """Pointwise action of the Godunov flux and semi-fluxes on a fixed ``F0``.

    Precomputes the merged breakpoint tables once so that many evaluation
    points are cheap.
    """

    def __init__(self, H: PLFunction, F0: PLFunction, *, strict: bool = False):
        check_pair(H, F0)
        if not is_semicoercive(F0):
            if strict:
                raise NotSemiCoercive("boundary function must be semi-coercive (slope_left < 0)")
            F0 = envelope_upgrade(H, F0)
        self.H, self.F0 = H, F0
        self._right = _RightScan(H, F0)
        self._left = _RightScan(-H.reflect(), -F0.reflect())

    def root(self, p) -> tuple[Fraction, Fraction]:
        """``(lambda, q)`` with ``lambda = F0(q) = G(q, p)``; ``q`` is the root
        closest to ``p``."""
        p = to_rational(p)
        if self.F0(p) >= self.H(p):
            return self._right(p)
        lam, q = self._left(-p)
        return -lam, -q

    def godunov(self, p) -> Fraction:
        return self.root(p)[0]

    def lower(self, p) -> Fraction:
        """The single value of ``F0`` on ``{q : F0(q) in lower_semiflux(q, p)}``."""
        p = to_rational(p)
        f = self.F0(p)
        if f <= self.H(p):
            return f
        return self._right(p)[0]

    def upper(self, p) -> Fraction:
        p = to_rational(p)
        f = self.F0(p)
        if f >= self.H(p):
            return f
        return -self._left(-p)[0]


def apply_godunov(H: PLFunction, F0: PLFunction, p, *, strict: bool = False) -> Fraction:
    return GodunovAction(H, F0, strict=strict).godunov(p)


def godunov_root(H: PLFunction, F0: PLFunction, p, *, strict: bool = False) -> tuple[Fraction, Fraction]:
    """Debug accessor: the value together with its witness ``q``."""
    return GodunovAction(H, F0, strict=strict).root(p)


def apply_lower_semiflux(H: PLFunction, F0: PLFunction, p, *, strict: bool = False) -> Fraction:
    return GodunovAction(H, F0, strict=strict).lower(p)


def apply_upper_semiflux(H: PLFunction, F0: PLFunction, p, *, strict: bool = False) -> Fraction:
    return GodunovAction(H, F0, strict=strict).upper(p)


# -- operators as PL functions -------------------------------------------------


def tabulation_grid(H: PLFunction, F0: PLFunction) -> list[Fraction]:
    """Points containing every breakpoint of the Godunov actions on ``F0``.

    These actions are assembled from pieces of ``H``, pieces of ``F0`` and
    plateaus whose level is a value of ``H`` or ``F0`` at a breakpoint or
    contact point; plateaus end where ``H`` or ``F0`` reach that level.
    """
    base = set(H.xs) | set(F0.xs) | set(contact_points(H, F0))
    levels = {H(x) for x in base} | {F0(x) for x in base}
    grid = set(base)
    for c in levels:
        grid.update(level_points(H, c))
        grid.update(level_points(F0, c))
    return sorted(grid)


def _tabulate_verified(fn: Callable[[Fraction], Fraction], grid: list[Fraction], what: str) -> PLFunction:
    out = PLFunction.tabulate(fn, grid)
    probes = [(a + b) / 2 for a, b in zip(grid, grid[1:])]
    probes += [grid[0] - 2, grid[-1] + 2]
    for x in probes:
        if fn(x) != out(x):
            raise InternalMismatch(f"{what} is not affine between grid points near {x}")
    return out


def godunov_operator(H: PLFunction, F0: PLFunction, *, strict: bool = False) -> PLFunction:
    """``p -> (F0 G)(p)`` as an exact PL function."""
    act = GodunovAction(H, F0, strict=strict)
    return _tabulate_verified(act.godunov, tabulation_grid(H, act.F0), "F0 G")


def lower_semiflux_operator(H: PLFunction, F0: PLFunction, *, strict: bool = False) -> PLFunction:
    act = GodunovAction(H, F0, strict=strict)
    return _tabulate_verified(act.lower, tabulation_grid(H, act.F0), "F0 lower-G")


def upper_semiflux_operator(H: PLFunction, F0: PLFunction, *, strict: bool = False) -> PLFunction:
    act = GodunovAction(H, F0, strict=strict)
    return _tabulate_verified(act.upper, tabulation_grid(H, act.F0), "F0 upper-G")


# -- germ and BLN --------------------------------------------------------------


@dataclass(frozen=True)
class Germ:
    """The set ``{H = relaxed F0}`` as sorted disjoint closed intervals."""

    components: tuple[ExtendedInterval, ...]

    def __contains__(self, p) -> bool:
        return any(p in c for c in self.components)

    def endpoints(self) -> list[Fraction]:
        return [e for c in self.components for e in c.finite_ends()]

    def __str__(self):
        return " U ".join(str(c) for c in self.components) or "{}"


def germ_certifier(H: PLFunction, F0: PLFunction) -> Callable[[Fraction], bool]:
    """Membership test through ``sub_relax(p) <= H(p) <= super_relax(p)``,
    with both semi-relaxations built once."""
    lo, hi = sub_relax(H, F0), super_relax(H, F0)

    def member(p) -> bool:
        p = to_rational(p)
        return lo(p) <= H(p) <= hi(p)

    return member


def in_germ_by_inequality(H: PLFunction, F0: PLFunction, p) -> bool:
    return germ_certifier(H, F0)(p)


def germ(H: PLFunction, F0: PLFunction, *, check: bool = __debug__) -> Germ:
    check_pair(H, F0)
    R = relax(H, F0, check=check)
    g = Germ(tuple(zero_set(H - R)))
    if check:
        lo, hi = sub_relax(H, F0), super_relax(H, F0)
        ends = sorted(set(g.endpoints()) | set(H.xs) | set(R.xs))
        probes = ends + [(a + b) / 2 for a, b in zip(ends, ends[1:])] + [ends[0] - 1, ends[-1] + 1]
        for p in probes:
            if (p in g) != (lo(p) <= H(p) <= hi(p)):
                raise InternalMismatch(f"germ routes disagree at p={p} for H={H!r}, F0={F0!r}")
    return g


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def bln_check(H: PLFunction, h, p) -> bool:
    """``(sign(p - k) - sign(h - k)) (H(p) - H(k)) <= 0`` for every real ``k``.

    For fixed signs the expression is affine in ``k`` between breakpoints of
    ``H``, so breakpoints, ``p``, ``h`` and the midpoints between them suffice.
    """
    _require_coercive(H)
    h, p = to_rational(h), to_rational(p)
    ks = sorted(set(H.xs) | {p, h})
    ks += [(a + b) / 2 for a, b in zip(ks, ks[1:])] + [ks[0] - 1, ks[-1] + 1]
    hp = H(p)
    return all((_sign(p - k) - _sign(h - k)) * (hp - H(k)) <= 0 for k in ks)


# -- relaxed Neumann and Dirichlet conditions ---------------------------------


def neumann_relaxed(H: PLFunction, h) -> PLFunction:
    """``p -> G(h, p)``.

    With the domain ``(0, +inf)`` and outward normal ``-1`` the Neumann data
    enters as ``p . n + h = h - p``, so the max branch is ``p <= h`` over
    ``[p, h]`` and the min branch is ``p >= h`` over ``[h, p]``.
    """
    _require_coercive(H)
    h = to_rational(h)
    upper = running_sup_right(freeze_right(H, h))  # max over [p, h] for p <= h
    lower = running_inf_left(freeze_left(H, h))  # min over [h, p] for p >= h
    return upper + lower - H(h)


def dirichlet_relaxed(H: PLFunction, A0) -> PLFunction:
    """Obstacle condition ``max(A0, H_-)``."""
    return pointwise_max(PLFunction.constant(to_rational(A0)), lower_envelope(H))


# -- boundary specifications ----------------------------------------------------


@dataclass(frozen=True)
class Dynamic:
    F0: PLFunction
    kind = "dynamic"


@dataclass(frozen=True)
class Neumann:
    h: Fraction
    kind = "neumann"


@dataclass(frozen=True)
class Dirichlet:
    g: Fraction
    A0: Fraction = Fraction(0)
    kind = "dirichlet"


BoundarySpec = Union[Dynamic, Neumann, Dirichlet]
