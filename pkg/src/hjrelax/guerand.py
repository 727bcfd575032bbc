"""Characteristic points, upper/lower points, limiter points and Guerand's
relaxation operator.

Limiter points are found from their definition alone. The universal
quantifier over ``q`` is evaluated on a finite witness set (breakpoints of
``H`` and ``F0`` and the ends of their contact components); a violating ``q``,
when one exists, can always be moved to a strict running-maximum record of
``H`` that is either a local maximum of ``H`` or a contact point, so nothing is
lost. The result is then cross-checked against the characteristic points of
the relaxed function, which must coincide.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalMismatch, InvalidHamiltonian, NotSemiCoercive
from .pl import (
    NEG_INF,
    POS_INF,
    ExtendedInterval,
    ExtendedRational,
    PLFunction,
    contact_points,
    contact_set,
    is_coercive,
    is_semicoercive,
)
from .relaxation import check_pair, envelope_upgrade, relax


class Sign(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


@dataclass(frozen=True, order=True)
class CharPoint:
    location: Fraction
    sign: str  # Sign value, kept as str so instances sort

    @property
    def positive(self) -> bool:
        return self.sign == Sign.POSITIVE.value


@dataclass(frozen=True)
class UpperLowerPair:
    p: Fraction
    p_minus: Fraction
    p_plus: ExtendedRational


@dataclass(frozen=True)
class LimiterPoint:
    p: Fraction
    sign: str
    interval: ExtendedInterval

    @property
    def p_minus(self) -> Fraction:
        return self.interval.lo

    @property
    def p_plus(self) -> ExtendedRational:
        return self.interval.hi

    def key(self) -> tuple:
        return (self.p, self.sign)


def _require_coercive(H: PLFunction) -> None:
    if not is_coercive(H):
        raise InvalidHamiltonian("Hamiltonian must be coercive (slope_left < 0 < slope_right)")


def _first_return_right(f: PLFunction, p: Fraction) -> ExtendedRational:
    """First ``x > p`` with ``f(x) = f(p)``, given ``f > f(p)`` just right of ``p``."""
    c = f(p)
    a, ya = p, c
    for b, yb in zip(f.xs, f.ys):
        if b <= p:
            continue
        if yb <= c:
            # ya > c here: the first piece leaves p strictly upwards
            return a + (c - ya) * (b - a) / (yb - ya)
        a, ya = b, yb
    s = f.slope_right
    if s < 0:
        return a + (c - ya) / s
    return POS_INF


def upper_point(H: PLFunction, p) -> ExtendedRational:
    """``p+``: ``p`` itself if ``H`` does not rise strictly to the right,
    otherwise the end of the strict excursion above ``H(p)``."""
    _require_coercive(H)
    p = Fraction(p)
    if H.slope_after(p) <= 0:
        return p
    return _first_return_right(H, p)


def lower_point(H: PLFunction, p) -> Fraction:
    """``p-``: ``p`` itself unless ``H`` is strictly below ``H(p)`` just to the
    left, otherwise the start of that strict excursion."""
    _require_coercive(H)
    p = Fraction(p)
    if H.slope_before(p) <= 0:
        return p
    # H < H(p) left of p  <=>  -H(-x) > -H(p) right of -p
    return -_first_return_right(-H.reflect(), -p)


def upper_lower(H: PLFunction, p) -> UpperLowerPair:
    p = Fraction(p)
    return UpperLowerPair(p, lower_point(H, p), upper_point(H, p))


def characteristic_points(H: PLFunction, F: PLFunction) -> list[CharPoint]:
    """All positive and negative characteristic points of ``F`` along ``H``.

    Only finite ends of the components of ``{H = F}`` can qualify: inside a
    non-degenerate component ``H`` coincides with the non-increasing ``F``.
    """
    check_pair(H, F)
    out = []
    for comp in contact_set(H, F):
        for e in comp.finite_ends():
            if H.slope_after(e) > 0:
                out.append(CharPoint(e, Sign.POSITIVE.value))
            if H.slope_before(e) > 0:
                out.append(CharPoint(e, Sign.NEGATIVE.value))
    return sorted(out)


def _open_overlap(a_lo, a_hi, b_lo, b_hi) -> bool:
    return max(a_lo, b_lo) < min(a_hi, b_hi)


def _prepare(H: PLFunction, F0: PLFunction, envelope: bool) -> PLFunction:
    check_pair(H, F0)
    if not is_semicoercive(F0):
        if not envelope:
            raise NotSemiCoercive("boundary function must be semi-coercive (slope_left < 0)")
        F0 = envelope_upgrade(H, F0)
    return F0


def limiter_points(
    H: PLFunction, F0: PLFunction, *, envelope: bool = False, check: bool = __debug__
) -> list[LimiterPoint]:
    """Positive and negative limiter points of ``F0``, each with ``[p-, p+]``.

    With ``envelope`` set, a non semi-coercive ``F0`` is first replaced by
    ``max(F0, H_-)``, which has the same relaxation.
    """
    F0 = _prepare(H, F0, envelope)
    contacts = contact_points(H, F0)
    candidates = sorted(set(H.xs) | set(contacts))
    witnesses = sorted(set(H.xs) | set(F0.xs) | set(contacts))
    pm = {q: lower_point(H, q) for q in set(candidates) | set(witnesses)}
    pp = {q: upper_point(H, q) for q in pm}
    hv = {q: H(q) for q in pm}
    fv = {q: F0(q) for q in pm}

    out = []
    for p in candidates:
        lo, hi, hp = pm[p], pp[p], hv[p]
        if lo < p and hp <= fv[p]:
            if not any(
                fv[q] >= hv[q] > hp and _open_overlap(pm[q], pp[q], lo, p) for q in witnesses
            ):
                out.append(LimiterPoint(p, Sign.NEGATIVE.value, ExtendedInterval(lo, hi)))
        if hi > p and hp >= fv[p]:
            if not any(
                hp > hv[q] >= fv[q] and _open_overlap(pm[q], pp[q], p, hi) for q in witnesses
            ):
                out.append(LimiterPoint(p, Sign.POSITIVE.value, ExtendedInterval(lo, hi)))
    out.sort(key=LimiterPoint.key)

    if check:
        expected = characteristic_points(H, relax(H, F0, check=False))
        got = [CharPoint(a.p, a.sign) for a in out]
        if got != expected:
            raise InternalMismatch(
                f"limiter points {got} differ from characteristic points of the relaxation {expected} "
                f"for H={H!r}, F0={F0!r}"
            )
        for i, a in enumerate(out):
            for b in out[i + 1 :]:
                if a.p != b.p and _open_overlap(a.p_minus, a.p_plus, b.p_minus, b.p_plus):
                    raise InternalMismatch(f"limiter intervals overlap: {a} and {b}")
    return out


def guerand_operator(
    H: PLFunction, F0: PLFunction, *, envelope: bool = False, check: bool = __debug__
) -> PLFunction:
    """``H(p_a)`` on every ``[p_a-, p_a+]`` of a limiter point, ``H`` elsewhere."""
    points = limiter_points(H, F0, envelope=envelope, check=check)
    plateaus = [(a.p_minus, a.p_plus, H(a.p)) for a in points]
    xs = set(H.xs)
    for lo, hi, _ in plateaus:
        xs.update(e for e in (lo, hi) if e not in (NEG_INF, POS_INF))

    def value(p: Fraction) -> Fraction:
        for lo, hi, level in plateaus:
            if lo <= p <= hi:
                return level
        return H(p)

    return PLFunction.tabulate(value, xs)
