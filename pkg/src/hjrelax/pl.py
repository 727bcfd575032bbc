"""Exact continuous piecewise-linear functions of one real variable.

Every function is stored as a finite list of rational breakpoints plus the
slopes of the two unbounded rays. Values never get sampled on the tails; the
tail slopes carry all the information about behaviour at infinity.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Union

from .errors import InvalidInputs, UnboundedAbove, UnboundedBelow

NEG_INF = -math.inf
POS_INF = math.inf

# ExtendedRational: a Fraction, or one of the two float infinities above.
ExtendedRational = Union[Fraction, float]
RationalLike = Union[int, Fraction, str, Decimal, float]


def to_rational(value: RationalLike) -> Fraction:
    """Convert ``value`` to a Fraction without binary rounding.

    Strings may be ``"n/d"`` or decimal literals; floats go through their
    shortest repr so that ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise InvalidInputs(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidInputs(f"not a finite rational: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputs(f"not a rational: {value!r}") from exc
    raise InvalidInputs(f"not a rational: {value!r}")


def fmt(value: ExtendedRational) -> str:
    if value == POS_INF:
        return "inf"
    if value == NEG_INF:
        return "-inf"
    return str(value)


@dataclass(frozen=True)
class ExtendedInterval:
    """Closed interval ``[lo, hi]`` whose ends may be infinite."""

    lo: ExtendedRational
    hi: ExtendedRational

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInputs(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, p) -> bool:
        return self.lo <= p <= self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def finite_ends(self) -> list[Fraction]:
        ends = [e for e in (self.lo, self.hi) if e not in (NEG_INF, POS_INF)]
        return ends[:1] if self.is_point else ends

    def __str__(self):
        return f"[{fmt(self.lo)}, {fmt(self.hi)}]"


class PLFunction:
    """Continuous piecewise-linear function stored in canonical form.

    Canonical form drops every breakpoint at which the incoming and outgoing
    slopes agree. A straight line keeps a single breakpoint at ``x = 0``. Two
    functions are equal exactly when their canonical data coincide.
    """

    __slots__ = ("xs", "ys", "slope_left", "slope_right", "_slopes", "_hash")

    def __init__(self, points: Iterable, slope_left: RationalLike, slope_right: RationalLike):
        pts = [(to_rational(x), to_rational(y)) for x, y in points]
        if not pts:
            raise InvalidInputs("a PL function needs at least one breakpoint")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x0 < x1:
                raise InvalidInputs("breakpoint abscissas must be strictly increasing")
        sl, sr = to_rational(slope_left), to_rational(slope_right)
        slopes = [sl]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            slopes.append((y1 - y0) / (x1 - x0))
        slopes.append(sr)
        keep = [i for i in range(len(pts)) if slopes[i] != slopes[i + 1]]
        if not keep:
            x0, y0 = pts[0]
            pts = [(Fraction(0), y0 - sl * x0)]
        else:
            pts = [pts[i] for i in keep]
        self.xs = tuple(x for x, _ in pts)
        self.ys = tuple(y for _, y in pts)
        self.slope_left = sl
        self.slope_right = sr
        inner = [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])]
        self._slopes = (sl, *inner, sr)
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, c: RationalLike) -> PLFunction:
        return cls([(0, c)], 0, 0)

    @classmethod
    def line(cls, slope: RationalLike, intercept: RationalLike) -> PLFunction:
        return cls([(0, intercept)], slope, slope)

    @classmethod
    def abs(cls) -> PLFunction:
        return cls([(0, 0)], -1, 1)

    @classmethod
    def tabulate(cls, fn: Callable[[Fraction], Fraction], xs: Iterable[Fraction]) -> PLFunction:
        """Interpolate ``fn`` through the sorted set ``xs``.

        ``fn`` must be affine between consecutive points of ``xs`` and on both
        rays beyond them; the tail slopes are read off one unit outside.
        """
        pts = sorted(set(xs))
        if not pts:
            pts = [Fraction(0)]
        ys = [fn(x) for x in pts]
        sl = ys[0] - fn(pts[0] - 1)
        sr = fn(pts[-1] + 1) - ys[-1]
        return cls(zip(pts, ys), sl, sr)

    # -- evaluation -----------------------------------------------------------

    def __call__(self, p: RationalLike) -> Fraction:
        p = p if isinstance(p, Fraction) else to_rational(p)
        xs, ys = self.xs, self.ys
        i = bisect_right(xs, p)
        if i == 0:
            return ys[0] + self.slope_left * (p - xs[0])
        if i == len(xs):
            return ys[-1] + self.slope_right * (p - xs[-1])
        return ys[i - 1] + self._slopes[i] * (p - xs[i - 1])

    def slope_after(self, p: Fraction) -> Fraction:
        """Slope on ``(p, p + eps)``."""
        return self._slopes[bisect_right(self.xs, p)]

    def slope_before(self, p: Fraction) -> Fraction:
        """Slope on ``(p - eps, p)``."""
        return self._slopes[bisect_left(self.xs, p)]

    @property
    def breakpoints(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple(zip(self.xs, self.ys))

    @property
    def segment_slopes(self) -> tuple[Fraction, ...]:
        """Slopes of all pieces, left ray first and right ray last."""
        return self._slopes

    def pieces(self) -> Iterator[tuple[ExtendedRational, ExtendedRational, Fraction, Fraction, Fraction]]:
        """Yield ``(lo, hi, slope, x_anchor, y_anchor)`` for every affine piece."""
        xs, ys, s = self.xs, self.ys, self._slopes
        yield NEG_INF, xs[0], s[0], xs[0], ys[0]
        for i in range(len(xs) - 1):
            yield xs[i], xs[i + 1], s[i + 1], xs[i], ys[i]
        yield xs[-1], POS_INF, s[-1], xs[-1], ys[-1]

    # -- algebra --------------------------------------------------------------

    def __neg__(self) -> PLFunction:
        return PLFunction(zip(self.xs, (-y for y in self.ys)), -self.slope_left, -self.slope_right)

    def __add__(self, other) -> PLFunction:
        if not isinstance(other, PLFunction):
            c = to_rational(other)
            return PLFunction(zip(self.xs, (y + c for y in self.ys)), self.slope_left, self.slope_right)
        xs = sorted(set(self.xs) | set(other.xs))
        return PLFunction(
            ((x, self(x) + other(x)) for x in xs),
            self.slope_left + other.slope_left,
            self.slope_right + other.slope_right,
        )

    __radd__ = __add__

    def __sub__(self, other) -> PLFunction:
        return self + (-other if isinstance(other, PLFunction) else -to_rational(other))

    def __rsub__(self, other) -> PLFunction:
        return (-self) + other

    def reflect(self) -> PLFunction:
        """The function ``x -> f(-x)``."""
        return PLFunction(zip(reversed([-x for x in self.xs]), reversed(self.ys)), -self.slope_right, -self.slope_left)

    def __eq__(self, other):
        if not isinstance(other, PLFunction):
            return NotImplemented
        return (
            self.xs == other.xs
            and self.ys == other.ys
            and self.slope_left == other.slope_left
            and self.slope_right == other.slope_right
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.xs, self.ys, self.slope_left, self.slope_right))
        return self._hash

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in zip(self.xs, self.ys))
        return f"PLFunction([{pts}], slope_left={self.slope_left}, slope_right={self.slope_right})"

    def to_dict(self) -> dict:
        return {
            "breakpoints": [[str(x), str(y)] for x, y in zip(self.xs, self.ys)],
            "slope_left": str(self.slope_left),
            "slope_right": str(self.slope_right),
        }

    @classmethod
    def from_dict(cls, data: dict) -> PLFunction:
        return cls([tuple(bp) for bp in data["breakpoints"]], data["slope_left"], data["slope_right"])


def evaluate(f: PLFunction, p: RationalLike) -> Fraction:
    return f(p)


# -- level sets ----------------------------------------------------------------


def zero_set(f: PLFunction) -> list[ExtendedInterval]:
    """The exact set ``{f = 0}`` as sorted, disjoint closed intervals."""
    comps: list[list] = []
    for lo, hi, s, xa, ya in f.pieces():
        if s == 0:
            if ya != 0:
                continue
            a, b = lo, hi
        else:
            r = xa - ya / s
            if not lo <= r <= hi:
                continue
            a = b = r
        if comps and comps[-1][1] >= a:
            comps[-1][1] = max(comps[-1][1], b)
        else:
            comps.append([a, b])
    return [ExtendedInterval(a, b) for a, b in comps]


def level_points(f: PLFunction, c: Fraction) -> list[Fraction]:
    """Finite endpoints of the components of ``{f = c}``."""
    out: list[Fraction] = []
    for comp in zero_set(f - c):
        out.extend(comp.finite_ends())
    return out


def contact_set(f: PLFunction, g: PLFunction) -> list[ExtendedInterval]:
    return zero_set(f - g)


def contact_points(f: PLFunction, g: PLFunction) -> list[Fraction]:
    """Finite endpoints of the components of ``{f = g}``."""
    out: list[Fraction] = []
    for comp in contact_set(f, g):
        out.extend(comp.finite_ends())
    return out


def is_nonnegative(f: PLFunction) -> bool:
    return f.slope_left <= 0 and f.slope_right >= 0 and all(y >= 0 for y in f.ys)


def le(f: PLFunction, g: PLFunction) -> bool:
    """``f <= g`` everywhere on the real line."""
    return is_nonnegative(g - f)


def interval_max(f: PLFunction, a: Fraction, b: Fraction) -> Fraction:
    """``max f`` over ``[a, b]``."""
    i, j = bisect_right(f.xs, a), bisect_left(f.xs, b)
    return max(f(a), f(b), *f.ys[i:j])


def interval_min(f: PLFunction, a: Fraction, b: Fraction) -> Fraction:
    """``min f`` over ``[a, b]``."""
    i, j = bisect_right(f.xs, a), bisect_left(f.xs, b)
    return min(f(a), f(b), *f.ys[i:j])


# -- lattice operations --------------------------------------------------------


def pointwise_min(f: PLFunction, g: PLFunction) -> PLFunction:
    if f == g:
        return f
    xs = set(f.xs) | set(g.xs)
    xs.update(contact_points(f, g))
    return PLFunction.tabulate(lambda x: min(f(x), g(x)), xs)


def pointwise_max(f: PLFunction, g: PLFunction) -> PLFunction:
    return -pointwise_min(-f, -g)


def pl_abs(f: PLFunction) -> PLFunction:
    return pointwise_max(f, -f)


def running_sup_right(f: PLFunction) -> PLFunction:
    """``p -> sup_{q >= p} f(q)``."""
    if f.slope_right > 0:
        raise UnboundedAbove("running supremum to the right needs slope_right <= 0")
    xs, ys = f.xs, f.ys
    out = [(xs[-1], ys[-1])]
    m = ys[-1]
    for k in range(len(xs) - 2, -1, -1):
        a, b, ya, yb = xs[k], xs[k + 1], ys[k], ys[k + 1]
        if ya > m:
            if yb < m:
                out.append((a + (m - ya) * (b - a) / (yb - ya), m))
            out.append((a, ya))
            m = ya
        else:
            out.append((a, m))
    if f.slope_left < 0:
        if ys[0] < m:
            out.append((xs[0] + (m - ys[0]) / f.slope_left, m))
        slope_left = f.slope_left
    else:
        slope_left = Fraction(0)
    out.reverse()
    return PLFunction(out, slope_left, f.slope_right)


def running_inf_left(f: PLFunction) -> PLFunction:
    """``p -> inf_{q <= p} f(q)``."""
    if f.slope_left > 0:
        raise UnboundedBelow("running infimum to the left needs slope_left <= 0")
    return -running_sup_right(-f.reflect()).reflect()


# -- shape predicates ----------------------------------------------------------


def is_coercive(f: PLFunction) -> bool:
    return f.slope_left < 0 < f.slope_right


def is_nonincreasing(f: PLFunction) -> bool:
    return all(s <= 0 for s in f.segment_slopes)


def is_semicoercive(f: PLFunction) -> bool:
    """Non-increasing and blowing up as ``p -> -inf``."""
    return is_nonincreasing(f) and f.slope_left < 0


def freeze_left(f: PLFunction, p: Fraction) -> PLFunction:
    """``f`` to the right of ``p`` and the constant ``f(p)`` to its left."""
    pts = [(p, f(p))] + [(x, y) for x, y in zip(f.xs, f.ys) if x > p]
    return PLFunction(pts, 0, f.slope_right)


def freeze_right(f: PLFunction, p: Fraction) -> PLFunction:
    """``f`` to the left of ``p`` and the constant ``f(p)`` to its right."""
    pts = [(x, y) for x, y in zip(f.xs, f.ys) if x < p] + [(p, f(p))]
    return PLFunction(pts, f.slope_left, 0)


def max_abs_slope(f: PLFunction, a, b) -> Fraction:
    """Largest ``|slope|`` among the pieces of ``f`` meeting ``[a, b]``."""
    return max(abs(s) for lo, hi, s, _, _ in f.pieces() if hi >= a and lo <= b)
