"""Sub-, super- and full relaxation of a boundary function against ``H``.

Orientation is fixed once and for all: the domain is the half-line
``(0, +inf)`` with outward normal ``-1``, so boundary functions are
non-increasing in the gradient and semi-coercivity means blow-up at ``-inf``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InternalMismatch, InvalidBoundary, InvalidHamiltonian
from .pl import (
    PLFunction,
    contact_points,
    is_coercive,
    is_nonincreasing,
    pointwise_max,
    pointwise_min,
    running_inf_left,
    running_sup_right,
)


def check_pair(H: PLFunction, F0: PLFunction) -> None:
    if not is_coercive(H):
        raise InvalidHamiltonian("Hamiltonian must be coercive (slope_left < 0 < slope_right)")
    if not is_nonincreasing(F0):
        raise InvalidBoundary("boundary function must be non-increasing")


def sub_relax(H: PLFunction, F0: PLFunction) -> PLFunction:
    """``p -> sup_{q >= p} min(F0, H)(q)``."""
    check_pair(H, F0)
    return running_sup_right(pointwise_min(F0, H))


def super_relax(H: PLFunction, F0: PLFunction) -> PLFunction:
    """``p -> inf_{q <= p} max(F0, H)(q)``."""
    check_pair(H, F0)
    return running_inf_left(pointwise_max(F0, H))


def _select_by_sign(H, F0, above: PLFunction, below: PLFunction) -> PLFunction:
    """``above`` on ``{F0 >= H}`` and ``below`` on ``{F0 <= H}``.

    Between consecutive points of the collected set the sign of ``F0 - H`` is
    constant and both candidates are affine, so tabulation is exact.
    """
    xs = set(H.xs) | set(F0.xs) | set(above.xs) | set(below.xs)
    xs.update(contact_points(F0, H))

    def pick(p: Fraction) -> Fraction:
        return above(p) if F0(p) >= H(p) else below(p)

    return PLFunction.tabulate(pick, xs)


def relax(H: PLFunction, F0: PLFunction, *, check: bool = __debug__) -> PLFunction:
    """The relaxed boundary function: the sub-relaxation where ``F0 >= H``,
    the super-relaxation where ``F0 <= H``.

    With ``check`` set, the result is also computed as both compositions of
    the semi-relaxations and all three must agree.
    """
    lo, hi = sub_relax(H, F0), super_relax(H, F0)
    out = _select_by_sign(H, F0, lo, hi)
    if check:
        via_lo = super_relax(H, lo)
        via_hi = sub_relax(H, hi)
        if not out == via_lo == via_hi:
            raise InternalMismatch(
                f"relaxation routes disagree for H={H!r}, F0={F0!r}: "
                f"piecewise={out!r}, super(sub)={via_lo!r}, sub(super)={via_hi!r}"
            )
    return out


def relax_composed(H: PLFunction, F0: PLFunction) -> PLFunction:
    """Relaxation computed as super-relaxation of the sub-relaxation."""
    return super_relax(H, sub_relax(H, F0))


def lower_envelope(H: PLFunction) -> PLFunction:
    """Lower non-increasing envelope ``p -> inf_{q <= p} H(q)``."""
    if not is_coercive(H):
        raise InvalidHamiltonian("Hamiltonian must be coercive (slope_left < 0 < slope_right)")
    return running_inf_left(H)


def envelope_upgrade(H: PLFunction, F0: PLFunction) -> PLFunction:
    """``max(F0, H_-)``: semi-coercive and with the same relaxation as ``F0``."""
    return pointwise_max(F0, lower_envelope(H))
