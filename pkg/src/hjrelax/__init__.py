"""Exact relaxation of boundary conditions for 1D Hamilton-Jacobi equations
on a half-line, with piecewise-linear Hamiltonians and rational arithmetic."""

from __future__ import annotations

from .errors import (
    CflViolation,
    DomainTooShort,
    HJRelaxError,
    InternalMismatch,
    InvalidBoundary,
    InvalidHamiltonian,
    InvalidInputs,
    NotSemiCoercive,
    ParseError,
    RootNotFound,
    UnboundedAbove,
    UnboundedBelow,
    ValidationError,
)
from .godunov import (
    Dirichlet,
    Dynamic,
    Germ,
    GodunovAction,
    Neumann,
    apply_godunov,
    apply_lower_semiflux,
    apply_upper_semiflux,
    bln_check,
    dirichlet_relaxed,
    germ,
    godunov_flux,
    godunov_operator,
    lower_semiflux,
    lower_semiflux_operator,
    neumann_relaxed,
    upper_semiflux,
    upper_semiflux_operator,
)
from .guerand import (
    CharPoint,
    LimiterPoint,
    Sign,
    characteristic_points,
    guerand_operator,
    limiter_points,
    lower_point,
    upper_lower,
    upper_point,
)
from .pl import ExtendedInterval, PLFunction, to_rational
from .relaxation import envelope_upgrade, lower_envelope, relax, sub_relax, super_relax

__all__ = [name for name in dir() if not name.startswith("_")]
