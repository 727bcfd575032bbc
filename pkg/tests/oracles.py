"""Brute-force reference computations on dense grids.

They share nothing with the package beyond plain PL evaluation, and their
answers carry a discretisation error of order ``slope * step``.
"""

from __future__ import annotations

import numpy as np

from hjrelax.solver import FloatPL

STEP = 1 / 256
LO, HI = -16.0, 16.0


def grid(lo: float = LO, hi: float = HI, step: float = STEP) -> np.ndarray:
    return np.arange(lo, hi + step / 2, step)


def dense_sub_relax(H, F0, xs):
    """``sup_{q >= p} min(F0, H)(q)`` by a reversed cumulative max."""
    m = np.minimum(FloatPL(F0)(xs), FloatPL(H)(xs))
    return np.maximum.accumulate(m[::-1])[::-1]


def dense_super_relax(H, F0, xs):
    m = np.maximum(FloatPL(F0)(xs), FloatPL(H)(xs))
    return np.minimum.accumulate(m)


def dense_relax(H, F0, xs):
    f, h = FloatPL(F0)(xs), FloatPL(H)(xs)
    return np.where(f >= h, dense_sub_relax(H, F0, xs), dense_super_relax(H, F0, xs))


def dense_godunov_flux(H, q: float, p: float, step: float = STEP) -> float:
    lo, hi = min(p, q), max(p, q)
    v = FloatPL(H)(np.append(np.arange(lo, hi, step), hi))
    return float(v.max() if p <= q else v.min())


def dense_godunov_root(H, F0, p: float, xs) -> float:
    """``F0(q)`` at the grid ``q`` where ``|F0(q) - G(q, p)|`` is smallest."""
    h = FloatPL(H)(xs)
    f = FloatPL(F0)(xs)
    i = int(np.searchsorted(xs, p))
    G = np.empty_like(xs)
    # p <= q: running max of H from p rightwards; q < p: running min leftwards
    G[i:] = np.maximum.accumulate(h[i:])
    G[:i] = np.minimum.accumulate(h[:i][::-1])[::-1]
    G[:i] = np.minimum(G[:i], h[i])
    j = int(np.argmin(np.abs(f - G)))
    return float(f[j])


def dense_upper_lower(H, p: float, xs) -> tuple[float, float]:
    """Excursion ends of ``H`` around level ``H(p)``, by scanning the grid."""
    h = FloatPL(H)(xs)
    c = float(FloatPL(H)(p))
    i = int(np.searchsorted(xs, p))
    right = xs[i + 1 :][h[i + 1 :] <= c + 1e-12]
    left = xs[:i][h[:i] >= c - 1e-12]
    return (float(left[-1]) if left.size else -np.inf, float(right[0]) if right.size else np.inf)


def dense_bln(H, h: float, p: float, ks) -> bool:
    Hf = FloatPL(H)
    return bool(np.all((np.sign(p - ks) - np.sign(h - ks)) * (Hf(p) - Hf(ks)) <= 1e-12))
