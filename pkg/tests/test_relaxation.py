from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hjrelax import PLFunction, envelope_upgrade, lower_envelope, relax, sub_relax, super_relax
from hjrelax.corpus import random_boundary
from hjrelax.errors import InvalidBoundary, InvalidHamiltonian
from hjrelax.pl import is_nonincreasing, is_semicoercive, le, pl_abs, pointwise_max, pointwise_min
from hjrelax.relaxation import relax_composed
from hjrelax.solver import FloatPL

from .conftest import ABS, HALF, W, corpus_pairs
from .oracles import dense_relax, dense_sub_relax, dense_super_relax, grid

ZERO = PLFunction.constant(0)
CONST_HALF = PLFunction.constant(HALF)
MAX_NEG_P = PLFunction([(0, 0)], -1, 0)  # p -> max(-p, 0)
W_ENVELOPE = PLFunction([(-1, 0)], -2, 0)  # p -> max(0, -2(p + 1))
W_HALF = PLFunction([(Fraction(-5, 4), HALF)], -2, 0)  # p -> max(1/2, -2(p + 1))


def test_sub_relax_examples():
    assert sub_relax(ABS, ZERO) == ZERO
    assert sub_relax(ABS, MAX_NEG_P) == MAX_NEG_P
    assert sub_relax(W, CONST_HALF) == CONST_HALF


def test_super_relax_examples():
    assert super_relax(ABS, ZERO) == MAX_NEG_P
    assert super_relax(W, CONST_HALF) == W_HALF


@given(corpus_pairs(), st.lists(st.fractions(-12, 12, max_denominator=12), min_size=5, max_size=20))
def test_semi_relaxations_fix_f0_on_its_side_of_h(pair, probes):
    # a non-increasing F0 cannot stay above a coercive H, so this is checked pointwise
    H, F0 = pair
    lo, hi = sub_relax(H, F0), super_relax(H, F0)
    for p in probes + list(H.xs) + list(F0.xs):
        if F0(p) >= H(p):
            assert hi(p) == F0(p)
        if F0(p) <= H(p):
            assert lo(p) == F0(p)


def test_relax_closed_form_fixtures():
    assert relax(ABS, ZERO) == MAX_NEG_P
    assert relax(W, CONST_HALF) == W_HALF
    assert relax(W, W_HALF) == W_HALF


def test_lower_envelope_examples():
    assert lower_envelope(ABS) == MAX_NEG_P
    assert lower_envelope(W) == W_ENVELOPE
    assert lower_envelope(W + 3).slope_right == 0 and lower_envelope(W + 3)(10) == 3


def test_preconditions():
    with pytest.raises(InvalidHamiltonian):
        relax(ZERO, ZERO)
    with pytest.raises(InvalidBoundary):
        relax(ABS, ABS)
    with pytest.raises(InvalidHamiltonian):
        lower_envelope(MAX_NEG_P)


@pytest.mark.parametrize("H,F0", [(ABS, ZERO), (W, CONST_HALF), (W, MAX_NEG_P + HALF)])
def test_relaxations_match_dense_grid(H, F0):
    xs = grid(-6, 6)
    tol = 4 * 2 * (xs[1] - xs[0])
    for exact, oracle in (
        (sub_relax(H, F0), dense_sub_relax),
        (super_relax(H, F0), dense_super_relax),
        (relax(H, F0), dense_relax),
    ):
        inner = slice(0, len(xs) - 256)  # the sub oracle cannot see beyond the grid
        assert np.max(np.abs(FloatPL(exact)(xs) - oracle(H, F0, xs))[inner]) <= tol


@given(corpus_pairs())
def test_random_pairs_match_dense_grid(pair):
    H, F0 = pair
    xs = grid(-14, 40, 1 / 64)
    err = np.abs(FloatPL(relax(H, F0))(xs) - dense_relax(H, F0, xs))
    slope = max(abs(float(s)) for s in H.segment_slopes + F0.segment_slopes)
    assert err[xs < 14].max() <= 2 * slope / 64 + 1e-12


@given(corpus_pairs())
def test_compositions_agree(pair):
    H, F0 = pair
    R = relax(H, F0)
    assert relax_composed(H, F0) == R == sub_relax(H, super_relax(H, F0))


@given(corpus_pairs())
def test_sandwich_and_shape(pair):
    H, F0 = pair
    lo, hi, R = sub_relax(H, F0), super_relax(H, F0), relax(H, F0)
    assert le(pointwise_min(F0, H), lo) and le(lo, F0) and le(F0, hi) and le(hi, pointwise_max(F0, H))
    for f in (lo, hi, R):
        assert is_semicoercive(f)


@given(corpus_pairs())
def test_contraction_and_minimality(pair):
    H, F0 = pair
    R = relax(H, F0)
    assert le(pl_abs(R - H), pl_abs(F0 - H))
    assert le(lower_envelope(H), R)
    assert relax(H, R) == R


@given(corpus_pairs(), st.integers(0, 500))
def test_commutation_with_min_and_max(pair, k):
    H, F0 = pair
    F1 = random_boundary(np.random.default_rng(k), H)
    assert relax(H, pointwise_min(F0, F1)) == pointwise_min(relax(H, F0), relax(H, F1))
    assert relax(H, pointwise_max(F0, F1)) == pointwise_max(relax(H, F0), relax(H, F1))


@given(corpus_pairs(), st.fractions(-5, 5, max_denominator=8))
def test_constant_boundary_relaxes_to_envelope_max(pair, A):
    H, _ = pair
    C = PLFunction.constant(A)
    assert relax(H, C) == pointwise_max(C, lower_envelope(H))


def test_envelope_upgrade_fixes_semicoercivity():
    F = envelope_upgrade(W, ZERO)
    assert is_semicoercive(F) and is_nonincreasing(F)
    assert relax(W, F) == relax(W, ZERO)
