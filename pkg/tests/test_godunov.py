from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hjrelax import (
    GodunovAction,
    PLFunction,
    apply_godunov,
    apply_lower_semiflux,
    apply_upper_semiflux,
    bln_check,
    dirichlet_relaxed,
    germ,
    godunov_flux,
    godunov_operator,
    lower_envelope,
    lower_semiflux,
    lower_semiflux_operator,
    neumann_relaxed,
    relax,
    sub_relax,
    super_relax,
    upper_semiflux,
    upper_semiflux_operator,
)
from hjrelax.errors import InvalidHamiltonian, NotSemiCoercive
from hjrelax.godunov import godunov_root, germ_certifier, in_germ_by_inequality
from hjrelax.pl import NEG_INF, POS_INF, ExtendedInterval, pointwise_max
from hjrelax.solver import FloatPL

from .conftest import ABS, HALF, W, corpus_pairs
from .oracles import dense_bln, dense_godunov_flux, dense_godunov_root, grid

F = Fraction
ZERO = PLFunction.constant(0)
MAX_NEG_P = PLFunction([(0, 0)], -1, 0)
W_HALF = pointwise_max(PLFunction.constant(HALF), lower_envelope(W))
probes = st.fractions(-10, 10, max_denominator=12)


def test_flux_examples():
    assert godunov_flux(ABS, 2, 2) == 2
    assert godunov_flux(ABS, 1, -1) == 1
    assert godunov_flux(ABS, -1, 1) == 0


def test_flux_needs_coercive_h():
    with pytest.raises(InvalidHamiltonian):
        godunov_flux(MAX_NEG_P, 0, 1)


@pytest.mark.parametrize("q,p", [(F(-3, 2), F(1, 3)), (F(2), F(-1)), (F(1, 2), F(7, 4)), (F(-2), F(-2))])
def test_flux_matches_dense_scan(q, p):
    assert abs(float(godunov_flux(W, q, p)) - dense_godunov_flux(W, float(q), float(p))) <= 2 / 256


def test_semiflux_values():
    assert lower_semiflux(ABS, 0, 0) == ExtendedInterval(NEG_INF, F(0))
    assert lower_semiflux(ABS, 2, 0) == ExtendedInterval(F(2), F(2))
    assert lower_semiflux(ABS, -1, 0) == ExtendedInterval(NEG_INF, NEG_INF)
    assert upper_semiflux(ABS, 0, 0) == ExtendedInterval(F(0), POS_INF)
    assert upper_semiflux(ABS, 1, 0) == ExtendedInterval(POS_INF, POS_INF)
    assert upper_semiflux(ABS, -1, 0) == ExtendedInterval(F(0), F(0))


def test_apply_godunov_examples():
    assert apply_godunov(ABS, ZERO, -2) == 2
    lam, q = godunov_root(W, W_HALF, 0)
    assert lam == HALF and godunov_flux(W, q, 0) == HALF and W_HALF(q) == HALF
    for p in (F(-5, 4), F(-1, 2), F(5, 4)):
        assert apply_godunov(W, W_HALF, p) == W(p)


def test_apply_godunov_strict_mode():
    with pytest.raises(NotSemiCoercive):
        apply_godunov(ABS, ZERO, 1, strict=True)


def test_semiflux_application_examples():
    assert apply_lower_semiflux(W, W_HALF, -2) == 2
    # F0(p) <= H(p): value F0(p) with witness q = p
    assert apply_lower_semiflux(ABS, MAX_NEG_P, 3) == 0
    assert apply_upper_semiflux(ABS, MAX_NEG_P + 1, -5) == 6


@given(corpus_pairs(), probes)
def test_root_is_a_witness(pair, p):
    H, F0 = pair
    act = GodunovAction(H, F0)
    lam, q = act.root(p)
    assert lam == act.F0(q) == godunov_flux(H, q, p)


@given(corpus_pairs(), st.integers(-40, 40))
def test_godunov_value_matches_dense_root_scan(pair, k):
    H, F0 = pair
    p = F(k, 4)
    xs = grid(-30, 30, 1 / 128)
    slope = max(abs(float(s)) for s in H.segment_slopes + F0.segment_slopes)
    ref = dense_godunov_root(H, F0, float(p), xs)
    assert abs(float(apply_godunov(H, F0, p)) - ref) <= 2 * slope / 128 + 1e-9


@given(corpus_pairs(), st.lists(probes, min_size=1, max_size=25))
def test_godunov_action_equals_relaxation(pair, ps):
    H, F0 = pair
    R = relax(H, F0)
    act = GodunovAction(H, F0)
    assert all(act.godunov(p) == R(p) for p in ps)
    assert godunov_operator(H, F0) == R


@given(corpus_pairs())
def test_semifluxes_identify_semi_relaxations(pair):
    H, F0 = pair
    Gl, Gu = lower_semiflux_operator(H, F0), upper_semiflux_operator(H, F0)
    assert Gl == sub_relax(H, F0)
    assert Gu == super_relax(H, F0)
    assert lower_semiflux_operator(H, Gu) == godunov_operator(H, F0) == upper_semiflux_operator(H, Gl)


@given(corpus_pairs(), probes, probes, st.fractions(0, 3, max_denominator=6))
def test_flux_monotonicity(pair, q, p, d):
    H, _ = pair
    assert godunov_flux(H, q, p) <= godunov_flux(H, q + d, p)
    assert godunov_flux(H, q, p) >= godunov_flux(H, q, p + d)
    assert godunov_flux(H, p, p) == H(p)


def test_germ_examples():
    assert germ(ABS, ZERO).components == (ExtendedInterval(NEG_INF, F(0)),)
    g = germ(W, PLFunction.constant(HALF))
    assert g.components == (
        ExtendedInterval(NEG_INF, F(-5, 4)),
        ExtendedInterval(F(-1, 2), F(-1, 2)),
        ExtendedInterval(F(1, 2), F(1, 2)),
        ExtendedInterval(F(5, 4), F(5, 4)),
    )


def test_germ_matches_dense_scan():
    xs = grid(-4, 4, 1 / 64)
    h = FloatPL(W)(xs)
    r = np.maximum(0.5, np.minimum.accumulate(h))
    g = germ(W, PLFunction.constant(HALF))
    for x in xs:
        assert (F(x) in g) == bool(abs(float(FloatPL(W)(x)) - r[np.searchsorted(xs, x)]) < 1e-12)


@given(corpus_pairs())
def test_germ_of_envelope_is_its_contact_set(pair):
    H, _ = pair
    Hm = lower_envelope(H)
    g = germ(H, Hm)
    for p in list(H.xs) + g.endpoints():
        assert (p in g) == (H(p) == Hm(p))


@given(corpus_pairs(), st.lists(probes, min_size=1, max_size=30))
def test_germ_routes_agree(pair, ps):
    H, F0 = pair
    g, member = germ(H, F0), germ_certifier(H, F0)
    for p in ps + g.endpoints():
        assert (p in g) == member(p) == in_germ_by_inequality(H, F0, p)


def test_bln_examples():
    assert bln_check(ABS, 0, -1)
    assert not bln_check(ABS, 0, 1)
    assert bln_check(W, F(1, 3), F(1, 3))


@given(corpus_pairs(), st.fractions(-6, 6, max_denominator=4), st.lists(probes, min_size=1, max_size=12))
def test_bln_equivalences(pair, h, ps):
    H, _ = pair
    N = neumann_relaxed(H, h)
    g = germ(H, N)
    ks = grid(-40, 40, 1 / 8)
    for p in ps + g.endpoints():
        b = bln_check(H, h, p)
        assert b == (H(p) == godunov_flux(H, h, p)) == (p in g)
        if p * 8 == int(p * 8) and h * 8 == int(h * 8):
            # exact on the k-grid when p and h lie on it, up to float round-off
            assert b == dense_bln(H, float(h), float(p), ks)


def test_neumann_examples():
    assert neumann_relaxed(ABS, 0) == MAX_NEG_P


@given(corpus_pairs(), st.fractions(-6, 6, max_denominator=4), st.lists(probes, min_size=1, max_size=12))
def test_neumann_is_godunov_flux_and_self_relaxed(pair, h, ps):
    H, _ = pair
    N = neumann_relaxed(H, h)
    assert relax(H, N) == N
    for p in ps:
        assert N(p) == godunov_flux(H, h, p)
        # sign property: H - N has the sign of p - h
        assert (H(p) - N(p)) * (p - h) >= 0


def test_dirichlet_examples():
    assert dirichlet_relaxed(ABS, 0) == MAX_NEG_P
    assert dirichlet_relaxed(W, HALF) == PLFunction([(F(-5, 4), HALF)], -2, 0)
    assert dirichlet_relaxed(W, -3) == lower_envelope(W)


@given(corpus_pairs(), st.fractions(-6, 6, max_denominator=4))
def test_dirichlet_equals_relaxed_constant(pair, A0):
    H, _ = pair
    assert dirichlet_relaxed(H, A0) == relax(H, PLFunction.constant(A0))
