from __future__ import annotations

from hjrelax import PLFunction
from hjrelax.corpus import (
    IDENTITIES,
    has_tangential_contact,
    random_pair,
    run_case,
    verify_corpus,
)
from hjrelax.pl import is_coercive, is_semicoercive

from .conftest import ABS


def test_random_pair_is_deterministic():
    assert random_pair(7, 3) == random_pair(7, 3)
    assert random_pair(7, 3) != random_pair(7, 4)


def test_generated_pairs_are_valid():
    for i in range(10_000):
        H, F0 = random_pair(123, i)
        assert is_coercive(H)
        assert is_semicoercive(F0)
        assert len(F0.xs) <= 6


def test_every_batch_of_fifty_has_a_tangential_contact():
    for seed in (0, 7, 99):
        for batch in range(4):
            assert any(has_tangential_contact(*random_pair(seed, 50 * batch + i)) for i in range(50))


def test_tangency_detector():
    assert has_tangential_contact(ABS, PLFunction.constant(0))  # touches the minimum from below
    assert not has_tangential_contact(ABS, PLFunction([(0, 1)], -2, -1))  # one transversal crossing


def test_run_case_covers_all_identities():
    res, inputs = run_case(7, 0)
    assert set(res) == set(IDENTITIES) and all(res.values())
    assert PLFunction.from_dict(inputs["H"]) == random_pair(7, 0)[0]


def test_failing_case_carries_replay_bundle(monkeypatch):
    import hjrelax.corpus as corpus

    monkeypatch.setattr(corpus, "check_bln_identities", lambda *a: {"bln-equivalence": False})
    report = verify_corpus(5, 7)
    assert report.cases == 1 and len(report.failures) == 1
    replay = report.failures[0]["replay"]
    assert PLFunction.from_dict(replay["F0"]) == random_pair(7, 0)[1]
