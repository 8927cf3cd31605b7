import random

import pytest
from hypothesis import given, settings, strategies as st

from jaynerogers import examples, machines
from jaynerogers.choice import (CantorChoiceInstance, NatChoiceInstance, StagedPrefixes, WeihrauchReduction,
                                apply_reduction, c_cantor_solver, c_nat_solver, candidate_history,
                                cantor_solver, identity_reduction, nat_solver, ndtm_to_choice_reduction)
from jaynerogers.machines import Emit, LeftmostApproximation, SurvivingTree, execute_nat_advice, schedule_input
from jaynerogers.spaces import TreeClosed
from jaynerogers.streams import ConfigurationError, StreamName


def test_c_nat_small_schedule():
    inst = NatChoiceInstance.from_schedule({3: [0], 5: [1]})
    out = c_nat_solver(inst, 10)
    assert out.candidate == 2
    assert out.resets == 2
    assert out.reset_stages() == [3, 5]
    hist = candidate_history(out)
    assert hist[:3] == [0, 0, 0] and hist[3] == 1 and hist[-1] == 2


schedules = st.dictionaries(st.integers(0, 15), st.lists(st.integers(0, 8), max_size=3), max_size=6)


@settings(max_examples=80)
@given(schedules)
def test_c_nat_finds_least_member(sched):
    inst = NatChoiceInstance.from_schedule(sched)
    out = c_nat_solver(inst, 30)
    rejected = {n for ns in sched.values() for n in ns}
    least = min(n for n in range(20) if n not in rejected)
    assert out.candidate == least
    # brute force: the candidate at stage t is the least n <= t not rejected by t
    cands = []
    for t in range(31):
        dead = {n for s, ns in sched.items() if s <= t for n in ns}
        cands.append(min((n for n in range(t + 1) if n not in dead), default=None))
    changes = sum(1 for a, b in zip(cands, cands[1:]) if a != b and a is not None)
    assert out.resets == changes
    assert out.history == cands


def test_c_nat_emits_candidate_symbol():
    out = c_nat_solver(NatChoiceInstance.from_schedule({}), 3)
    assert out.trace[0] == (0, Emit((0,)))


def test_c_cantor_leftmost_bruteforce():
    rng = random.Random(11)
    for _ in range(20):
        sched, protect = examples.random_schedule(rng, depth=8, events=25, max_stage=20)
        inst = CantorChoiceInstance(TreeClosed.from_schedule(sched))
        sol = c_cantor_solver(inst, depth=8)
        assert sol.at(40) == examples.leftmost_path_bruteforce(sched, 8)
        assert sol.settled(8, 40)


def test_staged_prefixes_settled():
    sp = StagedPrefixes(lambda t: (0, 1) if t < 5 else (1, 1))
    assert not sp.settled(1, 8, window=5)
    assert sp.settled(1, 8, window=3)


def test_nat_reduction_replays_executor():
    n = machines.first_one_ndtm()
    for k in range(5):
        x = StreamName.finite((0,) * k + (1, 0, 0))
        r = ndtm_to_choice_reduction(n)
        got = apply_reduction(r, nat_solver(20), x)
        want = execute_nat_advice(n, x, 20)
        assert got.trace == want.trace
        assert got.current == want.current
        assert got.resets == k


def test_cantor_reduction_replays_leftmost():
    rng = random.Random(2)
    n = machines.wkl_machine()
    for _ in range(5):
        sched, _ = examples.random_schedule(rng, depth=6, events=10, max_stage=10)
        x = schedule_input(sched)
        r = ndtm_to_choice_reduction(n, depth=16)
        got = apply_reduction(r, cantor_solver(16), x)
        direct = LeftmostApproximation(SurvivingTree(n, x, (0, 1), 16))
        for t in (10, 20, 40):
            assert got.at(t) == direct.output(t)


def test_reduction_rejects_baire():
    with pytest.raises(ConfigurationError):
        ndtm_to_choice_reduction(machines.runtime_guesser([1]))


def test_identity_and_strong_reductions():
    assert apply_reduction(identity_reduction(), lambda y: y + 1, 3) == 4
    seen = []
    strong = WeihrauchReduction(lambda x: x, lambda x, y: seen.append(x) or y, strong=True)
    apply_reduction(strong, lambda y: y, 5)
    assert seen == [None]
