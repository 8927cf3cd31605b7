import random

from hypothesis import given, settings, strategies as st

from jaynerogers.machines import tree_word
from jaynerogers.markov import (CylinderEnumeration, ListedEnumeration, check_l_instance, constant_table,
                                identity_table, jump_approx, jump_approximation_sequence, jump_limit_name,
                                jump_oracle, low_name_from_markov, markov_from_low, markov_table_from_low,
                                negation_table)
from jaynerogers.spaces import CANTOR, PointName, delta2_verdict, stabilization_stage
from jaynerogers.streams import BINARY, StreamName

ENUM = CylinderEnumeration()


def _bits(n):
    return StreamName.eventually_periodic((), (0,)) if n == 0 else StreamName.eventually_periodic((), (1,))


def _random_stream(rng, head=12):
    h = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, head)))
    c = tuple(rng.randint(0, 1) for _ in range(rng.randint(1, 3)))
    return StreamName.eventually_periodic(h, c, BINARY)


def test_listed_enumeration_examples():
    enum = ListedEnumeration({0: [((0, 0), 0)], 1: [((1,), 0)]})
    p = _bits(0)
    assert [jump_approx(p, enum, 0, t) for t in range(4)] == [0, 0, 1, 1]
    assert [jump_approx(p, enum, 1, t) for t in range(4)] == [0, 0, 0, 0]
    # unlisted opens are empty
    assert jump_approx(p, enum, 7, 10) == 0


def test_listed_enumeration_respects_schedule():
    enum = ListedEnumeration({0: [((0,), 5)]})
    assert [jump_approx(_bits(0), enum, 0, t) for t in range(7)] == [0, 0, 0, 0, 0, 1, 1]


def test_jump_matches_prefix_oracle():
    rng = random.Random(5)
    for _ in range(30):
        p = _random_stream(rng)
        for i in range(32):
            hist = [jump_approx(p, ENUM, i, t) for t in range(12)]
            assert hist[-1] == jump_oracle(p, i)
            # approximations only move from 0 to 1, and settle at |w_i|
            assert hist == sorted(hist)
            assert stabilization_stage(hist) <= len(tree_word(i))


def test_jump_limit_name_approx():
    p = _bits(1)
    name = jump_limit_name(p, ENUM)
    want = tuple(jump_oracle(p, i) for i in range(7))
    assert name.approx(7) == want


def _low_vs_jump(table, q, image, depth=10, fuel=12):
    low = low_name_from_markov(table, q)
    y = StreamName.from_function(image, BINARY)
    for n in range(depth):
        assert low.limit(n, fuel) == jump_oracle(y, n), n


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=8), st.lists(st.integers(0, 1), min_size=1, max_size=3))
def test_identity_table_gives_jump(h, c):
    q = StreamName.eventually_periodic(tuple(h), tuple(c), BINARY)
    _low_vs_jump(identity_table(), q, lambda j: q.at(j + 1)[j])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=8), st.lists(st.integers(0, 1), min_size=1, max_size=3))
def test_negation_table_gives_jump_of_negation(h, c):
    q = StreamName.eventually_periodic(tuple(h), tuple(c), BINARY)
    _low_vs_jump(negation_table(), q, lambda j: 1 - q.at(j + 1)[j])


def test_constant_table():
    t = constant_table((1, 0))
    q = _bits(0)
    _low_vs_jump(t, q, lambda j: (1, 0)[j] if j < 2 else 0)


def test_markov_from_low_single_cylinder():
    # U_n = [0]: position 0 of the jump
    enum = ListedEnumeration({0: [((0,), 0)]})
    lowrun = lambda p: jump_limit_name(p, enum)
    D = markov_from_low(lowrun, enum, 0)
    rng = random.Random(9)
    for _ in range(100):
        p = _random_stream(rng, 5)
        want = 1 if p.at(1)[0] == 0 else 0
        assert delta2_verdict(D, PointName.sequence(p, CANTOR), 12) == want


def test_markov_round_trip_identity():
    table = markov_table_from_low(lambda p: low_name_from_markov(identity_table(), p))
    rng = random.Random(4)
    for _ in range(8):
        p = _random_stream(rng, 4)
        x = PointName.sequence(p, CANTOR)
        for n in range(7):
            assert delta2_verdict(table(n), x, 10) == jump_oracle(p, n)


def test_check_l_accepts_jump_approximations():
    q = StreamName.eventually_periodic((0, 1, 1), (0,), BINARY)
    ps = jump_approximation_sequence(q, ENUM, 20)
    rep = check_l_instance(ps, q, ENUM, 12)
    assert rep.ok and not rep.unstable


def test_check_l_rejects_constant_zero():
    q = StreamName.eventually_periodic((0, 1), (1,), BINARY)
    ps = [StreamName.eventually_periodic((), (0,), BINARY)] * 10
    rep = check_l_instance(ps, q, ENUM, 8)
    want = [n for n in range(8) if jump_oracle(q, n) == 1]
    assert rep.counterexamples == want
    assert not rep.ok


def test_check_l_flags_unstable_positions():
    q = _bits(0)
    ps = [StreamName.eventually_periodic((), (i % 2,), BINARY) for i in range(10)]
    rep = check_l_instance(ps, q, ENUM, 4)
    assert rep.unstable == [0, 1, 2, 3]
