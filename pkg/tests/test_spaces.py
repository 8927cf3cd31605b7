import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jaynerogers.spaces import (BAIRE, BINARY_EXPANSION, CANTOR, CANTOR_IDENTITY, HILBERT, HILBERT_BINARY,
                                OUT, SIGNED_DIGIT, UNIT, UNKNOWN, YES, Ball, BallOpen, ClosedBallsUnion,
                                DenseSequence, Delta2SetName, EmptyClosed, EmptyOpen, Interval, PointMap,
                                PointName, TreeClosed, WholeClosed, WholeOpen, ball_name,
                                closed_image_under_representation, closed_interval, compact_intersect_closed,
                                delta2_consistency_check, delta2_stage_verdicts, delta2_verdict,
                                embed_hilbert, fiber_compact, is_empty_compact, level_of, member_open,
                                member_out_closed, mind_changes, open_as_closed_union,
                                point_from_compact_singleton, pow2, signed_digit_point, signed_digits_of,
                                singleton_compact, stabilization_stage)
from jaynerogers.streams import BINARY, StreamName, binary_words

fractions01 = st.fractions(min_value=0, max_value=1, max_denominator=64)


def test_level_of():
    assert level_of(Fraction(1)) == 0
    assert level_of(Fraction(1, 8)) == 3
    assert level_of(Fraction(3, 16)) == 3  # least m with 2^-m <= r


@given(fractions01, st.integers(1, 20))
def test_signed_digits_converge(x, n):
    digits = signed_digits_of(x).at(n)
    v = sum(Fraction(d, 2 ** (i + 1)) for i, d in enumerate(digits))
    assert abs(v - x) <= pow2(-n)


@given(fractions01, st.integers(0, 16))
def test_signed_digit_point_balls_contain_point(x, fuel):
    for s, b in enumerate(signed_digit_point(x).balls(fuel)):
        assert abs(b.center - x) <= b.radius <= pow2(-s)


@given(st.lists(st.integers(0, 1), max_size=10), st.lists(st.integers(0, 1), max_size=10))
def test_cantor_metric_bruteforce(a, b):
    # centers stand for a 0 0 0 ...; compare the padded sequences directly
    n = max(len(a), len(b)) + 1
    pa, pb = a + [0] * (n - len(a)), b + [0] * (n - len(b))
    want = 0 if pa == pb else pow2(-next(i for i in range(n) if pa[i] != pb[i]))
    assert CANTOR.dist(a, b) == want
    assert CANTOR.cylinder_word(CANTOR.cylinder(a)) == tuple(a)
    if a:
        assert CANTOR.cylinder_word(CANTOR.open_cylinder(a)) == tuple(a[:-1])


@given(st.lists(st.integers(0, 1), min_size=1, max_size=8),
       st.lists(st.integers(0, 1), min_size=1, max_size=8),
       st.lists(st.integers(0, 1), min_size=1, max_size=8))
def test_cantor_ultrametric(a, b, c):
    assert CANTOR.dist(a, c) <= max(CANTOR.dist(a, b), CANTOR.dist(b, c))


@pytest.mark.parametrize("rep,depth", [(SIGNED_DIGIT, 5), (BINARY_EXPANSION, 6), (CANTOR_IDENTITY, 6)])
def test_cylinder_ball_contains_extensions(rep, depth):
    # brute force: every depth+3 extension names a ball inside the depth cylinder's ball
    for w in itertools.product(rep.alphabet, repeat=depth):
        cb = rep.cylinder_ball(w)
        if cb is None:
            continue
        for ext in itertools.product(rep.alphabet, repeat=3):
            e = rep.cylinder_ball(w + ext)
            if e is None:
                continue
            d = rep.space.dist(e.center, cb.center)
            if rep is CANTOR_IDENTITY:
                assert d <= cb.radius and e.radius <= cb.radius  # ultrametric balls
            else:
                assert d + e.radius <= cb.radius


def test_signed_digit_fiber_balls_match_words():
    ball = Ball(Fraction(3, 10), Fraction(1, 64))
    for depth in range(1, 7):
        slow = {(b.center, b.radius) for b in
                (SIGNED_DIGIT.cylinder_ball(w) for w in SIGNED_DIGIT.fiber_words(ball, depth))}
        fast = {(b.center, b.radius) for b in SIGNED_DIGIT.fiber_balls(ball, depth)}
        assert slow == fast


def test_hilbert_binary_balls_nest():
    rng = random.Random(1)
    for _ in range(30):
        w = tuple(rng.randrange(2) for _ in range(rng.randrange(1, 10)))
        a, b = HILBERT_BINARY.cylinder_ball(w[:-1]), HILBERT_BINARY.cylinder_ball(w)
        assert HILBERT.dist(a.center, b.center) + b.radius <= a.radius


def test_dense_sequence_metric_axioms():
    d = DenseSequence(UNIT, lambda i: Fraction(i % 7, 7))
    assert d.pseudometric_violations(range(10)) == []
    bad = DenseSequence(UNIT, lambda i: i)
    bad.dist = lambda i, j: Fraction(1) if i < j else Fraction(0)
    assert bad.pseudometric_violations(range(3))


def test_open_ball_membership():
    U = BallOpen.of(UNIT, [Ball(Fraction(1, 2), Fraction(1, 4))])
    assert member_open(U, signed_digit_point(Fraction(1, 2)), 8) is YES
    assert member_open(U, signed_digit_point(Fraction(1, 4)), 30) is UNKNOWN  # boundary, never confirmed
    assert member_open(U, signed_digit_point(Fraction(3, 4) - Fraction(1, 100)), 12) is YES
    assert member_open(EmptyOpen(UNIT), signed_digit_point(0), 10) is UNKNOWN
    assert member_open(WholeOpen(UNIT), signed_digit_point(0), 0) is YES


@settings(max_examples=60)
@given(fractions01, fractions01, fractions01)
def test_closed_interval_exclusion_is_sound(lo, hi, x):
    lo, hi = min(lo, hi), max(lo, hi)
    A = closed_interval(lo, hi)
    verdict = member_out_closed(A, signed_digit_point(x), 16)
    if lo <= x <= hi:
        assert verdict is not OUT
    elif min(abs(x - lo), abs(x - hi)) > pow2(-10):
        assert verdict is OUT


def test_tree_closed_excludes_bruteforce():
    rng = random.Random(5)
    for _ in range(20):
        dead = {tuple(rng.randrange(2) for _ in range(rng.randrange(1, 6))) for _ in range(6)}
        tree = TreeClosed(lambda w, fuel: tuple(w) in dead, depth_cap=8)
        for w in (w for d in range(5) for w in binary_words(d)):
            # [w] misses the set iff every depth-8 extension has a dead prefix
            want = all(any(u[:k] in dead for k in range(9)) for u in
                       (w + e for e in binary_words(8 - len(w))))
            assert tree.excludes(CANTOR.cylinder(w), 8) == want


def test_tree_closed_leftmost_and_survivors():
    tree = TreeClosed.from_schedule({2: [(0,)], 4: [(1, 1)]})
    assert tree.leftmost(3, 1) == (0, 0, 0)
    assert tree.leftmost(3, 2) == (1, 0, 0)
    assert tree.survivors(2, 5) == [(1, 0)]
    assert tree.leftmost(2, 5) == (1, 0)
    tree.schedule[6] = [(1, 0)]
    later = TreeClosed.from_schedule(tree.schedule)
    assert later.leftmost(1, 6) == (1,)  # depth 1 does not see the dead children yet
    assert later.leftmost(2, 6) is None


def test_closed_image_lifts_rejection():
    # names starting with digit 1 are rejected: the image misses [1/2 + eps, 1]
    A = TreeClosed(lambda w, fuel: len(w) >= 1 and w[0] == 1, alphabet=(-1, 0, 1), depth_cap=10)
    img = closed_image_under_representation(A, SIGNED_DIGIT)
    assert img.excludes(Ball(Fraction(7, 8), Fraction(1, 16)), 10)
    assert not img.excludes(Ball(Fraction(1, 4), Fraction(1, 16)), 10)


def test_singleton_compact_recovers_point():
    x = signed_digit_point(Fraction(2, 7))
    y = point_from_compact_singleton(singleton_compact(x))
    balls = y.balls(14)
    assert len(balls) >= 10
    for b in balls:
        assert abs(b.center - Fraction(2, 7)) <= b.radius


def test_fiber_compact_covers():
    x = signed_digit_point(Fraction(1, 3))
    K = fiber_compact(x, SIGNED_DIGIT)
    cover = K.covers(3, 10)
    # every depth-3 word whose image meets the finest ball, nothing else
    fine = x.finest(10)
    want = [CANTOR.cylinder(w) for w in itertools.product((-1, 0, 1), repeat=3)
            if SIGNED_DIGIT.cylinder_ball(w) is not None
            and UNIT.meets(SIGNED_DIGIT.cylinder_ball(w), fine)]
    assert sorted(map(repr, cover)) == sorted(map(repr, want))


def test_compact_emptiness():
    x = signed_digit_point(Fraction(1, 8))
    K = compact_intersect_closed(singleton_compact(x), closed_interval(Fraction(1, 2), 1))
    assert is_empty_compact(K, 8).name == "EMPTY"
    K2 = compact_intersect_closed(singleton_compact(x), closed_interval(0, Fraction(1, 2)))
    assert is_empty_compact(K2, 8) is UNKNOWN


def test_ball_name_and_point_maps():
    b = Ball(Fraction(1, 4), Fraction(1, 8))
    name = ball_name(UNIT, b)
    assert len(name.balls(20)) == 4
    assert PointMap.constant(UNIT, 1)(name).finest(3) == Ball(Fraction(1), 0)
    dbl = PointMap.lipschitz(UNIT, lambda v: 2 * v, 2)
    got = dbl(signed_digit_point(Fraction(1, 3))).balls(12)
    for s, bb in enumerate(got):
        assert abs(bb.center - Fraction(2, 3)) <= bb.radius <= pow2(-s)


def test_embed_hilbert_is_within_radius():
    desc = DenseSequence(UNIT, lambda i: Fraction(i, 8) if i <= 8 else Fraction(1, 3))
    x = signed_digit_point(Fraction(1, 3))
    exact = tuple(min(Fraction(1), abs(Fraction(1, 3) - desc.point(i))) for i in range(12))
    for b in embed_hilbert(desc, x).balls(11):
        assert HILBERT.dist(b.center, exact) <= b.radius + pow2(-len(b.center))


def test_open_as_closed_union_inside_open():
    U = BallOpen.of(UNIT, [Ball(Fraction(1, 2), Fraction(1, 4))])
    pieces = open_as_closed_union(U)
    A = pieces(4)
    assert isinstance(A, ClosedBallsUnion)
    assert not A.excludes(Ball(Fraction(1, 2), Fraction(1, 64)), 4)
    assert A.excludes(Ball(Fraction(1, 8), Fraction(1, 64)), 4)


def test_interval_parse():
    iv = Interval.parse("[1/2, 1)")
    assert (iv.lo, iv.hi, iv.lo_closed, iv.hi_closed) == (Fraction(1, 2), 1, True, False)
    with pytest.raises(ValueError):
        Interval.parse("1/2,1")


def _clopen_half():
    A = closed_interval(Fraction(1, 2), 1)
    U = BallOpen.of(UNIT, [Ball(Fraction(1), Fraction(1, 2))])
    # [1/2, 1] as union of closed {A} and intersection of opens (1/2 - 2^-i, 3/2)
    return Delta2SetName(UNIT, lambda i: A,
                         lambda i: BallOpen.of(UNIT, [Ball(Fraction(1), Fraction(1, 2) + pow2(-i - 1))]))


@pytest.mark.parametrize("x,want", [("1/2", 1), ("3/4", 1), ("1/4", 0), ("1", 1), ("0", 0), ("31/64", 0)])
def test_delta2_verdict(x, want):
    D = _clopen_half()
    bits = delta2_stage_verdicts(D, signed_digit_point(Fraction(x)), 24)
    assert bits[-1] == want
    assert stabilization_stage(bits) <= 16
    assert mind_changes(bits) <= 2


def test_consistency_check_flags_mismatch():
    good = _clopen_half()
    samples = [signed_digit_point(Fraction(k, 16)) for k in range(17)]
    assert delta2_consistency_check(good, samples, 16).ok
    bad = Delta2SetName(UNIT, lambda i: WholeClosed(UNIT), lambda i: EmptyOpen(UNIT))
    rep = delta2_consistency_check(bad, samples[:3], 8)
    assert len(rep.contradictions) == 3
    odd = Delta2SetName(UNIT, lambda i: EmptyClosed(UNIT), lambda i: WholeOpen(UNIT))
    assert len(delta2_consistency_check(odd, samples[:3], 8).suspicious) == 3


def test_baire_sequence_points():
    x = PointName.sequence(StreamName.eventually_periodic((5,), (0, 9)), BAIRE)
    assert x.finest(4) == BAIRE.cylinder((5, 0, 9, 0))
