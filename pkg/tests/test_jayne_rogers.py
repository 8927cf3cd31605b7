from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jaynerogers import examples
from jaynerogers.jayne_rogers import (PiecewiseName, Piece, delta2_to_piecewise, eval_delta2, eval_piecewise,
                                      evaluator_ndtm, identity_delta2, piecewise_constant_delta2,
                                      piecewise_to_delta2, value_of)
from jaynerogers.machines import AdviceSpace, Halted, Progress
from jaynerogers.spaces import (OUT, UNIT, Ball, BallOpen, Interval, delta2_consistency_check, delta2_verdict,
                                member_out_closed, pow2, signed_digit_point)

TOL = Fraction(1, 1024)
grid = st.integers(0, 64).map(lambda k: Fraction(k, 64))


def _ball_open(c, r):
    return BallOpen.of(UNIT, [Ball(Fraction(c), Fraction(r))])


def _in_ball(y, c, r):
    return abs(Fraction(y) - Fraction(c)) < Fraction(r)


@settings(max_examples=40, deadline=None)
@given(grid, st.sampled_from([(1, "1/4"), (0, "1/4"), ("1/2", "1/8"), ("1/2", "3/4")]))
def test_step_preimage_verdicts(x, ball):
    c, r = ball
    f = examples.step_delta2()
    D = f.inverse(_ball_open(c, r))
    want = int(_in_ball(examples.step_oracle(x), c, r))
    assert delta2_verdict(D, signed_digit_point(x), 24) == want


@settings(max_examples=30, deadline=None)
@given(grid)
def test_staircase_preimage_verdicts(x):
    f = examples.staircase_delta2()
    D = f.inverse(_ball_open("1/2", "1/8"))
    assert delta2_verdict(D, signed_digit_point(x), 24) == int(examples.staircase_oracle(x) == Fraction(1, 2))


def test_evaluator_rejects_wrong_guess():
    f = examples.step_delta2()
    nd = evaluator_ndtm(f)
    assert nd.advice is AdviceSpace.NAT_CANTOR
    x = signed_digit_point(Fraction(3, 4))
    balls = x.balls(20)
    # guessing the value 0 (binary 0000...) for x = 3/4 is refuted
    assert isinstance(nd.run(balls, (0, (0, 0, 0, 0)), 20), Halted)
    # guessing 1 (binary 1111...) is not
    assert isinstance(nd.run(balls, (0, (1, 1, 1, 1)), 20), Progress)


@pytest.mark.parametrize("x", ["1/4", "1/2", "3/4"])
def test_eval_step(x):
    out = eval_delta2(examples.step_delta2(), signed_digit_point(Fraction(x)), 40)
    v = value_of(out, 10)
    assert v is not None
    assert abs(v - examples.step_oracle(Fraction(x))) <= TOL


def test_eval_staircase_middle():
    x = Fraction(1, 2)
    out = eval_delta2(examples.staircase_delta2(), signed_digit_point(x), 40)
    assert abs(value_of(out, 10) - Fraction(1, 2)) <= TOL


def test_eval_approximations_are_nested_balls():
    out = eval_delta2(examples.step_delta2(), signed_digit_point(Fraction(1, 4)), 40)
    for s, b in enumerate(out.current):
        assert b.radius <= pow2(-s)
        assert abs(b.center - 0) <= b.radius


@pytest.mark.parametrize("name,x", [("step", "1/4"), ("step", "1/2"), ("step", "9/10"),
                                     ("staircase", "1/3"), ("staircase", "5/6"), ("identity", "2/7")])
def test_eval_piecewise(name, x):
    g = examples.PIECEWISE[name]()
    out = eval_piecewise(g, signed_digit_point(Fraction(x)), 24)
    assert abs(value_of(out, 10) - g.oracle(Fraction(x))) <= TOL


def test_eval_piecewise_resets_count_refuted_pieces():
    # x = 0.3 lies in [0, 1/2 - 2^-k] only for k >= 3; pieces 0..2 get refuted,
    # two of them at the same stage, so a reset is one candidate change
    g = examples.step_piecewise()
    out = eval_piecewise(g, signed_digit_point(Fraction(3, 10)), 24)
    assert out.candidate == 3
    changes = sum(1 for a, b in zip(out.history, out.history[1:]) if a != b)
    assert out.resets == changes
    assert sorted(set(out.history)) == [0, 2, 3]


def test_piecewise_to_delta2_preimages():
    f = piecewise_to_delta2(examples.step_piecewise())
    D = f.inverse(_ball_open(1, "1/4"))
    for x in ("0", "1/4", "3/8", "1/2", "5/8", "1"):
        want = int(examples.step_oracle(Fraction(x)) == 1)
        assert delta2_verdict(D, signed_digit_point(Fraction(x)), 16) == want


def test_piecewise_to_delta2_consistency():
    f = piecewise_to_delta2(examples.staircase_piecewise())
    D = f.inverse(_ball_open("1/2", "1/8"))
    samples = [signed_digit_point(Fraction(k, 16)) for k in range(17)]
    assert delta2_consistency_check(D, samples, 12).ok


def test_delta2_to_piecewise_pieces_cover():
    g = delta2_to_piecewise(examples.step_delta2())
    for x in (Fraction(1, 4), Fraction(3, 4)):
        name = signed_digit_point(x)
        alive = [n for n in range(4) if member_out_closed(g.piece(n).closed, name, 16) is not OUT]
        assert alive, x
        y = g.piece(alive[0]).realizer(name).balls(16)
        assert abs(y[-1].center - examples.step_oracle(x)) <= y[-1].radius


def test_round_trip_step():
    g = delta2_to_piecewise(piecewise_to_delta2(examples.step_piecewise()))
    for x in (Fraction(1, 4), Fraction(1, 2), Fraction(7, 8)):
        out = eval_piecewise(g, signed_digit_point(x), 24)
        assert abs(value_of(out, 10) - examples.step_oracle(x)) <= TOL


def test_identity_name():
    f = identity_delta2(UNIT)
    D = f.inverse(_ball_open("1/2", "1/4"))
    assert delta2_verdict(D, signed_digit_point(Fraction(1, 2)), 12) == 1
    assert delta2_verdict(D, signed_digit_point(Fraction(1, 8)), 12) == 0


def test_piecewise_constant_oracle_and_errors():
    f = piecewise_constant_delta2([(Interval(0, Fraction(1, 2), True, False), 0),
                                   (Interval(Fraction(1, 2), 1), 1)], UNIT, UNIT)
    assert f.oracle(Fraction(1, 2)) == 1
    with pytest.raises(ValueError):
        f.oracle(2)


def test_finite_piecewise_name():
    g = PiecewiseName.of(UNIT, UNIT, [Piece(examples.closed_interval(0, 1), examples.PointMap.constant(UNIT, 0),
                                            "all")], None, "zero")
    assert g.piece(0) is not None and g.piece(1) is None
    out = eval_piecewise(g, signed_digit_point(Fraction(1, 3)), 12)
    assert value_of(out, 8) == 0
