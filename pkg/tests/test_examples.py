from fractions import Fraction

from hypothesis import given, settings, strategies as st

from jaynerogers import examples
from jaynerogers.examples import (OmegaOpen, OmegaPlusOnePoint, baire_point, e_function, e_oracle, e_preimage,
                                  omega_opens)
from jaynerogers.spaces import delta2_verdict
from jaynerogers.streams import StreamName


def test_e_constant_zero():
    res = e_function(StreamName.eventually_periodic((), (0,)), 10)
    assert res.point == OmegaPlusOnePoint(1)
    assert res.point.members(5) == (1, 2, 3, 4)
    assert e_oracle((), (0,)) == res.point


def test_e_alternating_is_everything():
    res = e_function(StreamName.eventually_periodic((), (0, 1)), 10)
    assert res.point.members(5) == (0, 1, 2, 3, 4)
    # after seeing 0 only, the tentative value was {i >= 1}
    assert res.thresholds[1] == 1 and res.thresholds[2] == 0


def test_e_unbounded_is_everything():
    assert e_oracle((), None).members(4) == (0, 1, 2, 3)
    res = e_function(StreamName.from_function(lambda j: j), 12)
    # finite stages keep revising; the emitted enumeration never shrinks
    assert res.emitted[-1] == 0


def _thresh_bruteforce(seen):
    m = max(seen)
    return m + 1 if m % 2 == 0 else m - 1


@settings(max_examples=100)
@given(st.lists(st.integers(0, 9), max_size=5), st.lists(st.integers(0, 9), min_size=1, max_size=4))
def test_e_matches_oracle(head, cycle):
    p = StreamName.eventually_periodic(head, cycle)
    fuel = len(head) + len(cycle) + 3
    res = e_function(p, fuel)
    assert res.point == e_oracle(head, cycle)
    seen = p.at(fuel)
    for t in range(1, fuel + 1):
        assert res.thresholds[t] == _thresh_bruteforce(seen[:t])
    # emitted enumerations only grow
    em = [k for k in res.emitted if k is not None]
    assert all(a >= b for a, b in zip(em, em[1:]))
    assert res.shrink_stages == [t for t in range(1, fuel + 1)
                                 if res.thresholds[t] > min(res.thresholds[1:t + 1])]


def test_omega_opens_enumeration():
    assert omega_opens(0) == OmegaOpen("empty")
    assert omega_opens(1) == OmegaOpen("whole")
    assert omega_opens(5) == OmegaOpen("contains", 3)
    assert OmegaPlusOnePoint(2) in omega_opens(5)
    assert OmegaPlusOnePoint(None) in omega_opens(1)
    assert OmegaPlusOnePoint(None) not in omega_opens(2)


def test_e_preimage_verdicts():
    U = OmegaOpen("contains", 0)
    D = e_preimage(U)
    assert delta2_verdict(D, baire_point((0, 1), (0,)), 12) == 1
    assert delta2_verdict(D, baire_point((), (0,)), 12) == 0
    assert delta2_verdict(D, baire_point((2,), (0,)), 12) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), max_size=3), st.lists(st.integers(0, 5), min_size=1, max_size=2),
       st.integers(0, 6))
def test_e_preimage_bruteforce(head, cycle, k):
    D = e_preimage(OmegaOpen("contains", k))
    want = int(k in e_oracle(head, cycle))
    # pieces are indexed by pairs (m, j); the largest relevant one is (5, 4) = 49
    assert delta2_verdict(D, baire_point(head, cycle), 60) == want


def test_whole_and_empty_preimages():
    p = baire_point((3,), (1,))
    assert delta2_verdict(e_preimage(OmegaOpen("whole")), p, 6) == 1
    assert delta2_verdict(e_preimage(OmegaOpen("empty")), p, 6) == 0


def test_step_and_staircase_oracles():
    assert examples.step_oracle(Fraction(1, 2)) == 1
    assert examples.step_oracle(Fraction(1, 3)) == 0
    assert examples.staircase_oracle(Fraction(1, 2)) == Fraction(1, 2)
    assert examples.identity_oracle(Fraction(2, 7)) == Fraction(2, 7)
