"""Randomized monotonicity and permanence probes over the shipped objects.

Each probe draws an object, a finite input with an extension, and two
fuels f <= f'; it then checks that information found at (input, f) is
still there at (extension, f').
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import examples, machines
from .choice import NatChoiceInstance, c_nat_solver
from .markov import CylinderEnumeration, jump_approx
from .spaces import (CANTOR, SIGNED_DIGIT, UNIT, YES, Ball, BallOpen, PointName, TreeClosed,
                     closed_image_under_representation, closed_interval, delta2_stage_verdicts, member_open,
                     pow2)
from .streams import BINARY, PrefixTransformer, StreamName, compose, is_prefix


@dataclass
class ProbeReport:
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, kind: str, good: bool, **info):
        self.counts[kind] = self.counts.get(kind, 0) + 1
        if not good:
            self.violations.append({"kind": kind, **info})


def _word(rng, n, alphabet=(0, 1)):
    return tuple(rng.choice(alphabet) for _ in range(n))


def _fuels(rng, cap=24):
    f = rng.randrange(cap)
    return f, f + rng.randrange(cap)


def _sub_ball(rng, b: Ball) -> Ball:
    """A random dyadic ball inside ``b``."""
    r = b.radius / 2 ** rng.randrange(0, 4)
    slack = b.radius - r
    steps = 8
    c = b.center - slack + 2 * slack * Fraction(rng.randrange(steps + 1), steps)
    return Ball(c, r)


def _unit_ball(rng) -> Ball:
    k = rng.randrange(1, 7)
    c = Fraction(rng.randrange(2 ** k + 1), 2 ** k)
    return Ball(c, pow2(-rng.randrange(k, k + 4)))


# -- individual probes -------------------------------------------------------------

def probe_transformer(rng, rep: ProbeReport):
    base = [PrefixTransformer.identity(), PrefixTransformer.symbol_map(lambda s: 1 - s, "neg"),
            PrefixTransformer.delayed(rng.randrange(1, 4))]
    t = rng.choice(base)
    if rng.random() < 0.5:
        t = compose(t, rng.choice(base))
    w = _word(rng, rng.randrange(12))
    w2 = w + _word(rng, rng.randrange(6))
    f, g = _fuels(rng)
    a, b = t.apply(w, f), t.apply(w2, g)
    rep.record("transformer", is_prefix(a, b), label=t.label, input=w, ext=w2, fuels=(f, g))


def probe_machine(rng, rep: ProbeReport):
    choice = rng.randrange(3)
    if choice == 0:
        m, advice = machines.copy_machine(), ()
    elif choice == 1:
        m = machines.first_one_machine()
        advice = (1,) * rng.randrange(5) + (0,)
    else:
        m = machines.wkl_tape_machine()
        advice = _word(rng, rng.randrange(1, 8))
    w = _word(rng, rng.randrange(10))
    w2 = w + _word(rng, rng.randrange(6))
    f, g = _fuels(rng, 40)
    fill = 0 if choice == 1 else ...
    a = m.run(w, advice, f, fill)
    b = m.run(w2, advice, g, fill)
    if isinstance(a, machines.Halted):
        good = isinstance(b, machines.Halted)
        kind = "machine-halt"
    elif isinstance(b, machines.Halted):
        good, kind = True, "machine-output"
    else:
        good, kind = is_prefix(a.output, b.output), "machine-output"
    rep.record(kind, good, machine=m.label, input=w, ext=w2, advice=advice, fuels=(f, g))


def probe_ndtm_rejection(rng, rep: ProbeReport):
    sched, _ = examples.random_schedule(rng, depth=6, events=8, max_stage=10)
    cells = machines.schedule_input(sched).at(64)
    n = machines.wkl_machine()
    k = rng.randrange(len(cells) + 1)
    inp, inp2 = cells[:k], cells[: k + rng.randrange(4)]
    w = _word(rng, rng.randrange(1, 8))
    w2 = w + _word(rng, rng.randrange(4))
    f, g = _fuels(rng)
    if n.rejected(inp, w, f):
        rep.record("ndtm-rejection", n.rejected(inp2, w2, g), input=inp, advice=w, ext=w2, fuels=(f, g))
    else:
        rep.record("ndtm-rejection", True)


def probe_tree(rng, rep: ProbeReport):
    sched, _ = examples.random_schedule(rng, depth=8, events=12, max_stage=20)
    tree = TreeClosed.from_schedule(sched)
    w = _word(rng, rng.randrange(9))
    w2 = w + _word(rng, rng.randrange(4))
    f, g = _fuels(rng)
    good = not tree.rejected(w, f) or tree.rejected(w2, g)
    rep.record("tree-rejection", good, node=w, ext=w2, fuels=(f, g))
    b, b2 = CANTOR.cylinder(w), CANTOR.cylinder(w2)
    good = not tree.excludes(b, f) or tree.excludes(b2, g)
    rep.record("closed-exclusion", good, set="tree", ball=b, ext=b2, fuels=(f, g))


def probe_closed(rng, rep: ProbeReport):
    which = rng.randrange(3)
    if which == 0:
        lo = Fraction(rng.randrange(9), 8)
        A, label = closed_interval(lo, min(Fraction(1), lo + Fraction(rng.randrange(5), 8))), "interval"
        b = _unit_ball(rng)
        b2 = _sub_ball(rng, b)
    elif which == 1:
        sched, _ = examples.random_schedule(rng, depth=5, events=6, max_stage=8)
        A = closed_image_under_representation(TreeClosed.from_schedule(sched, alphabet=(-1, 0, 1)), SIGNED_DIGIT)
        label = "image"
        b = _unit_ball(rng)
        b2 = _sub_ball(rng, b)
    else:
        A, label = examples.step_piecewise().piece(rng.randrange(6)).closed, "piece"
        b = _unit_ball(rng)
        b2 = _sub_ball(rng, b)
    f, g = _fuels(rng, 12)
    good = not A.excludes(b, f) or A.excludes(b2, g)
    rep.record("closed-exclusion", good, set=label, ball=b, ext=b2, fuels=(f, g))


def probe_open(rng, rep: ProbeReport):
    which = rng.randrange(3)
    if which == 0:
        U = BallOpen.of(UNIT, [Ball(Fraction(rng.randrange(9), 8), Fraction(rng.randrange(1, 4), 8))])
        label = "ball"
    elif which == 1:
        f = examples.step_delta2()
        V = BallOpen.of(UNIT, [Ball(Fraction(rng.randrange(3), 2), Fraction(1, 4))])
        U, label = f.inverse(V).open(rng.randrange(6)), "step-preimage"
    else:
        U, label = closed_interval(Fraction(1, 4), Fraction(3, 4)).complement(), "complement"
    b = _unit_ball(rng)
    b2 = _sub_ball(rng, b)
    f, g = _fuels(rng, 12)
    good = not U.contains(b, f) or U.contains(b2, g)
    rep.record("open-containment", good, set=label, ball=b, ext=b2, fuels=(f, g))


def probe_verdicts(rng, rep: ProbeReport):
    which = rng.randrange(4)
    f, g = _fuels(rng, 16)
    if which == 0:
        bits = _word(rng, 24)
        p = StreamName.finite(bits, BINARY)
        i = rng.randrange(32)
        enum = CylinderEnumeration()
        good = jump_approx(p, enum, i, f) <= jump_approx(p, enum, i, g)
        rep.record("jump-permanence", good, p=bits, i=i, fuels=(f, g))
    elif which == 1:
        x = PointName.exact(UNIT, Fraction(rng.randrange(17), 16))
        U = BallOpen.of(UNIT, [Ball(Fraction(rng.randrange(9), 8), Fraction(1, 8))])
        good = member_open(U, x, f) is not YES or member_open(U, x, g) is YES
        rep.record("open-verdict", good, fuels=(f, g))
    elif which == 2:
        sched = {rng.randrange(12): [rng.randrange(6)] for _ in range(rng.randrange(5))}
        inst = NatChoiceInstance.from_schedule(sched)
        a, b = c_nat_solver(inst, f), c_nat_solver(inst, g)
        good = [e for e in b.trace if e[0] <= f] == a.trace
        rep.record("trace-permanence", good, schedule=sched, fuels=(f, g))
    else:
        D = examples.step_delta2().inverse(BallOpen.of(UNIT, [Ball(Fraction(1), Fraction(1, 4))]))
        x = PointName.exact(UNIT, Fraction(rng.randrange(17), 16))
        a, b = delta2_stage_verdicts(D, x, f), delta2_stage_verdicts(D, x, g)
        rep.record("stage-verdicts", b[: f + 1] == a, point=x.label, fuels=(f, g))


def probe_e(rng, rep: ProbeReport):
    head = tuple(rng.randrange(6) for _ in range(rng.randrange(6)))
    cycle = tuple(rng.randrange(6) for _ in range(rng.randrange(1, 4)))
    res = examples.e_function(StreamName.eventually_periodic(head, cycle), 20)
    em = [k for k in res.emitted if k is not None]
    rep.record("e-enumeration", all(a >= b for a, b in zip(em, em[1:])), head=head, cycle=cycle)


PROBES = [probe_transformer, probe_machine, probe_ndtm_rejection, probe_tree, probe_closed, probe_open,
          probe_verdicts, probe_e]


def run_probes(count: int = 1000, seed: int = 0) -> ProbeReport:
    rng = random.Random(seed)
    rep = ProbeReport()
    for k in range(count):
        PROBES[k % len(PROBES)](rng, rep)
    return rep
