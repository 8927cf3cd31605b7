"""A quick end-to-end check run by ``jaynerogers selftest``."""
from __future__ import annotations

import random
from fractions import Fraction

from . import examples, machines
from .jayne_rogers import eval_delta2, value_of
from .markov import CylinderEnumeration, identity_table, jump_approx, jump_oracle, low_name_from_markov
from .probes import run_probes
from .spaces import signed_digit_point
from .streams import BINARY, StreamName


def _wkl(rng) -> bool:
    for _ in range(5):
        sched, _ = examples.random_schedule(rng, depth=8, events=20, max_stage=30)
        inp = machines.schedule_input(sched)
        cells = sum(len(ws) for ws in sched.values())
        tree = machines.SurvivingTree(machines.wkl_machine(), inp, (0, 1), cells + 10)
        got = machines.LeftmostApproximation(tree).output(10 * (cells + 10))
        if got is None or tuple(got[:8]) != examples.leftmost_path_bruteforce(sched, 8):
            return False
    return True


def _step() -> bool:
    f = examples.step_delta2()
    for x in ("1/4", "3/4"):
        out = eval_delta2(f, signed_digit_point(Fraction(x)), 40)
        v = value_of(out, 10)
        if v is None or abs(v - examples.step_oracle(Fraction(x))) > Fraction(1, 1024):
            return False
    return True


def _jump(rng) -> bool:
    enum = CylinderEnumeration()
    table = identity_table(enum)
    for _ in range(10):
        p = StreamName.finite([rng.randrange(2) for _ in range(20)], BINARY)
        low = low_name_from_markov(table, p)
        for i in range(15):
            want = jump_oracle(p, i)
            if jump_approx(p, enum, i, 12) != want or low.bit(i, 12) != want:
                return False
    return True


def run_selftest(seed: int = 0, probes: int = 200, verbose: bool = False) -> int:
    rng = random.Random(seed)
    rep = run_probes(probes, seed)
    checks = [("probes", rep.ok), ("wkl", _wkl(rng)), ("step", _step()), ("jump", _jump(rng))]
    if verbose:
        for kind, n in sorted(rep.counts.items()):
            print(f"probe {kind}: {n}")
        for v in rep.violations:
            print(f"violation: {v}")
    for name, good in checks:
        print(f"{name}: {'ok' if good else 'FAIL'}")
    return 0 if all(good for _, good in checks) else 1
