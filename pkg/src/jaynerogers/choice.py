"""Closed choice on the naturals and on Cantor space, and reductions to them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .machines import AdviceSpace, Emit, Ndtm, Progress, RevisingOutput, SurvivingTree, _Reviser
from .spaces import TreeClosed
from .streams import ConfigurationError, StreamName


class NatChoiceInstance:
    """A closed subset of the naturals given by a monotone rejection predicate."""

    def __init__(self, rejected: Callable[[int, int], bool], label: str = ""):
        self._rejected = rejected
        self.label = label

    def rejected(self, n: int, fuel: int) -> bool:
        return self._rejected(n, fuel)

    def members(self, bound: int, fuel: int) -> list[int]:
        return [n for n in range(bound) if not self.rejected(n, fuel)]

    @classmethod
    def from_schedule(cls, schedule: dict[int, Iterable[int]]) -> "NatChoiceInstance":
        first: dict[int, int] = {}
        for t, ns in schedule.items():
            for n in ns:
                first[n] = min(t, first.get(n, t))
        inst = cls(lambda n, fuel: n in first and first[n] <= fuel, "schedule")
        inst.schedule = {t: sorted(ns) for t, ns in schedule.items()}
        return inst


@dataclass
class CantorChoiceInstance:
    tree: TreeClosed

    def rejected(self, w, fuel: int) -> bool:
        return self.tree.rejected(w, fuel)


def c_nat_solver(inst: NatChoiceInstance, fuel: int) -> RevisingOutput:
    """Follow the least natural <= t not yet rejected; Emit (n,) when it
    becomes the candidate and Reset whenever it is rejected."""
    rev = _Reviser()
    dead: set[int] = set()
    for t in range(fuel + 1):
        c = None
        alive = 0
        for k in range(t + 1):
            if k in dead:
                continue
            if inst.rejected(k, t):
                dead.add(k)
                continue
            alive += 1
            if c is None:
                c = k
        rev.stage(t, c, (c,) if c is not None else (), alive)
    return rev.finish(fuel)


class StagedPrefixes:
    """Stage-indexed finite outputs that need not extend each other."""

    def __init__(self, at: Callable[[int], tuple | None], label: str = ""):
        self._at = at
        self.label = label
        self._cache: dict[int, object] = {}

    def at(self, fuel: int):
        if fuel not in self._cache:
            self._cache[fuel] = self._at(fuel)
        return self._cache[fuel]

    def settled(self, k: int, fuel: int, window: int | None = None) -> bool:
        """Whether the first k symbols agree over the last ``window`` stages."""
        w = fuel // 2 if window is None else window
        ref = self.at(fuel)
        if ref is None or len(ref) < k:
            return False
        for t in range(max(0, fuel - w), fuel):
            got = self.at(t)
            if got is None or tuple(got[:k]) != tuple(ref[:k]):
                return False
        return True


def c_cantor_solver(inst: CantorChoiceInstance, depth: int = 64) -> StagedPrefixes:
    """Stage t: the leftmost unrejected node of length min(t, depth)."""
    return StagedPrefixes(lambda t: inst.tree.leftmost(min(t, depth), t), "leftmost")


@dataclass
class WeihrauchReduction:
    """f <= g via x -> H(<x, G(K(x))>). With ``strong`` set, H receives
    None in place of x."""

    K: Callable
    H: Callable
    strong: bool = False
    label: str = ""


def apply_reduction(r: WeihrauchReduction, g_solver: Callable, x):
    solution = g_solver(r.K(x))
    return r.H(None if r.strong else x, solution)


def identity_reduction() -> WeihrauchReduction:
    return WeihrauchReduction(lambda x: x, lambda x, y: y, strong=True, label="id")


def candidate_history(sol: RevisingOutput) -> list:
    """Per-stage candidate read back from a C_N solver's emitted symbols."""
    hist = []
    cur = None
    by_stage: dict[int, list] = {}
    for t, ev in sol.trace:
        by_stage.setdefault(t, []).append(ev)
    for rec in sol.stages:
        for ev in by_stage.get(rec.stage, ()):
            if isinstance(ev, Emit):
                cur = ev.symbols[-1]
        hist.append(cur)
    return hist


def ndtm_to_choice_reduction(n: Ndtm, fuel: int | None = None, depth: int = 64) -> WeihrauchReduction:
    """K turns an input into the set of never-rejected advice; H replays the
    machine along the advice chosen by the solver.

    For Nat advice the solver is ``c_nat_solver`` (bound to ``fuel``); for
    Cantor advice it is ``c_cantor_solver`` at ``depth``.
    """
    if n.advice is AdviceSpace.NAT:
        def K(x: StreamName):
            return NatChoiceInstance(lambda k, t: n.rejected(x.at(t), k, t), "advice")

        def H(x: StreamName, sol: RevisingOutput):
            rev = _Reviser()
            for rec, c in zip(sol.stages, candidate_history(sol)):
                t = rec.stage
                out = n.run(x.at(t), c, t) if c is not None else None
                rev.stage(t, c, out.output if isinstance(out, Progress) else (), rec.survivors)
            return rev.finish(sol.stages[-1].stage if sol.stages else 0)

        return WeihrauchReduction(K, H, False, f"{n.label} <= C_N")
    if n.advice is AdviceSpace.CANTOR:
        def K(x: StreamName):
            tree = SurvivingTree(n, x, (0, 1), depth)
            return CantorChoiceInstance(TreeClosed(tree.node_rejected, (0, 1), depth_cap=depth))

        def H(x: StreamName, sol: StagedPrefixes):
            def at(t):
                w = sol.at(t)
                if w is None:
                    return None
                out = n.run(x.at(t), w, t)
                return out.output if isinstance(out, Progress) else ()

            return StagedPrefixes(at, "replay")

        return WeihrauchReduction(K, H, False, f"{n.label} <= C_2N")
    raise ConfigurationError("only Nat and Cantor advice reduce to a single choice problem")


def nat_solver(fuel: int) -> Callable[[NatChoiceInstance], RevisingOutput]:
    return lambda inst: c_nat_solver(inst, fuel)


def cantor_solver(depth: int = 64) -> Callable[[CantorChoiceInstance], StagedPrefixes]:
    return lambda inst: c_cantor_solver(inst, depth)
