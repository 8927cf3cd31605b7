"""Shipped functions, trees and the function e into omega+1."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .jayne_rogers import (Delta2FunctionName, Piece, PiecewiseName, identity_delta2,
                           piecewise_constant_delta2)
from .spaces import (BAIRE, UNIT, Ball, ClosedSetName, Delta2SetName, EmptyClosed, EmptyOpen,
                     Interval, OpenSetName, PointMap, PointName, WholeClosed, WholeOpen, closed_interval, pow2)
from .streams import StreamName, cantor_unpair

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


# -- real functions --------------------------------------------------------------

def step_oracle(x) -> Fraction:
    return Fraction(1) if Fraction(x) >= HALF else Fraction(0)


def staircase_oracle(x) -> Fraction:
    x = Fraction(x)
    if x < THIRD:
        return Fraction(0)
    if x < 2 * THIRD:
        return HALF
    return Fraction(1)


def identity_oracle(x) -> Fraction:
    return Fraction(x)


ORACLES = {"step": step_oracle, "staircase": staircase_oracle, "identity": identity_oracle}


def step_delta2() -> Delta2FunctionName:
    """The indicator of [1/2, 1] on [0, 1]."""
    return piecewise_constant_delta2([(Interval(0, HALF, True, False), 0), (Interval(HALF, 1), 1)],
                                     UNIT, UNIT, "step")


def staircase_delta2() -> Delta2FunctionName:
    return piecewise_constant_delta2([(Interval(0, THIRD, True, False), 0),
                                      (Interval(THIRD, 2 * THIRD, True, False), HALF),
                                      (Interval(2 * THIRD, 1), 1)], UNIT, UNIT, "staircase")


def id_delta2() -> Delta2FunctionName:
    return identity_delta2(UNIT, "identity")


def _const_piece(lo, hi, v, label) -> Piece | None:
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        return None
    return Piece(closed_interval(lo, hi), PointMap.constant(UNIT, v), label)


def step_piecewise() -> PiecewiseName:
    """Cover [1/2, 1] (value 1) and [0, 1/2 - 2^-k], k >= 1 (value 0)."""

    def piece(i):
        if i == 0:
            return _const_piece(HALF, 1, 1, "[1/2,1]")
        return _const_piece(0, HALF - pow2(-i), 0, f"[0,1/2-2^-{i}]")

    return PiecewiseName(UNIT, UNIT, piece, None, step_oracle, "step")


def staircase_piecewise() -> PiecewiseName:
    """Values 0, 1/2, 1 on [0,1/3), [1/3,2/3), [2/3,1]; piece 3k+v is the
    k-th closed part of step v."""

    def piece(i):
        k, v = divmod(i, 3)
        if v == 0:
            return _const_piece(0, THIRD - pow2(-k), 0, f"[0,1/3-2^-{k}]")
        if v == 1:
            return _const_piece(THIRD, 2 * THIRD - pow2(-k), HALF, f"[1/3,2/3-2^-{k}]")
        return _const_piece(2 * THIRD, 1, 1, "[2/3,1]") if k == 0 else None

    return PiecewiseName(UNIT, UNIT, piece, None, staircase_oracle, "staircase")


def identity_piecewise() -> PiecewiseName:
    return PiecewiseName.of(UNIT, UNIT, [Piece(WholeClosed(UNIT), PointMap.identity(UNIT), "[0,1]")],
                            identity_oracle, "identity")


PIECEWISE = {"step": step_piecewise, "staircase": staircase_piecewise, "identity": identity_piecewise}
DELTA2 = {"step": step_delta2, "staircase": staircase_delta2, "identity": id_delta2}


# -- trees -----------------------------------------------------------------------------

def random_schedule(rng: random.Random, depth: int = 14, events: int = 40, max_stage: int = 60,
                    protect: Sequence[int] | None = None) -> tuple[dict[int, list], tuple]:
    """A random rejection schedule on nodes of length <= depth that never
    rejects a prefix of the protected branch (``protect`` followed by 0s)."""
    if protect is None:
        protect = tuple(rng.randrange(2) for _ in range(depth))
    protect = tuple(protect)
    sched: dict[int, list] = {}
    for _ in range(events):
        d = rng.randrange(1, depth + 1)
        w = tuple(rng.randrange(2) for _ in range(d))
        if w == protect[:d]:
            continue
        sched.setdefault(rng.randrange(max_stage), []).append(w)
    return sched, protect


def leftmost_path_bruteforce(schedule: dict[int, Sequence], depth: int) -> tuple:
    """Leftmost word of length ``depth`` with no rejected prefix, by
    enumerating all words in lexicographic order."""
    rejected = {tuple(w) for ws in schedule.values() for w in ws}
    for v in range(2 ** depth):
        w = tuple((v >> (depth - 1 - i)) & 1 for i in range(depth))
        if not any(w[:k] in rejected for k in range(depth + 1)):
            return w
    return None


# -- omega + 1 and the function e ---------------------------------------------------------

@dataclass(frozen=True)
class OmegaPlusOnePoint:
    """An upward closed set of naturals {i >= threshold}; None is the empty set."""

    threshold: int | None

    def __contains__(self, i: int) -> bool:
        return self.threshold is not None and i >= self.threshold

    def members(self, bound: int) -> tuple:
        return tuple(i for i in range(bound) if i in self)


@dataclass(frozen=True)
class OmegaOpen:
    """A Scott open subset of omega+1: ``kind`` is "empty", "whole", or
    "contains" (the points containing ``k``)."""

    kind: str
    k: int = 0

    def __contains__(self, point: OmegaPlusOnePoint) -> bool:
        if self.kind == "empty":
            return False
        if self.kind == "whole":
            return True
        return self.k in point


def omega_opens(n: int) -> OmegaOpen:
    """Enumeration of all Scott opens: empty, whole, then k in A for k = 0, 1, ..."""
    if n == 0:
        return OmegaOpen("empty")
    if n == 1:
        return OmegaOpen("whole")
    return OmegaOpen("contains", n - 2)


def e_threshold(m: int) -> int:
    """Least member of e(p) when max p = m."""
    return m + 1 if m % 2 == 0 else m - 1


@dataclass
class EResult:
    thresholds: list  # tentative threshold after each stage
    emitted: list  # monotone enumeration emitted after each stage (as thresholds)
    shrink_stages: list = field(default_factory=list)

    @property
    def point(self) -> OmegaPlusOnePoint:
        return OmegaPlusOnePoint(self.thresholds[-1] if self.thresholds else None)

    def enumeration(self, stage: int, bound: int) -> tuple:
        k = self.emitted[stage]
        return () if k is None else tuple(range(k, bound))


def e_function(p: StreamName, fuel: int) -> EResult:
    """Stage t sees p(0..t-1); with max m so far the tentative value is
    {i >= m+1} (m even) or {i >= m-1} (m odd).

    A revision that would drop already enumerated members is not emitted;
    its stage is recorded in ``shrink_stages``.
    """
    seen = p.at(fuel)
    thresholds, emitted, shrink = [], [], []
    current = None
    m = None
    for t in range(fuel + 1):
        if t > 0 and t - 1 < len(seen):
            m = seen[t - 1] if m is None else max(m, seen[t - 1])
        k = None if m is None else e_threshold(m)
        thresholds.append(k)
        if k is not None:
            if current is None or k <= current:
                current = k
            else:
                shrink.append(t)
        emitted.append(current)
    return EResult(thresholds, emitted, shrink)


def e_oracle(head: Sequence[int], cycle: Sequence[int] | None = None) -> OmegaPlusOnePoint:
    """e on an eventually periodic input, or on an unbounded one (cycle None)."""
    if cycle is None:
        return OmegaPlusOnePoint(0)
    m = max(list(head) + list(cycle))
    return OmegaPlusOnePoint(e_threshold(m))


class _MaxAt(ClosedSetName):
    """{p : p(j) = m and p(i) <= m for all i}, a closed subset of Baire space."""

    space = BAIRE

    def __init__(self, m: int, j: int):
        self.m, self.j = m, j

    def excludes(self, ball, fuel):
        w = tuple(ball.center) if ball.radius == 0 else BAIRE.cylinder_word(ball)
        if ball.radius == 0:
            w = w[:fuel]
        if any(s > self.m for s in w):
            return True
        return len(w) > self.j and w[self.j] != self.m


class _Avoid(OpenSetName):
    space = BAIRE

    def __init__(self, closed: ClosedSetName):
        self.closed = closed

    def contains(self, ball, fuel):
        return self.closed.excludes(ball, fuel)


def e_preimage(U: OmegaOpen) -> Delta2SetName:
    """Two-sided presentation of the preimage of U under e.

    With S the finite set of maxima m whose value lies in U, the complement
    of the preimage is the union of {max p = m} over m outside S; the
    intersection side avoids each closed piece of it. The union side lists
    the closed pieces of {max p in S}; it cannot cover the unbounded inputs,
    which lie in the preimage of every non-empty open.
    """
    if U.kind == "empty":
        return Delta2SetName(BAIRE, lambda i: EmptyClosed(BAIRE), lambda i: EmptyOpen(BAIRE), "empty")
    if U.kind == "whole":
        return Delta2SetName(BAIRE, lambda i: WholeClosed(BAIRE), lambda i: WholeOpen(BAIRE), "whole")
    k = U.k

    def good(m):
        return e_threshold(m) <= k

    def closed(i):
        m, j = cantor_unpair(i)
        return _MaxAt(m, j) if good(m) else EmptyClosed(BAIRE)

    def open(i):
        m, j = cantor_unpair(i)
        return WholeOpen(BAIRE) if good(m) else _Avoid(_MaxAt(m, j))

    return Delta2SetName(BAIRE, closed, open, f"e^-1({k} in A)")


@dataclass
class EDelta2Name:
    """Preimages under e of the countably many Scott opens of omega+1."""

    def open(self, n: int) -> OmegaOpen:
        return omega_opens(n)

    def inverse(self, U: OmegaOpen) -> Delta2SetName:
        return e_preimage(U)


def e_delta2_name() -> EDelta2Name:
    return EDelta2Name()


def baire_point(head: Sequence[int], cycle: Sequence[int] | None = None) -> PointName:
    """Eventually periodic point of Baire space; ``cycle`` None gives p(j) = j."""
    if cycle is None:
        s = StreamName.from_function(lambda j: j, label="id")
    else:
        s = StreamName.eventually_periodic(head, cycle)
    return PointName.sequence(s, BAIRE)
