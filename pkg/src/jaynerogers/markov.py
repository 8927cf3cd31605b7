"""Stage-approximated jump, limit names, and the translation between
tables of two-sided preimages and limit computations of the jump."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .machines import tree_word
from .spaces import (CANTOR, YES, Ball, ClosedSetName, Delta2SetName, OpenSetName, PointName,
                     delta2_stage_verdicts, member_open)
from .streams import BINARY, StreamName


def _ball_word(ball: Ball, fuel: int) -> tuple:
    """The cylinder word of a closed Cantor ball; an exact point is cut at ``fuel``."""
    if ball.radius == 0:
        c = tuple(ball.center)
        return (c + (0,) * fuel)[:fuel]
    return CANTOR.cylinder_word(ball)


def _extends(v: Sequence, w: Sequence) -> bool:
    return len(v) >= len(w) and tuple(v[: len(w)]) == tuple(w)


class CylinderOpen(OpenSetName):
    """A union of cylinders; ``schedule`` optionally delays each word to a stage."""

    space = CANTOR

    def __init__(self, words: Sequence[Sequence[int]], schedule: Sequence[int] | None = None):
        self.words = tuple(tuple(w) for w in words)
        self.schedule = tuple(schedule) if schedule is not None else (0,) * len(self.words)

    def contains(self, ball, fuel):
        v = _ball_word(ball, fuel)
        return any(t <= fuel and _extends(v, w) for w, t in zip(self.words, self.schedule))

    def __repr__(self):
        return "CylinderOpen(" + " ".join("".join(map(str, w)) or "e" for w in self.words) + ")"


class CylinderClosed(ClosedSetName):
    """A finite union of cylinders as a closed set."""

    space = CANTOR

    def __init__(self, words: Sequence[Sequence[int]]):
        self.words = tuple(tuple(w) for w in words)

    def excludes(self, ball, fuel):
        v = _ball_word(ball, fuel)
        return not any(_extends(v, w) or _extends(w, v) for w in self.words)


class OpenEnumeration:
    """A total listing n -> U(n) of open subsets of Cantor space."""

    label = ""

    def U(self, n: int) -> OpenSetName:
        raise NotImplementedError

    def decided_by(self, n: int) -> int | None:
        """A stage after which non-membership is also settled, when known."""
        return None


class CylinderEnumeration(OpenEnumeration):
    """U(n) = [w_n], with w_n the n-th binary word in breadth-first order."""

    label = "cylinders"

    def __init__(self):
        self._cache: dict[int, CylinderOpen] = {}

    def word(self, n: int) -> tuple:
        return tree_word(n)

    def U(self, n):
        if n not in self._cache:
            self._cache[n] = CylinderOpen([self.word(n)])
        return self._cache[n]

    def decided_by(self, n):
        return len(self.word(n))


class ListedEnumeration(OpenEnumeration):
    """Finitely many listed opens, each a union of staged cylinders; the rest are empty."""

    def __init__(self, entries: dict[int, Sequence[tuple[Sequence[int], int]]], label: str = "listed"):
        self.entries = {n: [(tuple(w), t) for w, t in ws] for n, ws in entries.items()}
        self.label = label

    def U(self, n):
        ws = self.entries.get(n, [])
        return CylinderOpen([w for w, _ in ws], [t for _, t in ws])


def jump_approx(p: StreamName, enum: OpenEnumeration, i: int, stage: int) -> int:
    """Stage approximation of J(p)(i): 1 once U_i is seen to contain p."""
    x = PointName.sequence(p, CANTOR)
    return 1 if member_open(enum.U(i), x, stage) is YES else 0


def jump_oracle(p: StreamName, i: int, enum: CylinderEnumeration | None = None) -> int:
    """Prefix match against the cylinder enumeration."""
    w = tree_word(i) if enum is None else enum.word(i)
    return 1 if tuple(p.take(len(w))) == w else 0


class LimitName:
    """Stage approximations to an infinite binary sequence.

    ``bit(n, stage)`` gives position n at a stage; ``approx(stage)`` lists
    positions below ``width`` (default: the stage itself).
    """

    def __init__(self, bit: Callable[[int, int], int], width: int | None = None, label: str = ""):
        self._bit = bit
        self.width = width
        self.label = label

    def bit(self, n: int, stage: int) -> int:
        return self._bit(n, stage)

    def approx(self, stage: int) -> tuple:
        w = stage if self.width is None else self.width
        return tuple(self.bit(n, stage) for n in range(w))

    def history(self, n: int, fuel: int) -> list[int]:
        return [self.bit(n, t) for t in range(fuel + 1)]

    def limit(self, n: int, fuel: int) -> int:
        return self.bit(n, fuel)


def jump_limit_name(p: StreamName, enum: OpenEnumeration) -> LimitName:
    return LimitName(lambda n, t: jump_approx(p, enum, n, t), label="jump")


# -- tables ------------------------------------------------------------------------

Table = Callable[[int], Delta2SetName]


def _memo_table(make: Callable[[int], Delta2SetName]) -> Table:
    cache: dict[int, Delta2SetName] = {}

    def table(n):
        if n not in cache:
            cache[n] = make(n)
        return cache[n]

    return table


def _clopen(words, label) -> Delta2SetName:
    return Delta2SetName.clopen_like(CANTOR, CylinderClosed(words), CylinderOpen(words), label)


def identity_table(enum: CylinderEnumeration | None = None) -> Table:
    enum = enum or CylinderEnumeration()
    return _memo_table(lambda n: _clopen([enum.word(n)], f"[{enum.word(n)}]"))


def negation_table(enum: CylinderEnumeration | None = None) -> Table:
    """Preimages under bitwise negation: [w] pulls back to [not w]."""
    enum = enum or CylinderEnumeration()
    return _memo_table(lambda n: _clopen([tuple(1 - b for b in enum.word(n))], f"neg[{enum.word(n)}]"))


def constant_table(q: Sequence[int] = (), enum: CylinderEnumeration | None = None) -> Table:
    """Preimages under the constant map to q 0 0 0 ...: everything or nothing."""
    enum = enum or CylinderEnumeration()
    q = tuple(q)

    def make(n):
        w = enum.word(n)
        inside = (q + (0,) * len(w))[: len(w)] == w
        return _clopen([()] if inside else [], "whole" if inside else "empty")

    return _memo_table(make)


TABLES = {"identity": identity_table, "negation": negation_table, "constant": constant_table}


def low_name_from_markov(table: Table, p: StreamName, width: int | None = None) -> LimitName:
    """Position n runs the two-sided verdict procedure for table(n) at p."""
    x = PointName.sequence(p, CANTOR)
    runs: dict[int, list[int]] = {}

    def bit(n, t):
        got = runs.get(n)
        if got is None or len(got) <= t:
            runs[n] = got = delta2_stage_verdicts(table(n), x, max(t, 2 * len(got or ())))
        return got[t]

    return LimitName(bit, width, "low")


# -- from limit computations back to two-sided preimages ----------------------------------

class _StaysAt(ClosedSetName):
    """{p : position n of lowrun(p) equals ``value`` at every stage >= t}.

    A cylinder [w] is excluded once some stage s in [t, |w|] shows the
    other value; stage s only reads s symbols, so it is the same for all
    of [w].
    """

    space = CANTOR

    def __init__(self, probe: "_Probe", n: int, t: int, value: int):
        self.probe, self.n, self.t, self.value = probe, n, t, value

    def excludes(self, ball, fuel):
        w = _ball_word(ball, fuel)
        return self.probe.seen(w, self.n, self.t, min(fuel, len(w)), 1 - self.value)


class _LeavesAt(OpenSetName):
    """Complement of the matching ``_StaysAt``."""

    space = CANTOR

    def __init__(self, probe: "_Probe", n: int, t: int, value: int):
        self.probe, self.n, self.t, self.value = probe, n, t, value

    def contains(self, ball, fuel):
        w = _ball_word(ball, fuel)
        return self.probe.seen(w, self.n, self.t, min(fuel, len(w)), 1 - self.value)


@dataclass
class _Probe:
    lowrun: Callable[[StreamName], LimitName]
    names: dict = field(default_factory=dict)
    bits: dict = field(default_factory=dict)

    def bit(self, w: tuple, n: int, s: int) -> int:
        key = (w[:s], n)
        if key not in self.bits:
            name = self.names.get(w[:s])
            if name is None:
                name = self.names[w[:s]] = self.lowrun(StreamName.finite(w[:s], BINARY))
            self.bits[key] = name.bit(n, s)
        return self.bits[key]

    def seen(self, w: tuple, n: int, lo: int, hi: int, value: int) -> bool:
        return any(self.bit(w, n, s) == value for s in range(lo, hi + 1))


def markov_from_low(lowrun: Callable[[StreamName], LimitName], enum: OpenEnumeration | None, n: int,
                    probe: _Probe | None = None) -> Delta2SetName:
    """Two-sided preimage of U_n from a limit computation of the jump.

    The union side lists C_t = {position n stays 1 from stage t}; the
    intersection side lists V_t = {position n is 1 at some stage >= t},
    the complements of the sets where it stays 0.
    """
    probe = probe or _Probe(lowrun)
    return Delta2SetName(CANTOR, lambda t: _StaysAt(probe, n, t, 1), lambda t: _LeavesAt(probe, n, t, 0),
                         f"from-low[{n}]")


def markov_table_from_low(lowrun: Callable[[StreamName], LimitName], enum: OpenEnumeration | None = None) -> Table:
    probe = _Probe(lowrun)
    return _memo_table(lambda n: markov_from_low(lowrun, enum, n, probe))


# -- the relation L -----------------------------------------------------------------------

@dataclass
class LReport:
    positions: list
    counterexamples: list
    unstable: list

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def check_l_instance(ps: Sequence[StreamName], q: StreamName, enum: OpenEnumeration, depth: int,
                     window: int | None = None) -> LReport:
    """Finite evidence on whether lim p_i = J(q).

    Position n < depth takes p_i(n) for each listed i; it counts as stable
    when the last ``window`` values agree. A jump bit of 1 is decided; a 0
    only once the enumeration says so.
    """
    ps = list(ps)
    k = max(1, len(ps) // 2) if window is None else window
    positions, bad, unstable = [], [], []
    for n in range(depth):
        vals = [p.at(n + 1)[n] for p in ps]
        tail = vals[-k:]
        stable = bool(tail) and all(v == tail[-1] for v in tail)
        j = jump_approx(q, enum, n, depth)
        settle = enum.decided_by(n)
        decided = j == 1 or (settle is not None and settle <= depth)
        limit = tail[-1] if tail else None
        positions.append({"n": n, "limit": limit, "stable": stable, "jump": j, "decided": decided})
        if not stable:
            unstable.append(n)
        elif decided and limit != j:
            bad.append(n)
    return LReport(positions, bad, unstable)


def jump_approximation_sequence(q: StreamName, enum: OpenEnumeration, count: int) -> list[StreamName]:
    """p_i = the stage-i jump approximation of q, as streams."""
    return [StreamName.from_function(lambda n, i=i: jump_approx(q, enum, n, i), BINARY, f"J_{i}")
            for i in range(count)]
