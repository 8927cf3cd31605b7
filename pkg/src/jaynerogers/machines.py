"""Type-2 machines, guess-and-verify machines and their deterministic executors.

A machine is anything with ``run(input, advice, fuel) -> RunOutcome``.
``TypeTwoMachine`` interprets a literal transition table over tapes;
``ProcedureMachine`` wraps a Python step function with the same contract.
Reaching HALT rejects the guess on the advice tape.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .spaces import Ball, MetricSpace, PointName, pow2
from .streams import ConfigurationError, StreamName

HALT = "HALT"
BLANK = "_"
ANY = "*"
MOVES = {"L": -1, "R": 1, "S": 0}


@dataclass(frozen=True)
class Halted:
    step: int


@dataclass(frozen=True)
class Progress:
    output: tuple
    input_use: int
    advice_use: int


RunOutcome = Halted | Progress


class AdviceSpace(enum.Enum):
    NAT = "Nat"
    CANTOR = "Cantor"
    NAT_CANTOR = "NatTimesCantor"
    BAIRE = "Baire"


def _sym(x) -> str:
    return str(x)


def _unsym(s: str):
    return int(s) if s.isdigit() else s


# -- literal machines ------------------------------------------------------------

@dataclass(frozen=True)
class Transition:
    state: str
    reads: tuple  # input, advice, work tapes
    target: str
    writes: tuple  # work tapes, then output ('_' = no output)
    moves: tuple  # input, advice, work tapes


class TypeTwoMachine:
    """Input, advice, ``work`` work tapes and a write-once output tape.

    Each step reads every head. A read beyond the supplied input or advice
    prefix pauses the run. Writes of ``*`` leave a work cell unchanged; an
    output write of ``_`` writes nothing, any other symbol is appended and
    the output head advances. The first matching transition wins.
    """

    def __init__(self, states: Iterable[str], alphabet: Iterable[str], work: int,
                 transitions: Sequence[Transition], start: str | None = None, label: str = ""):
        self.states = tuple(states)
        self.alphabet = frozenset(alphabet) | {BLANK}
        self.work = work
        self.label = label
        if HALT in self.states:
            self.states = tuple(s for s in self.states if s != HALT)
        if not self.states:
            raise ConfigurationError("machine needs at least one state")
        self.start = start or self.states[0]
        self.table: dict[str, list[Transition]] = {}
        known = set(self.states) | {HALT}
        for tr in transitions:
            if tr.state not in known or tr.target not in known:
                raise ConfigurationError(f"unknown state in {tr}")
            if tr.state == HALT:
                raise ConfigurationError("HALT has no outgoing transitions")
            if len(tr.reads) != 2 + work or len(tr.writes) != work + 1 or len(tr.moves) != 2 + work:
                raise ConfigurationError(f"wrong arity in transition {tr}")
            for s in tr.reads + tr.writes:
                if s != ANY and s not in self.alphabet:
                    raise ConfigurationError(f"symbol {s!r} not in alphabet")
            for m in tr.moves:
                if m not in MOVES:
                    raise ConfigurationError(f"bad move {m!r}")
            self.table.setdefault(tr.state, []).append(tr)
        self._memo: dict = {}

    def _match(self, state: str, reads: tuple) -> Transition:
        for tr in self.table.get(state, ()):
            if all(p == ANY or p == r for p, r in zip(tr.reads, reads)):
                return tr
        raise ConfigurationError(f"no transition from {state} on {reads}")

    def run(self, input: Sequence, advice: Sequence = (), fuel: int = 0, advice_fill=...) -> RunOutcome:
        """Simulate ``fuel`` steps on the given prefixes.

        ``advice_fill`` is the symbol on every advice cell past the supplied
        prefix; None means those cells are unknown and reading one pauses.
        By default an empty advice tape is blank and a non-empty one pauses.
        """
        if advice_fill is ...:
            advice_fill = BLANK if len(advice) == 0 else None
        inp = tuple(_sym(s) for s in input)
        adv = tuple(_sym(s) for s in advice)
        fill = None if advice_fill is None else _sym(advice_fill)
        key = (inp, adv, fill, fuel)
        got = self._memo.get(key)
        if got is not None:
            return got
        state = self.start
        hin = hadv = 0
        works = [dict() for _ in range(self.work)]
        heads = [0] * self.work
        out: list = []
        use_in = use_adv = 0
        result = None
        for step in range(1, fuel + 1):
            if hin >= len(inp):
                break
            if hadv >= len(adv) and fill is None:
                break
            a = adv[hadv] if hadv < len(adv) else fill
            use_in, use_adv = max(use_in, hin + 1), max(use_adv, hadv + 1)
            reads = (inp[hin], a) + tuple(works[i].get(heads[i], BLANK) for i in range(self.work))
            tr = self._match(state, reads)
            for i in range(self.work):
                w = tr.writes[i]
                if w != ANY:
                    works[i][heads[i]] = w
            if tr.writes[-1] not in (BLANK, ANY):
                out.append(_unsym(tr.writes[-1]))
            hin = max(0, hin + MOVES[tr.moves[0]])
            hadv = max(0, hadv + MOVES[tr.moves[1]])
            for i in range(self.work):
                heads[i] = max(0, heads[i] + MOVES[tr.moves[2 + i]])
            state = tr.target
            if state == HALT:
                result = Halted(step)
                break
        if result is None:
            result = Progress(tuple(out), use_in, use_adv)
        if len(self._memo) < 200_000:
            self._memo[key] = result
        return result

    # text format

    def to_text(self) -> str:
        lines = ["states: " + " ".join(self.states), "start: " + self.start,
                 "alphabet: " + " ".join(sorted(self.alphabet - {BLANK})),
                 f"tapes: {self.work}", "transitions:"]
        for st in self.states:
            for tr in self.table.get(st, ()):
                lines.append(f"{tr.state} {' '.join(tr.reads)} -> {tr.target} "
                             f"{' '.join(tr.writes)} {' '.join(tr.moves)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, label: str = "") -> "TypeTwoMachine":
        states = alphabet = None
        work = None
        start = None
        trans: list[Transition] = []
        in_trans = False
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head = line.split(":", 1)[0].strip()
            if ":" in line and head in ("states", "alphabet", "tapes", "start", "transitions"):
                body = line.split(":", 1)[1].split()
                in_trans = head == "transitions"
                if head == "states":
                    states = body
                elif head == "alphabet":
                    alphabet = body
                elif head == "start":
                    start = body[0] if body else None
                elif head == "tapes":
                    try:
                        work = int(body[0])
                    except (IndexError, ValueError):
                        raise ConfigurationError(f"line {lineno}: bad tapes section") from None
                continue
            if not in_trans or work is None:
                raise ConfigurationError(f"line {lineno}: unexpected {raw!r}")
            if "->" not in line:
                raise ConfigurationError(f"line {lineno}: missing '->'")
            lhs, rhs = (p.split() for p in line.split("->", 1))
            if len(lhs) != 3 + work or len(rhs) != 1 + (work + 1) + (2 + work):
                raise ConfigurationError(f"line {lineno}: wrong number of fields")
            trans.append(Transition(lhs[0], tuple(lhs[1:]), rhs[0], tuple(rhs[1:work + 2]),
                                    tuple(rhs[work + 2:])))
        if states is None or alphabet is None or work is None:
            raise ConfigurationError("missing states, alphabet or tapes section")
        return cls(states, alphabet, work, trans, start, label)


class ProcedureMachine:
    """A machine given by ``fn(input, advice, fuel) -> RunOutcome``.

    ``fn`` must honour the same contract as the literal interpreter:
    deterministic, use-bounded, and permanent once Halted.
    """

    def __init__(self, fn: Callable[[tuple, object, int], RunOutcome], label: str = ""):
        self.fn = fn
        self.label = label
        self._memo: dict = {}

    def run(self, input, advice, fuel: int) -> RunOutcome:
        key = (tuple(input), advice, fuel)
        got = self._memo.get(key)
        if got is None:
            got = self.fn(tuple(input), advice, fuel)
            if len(self._memo) < 400_000:
                self._memo[key] = got
        return got


@dataclass
class Ndtm:
    """A machine with an advice space. Advice values: int (Nat), word tuple
    (Cantor, Baire), or ``(n, word)`` (NatTimesCantor)."""

    machine: object
    advice: AdviceSpace
    label: str = ""

    def run(self, input: Sequence, advice, fuel: int) -> RunOutcome:
        m = self.machine
        if isinstance(m, TypeTwoMachine):
            tape, fill = self.advice_tape(advice)
            return m.run(input, tape, fuel, fill)
        return m.run(tuple(input), advice, fuel)

    def advice_tape(self, advice) -> tuple[tuple, object]:
        """Advice value as tape cells: n is 1^n 0 0 0 ...; (n, w) is 1^n 0 w."""
        tag = self.advice
        if tag is AdviceSpace.NAT:
            return (1,) * advice + (0,), 0
        if tag is AdviceSpace.CANTOR:
            return tuple(advice), None
        if tag is AdviceSpace.NAT_CANTOR:
            n, w = advice
            return (1,) * n + (0,) + tuple(w), None
        out: list = []
        for k in advice:
            out += [1] * k + [0]
        return tuple(out), None

    def rejected(self, input: Sequence, advice, fuel: int) -> bool:
        return isinstance(self.run(input, advice, fuel), Halted)


# -- revising output ---------------------------------------------------------------

@dataclass(frozen=True)
class Emit:
    symbols: tuple


@dataclass(frozen=True)
class Reset:
    pass


RESET = Reset()


@dataclass
class StageRecord:
    stage: int
    survivors: int
    output: tuple


@dataclass
class RevisingOutput:
    trace: list = field(default_factory=list)
    stages: list = field(default_factory=list)
    candidate: object = None
    history: list = field(default_factory=list)
    survivors: list = field(default_factory=list)
    exhausted: bool = False

    @property
    def resets(self) -> int:
        return sum(1 for _, ev in self.trace if isinstance(ev, Reset))

    @property
    def current(self) -> tuple:
        """Symbols emitted since the last Reset."""
        out: list = []
        for _, ev in self.trace:
            if isinstance(ev, Reset):
                out = []
            else:
                out.extend(ev.symbols)
        return tuple(out)

    def reset_stages(self) -> list[int]:
        return [t for t, ev in self.trace if isinstance(ev, Reset)]

    def export(self) -> str:
        return format_trace(self.stages)


def format_trace(stages: Iterable[StageRecord]) -> str:
    lines = []
    for r in stages:
        out = "".join(_fmt(s) for s in r.output) if all(s in (0, 1) for s in r.output) \
            else " ".join(_fmt(s) for s in r.output)
        lines.append(f"stage {r.stage} | survivors {r.survivors} | output {out}")
    return "\n".join(lines) + ("\n" if lines else "")


def _fmt(s) -> str:
    if isinstance(s, Ball):
        return f"B({s.center},{s.radius})"
    return str(s)


class _Reviser:
    """Accumulates a revising trace from per-stage (candidate, output)."""

    def __init__(self):
        self.result = RevisingOutput()
        self.emitted: tuple = ()
        self.candidate = None

    def stage(self, t: int, candidate, output: tuple, survivors: int):
        res = self.result
        if candidate != self.candidate:
            if self.candidate is not None:
                res.trace.append((t, RESET))
            self.candidate = candidate
            self.emitted = ()
        if candidate is not None and len(output) > len(self.emitted) and \
                tuple(output[: len(self.emitted)]) == self.emitted:
            res.trace.append((t, Emit(tuple(output[len(self.emitted):]))))
            self.emitted = tuple(output)
        res.stages.append(StageRecord(t, survivors, self.emitted))
        res.candidate = candidate
        res.history.append(candidate)

    def finish(self, fuel: int) -> RevisingOutput:
        res = self.result
        last = res.reset_stages()
        # heuristic: a revision in the second half of the budget means the
        # run has not visibly settled
        res.exhausted = self.candidate is None or (bool(last) and last[-1] > fuel // 2)
        return res


def _output_of(outcome: RunOutcome) -> tuple:
    return outcome.output if isinstance(outcome, Progress) else ()


def execute_nat_advice(n: Ndtm, input: StreamName, fuel: int) -> RevisingOutput:
    """Dovetail advice 0, 1, 2, ...; at stage t follow the least advice <= t
    not yet rejected. Every change of advice is a Reset."""
    if n.advice is not AdviceSpace.NAT:
        raise ConfigurationError("execute_nat_advice needs Nat advice")
    rev = _Reviser()
    dead: set[int] = set()
    for t in range(fuel + 1):
        prefix = input.at(t)
        alive = []
        for k in range(t + 1):
            if k in dead:
                continue
            if n.rejected(prefix, k, t):
                dead.add(k)
            else:
                alive.append(k)
        c = alive[0] if alive else None
        out = _output_of(n.run(prefix, c, t)) if c is not None else ()
        rev.stage(t, c, out, len(alive))
        rev.result.survivors = alive
    return rev.finish(fuel)


# -- Cantor advice -------------------------------------------------------------------

class SurvivingTree:
    """Unrejected advice prefixes. A node is rejected at stage t when the run
    reading only that node halts within t steps, or a prefix is rejected."""

    def __init__(self, n: Ndtm, input: StreamName, alphabet: Sequence = (0, 1), depth: int = 64,
                 wrap: Callable[[tuple], object] | None = None):
        self.n = n
        self.input = input
        self.alphabet = tuple(alphabet)
        self.depth = depth
        self.wrap = wrap or (lambda w: w)

    def node_rejected(self, w: tuple, fuel: int) -> bool:
        return self.n.rejected(self.input.at(fuel), self.wrap(w), fuel)

    def _walk(self, fuel: int, depth: int, first_only: bool):
        out = []
        stack = [()]
        while stack:
            w = stack.pop()
            if self.node_rejected(w, fuel):
                continue
            out.append(w)
            if len(w) == depth:
                if first_only:
                    return [w]
                continue
            for a in reversed(self.alphabet):
                stack.append(w + (a,))
        return [] if first_only else out

    def level(self, fuel: int) -> set[tuple]:
        """All surviving prefixes of length <= min(fuel, depth)."""
        return set(self._walk(fuel, min(fuel, self.depth), False))

    def leaves(self, fuel: int, depth: int | None = None) -> list[tuple]:
        d = min(fuel, self.depth) if depth is None else depth
        return [w for w in self._walk(fuel, d, False) if len(w) == d]

    def leftmost(self, fuel: int, depth: int | None = None) -> tuple | None:
        d = min(fuel, self.depth) if depth is None else depth
        got = self._walk(fuel, d, True)
        return got[0] if got else None

    def alive(self, fuel: int, depth: int | None = None) -> bool:
        return self.leftmost(fuel, depth) is not None


@dataclass
class LeftmostApproximation:
    """Stage-t leftmost surviving guess and its output (not monotone in t)."""

    tree: SurvivingTree

    def guess(self, fuel: int) -> tuple | None:
        return self.tree.leftmost(fuel)

    def output(self, fuel: int) -> tuple | None:
        w = self.guess(fuel)
        if w is None:
            return None
        return _output_of(self.tree.n.run(self.tree.input.at(fuel), self.tree.wrap(w), fuel))

    def records(self, fuels: Iterable[int]) -> list[StageRecord]:
        return [StageRecord(t, len(self.tree.leaves(t)), self.output(t) or ()) for t in fuels]


def consensus_point(space: MetricSpace, leaves_outputs: Callable[[int], list | None],
                    label: str = "consensus") -> PointName:
    """Emit approximation s once the finest output balls of all surviving
    branches lie within 2**-s of the first branch's center (distance plus
    radius).

    ``leaves_outputs(t)`` lists the output ball sequences of all surviving
    branches at stage t (None when no branch survives). A true value lies in
    some branch's ball, so the emitted ball contains it; once emitted, an
    approximation is never revised.
    """
    found: list[Ball] = []
    scanned = [-1]

    def at(fuel):
        for t in range(scanned[0] + 1, fuel + 1):
            outs = leaves_outputs(t)
            scanned[0] = t
            if not outs or any(not o for o in outs):
                continue
            c0 = outs[0][-1].center
            spread = max(space.dist(c0, o[-1].center) + o[-1].radius for o in outs)
            while pow2(-len(found)) >= spread:
                found.append(Ball(c0, pow2(-len(found))))
                if spread == 0 and len(found) > 4 * t + 8:
                    break
        return list(found)

    return PointName(space, StreamName(at), nested=False, label=label)


def execute_cantor_advice(n: Ndtm, input: StreamName, mode: str = "leftmost", depth: int = 64,
                          space: MetricSpace | None = None):
    """``survivors`` -> SurvivingTree; ``leftmost`` -> LeftmostApproximation;
    ``consensus`` -> PointName in ``space`` (outputs must be balls)."""
    if n.advice is not AdviceSpace.CANTOR:
        raise ConfigurationError("execute_cantor_advice needs Cantor advice")
    tree = SurvivingTree(n, input, (0, 1), depth)
    if mode == "survivors":
        return tree
    if mode == "leftmost":
        return LeftmostApproximation(tree)
    if mode == "consensus":
        if space is None:
            raise ConfigurationError("consensus mode needs a metric codomain")

        def outs(t):
            leaves = tree.leaves(t)
            if not leaves:
                return None
            return [_output_of(n.run(input.at(t), w, t)) for w in leaves]

        return consensus_point(space, outs)
    raise ValueError(f"unknown mode {mode!r}")


def execute_nat_cantor_advice(n: Ndtm, input: StreamName, fuel: int, space: MetricSpace,
                              depth: Callable[[int], int] | int = 12) -> RevisingOutput:
    """Outer revising loop over the natural component, inner consensus over
    the Cantor component.

    At stage t the candidate is the least k <= t whose guess tree still has a
    survivor at depth d_t; the output is the consensus point of that tree.
    """
    if n.advice is not AdviceSpace.NAT_CANTOR:
        raise ConfigurationError("execute_nat_cantor_advice needs NatTimesCantor advice")
    dfun = depth if callable(depth) else (lambda t, d=depth: min(t, d))
    trees: dict[int, SurvivingTree] = {}
    points: dict[int, PointName] = {}

    def tree(k):
        if k not in trees:
            trees[k] = SurvivingTree(n, input, (0, 1), 10 ** 9, wrap=lambda w, k=k: (k, w))
        return trees[k]

    def point(k):
        if k not in points:
            tr = tree(k)

            def outs(t, tr=tr, k=k):
                leaves = tr.leaves(t, dfun(t))
                if not leaves:
                    return None
                return [_output_of(n.run(input.at(t), (k, w), t)) for w in leaves]

            points[k] = consensus_point(space, outs, f"consensus[{k}]")
        return points[k]

    rev = _Reviser()
    dead: set[int] = set()
    for t in range(fuel + 1):
        alive = []
        for k in range(t + 1):
            if k in dead:
                continue
            if tree(k).alive(t, dfun(t)):
                alive.append(k)
                break
            dead.add(k)
        c = alive[0] if alive else None
        out = tuple(point(c).balls(t)) if c is not None else ()
        rev.stage(t, c, out, t + 1 - len(dead))
        rev.result.survivors = [k for k in range(t + 1) if k not in dead]
    return rev.finish(fuel)


@dataclass
class BaireReport:
    survivors: list
    depth: int
    bound: int


def execute_baire_advice_bounded(n: Ndtm, input: StreamName, bound: int, fuel: int,
                                 depth: int | None = None) -> BaireReport:
    """Surviving Baire advice prefixes over symbols < ``bound``; demo only."""
    if n.advice is not AdviceSpace.BAIRE:
        raise ConfigurationError("execute_baire_advice_bounded needs Baire advice")
    d = min(fuel, depth if depth is not None else fuel)
    if bound <= 0:
        return BaireReport([], d, bound)
    tree = SurvivingTree(n, input, tuple(range(bound)), d)
    return BaireReport(sorted(tree.leaves(fuel, d)), d, bound)


# -- shipped machines ---------------------------------------------------------------

def _t(state, reads, target, writes, moves) -> Transition:
    return Transition(state, tuple(reads.split()), target, tuple(writes.split()), tuple(moves.split()))


def copy_machine() -> TypeTwoMachine:
    """Copies the input to the output; ignores the advice."""
    return TypeTwoMachine(["C"], ["0", "1"], 0, [
        _t("C", "0 *", "C", "0", "R S"),
        _t("C", "1 *", "C", "1", "R S"),
    ], label="copy")


def halting_machine() -> TypeTwoMachine:
    """Rejects every guess on its first step."""
    return TypeTwoMachine(["S"], ["0", "1"], 0, [_t("S", "* *", HALT, "_", "S S")], label="halt")


def first_one_machine() -> TypeTwoMachine:
    """Nat advice n guesses that the first 1 of the input sits at position n.

    Output is 1^n 0^w, the unary code of n.
    """
    return TypeTwoMachine(["S", "Z"], ["0", "1"], 0, [
        _t("S", "0 1", "S", "1", "R R"),
        _t("S", "1 1", HALT, "_", "S S"),
        _t("S", "1 0", "Z", "0", "R R"),
        _t("S", "0 0", HALT, "_", "S S"),
        _t("Z", "* *", "Z", "0", "S S"),
    ], label="first-one")


def wkl_tape_machine() -> TypeTwoMachine:
    """Guesses a path through a decidable binary tree.

    The input is the characteristic sequence of the tree in breadth-first
    order (node w at index 2^|w| - 1 + int(w)); the advice is the path,
    echoed to the output. Node index c is tracked as c + 1 marks on one of
    two work tapes; the tapes swap roles at each level.
    """
    T = []
    states = ["INIT", "INIT2"]
    for p, (src, dst) in (("A", (0, 1)), ("B", (1, 0))):
        o = "B" if p == "A" else "A"
        states += [f"CHECK{p}", f"READ{p}", f"WALK{p}0", f"WALK{p}1", f"SECOND{p}0", f"SECOND{p}1",
                   f"REWIND{p}", f"REWIND2{p}"]

        def rw(s, d):
            r = ["*", "*"]
            r[src], r[dst] = s, d
            return " ".join(r)

        def mv(s, d):
            r = ["S", "S"]
            r[src], r[dst] = s, d
            return " ".join(r)

        T.append(_t(f"CHECK{p}", "1 * * *", f"READ{p}", "* * _", "S S S S"))
        T.append(_t(f"CHECK{p}", "0 * * *", HALT, "* * _", "S S S S"))
        for b in "01":
            T.append(_t(f"READ{p}", f"* {b} * *", f"WALK{p}{b}", f"* * {b}", f"S R {mv('R', 'S')}"))
            T.append(_t(f"WALK{p}{b}", f"* * {rw('1', '*')}", f"SECOND{p}{b}", f"{rw('_', '1')} _",
                        f"R S {mv('R', 'R')}"))
            T.append(_t(f"SECOND{p}{b}", "* * * *", f"WALK{p}{b}", f"{rw('*', '1')} _",
                        f"S S {mv('S', 'R')}"))
        T.append(_t(f"WALK{p}0", f"* * {rw('_', '*')}", f"REWIND{p}", "* * _", "S S S S"))
        T.append(_t(f"WALK{p}1", f"* * {rw('_', '*')}", f"REWIND{p}", f"{rw('*', '1')} _",
                    f"R S {mv('S', 'R')}"))
        T.append(_t(f"REWIND{p}", f"* * {rw('*', '$')}", f"REWIND2{p}", "* * _", "S S S S"))
        T.append(_t(f"REWIND{p}", "* * * *", f"REWIND{p}", "* * _", f"S S {mv('S', 'L')}"))
        T.append(_t(f"REWIND2{p}", f"* * {rw('$', '*')}", f"CHECK{o}", "* * _", f"S S {mv('R', 'S')}"))
        T.append(_t(f"REWIND2{p}", "* * * *", f"REWIND2{p}", "* * _", f"S S {mv('L', 'S')}"))
    T.insert(0, _t("INIT", "* * * *", "INIT2", "$ $ _", "S S R R"))
    T.insert(1, _t("INIT2", "* * * *", "CHECKA", "1 * _", "S S L S"))
    return TypeTwoMachine(states, ["0", "1", "$"], 2, T, start="INIT", label="wkl")


def tree_index(w: Sequence[int]) -> int:
    """Breadth-first index of a binary word."""
    v = 0
    for b in w:
        v = 2 * v + b
    return 2 ** len(w) - 1 + v


def tree_word(index: int) -> tuple:
    d = (index + 1).bit_length() - 1
    v = index + 1 - 2 ** d
    return tuple((v >> (d - 1 - i)) & 1 for i in range(d))


def tree_characteristic(member: Callable[[tuple], bool]) -> StreamName:
    """Breadth-first characteristic sequence of a decidable tree."""
    return StreamName.from_function(lambda i: 1 if member(tree_word(i)) else 0, "binary", "tree")


def schedule_input(schedule: dict[int, Iterable[Sequence]]) -> StreamName:
    """Encode a rejection schedule as naturals: cell k is 1 + the index of
    the k-th rejected node (stages in order), then 0 forever."""
    cells: list[int] = []
    for t in sorted(schedule):
        for w in schedule[t]:
            cells.append(1 + tree_index(tuple(w)))
    cells = tuple(cells)
    return StreamName.from_function(lambda i: cells[i] if i < len(cells) else 0, label="schedule")


def _wkl_run(inp: tuple, w, fuel: int) -> RunOutcome:
    # read every rejection cell the fuel allows, then echo the advice bits,
    # halting as soon as the advice read so far passes a rejected node
    w = tuple(w)
    m = min(fuel, len(inp))
    rejected = {c - 1 for c in inp[:m] if c}
    if 0 in rejected:
        return Halted(1)
    n = min(fuel, len(w))
    idx = 0
    for k in range(n):
        idx = 2 * idx + 1 + w[k]
        if idx in rejected:
            return Halted(k + 1)
    return Progress(w[:n], m, n)


def wkl_machine() -> Ndtm:
    """Guesses a path through a co-c.e. tree given as a rejection stream."""
    return Ndtm(ProcedureMachine(_wkl_run, "wkl"), AdviceSpace.CANTOR, "wkl")


def first_one_ndtm() -> Ndtm:
    return Ndtm(first_one_machine(), AdviceSpace.NAT, "first-one")


def runtime_guesser(halting_times: Sequence[int | None]) -> Ndtm:
    """Baire advice p guesses, for toy machine i, p(i) = 0 (never halts) or
    p(i) = k + 1 (halts within k steps). Toy machine i halts after
    ``halting_times[i]`` steps (None: never). Output bit i is 1 iff p(i) > 0.

    A wrong guess is caught by simulation: a claimed bound that passes
    without halting, or a claimed non-halter that halts.
    """
    times = tuple(halting_times)

    def fn(inp, p, fuel):
        p = tuple(p)
        for step in range(fuel + 1):
            for i, g in enumerate(p[: len(times)]):
                h = times[i]
                if g == 0 and h is not None and h <= step:
                    return Halted(max(step, 1))
                if g > 0 and (h is None or h > g - 1) and step >= g - 1 and step >= 1:
                    return Halted(step)
        return Progress(tuple(1 if g > 0 else 0 for g in p[: len(times)]), 0, len(p))

    return Ndtm(ProcedureMachine(fn, "runtime"), AdviceSpace.BAIRE, "runtime-guesser")
