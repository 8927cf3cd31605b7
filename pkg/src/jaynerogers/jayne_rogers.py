"""Evaluation of Delta^0_2-measurable functions and the translations between
Delta^0_2 names and piecewise continuous names."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .machines import (AdviceSpace, Halted, Ndtm, ProcedureMachine, Progress, RevisingOutput,
                       SurvivingTree, _Reviser, consensus_point, execute_nat_cantor_advice)
from .spaces import (BINARY_EXPANSION, CANTOR_IDENTITY, SIGNED_DIGIT, Ball, ClosedImage,
                     ClosedSetName, CompactSetName, ComplementOpen, Delta2SetName, EmptyClosed,
                     EmptyOpen, ImageTreeClosed, IntersectionClosed, Interval, MetricSpace, OpenSetName,
                     OUT, PointName, RealInterval, Representation, SequenceSpace, WholeClosed,
                     WholeOpen, YES, ball_name, member_open, member_out_closed, open_as_closed_union,
                     point_from_compact_singleton, pow2, singleton_closed)
from .streams import ConfigurationError, StreamName, cantor_unpair


def name_representation(space: MetricSpace) -> Representation:
    """The proper representation used to lift closed sets of names."""
    if isinstance(space, RealInterval):
        return SIGNED_DIGIT if space == SIGNED_DIGIT.space else type(SIGNED_DIGIT)(space)
    if isinstance(space, SequenceSpace) and space.arity == 2:
        return CANTOR_IDENTITY
    raise ConfigurationError(f"no proper finite-alphabet representation for {space}")


def guess_representation(space: MetricSpace) -> Representation:
    """A total representation whose names are guessed for values."""
    if isinstance(space, RealInterval) and space.lo == 0 and space.hi == 1:
        return BINARY_EXPANSION
    if isinstance(space, SequenceSpace) and space.arity == 2:
        return CANTOR_IDENTITY
    raise ConfigurationError(f"no total guess representation for {space}")


class Delta2FunctionName:
    """f given by a map from open subsets of Y to Delta^0_2 subsets of X.

    ``oracle`` (optional) evaluates f on exact points; it is for testing.
    """

    def __init__(self, X: MetricSpace, Y: MetricSpace, inverse: Callable[[OpenSetName], Delta2SetName],
                 guess_rep: Representation | None = None, oracle: Callable | None = None, label: str = ""):
        self.X, self.Y = X, Y
        self._inverse = inverse
        self.guess_rep = guess_rep or guess_representation(Y)
        self.oracle = oracle
        self.label = label
        self._cache: dict[int, tuple] = {}

    def inverse(self, U: OpenSetName) -> Delta2SetName:
        got = self._cache.get(id(U))
        if got is None or got[0] is not U:
            got = (U, self._inverse(U))
            self._cache[id(U)] = got
        return got[1]

    def __repr__(self):
        return f"Delta2FunctionName({self.label})"


@dataclass
class Piece:
    closed: ClosedSetName
    realizer: Callable[[PointName], PointName]
    label: str = ""


class PiecewiseName:
    """A countable closed cover with a realizer on each piece.

    ``piece(i)`` returns a Piece or None (an empty piece).
    """

    def __init__(self, X: MetricSpace, Y: MetricSpace, piece: Callable[[int], Piece | None],
                 count: int | None = None, oracle: Callable | None = None, label: str = ""):
        self.X, self.Y = X, Y
        self._piece = piece
        self.count = count
        self.oracle = oracle
        self.label = label
        self._cache: dict[int, Piece | None] = {}

    def piece(self, i: int) -> Piece | None:
        if self.count is not None and i >= self.count:
            return None
        if i not in self._cache:
            self._cache[i] = self._piece(i)
        return self._cache[i]

    @classmethod
    def of(cls, X, Y, pieces: Sequence[Piece], oracle=None, label=""):
        pieces = list(pieces)
        return cls(X, Y, lambda i: pieces[i], len(pieces), oracle, label)

    def __repr__(self):
        return f"PiecewiseName({self.label})"


# -- evaluation of Delta^0_2 names ------------------------------------------------------

def evaluator_ndtm(f: Delta2FunctionName, nested: bool = True) -> Ndtm:
    """Guess (n, y): y names a value, n bounds the closed pieces consulted.

    The preimage of Y minus the guessed point is a Delta^0_2 set; its
    complement is the union of the closed sets A_i = X - U_i, where U_i are
    the open sets of the intersection side. The guess is rejected once x is
    confirmed in U_i for every i <= n. The input tape carries the balls of
    x; the output is the guessed name.
    """
    rep = f.guess_rep
    holes: dict[tuple, OpenSetName] = {}

    def hole(w):
        V = holes.get(w)
        if V is None:
            V = singleton_closed(rep.word_point(w)).complement()
            holes[w] = V
        return V

    named: dict[tuple, tuple] = {}

    def fn(inp, advice, fuel):
        n, w = advice
        w = tuple(w)
        x = PointName.from_balls(f.X, inp, nested=nested)
        D = f.inverse(hole(w))
        for i in range(n + 1):
            if member_open(D.open(i), x, fuel) is not YES:
                out = named.get(w)
                if out is None:
                    out = named[w] = tuple(rep.cylinder_ball(w[:s]) for s in range(len(w) + 1))
                return Progress(out, len(inp), len(w))
        return Halted(max(fuel, 1))

    return Ndtm(ProcedureMachine(fn, f"eval[{f.label}]"), AdviceSpace.NAT_CANTOR, "evaluator")


def eval_delta2(f: Delta2FunctionName, x: PointName, fuel: int, depth: int = 12) -> RevisingOutput:
    """Finitely revising evaluation of f at x: outer loop over n, consensus
    over guessed values up to ``depth`` guess bits."""
    return execute_nat_cantor_advice(evaluator_ndtm(f, x.nested), x.stream, fuel, f.Y,
                                     lambda t: min(t, depth))


# -- Delta^0_2 name -> piecewise name ---------------------------------------------------

class _BallEvaluator:
    """The evaluator's C_N side read at the level of input balls.

    ``dies(n, ball, t)``: the guess tree for n is empty at stage t when x is
    only known to lie in ``ball``. ``value(n, ball)``: consensus point of the
    tree for n on that information.
    """

    def __init__(self, f: Delta2FunctionName, depth: int):
        self.f = f
        self.nd = evaluator_ndtm(f, nested=True)
        self.depth = depth
        self._trees: dict = {}
        self._dead: dict = {}
        self._points: dict = {}

    def tree(self, n: int, ball: Ball) -> SurvivingTree:
        key = (n, ball)
        tr = self._trees.get(key)
        if tr is None:
            inp = StreamName(lambda fuel: (ball,))
            tr = SurvivingTree(self.nd, inp, (0, 1), self.depth, wrap=lambda w: (n, w))
            self._trees[key] = tr
        return tr

    def dies(self, n: int, ball: Ball, t: int) -> bool:
        key = (n, ball, t)
        got = self._dead.get(key)
        if got is None:
            if t > 0 and self._dead.get((n, ball, t - 1)):
                got = True
            else:
                got = not self.tree(n, ball).alive(t, min(t, self.depth))
            self._dead[key] = got
        return got

    def value(self, n: int, ball: Ball) -> PointName:
        key = (n, ball)
        p = self._points.get(key)
        if p is None:
            tr = self.tree(n, ball)
            nd = self.nd

            def outs(t):
                leaves = tr.leaves(t, min(t, self.depth))
                if not leaves:
                    return None
                res = []
                for w in leaves:
                    o = nd.run((ball,), (n, w), t)
                    res.append(o.output if isinstance(o, Progress) else ())
                return res

            p = consensus_point(self.f.Y, outs, f"H[{n}]")
            self._points[key] = p
        return p


def delta2_to_piecewise(f: Delta2FunctionName, depth: int = 14, fiber_depth: int = 14,
                        rep: Representation | None = None) -> PiecewiseName:
    """Piece n: the inputs on which n is never rejected by the evaluator's
    reduction to C_N, lifted from names to points; its realizer is the
    evaluator run with n fixed, lifted through the compact fibers of the
    representation."""
    rep = rep or name_representation(f.X)
    ev = _BallEvaluator(f, depth)

    def piece(n: int) -> Piece:
        names = ImageTreeClosed(rep, lambda cb, t: ev.dies(n, cb, t), depth_cap=fiber_depth,
                                label=f"A{n}")
        closed = ClosedImage(names, rep, fiber_depth)

        def realizer(x: PointName) -> PointName:
            def covers(s, t):
                b = x.finest(t)
                if b is None:
                    return None
                out = []
                for cb in rep.fiber_balls(b, s):
                    if ev.dies(n, cb, t):
                        continue
                    y = ev.value(n, cb).finest(t)
                    if y is None:
                        return None
                    out.append(y)
                return out

            K = CompactSetName(f.Y, WholeClosed(f.Y), covers, f"f{n}[{x.label}]")
            return point_from_compact_singleton(K, level=lambda t: min(t, fiber_depth))

        return Piece(closed, realizer, f"piece {n}")

    return PiecewiseName(f.X, f.Y, piece, None, f.oracle, f"pw({f.label})")


# -- piecewise name -> Delta^0_2 name ---------------------------------------------------

class _PushedOpen(OpenSetName):
    """{x : the realizer maps a small ball around x into U}: an open set
    that agrees with the piece's preimage of U on the piece."""

    def __init__(self, X: MetricSpace, realizer, U: OpenSetName):
        self.space = X
        self.realizer = realizer
        self.U = U
        self._memo: dict = {}

    def contains(self, ball, fuel):
        key = (ball, fuel)
        got = self._memo.get(key)
        if got is None:
            y = self.realizer(ball_name(self.space, ball)).finest(fuel)
            got = y is not None and self.U.contains(y, fuel)
            self._memo[key] = got
        return got


class _MemoComplement(OpenSetName):
    def __init__(self, closed: ClosedSetName):
        self.closed = closed
        self.space = closed.space
        self._memo: dict = {}

    def contains(self, ball, fuel):
        key = (ball, fuel)
        got = self._memo.get(key)
        if got is None:
            got = self.closed.excludes(ball, fuel)
            self._memo[key] = got
        return got


def piecewise_to_delta2(g: PiecewiseName, fiber_depth: int = 16, rep: Representation | None = None,
                        guess_rep: Representation | None = None) -> Delta2FunctionName:
    """Preimages of a piecewise function.

    Union side: index <i, j> is A_i intersected with the j-th closed part of
    an open extension U_i of the piece's preimage. Intersection side: index
    i is the complement of B_i, the (lifted) closed set of names in A_i that
    the realizer does not provably send into U.
    """
    rep = rep or name_representation(g.X)
    X = g.X

    def inverse(U: OpenSetName) -> Delta2SetName:
        pushed: dict[int, OpenSetName] = {}

        def push(i):
            if i not in pushed:
                pushed[i] = _PushedOpen(X, g.piece(i).realizer, U)
            return pushed[i]

        def open_side(i: int) -> OpenSetName:
            p = g.piece(i)
            if p is None:
                return WholeOpen(X)
            W = push(i)

            def rejects(cb, t):
                return p.closed.excludes(cb, t) or W.contains(cb, t)

            B = ImageTreeClosed(rep, rejects, depth_cap=fiber_depth, label=f"B{i}")
            return _MemoComplement(ClosedImage(B, rep, fiber_depth))

        def closed_side(k: int) -> ClosedSetName:
            i, j = cantor_unpair(k)
            p = g.piece(i)
            if p is None:
                return EmptyClosed(X)
            return IntersectionClosed(X, [p.closed, open_as_closed_union(push(i))(j)])

        return Delta2SetName(X, closed_side, open_side, f"{g.label}^-1")

    return Delta2FunctionName(X, g.Y, inverse, guess_rep, g.oracle, f"d2({g.label})")


# -- evaluation of piecewise names -------------------------------------------------------

def eval_piecewise(g: PiecewiseName, x: PointName, fuel: int) -> RevisingOutput:
    """Follow the least piece not yet refuted for x; Reset on each refutation."""
    rev = _Reviser()
    refuted: set[int] = set()
    points: dict[int, PointName] = {}
    for t in range(fuel + 1):
        c = None
        for i in range(t + 1):
            if i in refuted:
                continue
            p = g.piece(i)
            if p is None or member_out_closed(p.closed, x, t) is OUT:
                refuted.add(i)
                continue
            c = i
            break
        out: tuple = ()
        if c is not None:
            if c not in points:
                points[c] = g.piece(c).realizer(x)
            out = tuple(points[c].balls(t))
        rev.stage(t, c, out, t + 1 - len(refuted))
    return rev.finish(fuel)


def value_of(out: RevisingOutput, s: int):
    """Center of approximation s of the converged output, or None."""
    cur = out.current
    return cur[s].center if len(cur) > s else None


# -- direct Delta^0_2 names --------------------------------------------------------------

def piecewise_constant_delta2(pieces: Sequence[tuple[Interval, object]], X: MetricSpace,
                              Y: MetricSpace, label: str = "") -> Delta2FunctionName:
    """Delta^0_2 name of a function constant on finitely many disjoint
    intervals covering X.

    Intersection side, index k: union of the k-th open hulls of the pieces
    whose value is confirmed in U. Union side, index <v, k, s>: the k-th
    closed part of piece v if its value is confirmed in U by stage s.
    """
    pieces = [(iv, v if not isinstance(Y, RealInterval) else Fraction(v)) for iv, v in pieces]

    def oracle(x):
        x = Fraction(x)
        for iv, v in pieces:
            if x in iv:
                return v
        raise ValueError(f"{x} not covered")

    def inverse(U: OpenSetName) -> Delta2SetName:
        conf: dict[tuple, bool] = {}

        def confirmed(v, s):
            key = (v, s)
            if key not in conf:
                conf[key] = U.contains(Ball(v, 0), s)
            return conf[key]

        class Hulls(OpenSetName):
            space = X

            def __init__(self, k):
                self.k = k

            def contains(self, ball, fuel):
                for iv, v in pieces:
                    if confirmed(v, fuel) and X.inside(ball, iv.open_part(self.k)):
                        return True
                return False

        class Part(ClosedSetName):
            space = X

            def __init__(self, idx):
                a, s = cantor_unpair(idx)
                vi, k = cantor_unpair(a)
                self.piece = pieces[vi] if vi < len(pieces) else None
                self.k, self.s = k, s

            def excludes(self, ball, fuel):
                if self.piece is None:
                    return True
                iv, v = self.piece
                if fuel >= self.s and not confirmed(v, self.s):
                    return True
                part = iv.closed_part(self.k)
                if part is None:
                    return True
                lo, hi = part
                c, r = Fraction(ball.center), ball.radius
                return c + r < lo or c - r > hi

        return Delta2SetName(X, Part, Hulls, f"{label}^-1")

    return Delta2FunctionName(X, Y, inverse, None, oracle, label)


def identity_delta2(X: MetricSpace, label: str = "id") -> Delta2FunctionName:
    """id: intersection side is U itself, union side its closed parts."""

    def inverse(U: OpenSetName) -> Delta2SetName:
        parts = open_as_closed_union(U)
        return Delta2SetName(X, parts, lambda i: U, f"{label}^-1")

    return Delta2FunctionName(X, X, inverse, None, lambda x: x, label)
