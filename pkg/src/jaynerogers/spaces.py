"""Represented spaces and staged set names.

Points are named by streams of closed balls shrinking to the point (ball s
has radius at most 2**-s). Open sets are given by a positive semidecision
``contains(ball, fuel)``; closed sets by the dual ``excludes(ball, fuel)``.
Both verdicts, once True at some fuel, stay True at every larger fuel.
All arithmetic is exact (``fractions.Fraction``).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .streams import StreamName, binary_words, cantor_pair, cantor_unpair

ZERO = Fraction(0)
ONE = Fraction(1)


@lru_cache(maxsize=4096)
def pow2(e: int) -> Fraction:
    """2**e as an exact Fraction (e may be negative)."""
    return Fraction(2) ** e


def level_of(radius: Fraction) -> int:
    """Least m with 2**-m <= radius (radius > 0)."""
    m = 0
    while pow2(-m) > radius:
        m += 1
    while m > 0 and pow2(-(m - 1)) <= radius:
        m -= 1
    return m


class Verdict(enum.Enum):
    YES = "YES"
    OUT = "OUT"
    EMPTY = "EMPTY"
    UNKNOWN = "UNKNOWN"


YES, OUT, EMPTY, UNKNOWN = Verdict.YES, Verdict.OUT, Verdict.EMPTY, Verdict.UNKNOWN


@dataclass(frozen=True)
class Ball:
    center: object
    radius: Fraction

    def __post_init__(self):
        r = Fraction(self.radius)
        if r < 0:
            raise ValueError("radius must be non-negative")
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "_hash", hash((self.center, r)))

    def __hash__(self):
        # balls key most memo tables; Fraction hashing is slow enough to matter
        return self._hash


# -- metric spaces -----------------------------------------------------------

class MetricSpace:
    """A computable metric space: exact distances between ball centers."""

    name = "metric"

    def dist(self, a, b) -> Fraction:
        raise NotImplementedError

    def inside(self, inner: Ball, outer: Ball) -> bool:
        """Closed ``inner`` provably inside open ``outer``."""
        return self.dist(inner.center, outer.center) + inner.radius < outer.radius

    def disjoint(self, a: Ball, b: Ball) -> bool:
        """Closed balls provably apart."""
        return self.dist(a.center, b.center) > a.radius + b.radius

    def meets(self, a: Ball, b: Ball) -> bool:
        return not self.disjoint(a, b)

    def dyadic_balls(self, level: int) -> list[Ball]:
        """Finitely many open balls of radius 2**-level covering the space."""
        raise NotImplementedError

    def __repr__(self):
        return self.name


class RealInterval(MetricSpace):
    def __init__(self, lo=0, hi=1):
        self.lo, self.hi = Fraction(lo), Fraction(hi)
        self.name = f"[{self.lo},{self.hi}]"

    def dist(self, a, b) -> Fraction:
        return abs(Fraction(a) - Fraction(b))

    def dyadic_balls(self, level: int) -> list[Ball]:
        step = pow2(-level)
        k0 = (self.lo / step).__floor__()
        k1 = (self.hi / step).__ceil__()
        return [Ball(k * step, step) for k in range(k0, k1 + 1)]

    def __eq__(self, other):
        return isinstance(other, RealInterval) and (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))


def _strip(w: Sequence) -> tuple:
    w = tuple(w)
    n = len(w)
    while n and w[n - 1] == 0:
        n -= 1
    return w[:n]


class SequenceSpace(MetricSpace):
    """Cantor space (``arity=2``) or Baire space (``arity=None``).

    A center ``w`` stands for w 0 0 0 ...; d(p, q) = 2**-(length of the
    longest common prefix). The metric is an ultrametric, which sharpens
    ball inclusion and disjointness.
    """

    def __init__(self, arity: int | None = 2):
        self.arity = arity
        self.name = "Cantor" if arity == 2 else ("Baire" if arity is None else f"{arity}^N")

    def dist(self, a, b) -> Fraction:
        a, b = _strip(a), _strip(b)
        if a == b:
            return ZERO
        n = 0
        while (a[n] if n < len(a) else 0) == (b[n] if n < len(b) else 0):
            n += 1
        return pow2(-n)

    def inside(self, inner: Ball, outer: Ball) -> bool:
        return inner.radius < outer.radius and self.dist(inner.center, outer.center) < outer.radius

    def disjoint(self, a: Ball, b: Ball) -> bool:
        return self.dist(a.center, b.center) > max(a.radius, b.radius)

    def cylinder(self, w: Sequence) -> Ball:
        """The closed ball equal to the cylinder [w]."""
        return Ball(tuple(w), pow2(-len(w)))

    def open_cylinder(self, w: Sequence) -> Ball:
        """The open ball equal to the cylinder [w]."""
        return Ball(tuple(w), pow2(1 - len(w)))

    def cylinder_word(self, ball: Ball) -> tuple | None:
        """Word w with closed ``ball`` = [w]; None for radius 0."""
        if ball.radius == 0:
            return None
        m = level_of(ball.radius)
        c = tuple(ball.center)
        return (c + (0,) * m)[:m]

    def dyadic_balls(self, level: int) -> list[Ball]:
        if self.arity != 2:
            raise ValueError("Baire space is not covered by finitely many balls")
        return [self.open_cylinder(w) for w in binary_words(level)]

    def __eq__(self, other):
        return isinstance(other, SequenceSpace) and self.arity == other.arity

    def __hash__(self):
        return hash(("seq", self.arity))


class HilbertCube(MetricSpace):
    """[0,1]^N with d(x, y) = sum_i 2**-(i+1) |x_i - y_i|; centers are finite tuples (missing coordinates are 0)."""

    name = "Hilbert cube"

    def dist(self, a, b) -> Fraction:
        n = max(len(a), len(b))
        a = tuple(a) + (ZERO,) * (n - len(a))
        b = tuple(b) + (ZERO,) * (n - len(b))
        return sum((pow2(-(i + 1)) * abs(Fraction(x) - Fraction(y)) for i, (x, y) in enumerate(zip(a, b))), ZERO)

    def dyadic_balls(self, level: int) -> list[Ball]:
        k = level + 1
        out = []
        grid = [pow2(-level) * j for j in range(2 ** level + 1)]

        def rec(prefix):
            if len(prefix) == k:
                out.append(Ball(tuple(prefix), pow2(-level) + pow2(-k)))
                return
            for g in grid:
                rec(prefix + [g])

        if k <= 3:
            rec([])
        else:
            raise ValueError("Hilbert cube dyadic cover too large at this level")
        return out


UNIT = RealInterval(0, 1)
CANTOR = SequenceSpace(2)
BAIRE = SequenceSpace(None)
HILBERT = HilbertCube()


@dataclass
class DenseSequence:
    """A computable metric space given by indices of a dense sequence."""

    space: MetricSpace
    point: Callable[[int], object]

    def dist(self, i: int, j: int) -> Fraction:
        return self.space.dist(self.point(i), self.point(j))

    def pseudometric_violations(self, indices: Iterable[int]) -> list[tuple]:
        idx = list(indices)
        bad = []
        for i in idx:
            if self.dist(i, i) != 0:
                bad.append(("self", i))
            for j in idx:
                if self.dist(i, j) != self.dist(j, i):
                    bad.append(("symmetry", i, j))
                for k in idx:
                    if self.dist(i, k) > self.dist(i, j) + self.dist(j, k):
                        bad.append(("triangle", i, j, k))
        return bad


# -- point names -------------------------------------------------------------

class PointName:
    """A point named by a stream of closed balls; ball s has radius <= 2**-s.

    ``nested`` promises each ball lies inside the previous one, so the
    finest ball carries all information.
    """

    def __init__(self, space: MetricSpace, stream: StreamName, nested: bool = False, label: str = ""):
        self.space = space
        self.stream = stream
        self.nested = nested
        self.label = label

    def balls(self, fuel: int) -> tuple:
        return self.stream.at(fuel)

    def finest(self, fuel: int) -> Ball | None:
        b = self.balls(fuel)
        return b[-1] if b else None

    def probe_balls(self, fuel: int) -> Sequence[Ball]:
        b = self.balls(fuel)
        if not b:
            return ()
        return (b[-1],) if self.nested else tuple(reversed(b))

    def approx(self, s: int, fuel: int):
        b = self.balls(fuel)
        return b[s].center if s < len(b) else None

    def __repr__(self):
        return f"PointName({self.label or self.space})"

    @classmethod
    def exact(cls, space: MetricSpace, center) -> "PointName":
        """A dense point given exactly: every ball has radius 0."""
        if isinstance(space, RealInterval):
            center = Fraction(center)
        b = Ball(center, ZERO)
        return cls(space, StreamName(lambda fuel: (b,) * (fuel + 1)), nested=True, label=f"{center}")

    @classmethod
    def from_balls(cls, space: MetricSpace, balls: Sequence[Ball], nested: bool = True) -> "PointName":
        """A partial name carrying only finitely many balls."""
        balls = tuple(balls)
        return cls(space, StreamName(lambda fuel: balls[: fuel + 1]), nested=nested, label="partial")

    @classmethod
    def cauchy(cls, space: MetricSpace, centers: StreamName) -> "PointName":
        def at(fuel):
            return [Ball(c, pow2(-s)) for s, c in enumerate(centers.at(fuel))]

        return cls(space, StreamName(at), nested=False, label="cauchy")

    @classmethod
    def signed_digits(cls, digits: StreamName, space: MetricSpace = UNIT) -> "PointName":
        """x = sum_i d_i 2**-i with digits d_1, d_2, ... in {-1, 0, 1}."""
        return SIGNED_DIGIT.point(digits, space)

    @classmethod
    def sequence(cls, symbols: StreamName, space: SequenceSpace = CANTOR) -> "PointName":
        def at(fuel):
            w = symbols.at(fuel)
            return [space.cylinder(w[:s]) for s in range(len(w) + 1)]

        return cls(space, StreamName(at), nested=True, label=symbols.label)


def signed_digits_of(x, n: int | None = None) -> StreamName:
    """Greedy signed-digit name (digits in {0, 1}) of a rational x in [0, 1]."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")

    @lru_cache(maxsize=None)
    def digits(k):
        out = []
        r = x
        for i in range(1, k + 1):
            # invariant: x - value(out) = r in [0, 2**-(i-1)]
            if r > pow2(-i):
                out.append(1)
                r -= pow2(-i)
            elif r == pow2(-i) and r == pow2(-(i - 1)) - pow2(-i):
                out.append(1)
                r -= pow2(-i)
            else:
                out.append(0)
        return tuple(out)

    return StreamName(lambda fuel: digits(fuel), label=f"sd({x})")


def signed_digit_point(x, space: MetricSpace = UNIT) -> PointName:
    p = PointName.signed_digits(signed_digits_of(x), space)
    p.label = f"{Fraction(x)}sd"
    return p


# -- representations -----------------------------------------------------------

class Representation:
    """A proper representation over a finite alphabet.

    ``cylinder_ball(w)`` is a closed ball containing (and for the shipped
    representations equal to) the set of points named by extensions of w.
    """

    alphabet: tuple
    space: MetricSpace

    def cylinder_ball(self, w: Sequence) -> Ball | None:
        raise NotImplementedError

    def point(self, symbols: StreamName, space: MetricSpace | None = None) -> PointName:
        sp = space or self.space

        def at(fuel):
            w = symbols.at(fuel)
            return [self.cylinder_ball(w[:s]) for s in range(len(w) + 1)]

        return PointName(sp, StreamName(at), nested=True, label=symbols.label)

    def word_point(self, w: Sequence) -> PointName:
        return self.point(StreamName.finite(w))

    def fiber_words(self, ball: Ball, depth: int,
                    alive: Callable[[tuple], bool] | None = None) -> Iterator[tuple]:
        """Words of length ``depth`` whose cylinder may meet ``ball``.

        ``alive`` prunes whole subtrees (a rejected word rejects its
        extensions).
        """
        sp = self.space
        stack = [()]
        while stack:
            w = stack.pop()
            cb = self.cylinder_ball(w)
            if cb is None or not sp.meets(cb, ball):
                continue
            if alive is not None and not alive(w):
                continue
            if len(w) == depth:
                yield w
                continue
            for a in reversed(self.alphabet):
                stack.append(w + (a,))

    def fiber_balls(self, ball: Ball, depth: int) -> list[Ball]:
        """Distinct cylinder images at ``depth`` meeting ``ball``."""
        seen = {}
        for w in self.fiber_words(ball, depth):
            cb = self.cylinder_ball(w)
            seen.setdefault((cb.center, cb.radius), cb)
        return list(seen.values())


class SignedDigitRepresentation(Representation):
    """Digits in {-1, 0, 1}; the word d_1..d_n names [v - 2**-n, v + 2**-n], v = sum d_i 2**-i.

    Points are restricted to ``space`` (default [0, 1]); cylinders missing
    the space are outside the domain.
    """

    alphabet = (-1, 0, 1)

    def __init__(self, space: RealInterval = UNIT):
        self.space = space

    @staticmethod
    def value(w: Sequence) -> Fraction:
        v = 0
        for d in w:
            v = 2 * v + d
        return Fraction(v, 1 << len(w))

    def cylinder_ball(self, w: Sequence) -> Ball | None:
        v = self.value(w)
        r = pow2(-len(w))
        if v + r < self.space.lo or v - r > self.space.hi:
            return None
        return Ball(v, r)

    def fiber_balls(self, ball: Ball, depth: int) -> list[Ball]:
        step = pow2(-depth)
        c, r = Fraction(ball.center), ball.radius
        lo = ((c - r - step) / step).__ceil__()
        hi = ((c + r + step) / step).__floor__()
        top = 2 ** depth - 1
        lo = max(lo, -top, ((self.space.lo - step) / step).__ceil__())
        hi = min(hi, top, ((self.space.hi + step) / step).__floor__())
        return [Ball(k * step, step) for k in range(lo, hi + 1)]


@lru_cache(maxsize=1 << 16)
def _binary_cylinder(w: tuple) -> Ball:
    v = 0
    for b in w:
        v = 2 * v + b
    return Ball(Fraction(2 * v + 1, 1 << (len(w) + 1)), pow2(-len(w) - 1))


class BinaryExpansion(Representation):
    """Total representation of [0, 1] by binary expansions (used for guesses)."""

    alphabet = (0, 1)
    space = UNIT

    def cylinder_ball(self, w: Sequence) -> Ball:
        return _binary_cylinder(tuple(w))


class SequenceIdentity(Representation):
    """The identity representation of Cantor space."""

    def __init__(self, space: SequenceSpace = CANTOR):
        if space.arity is None:
            raise ValueError("identity representation needs a finite alphabet")
        self.space = space
        self.alphabet = tuple(range(space.arity))

    def cylinder_ball(self, w: Sequence) -> Ball:
        return self.space.cylinder(w)


class HilbertBinary(Representation):
    """Total representation of the Hilbert cube: bit <i, j> is bit j of coordinate i."""

    alphabet = (0, 1)
    space = HILBERT

    def cylinder_ball(self, w: Sequence) -> Ball:
        coords: dict[int, list] = {}
        for n, b in enumerate(w):
            i, j = cantor_unpair(n)
            coords.setdefault(i, []).append(b)
        k = max(coords) + 1 if coords else 0
        center, radius = [], ZERO
        for i in range(k):
            bits = coords.get(i, [])
            v = sum((Fraction(b) * pow2(-(j + 1)) for j, b in enumerate(bits)), ZERO)
            half = pow2(-len(bits) - 1)
            center.append(v + half)
            radius += pow2(-(i + 1)) * half
        radius += pow2(-k)  # unnamed coordinates: center 0, anywhere in [0, 1]
        return Ball(tuple(center), radius)


SIGNED_DIGIT = SignedDigitRepresentation(UNIT)
BINARY_EXPANSION = BinaryExpansion()
CANTOR_IDENTITY = SequenceIdentity(CANTOR)
HILBERT_BINARY = HilbertBinary()


# -- open sets -------------------------------------------------------------------

class OpenSetName:
    space: MetricSpace
    enumeration_cap = 8

    def contains(self, ball: Ball, fuel: int) -> bool:
        raise NotImplementedError

    def enumerate(self, fuel: int) -> list[Ball]:
        """Open balls known to lie in the set; derived from ``contains``."""
        out = []
        for m in range(min(fuel, self.enumeration_cap) + 1):
            for b in self.space.dyadic_balls(m):
                if self.contains(b, fuel):
                    out.append(b)
        return out


class BallOpen(OpenSetName):
    """Union of an enumerated list of open balls."""

    def __init__(self, space: MetricSpace, enumerate: Callable[[int], Sequence[Ball]], label: str = ""):
        self.space = space
        self._enum = enumerate
        self.label = label

    def enumerate(self, fuel: int) -> list[Ball]:
        return list(self._enum(fuel))

    def contains(self, ball: Ball, fuel: int) -> bool:
        return any(self.space.inside(ball, b) for b in self._enum(fuel))

    @classmethod
    def of(cls, space: MetricSpace, balls: Iterable[Ball], label: str = "") -> "BallOpen":
        balls = tuple(balls)
        return cls(space, lambda fuel: balls, label)

    @classmethod
    def staged(cls, space: MetricSpace, schedule: dict[int, Sequence[Ball]]) -> "BallOpen":
        stages = sorted(schedule)

        def enum(fuel):
            return [b for s in stages if s <= fuel for b in schedule[s]]

        return cls(space, enum, "staged")

    def __repr__(self):
        return f"BallOpen({self.label})"


class EmptyOpen(OpenSetName):
    def __init__(self, space):
        self.space = space

    def contains(self, ball, fuel):
        return False

    def enumerate(self, fuel):
        return []


class WholeOpen(OpenSetName):
    def __init__(self, space):
        self.space = space

    def contains(self, ball, fuel):
        return True


class UnionOpen(OpenSetName):
    def __init__(self, space, parts: Sequence[OpenSetName]):
        self.space = space
        self.parts = tuple(parts)

    def contains(self, ball, fuel):
        return any(p.contains(ball, fuel) for p in self.parts)


class IntersectionOpen(OpenSetName):
    def __init__(self, space, parts: Sequence[OpenSetName]):
        self.space = space
        self.parts = tuple(parts)

    def contains(self, ball, fuel):
        return all(p.contains(ball, fuel) for p in self.parts)


class ConditionalOpen(OpenSetName):
    """Equals ``inner`` once the monotone condition ``cond(fuel)`` holds, else empty."""

    def __init__(self, space, cond: Callable[[int], bool], inner: OpenSetName):
        self.space = space
        self.cond = cond
        self.inner = inner

    def contains(self, ball, fuel):
        return self.cond(fuel) and self.inner.contains(ball, fuel)


class ComplementOpen(OpenSetName):
    """The complement of a closed set, read off its negative information."""

    def __init__(self, closed: "ClosedSetName"):
        self.closed = closed
        self.space = closed.space

    def contains(self, ball, fuel):
        return self.closed.excludes(ball, fuel)


def member_open(U: OpenSetName, x: PointName, fuel: int) -> Verdict:
    for b in x.probe_balls(fuel):
        if U.contains(b, fuel):
            return YES
    return UNKNOWN


# -- closed sets -----------------------------------------------------------------

class ClosedSetName:
    space: MetricSpace

    def excludes(self, ball: Ball, fuel: int) -> bool:
        raise NotImplementedError

    def complement(self) -> OpenSetName:
        return ComplementOpen(self)


class BallClosed(ClosedSetName):
    """Complement of an enumerated union of open balls."""

    def __init__(self, space: MetricSpace, co_enumerate: Callable[[int], Sequence[Ball]], label: str = ""):
        self.space = space
        self._co = co_enumerate
        self.label = label

    def co_enumerate(self, fuel: int) -> list[Ball]:
        return list(self._co(fuel))

    def excludes(self, ball, fuel):
        return any(self.space.inside(ball, b) for b in self._co(fuel))

    def complement(self) -> BallOpen:
        return BallOpen(self.space, self._co, f"co {self.label}")

    @classmethod
    def of(cls, space: MetricSpace, balls: Iterable[Ball], label: str = "") -> "BallClosed":
        balls = tuple(balls)
        return cls(space, lambda fuel: balls, label)

    def __repr__(self):
        return f"BallClosed({self.label})"


class EmptyClosed(ClosedSetName):
    def __init__(self, space):
        self.space = space

    def excludes(self, ball, fuel):
        return True


class WholeClosed(ClosedSetName):
    def __init__(self, space):
        self.space = space

    def excludes(self, ball, fuel):
        return False


class IntersectionClosed(ClosedSetName):
    def __init__(self, space, parts: Sequence[ClosedSetName]):
        self.space = space
        self.parts = tuple(parts)

    def excludes(self, ball, fuel):
        return any(p.excludes(ball, fuel) for p in self.parts)


class UnionClosed(ClosedSetName):
    def __init__(self, space, parts: Sequence[ClosedSetName]):
        self.space = space
        self.parts = tuple(parts)

    def excludes(self, ball, fuel):
        return all(p.excludes(ball, fuel) for p in self.parts)


class ConditionalClosed(ClosedSetName):
    """``inner`` if ``cond(stage)`` holds, otherwise empty; decided at ``stage``."""

    def __init__(self, space, stage: int, cond: Callable[[int], bool], inner: ClosedSetName):
        self.space = space
        self.stage = stage
        self.cond = cond
        self.inner = inner

    def excludes(self, ball, fuel):
        if fuel >= self.stage and not self.cond(self.stage):
            return True
        return self.inner.excludes(ball, fuel)


class ClosedBallsUnion(ClosedSetName):
    """Finite union of closed balls, known from stage ``stage`` on."""

    def __init__(self, space, balls: Sequence[Ball], stage: int = 0):
        self.space = space
        self.balls = tuple(balls)
        self.stage = stage

    def excludes(self, ball, fuel):
        return fuel >= self.stage and all(self.space.disjoint(ball, b) for b in self.balls)


class SingletonClosed(ClosedSetName):
    """{x} for a point name x: everything provably apart from x is excluded."""

    def __init__(self, x: PointName):
        self.x = x
        self.space = x.space

    def excludes(self, ball, fuel):
        return any(self.space.disjoint(ball, b) for b in self.x.probe_balls(fuel))


class TreeClosed(ClosedSetName):
    """A closed subset of Cantor/Baire space (or of a representation's name
    space) given by a monotone rejection predicate on words.

    ``rejected(w, fuel)`` must be monotone in fuel and inherited by
    extensions of w.
    """

    def __init__(self, rejected: Callable[[tuple, int], bool], alphabet: Sequence = (0, 1),
                 space: SequenceSpace | None = None, depth_cap: int = 16, label: str = ""):
        self._rejected = rejected
        self.alphabet = tuple(alphabet)
        self.space = space or SequenceSpace(len(self.alphabet))
        self.depth_cap = depth_cap
        self.label = label
        self._memo: dict = {}

    def rejected(self, w: Sequence, fuel: int) -> bool:
        """Whether w or one of its prefixes is rejected by stage ``fuel``."""
        w = tuple(w)
        key = (w, fuel)
        got = self._memo.get(key)
        if got is None:
            got = any(self._rejected(w[:k], fuel) for k in range(len(w) + 1))
            self._memo[key] = got
        return got

    def node_rejected(self, w: Sequence, fuel: int) -> bool:
        return self._rejected(tuple(w), fuel)

    def survivors(self, depth: int, fuel: int) -> list[tuple]:
        """Unrejected words of exactly ``depth`` symbols, in lexicographic order."""
        out = []
        stack = [()]
        while stack:
            w = stack.pop()
            if self._rejected(w, fuel):
                continue
            if len(w) == depth:
                out.append(w)
                continue
            for a in reversed(self.alphabet):
                stack.append(w + (a,))
        return out

    def leftmost(self, depth: int, fuel: int) -> tuple | None:
        stack = [()]
        while stack:
            w = stack.pop()
            if self._rejected(w, fuel):
                continue
            if len(w) == depth:
                return w
            for a in reversed(self.alphabet):
                stack.append(w + (a,))
        return None

    def excludes(self, ball, fuel):
        sp = self.space
        if not isinstance(sp, SequenceSpace):
            raise TypeError("TreeClosed lives on a sequence space")
        w = sp.cylinder_word(ball)
        if w is None:
            w = tuple(ball.center)
            w = w + (0,) * max(0, fuel - len(w))
            return self.rejected(w, fuel)
        if self.rejected(w, fuel):
            return True
        depth = min(max(len(w), fuel), self.depth_cap)
        if depth <= len(w) or sp.arity is None:
            return False
        stack = [w]
        while stack:
            u = stack.pop()
            if self._rejected(u, fuel):
                continue
            if len(u) >= depth:
                return False
            for a in self.alphabet:
                stack.append(u + (a,))
        return True

    @classmethod
    def from_schedule(cls, schedule: dict[int, Iterable[Sequence]], alphabet: Sequence = (0, 1), **kw):
        """Rejection schedule: ``schedule[t]`` lists nodes rejected at stage t."""
        first: dict[tuple, int] = {}
        for t, nodes in schedule.items():
            for w in nodes:
                w = tuple(w)
                first[w] = min(t, first.get(w, t))

        def rejected(w, fuel):
            t = first.get(w)
            return t is not None and t <= fuel

        tree = cls(rejected, alphabet, **kw)
        tree.schedule = {t: [tuple(w) for w in ws] for t, ws in schedule.items()}
        return tree


def member_out_closed(A: ClosedSetName, x: PointName, fuel: int) -> Verdict:
    for b in x.probe_balls(fuel):
        if A.excludes(b, fuel):
            return OUT
    return UNKNOWN


def singleton_closed(x: PointName) -> SingletonClosed:
    return SingletonClosed(x)


# -- compact sets ----------------------------------------------------------------

class CompactSetName:
    """A closed name together with finite covers.

    ``covers(s, fuel)`` is a finite list of closed balls covering the set,
    or None when level s is not yet available at this fuel.
    """

    def __init__(self, space, closed: ClosedSetName,
                 covers: Callable[[int, int], list | None], label: str = ""):
        self.space = space
        self.closed = closed
        self._covers = covers
        self.label = label

    def covers(self, s: int, fuel: int) -> list[Ball] | None:
        return self._covers(s, fuel)


def singleton_compact(x: PointName) -> CompactSetName:
    def covers(s, fuel):
        b = x.balls(fuel)
        if s >= len(b):
            return None
        return [Ball(b[s].center, pow2(-s))]

    return CompactSetName(x.space, SingletonClosed(x), covers, f"{{{x.label}}}")


def compact_intersect_closed(K: CompactSetName, A: ClosedSetName) -> CompactSetName:
    def covers(s, fuel):
        got = K.covers(s, fuel)
        if got is None:
            return None
        return [b for b in got if not A.excludes(b, fuel)]

    closed = IntersectionClosed(K.space, [K.closed, A])
    return CompactSetName(K.space, closed, covers, f"{K.label}&A")


def is_empty_compact(K: CompactSetName, fuel: int) -> Verdict:
    for s in range(fuel + 1):
        got = K.covers(s, fuel)
        if got is not None and not got:
            return EMPTY
    return UNKNOWN


def ball_name(space: MetricSpace, ball: Ball) -> PointName:
    """The partial name saying only "the point lies in ``ball``": the ball is
    repeated at every index s with 2**-s >= its radius."""
    k = level_of(ball.radius) if ball.radius > 0 else 64
    return PointName.from_balls(space, [ball] * (k + 1), nested=True)


def compact_image(K: CompactSetName, f: "PointMap", target: MetricSpace) -> CompactSetName:
    """Push each cover ball through the realizer, read as a partial name."""

    def covers(s, fuel):
        got = K.covers(s, fuel)
        if got is None:
            return None
        out = []
        for b in got:
            img = f(ball_name(K.space, b)).finest(fuel)
            if img is None:
                return None
            out.append(img)
        return out

    return CompactSetName(target, WholeClosed(target), covers, f"f[{K.label}]")


def point_from_compact_singleton(K: CompactSetName, level: Callable[[int], int] | None = None) -> PointName:
    """Recover the point of a compact singleton.

    At stage t the cover of level ``level(t)`` (default t) is inspected; if
    its balls all lie within 2**-s of the first center, approximations up to
    s are fixed. Choices never change once made.
    """
    sp = K.space
    lev = level or (lambda t: t)
    found: list[Ball] = []
    scanned = [-1]

    def at(fuel):
        for t in range(scanned[0] + 1, fuel + 1):
            scanned[0] = t
            cover = K.covers(lev(t), t)
            if not cover:
                continue
            c0 = cover[0].center
            spread = max(sp.dist(c0, b.center) + b.radius for b in cover)
            while pow2(-len(found)) >= spread:
                found.append(Ball(c0, pow2(-len(found))))
                if spread == 0 and len(found) > 4 * t + 8:
                    break
        return list(found)

    return PointName(sp, StreamName(at), nested=False, label=f"pt({K.label})")


class PointMap:
    """A realizer between point names: ``f(x)`` is a point name whose balls
    at fuel t depend only on the balls of ``x`` at fuel t."""

    def __init__(self, target: MetricSpace, on_balls: Callable[[tuple, int], Sequence[Ball]], label: str = ""):
        self.target = target
        self._on_balls = on_balls
        self.label = label

    def __call__(self, x: PointName) -> PointName:
        return PointName(self.target, StreamName(lambda fuel: self._on_balls(x.balls(fuel), fuel)),
                         nested=False, label=f"{self.label}({x.label})")

    @classmethod
    def identity(cls, space: MetricSpace):
        return cls(space, lambda balls, fuel: balls, "id")

    @classmethod
    def constant(cls, space: MetricSpace, value):
        if isinstance(space, RealInterval):
            value = Fraction(value)
        b = Ball(value, ZERO)
        return cls(space, lambda balls, fuel: (b,) * (fuel + 1), f"const {value}")

    @classmethod
    def lipschitz(cls, space: RealInterval, f: Callable[[Fraction], Fraction], constant: int = 1, label: str = "f"):
        """Real map with Lipschitz constant <= 2**k, k = ``constant``.bit_length()-1."""
        shift = max(0, (constant - 1).bit_length())

        def on_balls(balls, fuel):
            out = []
            for s in range(len(balls) - shift):
                b = balls[s + shift]
                out.append(Ball(f(Fraction(b.center)), b.radius * constant))
            return out

        return cls(space, on_balls, label)


# -- Hilbert cube embedding --------------------------------------------------------

def embed_hilbert(desc: DenseSequence, x: PointName) -> PointName:
    """Coordinate i of the image is min(1, d(x, a_i))."""

    def image(b: Ball, k: int) -> Ball:
        coords = tuple(min(ONE, desc.space.dist(b.center, desc.point(i))) for i in range(k))
        return Ball(coords, b.radius + pow2(-k))

    def at(fuel):
        balls = x.balls(fuel)
        return [image(balls[s + 1], s + 1) for s in range(len(balls) - 1)]

    return PointName(HILBERT, StreamName(at), nested=False, label=f"H({x.label})")


def embed_ball(desc: DenseSequence, b: Ball, k: int) -> Ball:
    coords = tuple(min(ONE, desc.space.dist(b.center, desc.point(i))) for i in range(k))
    return Ball(coords, b.radius + pow2(-k))


def restrict_open(U: OpenSetName, desc: DenseSequence, coords: int = 12) -> OpenSetName:
    """Pull an open subset of the Hilbert cube back along the embedding."""

    class _Restricted(OpenSetName):
        space = desc.space

        def contains(self, ball, fuel):
            return U.contains(embed_ball(desc, ball, coords), fuel)

    return _Restricted()


# -- open sets as unions of closed sets ------------------------------------------------

def open_as_closed_union(U: OpenSetName) -> Callable[[int], ClosedSetName]:
    """j-th set: closures of the balls enumerated by stage j, shrunk by 2**-j."""

    def piece(j: int) -> ClosedSetName:
        balls = [Ball(b.center, b.radius - pow2(-j)) for b in U.enumerate(j) if b.radius > pow2(-j)]
        return ClosedBallsUnion(U.space, balls, stage=j)

    return piece


# -- closed images under a proper representation --------------------------------------

def _monotone_lookup(memo: dict, ball: Ball, fuel: int, compute: Callable[[Ball, int], bool]) -> bool:
    """Cache a fuel-monotone predicate: memo[ball] = (largest fuel known False, least fuel known True)."""
    lo, hi = memo.get(ball, (-1, None))
    if hi is not None and fuel >= hi:
        return True
    if fuel <= lo:
        return False
    got = compute(ball, fuel)
    if got:
        memo[ball] = (lo, fuel if hi is None else min(hi, fuel))
    else:
        memo[ball] = (max(lo, fuel), hi)
    return got


class ImageTreeClosed(TreeClosed):
    """A name-space closed set whose rejections depend only on cylinder images."""

    def __init__(self, rep: Representation, rejects_image: Callable[[Ball, int], bool], depth_cap: int = 14,
                 label: str = ""):
        self.rep = rep
        self._rejects_image = rejects_image
        self._image_memo: dict = {}
        super().__init__(self._reject_word, rep.alphabet, SequenceSpace(len(rep.alphabet)), depth_cap, label)

    def rejects_image(self, cb: Ball, fuel: int) -> bool:
        return _monotone_lookup(self._image_memo, cb, fuel, self._rejects_image)

    def _reject_word(self, w, fuel):
        cb = self.rep.cylinder_ball(w)
        return cb is None or self.rejects_image(cb, fuel)


class ClosedImage(ClosedSetName):
    """delta[A] for a closed set A of names: a ball is excluded once its whole
    fiber at some depth is rejected by A."""

    def __init__(self, A: TreeClosed, rep: Representation, depth_cap: int | None = None):
        self.A = A
        self.rep = rep
        self.space = rep.space
        self.depth_cap = depth_cap if depth_cap is not None else A.depth_cap
        self._memo: dict = {}

    def excludes(self, ball, fuel):
        return _monotone_lookup(self._memo, ball, fuel, self._excludes)

    def _excludes(self, ball, fuel):
        depth = min(fuel, self.depth_cap)
        A = self.A
        if isinstance(A, ImageTreeClosed) and A.rep is self.rep:
            return all(A.rejects_image(cb, fuel) for cb in self.rep.fiber_balls(ball, depth))
        for _ in self.rep.fiber_words(ball, depth, alive=lambda w: not A.node_rejected(w, fuel)):
            return False
        return True


def closed_image_under_representation(A: TreeClosed, rep: Representation,
                                      depth_cap: int | None = None) -> ClosedImage:
    return ClosedImage(A, rep, depth_cap)


def fiber_compact(x: PointName, rep: Representation) -> CompactSetName:
    """delta^{-1}({x}) as a compact set of names: level s covers are the
    depth-s cylinders meeting x's current ball."""
    name_space = SequenceSpace(len(rep.alphabet))

    def covers(s, fuel):
        b = x.finest(fuel)
        if b is None:
            return None
        return [name_space.cylinder(w) for w in rep.fiber_words(b, s)]

    return CompactSetName(name_space, WholeClosed(name_space), covers, f"fiber({x.label})")


# -- Delta^0_2 sets ------------------------------------------------------------------

class Delta2SetName:
    """A set presented as the union of closed sets A_i and the intersection
    of open sets U_i. Index i enters the computation at stage i."""

    def __init__(self, space: MetricSpace, closed: Callable[[int], ClosedSetName],
                 open: Callable[[int], OpenSetName], label: str = ""):
        self.space = space
        self._closed = closed
        self._open = open
        self._cc: dict[int, ClosedSetName] = {}
        self._oc: dict[int, OpenSetName] = {}
        self.label = label

    def closed(self, i: int) -> ClosedSetName:
        if i not in self._cc:
            self._cc[i] = self._closed(i)
        return self._cc[i]

    def open(self, i: int) -> OpenSetName:
        if i not in self._oc:
            self._oc[i] = self._open(i)
        return self._oc[i]

    def __repr__(self):
        return f"Delta2SetName({self.label})"

    @classmethod
    def clopen_like(cls, space, closed: ClosedSetName, open: OpenSetName, label=""):
        """A set given once as closed and once as open (constant sequences)."""
        return cls(space, lambda i: closed, lambda i: open, label)


def delta2_stage_verdicts(D: Delta2SetName, x: PointName, fuel: int) -> list[int]:
    """Verdict bits for stages 0..fuel.

    At stage t, r = least i <= t with x not yet refuted from A_i and
    s = least i <= t with x not yet confirmed in U_i (t+1 if none); the
    verdict is 1 iff r <= s.
    """
    refuted: set[int] = set()
    confirmed: set[int] = set()
    out = []
    for t in range(fuel + 1):
        r = t + 1
        for i in range(t + 1):
            if i in refuted:
                continue
            if member_out_closed(D.closed(i), x, t) is OUT:
                refuted.add(i)
                continue
            r = i
            break
        s = t + 1
        for i in range(t + 1):
            if i in confirmed:
                continue
            if member_open(D.open(i), x, t) is YES:
                confirmed.add(i)
                continue
            s = i
            break
        out.append(1 if r <= s else 0)
    return out


def delta2_verdict(D: Delta2SetName, x: PointName, fuel: int) -> int:
    return delta2_stage_verdicts(D, x, fuel)[-1]


def mind_changes(bits: Sequence[int]) -> int:
    return sum(1 for a, b in zip(bits, bits[1:]) if a != b)


def stabilization_stage(bits: Sequence[int]) -> int:
    """First stage from which the verdict never changes (within the horizon)."""
    k = len(bits) - 1
    while k > 0 and bits[k - 1] == bits[-1]:
        k -= 1
    return k


@dataclass
class ConsistencyReport:
    contradictions: list
    suspicious: list
    samples: int

    @property
    def ok(self) -> bool:
        return not self.contradictions


def delta2_consistency_check(D: Delta2SetName, samples: Iterable[PointName], depth: int,
                             window: int | None = None) -> ConsistencyReport:
    """Finite-depth spot check of the union/intersection agreement.

    With k = ``window`` (default depth // 4), a contradiction is a sample
    that no closed A_i (i <= k) refutes yet which some open U_j (j <= k) has
    not confirmed by fuel ``depth``. A sample refuted by every A_i (i <= k)
    but confirmed in every U_j (j <= k) is only suspicious.
    """
    k = depth // 4 if window is None else window
    contradictions, suspicious = [], []
    n = 0
    for x in samples:
        n += 1
        in_some_a = [i for i in range(k + 1) if member_out_closed(D.closed(i), x, depth) is not OUT]
        out_some_u = [j for j in range(k + 1) if member_open(D.open(j), x, depth) is not YES]
        if in_some_a and out_some_u:
            first = min(max(in_some_a[0], out_some_u[0]), depth)
            contradictions.append({"point": x.label, "closed": in_some_a[0], "open": out_some_u[0],
                                   "stage": max(1, first)})
        elif not in_some_a and not out_some_u:
            suspicious.append({"point": x.label})
    return ConsistencyReport(contradictions, suspicious, n)


# -- interval helpers (real line) ---------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """A subinterval of the real line with open or closed ends."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        lo_ok = x >= self.lo if self.lo_closed else x > self.lo
        hi_ok = x <= self.hi if self.hi_closed else x < self.hi
        return lo_ok and hi_ok

    def closed_part(self, k: int) -> tuple[Fraction, Fraction] | None:
        """k-th closed approximation from inside; None when empty."""
        lo = self.lo if self.lo_closed else self.lo + pow2(-k)
        hi = self.hi if self.hi_closed else self.hi - pow2(-k)
        return (lo, hi) if lo <= hi else None

    def open_part(self, k: int) -> Ball:
        """k-th open ball containing the interval; these shrink to it."""
        lo = self.lo - pow2(-k) if self.lo_closed else self.lo
        hi = self.hi + pow2(-k) if self.hi_closed else self.hi
        return Ball((lo + hi) / 2, (hi - lo) / 2)

    def __str__(self):
        return f"{'[' if self.lo_closed else '('}{self.lo},{self.hi}{']' if self.hi_closed else ')'}"

    @classmethod
    def parse(cls, text: str) -> "Interval":
        text = text.strip()
        if text[0] not in "[(" or text[-1] not in "])":
            raise ValueError(f"bad interval {text!r}")
        lo, hi = text[1:-1].split(",")
        return cls(Fraction(lo.strip()), Fraction(hi.strip()), text[0] == "[", text[-1] == "]")


def closed_interval(lo, hi, space: RealInterval = UNIT) -> ClosedSetName:
    """[lo, hi] as the complement of two open balls."""
    lo, hi = Fraction(lo), Fraction(hi)
    span = space.hi - space.lo + 1
    return BallClosed.of(space, [Ball(lo - span, span), Ball(hi + span, span)], f"[{lo},{hi}]")


def open_ball_set(center, radius, space: MetricSpace = UNIT) -> BallOpen:
    if isinstance(space, RealInterval):
        center = Fraction(center)
    return BallOpen.of(space, [Ball(center, Fraction(radius))], f"B({center},{radius})")
