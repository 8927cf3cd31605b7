"""Finite-prefix semantics for infinite sequences.

Every infinite object is observed through a fuel index: ``name.at(fuel)``
returns the finite prefix known after ``fuel`` stages. All operations are
deterministic functions of their inputs and the fuel, which makes every
verdict reproducible and monotone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

BINARY = "binary"
NATURAL = "natural"


class ConfigurationError(ValueError):
    """Malformed machine, name or file."""


@dataclass(frozen=True)
class Prefix:
    """A finite initial segment of an infinite sequence."""

    symbols: tuple = ()
    alphabet: str = NATURAL

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if self.alphabet == BINARY:
            bad = [s for s in self.symbols if s not in (0, 1)]
        elif self.alphabet == NATURAL:
            bad = [s for s in self.symbols if not (isinstance(s, int) and s >= 0)]
        else:
            bad = []
        if bad:
            raise ConfigurationError(f"symbols {bad!r} not in alphabet {self.alphabet}")

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Prefix(self.symbols[item], self.alphabet)
        return self.symbols[item]

    def __iter__(self):
        return iter(self.symbols)

    def is_prefix_of(self, other: "Prefix | Sequence") -> bool:
        return is_prefix(self.symbols, tuple(other))

    def compatible(self, other) -> bool:
        return compatible(self.symbols, tuple(other))


def is_prefix(a: Sequence, b: Sequence) -> bool:
    return len(a) <= len(b) and tuple(b[: len(a)]) == tuple(a)


def compatible(a: Sequence, b: Sequence) -> bool:
    n = min(len(a), len(b))
    return tuple(a[:n]) == tuple(b[:n])


class StreamName:
    """A fuel-indexed name of an infinite sequence.

    ``at(fuel)`` must be monotone: a smaller fuel yields an initial segment
    of what a larger fuel yields. Results are memoised per fuel.
    """

    def __init__(self, at: Callable[[int], Sequence], alphabet: str = NATURAL, label: str = ""):
        self._at = at
        self.alphabet = alphabet
        self.label = label
        self._cache: dict[int, tuple] = {}

    def at(self, fuel: int) -> tuple:
        if fuel < 0:
            raise ValueError("fuel must be non-negative")
        got = self._cache.get(fuel)
        if got is None:
            got = tuple(self._at(fuel))
            self._cache[fuel] = got
        return got

    def prefix(self, fuel: int) -> Prefix:
        return Prefix(self.at(fuel), self.alphabet)

    def take(self, n: int, max_fuel: int = 10_000) -> tuple:
        """First ``n`` symbols, searching fuel by doubling."""
        fuel = max(n, 1)
        while True:
            got = self.at(fuel)
            if len(got) >= n:
                return got[:n]
            if fuel >= max_fuel:
                raise RuntimeError(f"stream not productive within fuel {max_fuel}")
            fuel = min(2 * fuel, max_fuel)

    def __repr__(self):
        return f"StreamName({self.label or '?'}: {self.at(8)}...)"

    # constructors

    @classmethod
    def from_function(cls, f: Callable[[int], object], alphabet: str = NATURAL, label: str = ""):
        """Stream whose i-th symbol is ``f(i)``; fuel t reveals t symbols."""
        return cls(lambda fuel: [f(i) for i in range(fuel)], alphabet, label)

    @classmethod
    def eventually_periodic(cls, head: Sequence, cycle: Sequence, alphabet: str = NATURAL):
        head, cycle = tuple(head), tuple(cycle)
        if not cycle:
            raise ValueError("cycle must be non-empty")

        def sym(i):
            return head[i] if i < len(head) else cycle[(i - len(head)) % len(cycle)]

        return cls.from_function(sym, alphabet, f"{head}{cycle}^w")

    @classmethod
    def constant(cls, symbol, alphabet: str = NATURAL):
        return cls.eventually_periodic((), (symbol,), alphabet)

    @classmethod
    def finite(cls, symbols: Sequence, alphabet: str = NATURAL):
        """A partial name: only ``symbols`` are ever revealed."""
        symbols = tuple(symbols)
        return cls(lambda fuel: symbols[:fuel], alphabet, f"{symbols}...")


# -- pairing -------------------------------------------------------------

def cantor_pair(i: int, j: int) -> int:
    return (i + j) * (i + j + 1) // 2 + j


def cantor_unpair(n: int) -> tuple[int, int]:
    w = (math.isqrt(8 * n + 1) - 1) // 2
    j = n - w * (w + 1) // 2
    return w - j, j


def pair_encode(p: StreamName, q: StreamName) -> StreamName:
    """Interleave: even positions carry ``p``, odd positions carry ``q``."""

    def at(fuel):
        a, b = p.at(fuel), q.at(fuel)
        out = []
        for i in range(min(len(a), len(b))):
            out += [a[i], b[i]]
        if len(a) > len(b):
            out.append(a[len(b)])
        return out

    alphabet = p.alphabet if p.alphabet == q.alphabet else NATURAL
    return StreamName(at, alphabet, f"<{p.label},{q.label}>")


def pair_decode(r: StreamName) -> tuple[StreamName, StreamName]:
    even = StreamName(lambda fuel: r.at(fuel)[0::2], r.alphabet)
    odd = StreamName(lambda fuel: r.at(fuel)[1::2], r.alphabet)
    return even, odd


def tuple_encode(ps: Callable[[int], StreamName], alphabet: str = NATURAL) -> StreamName:
    """Encode a countable family: position n holds ``ps(i)[j]`` where n = <i, j>.

    The output is cut at the first position whose source symbol is not yet
    known at this fuel, so the result stays a monotone prefix.
    """

    def at(fuel):
        out = []
        for n in range(fuel):
            i, j = cantor_unpair(n)
            got = ps(i).at(fuel)
            if j >= len(got):
                break
            out.append(got[j])
        return out

    return StreamName(at, alphabet, "tuple")


def tuple_component(r: StreamName, i: int) -> StreamName:
    def at(fuel):
        got = r.at(fuel)
        out = []
        j = 0
        while True:
            n = cantor_pair(i, j)
            if n >= len(got):
                return out
            out.append(got[n])
            j += 1

    return StreamName(at, r.alphabet, f"component {i}")


# -- transformers ----------------------------------------------------------

class PrefixTransformer:
    """A realizer given by its action on finite prefixes.

    ``apply(prefix, fuel)`` must be monotone in both the prefix (under
    extension) and the fuel.
    """

    def __init__(self, apply: Callable[[tuple, int], Sequence], label: str = ""):
        self._apply = apply
        self.label = label

    def apply(self, prefix: Sequence, fuel: int) -> tuple:
        return tuple(self._apply(tuple(prefix), fuel))

    def on_stream(self, s: StreamName, alphabet: str = NATURAL) -> StreamName:
        return StreamName(lambda fuel: self.apply(s.at(fuel), fuel), alphabet, self.label)

    def __repr__(self):
        return f"PrefixTransformer({self.label})"

    @classmethod
    def identity(cls):
        return cls(lambda w, fuel: w, "id")

    @classmethod
    def symbol_map(cls, f: Callable[[object], object], label: str = "map"):
        return cls(lambda w, fuel: [f(s) for s in w], label)

    @classmethod
    def delayed(cls, lag: int):
        """Copies its input but withholds the last ``lag`` symbols."""
        return cls(lambda w, fuel: w[: max(0, len(w) - lag)], f"delay{lag}")


def compose(t1: PrefixTransformer, t2: PrefixTransformer) -> PrefixTransformer:
    """``t2`` after ``t1``; both run at the same fuel."""
    return PrefixTransformer(lambda w, fuel: t2.apply(t1.apply(w, fuel), fuel),
                             f"{t2.label}.{t1.label}")


@dataclass
class MonotonicityReport:
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_monotone(t: PrefixTransformer, samples: Iterable[Sequence], depth: int) -> MonotonicityReport:
    """Compare outputs over every sampled pair w ⊑ w' and fuels f ≤ f' ≤ depth."""
    samples = sorted({tuple(s) for s in samples}, key=len)
    fuels = sorted({0, depth // 2, depth} | set(range(0, depth + 1, max(1, depth // 8))))
    violations = []
    checked = 0
    outputs = {(w, f): t.apply(w, f) for w in samples for f in fuels}
    for a in samples:
        for b in samples:
            if not is_prefix(a, b):
                continue
            for i, f in enumerate(fuels):
                for g in fuels[i:]:
                    checked += 1
                    lo, hi = outputs[(a, f)], outputs[(b, g)]
                    if not is_prefix(lo, hi):
                        violations.append({"input": a, "extension": b, "fuel": f,
                                           "fuel_ext": g, "output": lo, "output_ext": hi})
    return MonotonicityReport(checked, violations)


# -- staged-prefix log -----------------------------------------------------

def _fmt_symbol(s) -> str:
    return str(s)


def format_stage_log(s: StreamName, fuels: Iterable[int]) -> str:
    lines = []
    for n in fuels:
        got = s.at(n)
        sep = "" if s.alphabet == BINARY else " "
        lines.append(f"stage {n}: {sep.join(_fmt_symbol(x) for x in got)}")
    return "\n".join(lines) + "\n"


def parse_stage_log(text: str, alphabet: str = NATURAL) -> dict[int, tuple]:
    out = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.startswith("stage ") or ":" not in line:
            raise ConfigurationError(f"bad stage line: {raw!r}")
        head, body = line.split(":", 1)
        try:
            n = int(head[len("stage "):])
            body = body.strip()
            if alphabet == BINARY:
                syms = tuple(int(c) for c in body)
            else:
                syms = tuple(int(c) for c in body.split())
        except ValueError as exc:
            raise ConfigurationError(f"bad stage line: {raw!r}") from exc
        out[n] = syms
    stages = sorted(out)
    for a, b in zip(stages, stages[1:]):
        if not is_prefix(out[a], out[b]):
            raise ConfigurationError(f"stage {b} does not extend stage {a}")
    return out


def stream_from_stage_log(stages: dict[int, tuple], alphabet: str = NATURAL) -> StreamName:
    keys = sorted(stages)

    def at(fuel):
        best = ()
        for k in keys:
            if k <= fuel:
                best = stages[k]
        return best

    return StreamName(at, alphabet, "log")


@lru_cache(maxsize=None)
def binary_words(n: int) -> tuple:
    if n == 0:
        return ((),)
    return tuple(w + (b,) for w in binary_words(n - 1) for b in (0, 1))
