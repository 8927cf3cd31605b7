"""Text formats: rejection schedules, function bundles, enumerations, point literals."""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .jayne_rogers import Delta2FunctionName, Piece, PiecewiseName, identity_delta2, piecewise_constant_delta2
from .machines import TypeTwoMachine
from .markov import ListedEnumeration
from .spaces import (BAIRE, CANTOR, UNIT, Interval, PointMap, PointName, WholeClosed, closed_interval,
                     pow2, signed_digit_point)
from .streams import BINARY, ConfigurationError, StreamName


class FormatError(ValueError):
    """Malformed input text."""

    def __init__(self, msg: str, lineno: int | None = None, source: str = ""):
        where = f"{source}:{lineno}: " if lineno is not None else (f"{source}: " if source else "")
        super().__init__(where + msg)
        self.lineno = lineno


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_word(tok: str) -> tuple:
    if tok in ("e", "-"):
        return ()
    if not re.fullmatch(r"[01]+", tok):
        raise ValueError(f"not a binary word: {tok!r}")
    return tuple(int(c) for c in tok)


def format_word(w) -> str:
    return "".join(map(str, w)) or "e"


# -- rejection schedules --------------------------------------------------------------

_STAGE = re.compile(r"stage\s+(\d+)\s*:\s*(.*)")


def parse_tree(text: str, source: str = "") -> dict[int, list[tuple]]:
    """``stage <t>: reject <node> ...`` lines; the empty node is written ``e``."""
    sched: dict[int, list[tuple]] = {}
    for lineno, line in _lines(text):
        m = _STAGE.fullmatch(line)
        if not m:
            raise FormatError(f"expected 'stage <t>: reject <node>', got {line!r}", lineno, source)
        toks = m.group(2).split()
        if not toks or toks[0] != "reject":
            raise FormatError("expected 'reject'", lineno, source)
        try:
            words = [parse_word(t) for t in toks[1:]]
        except ValueError as exc:
            raise FormatError(str(exc), lineno, source) from None
        sched.setdefault(int(m.group(1)), []).extend(words)
    return sched


def format_tree(schedule: dict) -> str:
    return "".join(f"stage {t}: reject {format_word(w)}\n"
                   for t in sorted(schedule) for w in schedule[t])


# -- enumerations ------------------------------------------------------------------------

def parse_enumeration(text: str, source: str = "") -> ListedEnumeration:
    """``n: w w@t ...``: U_n is the union of the cylinders, ``@t`` delaying one to stage t."""
    entries: dict[int, list] = {}
    for lineno, line in _lines(text):
        head, sep, rest = line.partition(":")
        if not sep or not head.strip().isdigit():
            raise FormatError(f"expected 'n: <cylinders>', got {line!r}", lineno, source)
        items = []
        for tok in rest.split():
            word, _, at = tok.partition("@")
            try:
                items.append((parse_word(word), int(at) if at else 0))
            except ValueError as exc:
                raise FormatError(str(exc), lineno, source) from None
        entries.setdefault(int(head), []).extend(items)
    return ListedEnumeration(entries, source or "listed")


# -- function bundles ----------------------------------------------------------------------

SPACES = {"unit": UNIT}


def _manifest(lines, kind: str, source: str):
    try:
        lineno, first = next(lines)
    except StopIteration:
        raise FormatError("empty file", None, source) from None
    m = re.fullmatch(r"manifest:\s*(\w+)\s+X=(\w+)\s+Y=(\w+)", first)
    if not m or m.group(1) != kind:
        raise FormatError(f"expected 'manifest: {kind} X=<space> Y=<space>'", lineno, source)
    try:
        return SPACES[m.group(2)], SPACES[m.group(3)]
    except KeyError as exc:
        raise FormatError(f"unknown space {exc.args[0]!r}", lineno, source) from None


def parse_d2(text: str, source: str = "") -> Delta2FunctionName:
    """A manifest line, then either ``identity`` or ``interval <I> -> <value>`` lines."""
    lines = _lines(text)
    X, Y = _manifest(lines, "d2", source)
    pieces, ident = [], False
    for lineno, line in lines:
        if line == "identity":
            ident = True
            continue
        m = re.fullmatch(r"interval\s+([\[(].*?[\])])\s*->\s*(\S+)", line)
        if not m:
            raise FormatError(f"bad line {line!r}", lineno, source)
        try:
            pieces.append((Interval.parse(m.group(1)), Fraction(m.group(2))))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(str(exc), lineno, source) from None
    if ident == bool(pieces):
        raise FormatError("give either 'identity' or interval lines", None, source)
    label = Path(source).stem if source else "d2"
    return identity_delta2(X, label) if ident else piecewise_constant_delta2(pieces, X, Y, label)


_TERM = re.compile(r"\s*([+-]?\s*[0-9/]+)\s*(?:([+-])\s*2\^-k)?\s*")


def _endpoint(text: str):
    """``a``, ``a-2^-k`` or ``a+2^-k`` as a function of k."""
    m = _TERM.fullmatch(text)
    if not m:
        raise ValueError(f"bad endpoint {text!r}")
    a = Fraction(m.group(1).replace(" ", ""))
    sign = {None: 0, "+": 1, "-": -1}[m.group(2)]
    return lambda k: a + sign * pow2(-k)


def _realizer(text: str, Y):
    if text == "identity":
        return PointMap.identity(Y)
    m = re.fullmatch(r"const\s+(\S+)", text)
    if not m:
        raise ValueError(f"bad realizer {text!r}")
    return PointMap.constant(Y, Fraction(m.group(1)))


def _closed(lo, hi, label):
    lo, hi = Fraction(lo), Fraction(hi)
    return None if lo > hi else closed_interval(lo, hi)


def parse_pw(text: str, source: str = "") -> PiecewiseName:
    """``piece closed [a,b] -> <realizer>`` and
    ``family closed [a(k),b(k)] k>=m -> <realizer>`` lines; realizers are
    ``const v`` or ``identity``. Listed pieces come first, then the
    families interleaved by k."""
    lines = _lines(text)
    X, Y = _manifest(lines, "pw", source)
    single, families = [], []
    for lineno, line in lines:
        try:
            m = re.fullmatch(r"piece\s+closed\s+\[(.*?),(.*?)\]\s*->\s*(.+)", line)
            if m:
                lo, hi = Fraction(m.group(1).strip()), Fraction(m.group(2).strip())
                if lo > hi:
                    raise ValueError("empty interval")
                single.append(Piece(closed_interval(lo, hi), _realizer(m.group(3).strip(), Y), f"[{lo},{hi}]"))
                continue
            m = re.fullmatch(r"family\s+closed\s+\[(.*?),(.*?)\]\s*k\s*>=\s*(\d+)\s*->\s*(.+)", line)
            if m:
                families.append((_endpoint(m.group(1)), _endpoint(m.group(2)), int(m.group(3)),
                                 _realizer(m.group(4).strip(), Y), f"[{m.group(1)},{m.group(2)}]"))
                continue
            m = re.fullmatch(r"piece\s+whole\s*->\s*(.+)", line)
            if m:
                single.append(Piece(WholeClosed(X), _realizer(m.group(1).strip(), Y), "whole"))
                continue
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(str(exc), lineno, source) from None
        raise FormatError(f"bad line {line!r}", lineno, source)
    if not single and not families:
        raise FormatError("no pieces", None, source)

    def piece(i):
        if i < len(single):
            return single[i]
        if not families:
            return None
        j = i - len(single)
        lo, hi, k0, real, label = families[j % len(families)]
        k = k0 + j // len(families)
        A = _closed(lo(k), hi(k), label)
        return None if A is None else Piece(A, real, f"{label} k={k}")

    label = Path(source).stem if source else "pw"
    count = len(single) if not families else None
    return PiecewiseName(X, Y, piece, count, None, label)


def load(path: str, parser):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(str(exc), None, str(p)) from None
    return parser(text, str(p))


def load_machine(path: str) -> TypeTwoMachine:
    def parse(text, source):
        try:
            return TypeTwoMachine.from_text(text, Path(source).stem)
        except (ConfigurationError, ValueError, KeyError) as exc:
            raise FormatError(str(exc), None, source) from None

    return load(path, parse)


# -- point literals ------------------------------------------------------------------------

def _symbols(body: str, sep: str) -> tuple[tuple, tuple | None]:
    """``head`` or ``head(cycle)``; a trailing ``...`` is allowed and ignored."""
    body = body.removesuffix("...")
    m = re.fullmatch(r"([^()]*)(?:\((.+)\))?", body)
    if not m:
        raise ValueError(f"bad symbols {body!r}")

    def split(s):
        s = s.strip(sep) if sep else s
        if not s:
            return ()
        return tuple(int(c) for c in (s.split(sep) if sep else s))

    head = split(m.group(1))
    cycle = split(m.group(2)) if m.group(2) else None
    return head, cycle


def parse_point(text: str) -> PointName:
    """``0.75sd`` (real, signed digits), ``0110b`` or ``01(10)b`` (Cantor),
    ``0,1,0,1n`` or ``0,(1,2)n`` (Baire). Finite heads continue with 0s."""
    t = text.strip()
    try:
        if t.endswith("sd"):
            x = Fraction(t[:-2])
            if not 0 <= x <= 1:
                raise ValueError("signed-digit literal must lie in [0, 1]")
            return signed_digit_point(x)
        if t.endswith("b"):
            head, cycle = _symbols(t[:-1], "")
            if any(s not in (0, 1) for s in head + (cycle or ())):
                raise ValueError("binary literal has non-binary symbols")
            s = StreamName.eventually_periodic(head, cycle or (0,), BINARY)
            return PointName.sequence(s, CANTOR)
        if t.endswith("n"):
            head, cycle = _symbols(t[:-1], ",")
            s = StreamName.eventually_periodic(head, cycle or (0,))
            return PointName.sequence(s, BAIRE)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad point literal {text!r}: {exc}") from None
    raise FormatError(f"bad point literal {text!r}: use a suffix sd, b or n")


def literal_value(text: str):
    """The exact value named by a literal (a Fraction, or a head/cycle pair)."""
    t = text.strip()
    if t.endswith("sd"):
        return Fraction(t[:-2])
    if t.endswith("b"):
        return _symbols(t[:-1], "")
    return _symbols(t[:-1], ",")
