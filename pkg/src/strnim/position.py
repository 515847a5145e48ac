"""Positions of the string-shrinking game, stored in run-length form.

A position is a word over the lowercase alphabet a-z, kept as a sequence
of (symbol, length) runs with adjacent runs always carrying distinct
symbols.  A move removes j >= 1 characters from one run; emptying a run
may merge its two neighbours when they share a symbol.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import groupby

ALPHABET_SIZE = 26

_RLE_GROUP = re.compile(r"([a-z])(?:\^?([0-9]+))?")


class ParseError(ValueError):
    """Raised for text that does not denote a position."""


def symbol_from_letter(letter: str) -> int:
    if len(letter) != 1 or not "a" <= letter <= "z":
        raise ParseError(f"not a lowercase letter: {letter!r}")
    return ord(letter) - ord("a")


def letter(symbol: int) -> str:
    if not 0 <= symbol < ALPHABET_SIZE:
        raise ValueError(f"symbol out of range: {symbol}")
    return chr(ord("a") + symbol)


@dataclass(frozen=True)
class Run:
    """A maximal block of one repeated symbol."""

    symbol: int
    length: int

    def __post_init__(self) -> None:
        if not 0 <= self.symbol < ALPHABET_SIZE:
            raise ValueError(f"symbol out of range: {self.symbol}")
        if self.length < 1:
            raise ValueError(f"run length must be >= 1, got {self.length}")


@dataclass(frozen=True)
class Move:
    """Removal of `count` characters from the run at 1-based `run_index`."""

    run_index: int
    count: int

    def __post_init__(self) -> None:
        if self.run_index < 1:
            raise ValueError(f"run_index must be >= 1, got {self.run_index}")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")


@dataclass(frozen=True)
class Position:
    """An immutable game position; the empty word is `Position(())`."""

    runs: tuple[Run, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.runs, self.runs[1:]):
            if a.symbol == b.symbol:
                raise ValueError("adjacent runs must have distinct symbols")

    def __len__(self) -> int:
        return sum(r.length for r in self.runs)

    def __bool__(self) -> bool:
        return bool(self.runs)

    def expand(self) -> str:
        return "".join(letter(r.symbol) * r.length for r in self.runs)

    def symbols(self) -> set[int]:
        return {r.symbol for r in self.runs}

    def __str__(self) -> str:
        return self.expand()

    def __repr__(self) -> str:
        return f"Position({self.expand()!r})"


EMPTY = Position(())


class CodingMap:
    """A symbol-to-symbol bijection over a declared alphabet.

    With `fixed_point_free` set, construction additionally rejects any
    symbol mapped to itself.
    """

    def __init__(self, mapping: dict[int, int], fixed_point_free: bool = False):
        images = set(mapping.values())
        if len(images) != len(mapping):
            raise ValueError("coding is not injective")
        if images != set(mapping):
            raise ValueError("coding is not a bijection on its alphabet")
        if fixed_point_free and any(a == b for a, b in mapping.items()):
            raise ValueError("coding has a fixed point")
        self.mapping = dict(mapping)
        self.fixed_point_free = fixed_point_free

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CodingMap):
            return NotImplemented
        return self.mapping == other.mapping

    def __repr__(self) -> str:
        return f"CodingMap({self.to_letters()!r})"

    def __call__(self, symbol: int) -> int:
        try:
            return self.mapping[symbol]
        except KeyError:
            raise ValueError(f"coding undefined on symbol {letter(symbol)!r}") from None

    def inverse(self) -> CodingMap:
        return CodingMap({b: a for a, b in self.mapping.items()}, self.fixed_point_free)

    @classmethod
    def from_letters(cls, mapping: dict[str, str], fixed_point_free: bool = False) -> CodingMap:
        return cls(
            {symbol_from_letter(a): symbol_from_letter(b) for a, b in mapping.items()},
            fixed_point_free,
        )

    def to_letters(self) -> dict[str, str]:
        return {letter(a): letter(b) for a, b in sorted(self.mapping.items())}


def swap_coding() -> CodingMap:
    """The two-letter swap a<->b."""
    return CodingMap.from_letters({"a": "b", "b": "a"}, fixed_point_free=True)


def position_from_runs(pairs: list[tuple[int, int]]) -> Position:
    """Build a position from (symbol, length) pairs, merging equal neighbours
    and dropping zero-length entries."""
    runs: list[list[int]] = []
    for symbol, length in pairs:
        if length < 0:
            raise ValueError(f"negative run length: {length}")
        if length == 0:
            continue
        if runs and runs[-1][0] == symbol:
            runs[-1][1] += length
        else:
            runs.append([symbol, length])
    return Position(tuple(Run(s, n) for s, n in runs))


def from_word(word: str) -> Position:
    """Build a position from a literal word over [a-z] (no RLE syntax)."""
    return position_from_runs(
        [(symbol_from_letter(ch), sum(1 for _ in grp)) for ch, grp in groupby(word)]
    )


def parse(text: str) -> Position:
    """Parse a literal word (`aabbba`) or run-length notation (`a^2b3a1`).

    The caret is optional and a missing exponent means 1.  Adjacent groups
    with equal symbols are merged, so `a^1a^2` denotes `aaa`.
    """
    pairs: list[tuple[int, int]] = []
    pos = 0
    while pos < len(text):
        m = _RLE_GROUP.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character at offset {pos}: {text[pos]!r}")
        exponent = 1
        if m.group(2) is not None:
            exponent = int(m.group(2))
            if exponent == 0:
                raise ParseError(f"zero exponent at offset {pos}: {m.group(0)!r}")
        pairs.append((symbol_from_letter(m.group(1)), exponent))
        pos = m.end()
    return position_from_runs(pairs)


def render(pos: Position, style: str = "literal") -> str:
    """Render a position as a literal word or as `x^n` groups."""
    if style == "literal":
        return pos.expand()
    if style == "rle":
        return "".join(f"{letter(r.symbol)}^{r.length}" for r in pos.runs)
    raise ValueError(f"unknown render style: {style!r}")


def legal_moves(pos: Position) -> list[Move]:
    """All (run_index, count) moves, ascending; there are len(pos) of them."""
    return [
        Move(i, k)
        for i, run in enumerate(pos.runs, start=1)
        for k in range(1, run.length + 1)
    ]


def apply_move(pos: Position, mv: Move) -> Position:
    """Remove `mv.count` characters from the indexed run.

    An emptied run disappears; its neighbours merge when they carry the
    same symbol (at most one merge per move).
    """
    if not 1 <= mv.run_index <= len(pos.runs):
        raise ValueError(f"run index {mv.run_index} out of range for {pos!r}")
    idx = mv.run_index - 1
    run = pos.runs[idx]
    if not 1 <= mv.count <= run.length:
        raise ValueError(f"count {mv.count} out of range for run of length {run.length}")
    if mv.count < run.length:
        runs = list(pos.runs)
        runs[idx] = Run(run.symbol, run.length - mv.count)
        return Position(tuple(runs))
    before = pos.runs[:idx]
    after = pos.runs[idx + 1:]
    if before and after and before[-1].symbol == after[0].symbol:
        merged = Run(before[-1].symbol, before[-1].length + after[0].length)
        return Position(before[:-1] + (merged,) + after[1:])
    return Position(before + after)


def successors(pos: Position) -> set[Position]:
    """Distinct one-move results; their count always equals len(pos)."""
    result = {apply_move(pos, mv) for mv in legal_moves(pos)}
    assert len(result) == len(pos), f"successor count {len(result)} != |{pos!r}|"
    return result


def reverse(pos: Position) -> Position:
    return Position(tuple(reversed(pos.runs)))


def recode(pos: Position, f: CodingMap) -> Position:
    """Replace every run symbol by its image under `f` (lengths unchanged)."""
    occurring = pos.symbols()
    images = set()
    for s in occurring:
        images.add(f(s))
    if len(images) != len(occurring):
        raise ValueError("coding is not injective on the occurring alphabet")
    return Position(tuple(Run(f(r.symbol), r.length) for r in pos.runs))


def interval_to_move(pos: Position, start: int, end: int) -> Move:
    """Convert a 1-based inclusive index range of equal characters in the
    expanded word into its canonical (run_index, count) move."""
    n = len(pos)
    if not 1 <= start <= end <= n:
        raise ValueError(f"interval [{start},{end}] out of range for length {n}")
    offset = 0
    for i, run in enumerate(pos.runs, start=1):
        if start <= offset + run.length:
            if end > offset + run.length:
                raise ValueError(f"interval [{start},{end}] spans more than one run")
            return Move(i, end - start + 1)
        offset += run.length
    raise AssertionError("unreachable")


def move_to_interval(pos: Position, mv: Move) -> tuple[int, int]:
    """The 1-based expanded index range removed by `mv` (first `count`
    characters of the indexed run)."""
    if not 1 <= mv.run_index <= len(pos.runs):
        raise ValueError(f"run index {mv.run_index} out of range for {pos!r}")
    run = pos.runs[mv.run_index - 1]
    if not 1 <= mv.count <= run.length:
        raise ValueError(f"count {mv.count} out of range for run of length {run.length}")
    start = 1 + sum(r.length for r in pos.runs[: mv.run_index - 1])
    return start, start + mv.count - 1


def remove_interval(pos: Position, start: int, end: int) -> Position:
    """Remove the 1-based inclusive expanded range, which must repeat one
    character; equivalent to apply_move on the corresponding move."""
    return apply_move(pos, interval_to_move(pos, start, end))


def _relabel_rle(runs: tuple[Run, ...]) -> str:
    # First-occurrence relabeling: first new symbol -> a, next -> b, ...
    seen: dict[int, int] = {}
    out: list[str] = []
    for r in runs:
        code = seen.setdefault(r.symbol, len(seen))
        out.append(f"{chr(97 + code)}^{r.length}")
    return "".join(out)


def canonical_key(pos: Position) -> str:
    """A key shared by every position reachable from `pos` via symbol
    bijections and/or reversal: the smaller of the two first-occurrence
    relabeled renderings (forward and reversed)."""
    fwd = _relabel_rle(pos.runs)
    rev = _relabel_rle(tuple(reversed(pos.runs)))
    return fwd if fwd <= rev else rev
