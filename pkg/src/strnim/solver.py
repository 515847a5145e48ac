"""Exact solving: Grundy values, P/N verdicts, certificates, enumeration.

Search is an explicit-stack depth-first traversal memoized on canonical
keys, so recursion depth never limits position length.  A node budget
turns worst-case blowups into loud failures instead of wrong answers.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .position import (
    Move,
    Position,
    Run,
    apply_move,
    canonical_key,
    from_word,
    legal_moves,
    letter,
    parse,
    render,
    successors,
)

DEFAULT_NODE_BUDGET = 50_000_000

CACHE_HEADER = "STRNIMCACHE 1"


class BudgetExhaustedError(RuntimeError):
    """Raised when a solve would exceed its node budget."""


class CacheFormatError(ValueError):
    """Raised for cache files that do not match the documented format."""


class ConsistencyError(RuntimeError):
    """An established game property failed to hold; indicates a real bug."""


def mex(values) -> int:
    """Least non-negative integer absent from `values`."""
    present = set(values)
    m = 0
    while m in present:
        m += 1
    return m


@dataclass
class SolveStats:
    nodes_expanded: int = 0
    cache_hits: int = 0
    peak_table_size: int = 0
    wall_time: float = 0.0


class TranspositionTable:
    """Canonical-key -> Grundy-value map with hit/miss counters.

    Writes are idempotent: a key's value is unique, so concurrent
    last-write-wins insertion from batch workers is safe.
    """

    def __init__(self) -> None:
        self.entries: dict[str, int] = {}
        self.hits = 0
        self.misses = 0

    def get(self, key: str) -> int | None:
        value = self.entries.get(key)
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def put(self, key: str, value: int) -> None:
        self.entries[key] = value

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return True  # an empty table is still a table

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def audit_sample(self, sample_size: int = 25) -> list[str]:
        """Recompute a deterministic sample of entries with a fresh table;
        return the keys whose stored value disagrees (expected: none)."""
        bad = []
        keys = sorted(self.entries)
        step = max(1, len(keys) // sample_size)
        for key in keys[::step][:sample_size]:
            if grundy(parse(key), TranspositionTable()) != self.entries[key]:
                bad.append(key)
        return bad


def save_cache(table: TranspositionTable, destination) -> None:
    """Write `CACHE_HEADER` plus one `<canonical-rle>\\t<grundy>` line per
    entry, sorted by key so identical tables serialize byte-identically."""
    with open(destination, "w", encoding="ascii") as fh:
        fh.write(CACHE_HEADER + "\n")
        for key in sorted(table.entries):
            fh.write(f"{key}\t{table.entries[key]}\n")


def load_cache(source) -> TranspositionTable:
    table = TranspositionTable()
    with open(source, "r", encoding="ascii") as fh:
        text = fh.read()
    if not text.endswith("\n"):
        raise CacheFormatError(f"{source}: missing trailing newline")
    lines = text.split("\n")[:-1]
    if not lines or lines[0] != CACHE_HEADER:
        head = lines[0] if lines else ""
        raise CacheFormatError(f"{source}: line 1: expected {CACHE_HEADER!r}, got {head!r}")
    for lineno, line in enumerate(lines[1:], start=2):
        key, sep, value = line.partition("\t")
        if not sep or not value.isdigit():
            raise CacheFormatError(f"{source}: line {lineno}: malformed entry {line!r}")
        if key in table.entries:
            raise CacheFormatError(f"{source}: line {lineno}: duplicate key {key!r}")
        table.entries[key] = int(value)
    return table


class _Frame:
    __slots__ = ("key", "children", "idx", "own")

    def __init__(self, key: str, pos: Position):
        self.key = key
        self.children = [(canonical_key(s), s) for s in successors(pos)]
        self.idx = 0
        self.own = -1  # index of the child this frame itself pushed last


def grundy(
    pos: Position,
    table: TranspositionTable | None = None,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    stats: SolveStats | None = None,
) -> int:
    """Grundy value of `pos`: mex over successor values, 0 for the empty word."""
    if table is None:
        table = TranspositionTable()
    if stats is None:
        stats = SolveStats()
    start = time.perf_counter()
    root_key = canonical_key(pos)
    value = table.get(root_key)
    if value is not None:
        stats.cache_hits += 1
        return value

    stack = [_Frame(root_key, pos)]
    stats.nodes_expanded += 1
    while stack:
        frame = stack[-1]
        pushed = False
        while frame.idx < len(frame.children):
            child_key, child_pos = frame.children[frame.idx]
            if child_key in table.entries:
                if frame.idx != frame.own:
                    table.hits += 1
                    stats.cache_hits += 1
                frame.idx += 1
                continue
            table.misses += 1
            stats.nodes_expanded += 1
            if stats.nodes_expanded > budget:
                stats.wall_time += time.perf_counter() - start
                raise BudgetExhaustedError(
                    f"node budget {budget} exhausted while solving {render(pos, 'rle')!r}"
                )
            frame.own = frame.idx
            stack.append(_Frame(child_key, child_pos))
            pushed = True
            break
        if pushed:
            continue
        table.put(frame.key, mex(table.entries[k] for k, _ in frame.children))
        stack.pop()
    stats.peak_table_size = max(stats.peak_table_size, len(table))
    stats.wall_time += time.perf_counter() - start
    return table.entries[root_key]


@dataclass(frozen=True)
class Verdict:
    """P/N classification; N verdicts carry the smallest winning move."""

    kind: str
    certificate: Move | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("P", "N"):
            raise ValueError(f"verdict kind must be 'P' or 'N', got {self.kind!r}")
        if (self.kind == "N") != (self.certificate is not None):
            raise ValueError("certificate present iff verdict is N")


def classify(
    pos: Position,
    table: TranspositionTable | None = None,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
) -> Verdict:
    """P iff the Grundy value is 0; otherwise N with the lexicographically
    smallest (run_index, count) move that reaches a P position."""
    if table is None:
        table = TranspositionTable()
    if grundy(pos, table, budget=budget) == 0:
        return Verdict("P")
    for mv in legal_moves(pos):
        if grundy(apply_move(pos, mv), table, budget=budget) == 0:
            return Verdict("N", mv)
    raise ConsistencyError(f"{pos!r} has nonzero Grundy value but no winning move")


def winning_moves(
    pos: Position,
    table: TranspositionTable | None = None,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
) -> list[Move]:
    """All legal moves whose result is a P position (empty iff `pos` is P)."""
    if table is None:
        table = TranspositionTable()
    return [
        mv
        for mv in legal_moves(pos)
        if grundy(apply_move(pos, mv), table, budget=budget) == 0
    ]


def unique_extension(
    pos: Position,
    symbol: int,
    table: TranspositionTable | None = None,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """The unique x in [0, len(pos)] making pos + symbol^x a P position.

    Scans the whole range and insists on exactly one hit; zero or several
    would contradict the game's extension property and raise.
    """
    if not pos:
        raise ValueError("extension base must be nonempty")
    if pos.runs[-1].symbol == symbol:
        raise ValueError(f"appended symbol {letter(symbol)!r} equals the last run's")
    if table is None:
        table = TranspositionTable()
    hits = []
    for x in range(len(pos) + 1):
        extended = Position(pos.runs + (Run(symbol, x),)) if x else pos
        if grundy(extended, table, budget=budget) == 0:
            hits.append(x)
    if len(hits) != 1:
        raise ConsistencyError(
            f"expected exactly one P extension of {render(pos, 'rle')!r} "
            f"by {letter(symbol)!r}, found {hits}"
        )
    return hits[0]


def enumerate_table(
    alphabet_size: int,
    max_len: int,
    table: TranspositionTable | None = None,
    *,
    canonical_only: bool = False,
    budget: int = DEFAULT_NODE_BUDGET,
    letters: str | None = None,
) -> list[tuple[Position, int]]:
    """Grundy values for every word over the first `alphabet_size` letters
    (or the given `letters`) with length <= `max_len`, ordered by
    (length, literal rendering)."""
    if not 1 <= alphabet_size <= 26:
        raise ValueError(f"alphabet size must be in [1,26], got {alphabet_size}")
    if table is None:
        table = TranspositionTable()
    if letters is None:
        letters = "".join(letter(i) for i in range(alphabet_size))
    letters = sorted(set(letters))
    rows: list[tuple[Position, int]] = []
    seen_keys: set[str] = set()
    for n in range(max_len + 1):
        for chars in product(letters, repeat=n):
            pos = from_word("".join(chars))
            if canonical_only:
                key = canonical_key(pos)
                if key in seen_keys:
                    continue
                seen_keys.add(key)
            rows.append((pos, grundy(pos, table, budget=budget)))
    return rows


def solve_batch(
    positions: list[Position],
    table: TranspositionTable | None = None,
    *,
    workers: int = 1,
    budget: int = DEFAULT_NODE_BUDGET,
) -> list[int]:
    """Grundy values for independent roots, in input order.

    Workers share one table; entries are write-once per key so scheduling
    cannot change any observable result.
    """
    if table is None:
        table = TranspositionTable()
    if workers <= 1:
        return [grundy(p, table, budget=budget) for p in positions]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: grundy(p, table, budget=budget), positions))
