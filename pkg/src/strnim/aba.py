"""Analysis of positions shaped a^i b^j a^k.

For fixed middle-run length j there is exactly one k per i making the
position previous-player-winning; `build_lose_table` computes that k by
a mex recurrence over already-decided rows, `detect_period` finds the
eventually-periodic structure of the resulting pair set, and
`known_tables` carries the six published pair sets used as golden data.
"""

from __future__ import annotations

from dataclasses import dataclass

from .position import Position, Run, position_from_runs
from .solver import DEFAULT_NODE_BUDGET, TranspositionTable, grundy


class NoPeriodError(RuntimeError):
    """Raised when no period is certified within the searched bound."""


def aba_position(i: int, j: int, k: int) -> Position:
    """The position a^i b^j a^k (zero-length outer runs simply vanish)."""
    if j < 1 or i < 0 or k < 0:
        raise ValueError(f"bad exponents i={i}, j={j}, k={k}")
    return position_from_runs([(0, i), (1, j), (0, k)])


@dataclass
class LoseTable:
    """values[i] is the unique k with a^i b^j a^k previous-player-winning."""

    j: int
    values: list[int]

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)


def _lose_rows(j: int, max_i: int) -> list[list[int]]:
    # Row t depends on rows 1..t-1 at the same column, so build in order.
    # Cell (t, i) is the mex of: earlier values in row t, the column values
    # from shallower rows, plus 0 when i == 0 (for i == 0 the k == 0 string
    # is b^t, an immediate loss for the previous player, so 0 is excluded;
    # for i > 0 removing the whole middle run leaves a nonempty a-block and
    # excludes nothing).
    rows: list[list[int]] = []
    for t in range(1, j + 1):
        row: list[int] = []
        row_values: set[int] = set()
        for i in range(max_i + 1):
            column = {rows[u][i] for u in range(t - 1)}
            # Every value below i-t is already present among earlier row
            # entries, so the scan may start at max(0, i-t).
            m = max(0, i - t)
            while m in row_values or m in column or (i == 0 and m == 0):
                m += 1
            assert max(0, i - t) <= m <= i + t, (t, i, m)
            row.append(m)
            row_values.add(m)
        rows.append(row)
    return rows


def build_lose_table(j: int, max_i: int) -> LoseTable:
    if j < 1:
        raise ValueError(f"middle-run length must be >= 1, got {j}")
    if max_i < 0:
        raise ValueError(f"max_i must be >= 0, got {max_i}")
    return LoseTable(j, _lose_rows(j, max_i)[j - 1])


def verify_against_solver(
    j: int,
    max_i: int,
    table: TranspositionTable | None = None,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
) -> list[tuple[int, int, bool]]:
    """Brute-force check of the recurrence: for each i, the tabled k (and
    only it, among k <= i+j) yields a P position.  Returns discrepancies
    as (i, k, expected_p) triples; an empty list means full agreement."""
    if table is None:
        table = TranspositionTable()
    lose = build_lose_table(j, max_i)
    bad = []
    for i in range(max_i + 1):
        for k in range(i + j + 1):
            expected_p = k == lose[i]
            actual_p = grundy(aba_position(i, j, k), table, budget=budget) == 0
            if actual_p != expected_p:
                bad.append((i, k, expected_p))
    return bad


@dataclass(frozen=True)
class PeriodicPairSet:
    """A pair set of the form `base ∪ (repeating + period·{0,1,2,...})`,
    both parts holding only pairs with i <= k."""

    base: frozenset[tuple[int, int]]
    repeating: frozenset[tuple[int, int]]
    period: int

    def __post_init__(self) -> None:
        if self.period < 1:
            raise ValueError(f"period must be >= 1, got {self.period}")
        for i, k in self.base | self.repeating:
            if i > k:
                raise ValueError(f"pair ({i},{k}) violates i <= k")

    def member(self, i: int, k: int) -> bool:
        if i > k:
            i, k = k, i
        if (i, k) in self.base:
            return True
        for bi, bk in self.repeating:
            if k - i == bk - bi and i >= bi and (i - bi) % self.period == 0:
                return True
        return False

    def to_json(self) -> dict:
        return {
            "base": sorted(self.base),
            "repeating": sorted(self.repeating),
            "period": self.period,
        }


def pair_member(pairs: PeriodicPairSet, i: int, k: int) -> bool:
    return pairs.member(i, k)


def detect_period(j: int, search_bound: int = 10_000, margin: int = 3) -> PeriodicPairSet:
    """Find the empirical eventual period of the pair set for middle run j.

    Works on the drift d(i) = lose[i] - i, bounded in [-j, j].  Returns the
    smallest (period, start) in lexicographic order such that d repeats with
    that period from the start onward and at least `margin` full periods are
    observed; raises NoPeriodError otherwise rather than guessing.
    """
    if margin < 1:
        raise ValueError(f"margin must be >= 1, got {margin}")
    lose = build_lose_table(j, search_bound)
    drift = [lose[i] - i for i in range(search_bound + 1)]
    for period in range(1, search_bound // margin + 1):
        start = 0
        for i in range(search_bound - period, -1, -1):
            if drift[i] != drift[i + period]:
                start = i + 1
                break
        if search_bound - start >= margin * period:
            base = frozenset(
                (i, lose[i]) for i in range(start) if i <= lose[i]
            )
            repeating = frozenset(
                (i, lose[i]) for i in range(start, start + period) if i <= lose[i]
            )
            return PeriodicPairSet(base, repeating, period)
    raise NoPeriodError(
        f"no period certified for j={j} within bound {search_bound} (margin {margin})"
    )


def known_tables() -> dict[int, PeriodicPairSet]:
    """Published pair sets for middle-run lengths 1 through 6 (golden data)."""

    def pps(base, repeating, period):
        return PeriodicPairSet(frozenset(base), frozenset(repeating), period)

    return {
        1: pps({(0, 1)}, {(2, 2)}, 1),
        2: pps({(0, 2), (1, 1)}, {(3, 4)}, 2),
        3: pps({(0, 3), (1, 2)}, {(4, 5)}, 2),
        4: pps({(0, 4), (1, 3), (2, 5)}, {(6, 8), (7, 9)}, 4),
        5: pps(
            {(0, 5), (1, 4), (2, 3), (6, 9), (7, 10), (8, 11)},
            {(12, 14), (13, 15)},
            4,
        ),
        6: pps(
            {(0, 6), (1, 5), (2, 4), (3, 7), (8, 10), (9, 11)},
            {(12, 15), (13, 16), (14, 17)},
            6,
        ),
    }
