"""Fast verdicts and explicit strategies for structured position families.

Each analyzer either declares itself inapplicable or returns a P/N verdict
that the general solver must agree with; none of them fall back to search.
The strategy functions return the move that keeps the defender inside the
family, realizing the pairing arguments behind each verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .position import (
    CodingMap,
    Move,
    Position,
    apply_move,
    from_word,
    interval_to_move,
    legal_moves,
    letter,
    move_to_interval,
    remove_interval,
    symbol_from_letter,
)
from .solver import ConsistencyError

FAMILIES = (
    "comp_palindrome",
    "alternating",
    "lstar",
    "thue_morse",
    "nim_xor",
    "tail_heavy",
)


@dataclass(frozen=True)
class FamilyVerdict:
    family: str
    applicable: bool
    verdict: str | None = None
    witness: dict | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family: {self.family!r}")
        if not self.applicable and self.verdict is not None:
            raise ValueError("inapplicable verdicts must not carry P/N")

    def to_json(self) -> dict:
        out: dict = {"family": self.family, "applicable": self.applicable}
        if self.verdict is not None:
            out["verdict"] = self.verdict
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _fpf_extension(domain: list[int], codomain: list[int]) -> dict[int, int] | None:
    """First-found injective domain->codomain assignment avoiding fixed
    points, preferring smaller images; None when impossible."""
    if not domain:
        return {}
    d = domain[0]
    for idx, r in enumerate(codomain):
        if r == d:
            continue
        rest = _fpf_extension(domain[1:], codomain[:idx] + codomain[idx + 1 :])
        if rest is not None:
            return {d: r, **rest}
    return None


def comp_palindrome_witness(pos: Position) -> tuple[str, CodingMap] | None:
    """Split `pos` as first half t plus coded reverse of t, if possible.

    The coding is read off the string itself: pairing position i with its
    mirror n+1-i forces the image of each constrained symbol.  The induced
    map must be single-valued, injective, and fixed-point-free, and must
    extend to a fixed-point-free bijection on the occurring alphabet; the
    returned CodingMap is that completed bijection.
    """
    word = pos.expand()
    n = len(word)
    if n % 2 != 0:
        return None
    forced: dict[int, int] = {}
    for i in range(n // 2):
        a = symbol_from_letter(word[i])
        b = symbol_from_letter(word[n - 1 - i])
        if forced.setdefault(a, b) != b:
            return None
    if len(set(forced.values())) != len(forced):
        return None
    if any(a == b for a, b in forced.items()):
        return None
    occurring = sorted(pos.symbols())
    extra = _fpf_extension(
        [s for s in occurring if s not in forced],
        [s for s in occurring if s not in set(forced.values())],
    )
    if extra is None:
        return None
    return word[: n // 2], CodingMap({**forced, **extra}, fixed_point_free=True)


def comp_palindrome_verdict(pos: Position) -> FamilyVerdict:
    witness = comp_palindrome_witness(pos)
    if witness is None:
        return FamilyVerdict("comp_palindrome", False)
    t, f = witness
    return FamilyVerdict(
        "comp_palindrome", True, "P", {"t": t, "coding": f.to_letters()}
    )


def mirror_response(pos: Position, opponent_interval: tuple[int, int]) -> tuple[int, int]:
    """Mirrored removal keeping a half-plus-coded-half split intact.

    Takes and returns 1-based inclusive index ranges on the expanded word
    of `pos` (the state before the opponent's removal).  The response never
    overlaps the opponent's range, because a one-character repetition can
    never straddle the centre of such a position.
    """
    if comp_palindrome_witness(pos) is None:
        raise ValueError(f"{pos!r} is not a complementary palindrome")
    start, end = opponent_interval
    interval_to_move(pos, start, end)  # validates the removal
    n = len(pos)
    response = (n - end + 1, n - start + 1)
    assert response[0] > end or response[1] < start, "mirror overlapped the removal"
    return response


def mirror_play(pos: Position, opponent_interval: tuple[int, int]) -> Position:
    """Apply the opponent's removal and the mirrored answer in one step."""
    start, end = opponent_interval
    r_start, r_end = mirror_response(pos, opponent_interval)
    first, second = sorted([(start, end), (r_start, r_end)])
    # Remove the right interval first so the left one's indices stay valid.
    return remove_interval(remove_interval(pos, *second), *first)


def alternating_verdict(pos: Position) -> FamilyVerdict:
    """Strings with no two equal adjacent characters win by parity."""
    if any(r.length != 1 for r in pos.runs):
        return FamilyVerdict("alternating", False)
    n = len(pos)
    return FamilyVerdict(
        "alternating", True, "P" if n % 2 == 0 else "N", {"length": n}
    )


def alternating_response(pos: Position, opponent_move: Move) -> Move:
    """Keep an even alternating string alternating and even.

    If the opponent's removal merged two equal neighbours, shrink the new
    length-2 run back to one character; otherwise drop the last character.
    The returned move applies to the position after the opponent's move.
    """
    if any(r.length != 1 for r in pos.runs) or len(pos) % 2 != 0:
        raise ValueError(f"{pos!r} is not an even-length alternating string")
    after = apply_move(pos, opponent_move)
    for i, run in enumerate(after.runs, start=1):
        if run.length == 2:
            return Move(i, 1)
    return Move(len(after.runs), 1)


_LSTAR_LETTERS = frozenset("ab")


def lstar_member(pos: Position) -> list[str] | None:
    """Factor `pos` into blocks from {a^k b^k : k >= 1} and {ba}, or None.

    Prefix-reachability dynamic program; the reported factorization picks
    the longest block first when several fit.
    """
    word = pos.expand()
    if not set(word) <= _LSTAR_LETTERS:
        raise ValueError(f"{pos!r} uses letters outside {{a,b}}")
    n = len(word)
    reach = [False] * (n + 1)
    reach[0] = True
    for m in range(1, n + 1):
        if m >= 2 and reach[m - 2] and word[m - 2 : m] == "ba":
            reach[m] = True
            continue
        for k in range(1, m // 2 + 1):
            if (
                reach[m - 2 * k]
                and word[m - 2 * k : m] == "a" * k + "b" * k
            ):
                reach[m] = True
                break
    if not reach[n]:
        return None
    blocks: list[str] = []
    m = n
    while m > 0:
        for k in range(m // 2, 0, -1):
            block = "a" * k + "b" * k
            if reach[m - 2 * k] and word[m - 2 * k : m] == block:
                blocks.append(block)
                m -= 2 * k
                break
        else:
            assert reach[m - 2] and word[m - 2 : m] == "ba"
            blocks.append("ba")
            m -= 2
    blocks.reverse()
    return blocks


def lstar_verdict(pos: Position) -> FamilyVerdict:
    if not pos.symbols() <= {0, 1}:
        return FamilyVerdict("lstar", False)
    blocks = lstar_member(pos)
    if blocks is None:
        return FamilyVerdict("lstar", False)
    return FamilyVerdict("lstar", True, "P", {"factorization": blocks})


def lstar_response(pos: Position, state_after_opponent: Position) -> Move:
    """A move returning `state_after_opponent` to the block language.

    Scans that state's legal moves and membership-tests each result; the
    pairing argument guarantees a hit, so coming up empty is an error.
    """
    if lstar_member(pos) is None:
        raise ValueError(f"{pos!r} is not in the block language")
    for mv in legal_moves(state_after_opponent):
        if lstar_member(apply_move(state_after_opponent, mv)) is not None:
            return mv
    raise ConsistencyError(
        f"no restoring move from {state_after_opponent!r} (reached from {pos!r})"
    )


_SWAP = str.maketrans("ab", "ba")


def thue_morse_prefix(length: int) -> Position:
    """First `length` characters of the two-letter doubling sequence
    a, ab, abba, abbabaab, ... starting from a."""
    if length < 0:
        raise ValueError(f"length must be >= 0, got {length}")
    word = "a"
    while len(word) < length:
        word += word.translate(_SWAP)
    return from_word(word[:length])


def thue_morse_verdict(length: int) -> FamilyVerdict:
    """Prefixes of the doubling sequence win by parity of their length."""
    if length < 0:
        raise ValueError(f"length must be >= 0, got {length}")
    return FamilyVerdict(
        "thue_morse", True, "P" if length % 2 == 0 else "N", {"length": length}
    )


def nim_xor_verdict(pos: Position) -> FamilyVerdict:
    """With pairwise-distinct run symbols the game is plain Nim: P exactly
    when the xor of run lengths is zero."""
    lengths = [r.length for r in pos.runs]
    if len(pos.symbols()) != len(pos.runs):
        return FamilyVerdict("nim_xor", False)
    x = 0
    for n in lengths:
        x ^= n
    return FamilyVerdict(
        "nim_xor", True, "P" if x == 0 else "N", {"xor": x, "run_lengths": lengths}
    )


def tail_heavy_verdict(pos: Position) -> FamilyVerdict:
    """An outer run strictly longer than all other runs combined loses for
    the previous player (either end, by left-right symmetry of the rules)."""
    if not pos.runs:
        return FamilyVerdict("tail_heavy", False)
    lengths = [r.length for r in pos.runs]
    total = sum(lengths)
    for end, x in (("last", lengths[-1]), ("first", lengths[0])):
        if x > total - x:
            return FamilyVerdict(
                "tail_heavy", True, "N", {"end": end, "run_length": x, "rest_sum": total - x}
            )
    return FamilyVerdict("tail_heavy", False)


def _thue_morse_position_verdict(pos: Position) -> FamilyVerdict:
    n = len(pos)
    if pos != thue_morse_prefix(n):
        return FamilyVerdict("thue_morse", False)
    return thue_morse_verdict(n)


def family_verdicts(pos: Position) -> list[FamilyVerdict]:
    """All six analyzers applied to one position (inapplicable ones too)."""
    return [
        comp_palindrome_verdict(pos),
        alternating_verdict(pos),
        lstar_verdict(pos),
        _thue_morse_position_verdict(pos),
        nim_xor_verdict(pos),
        tail_heavy_verdict(pos),
    ]
