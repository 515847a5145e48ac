"""Runnable verification suites, one per analyzed game property.

Every suite sweeps a bounded slice of the state space, compares a claimed
verdict or strategy against the exact solver, and reports failures as
data instead of raising.  `strnim verify all` runs the lot and is the
repository's regression gate.
"""

from __future__ import annotations

import inspect
import random
import time
from dataclasses import dataclass, field
from itertools import product

from . import aba, families
from .position import (
    Position,
    apply_move,
    from_word,
    legal_moves,
    position_from_runs,
    render,
    reverse,
)
from .solver import ConsistencyError, TranspositionTable, grundy, unique_extension

DEFAULT_SEED = 987654321


@dataclass
class SuiteReport:
    suite: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, condition: bool, input_text: str, expected, actual) -> None:
        self.cases += 1
        if not condition:
            self.failures.append(
                {"input": input_text, "expected": expected, "actual": actual}
            )

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": self.failures,
            "wall_time": round(self.wall_time, 3),
        }


def _words(alphabet: str, max_len: int, min_len: int = 0):
    for n in range(min_len, max_len + 1):
        for chars in product(alphabet, repeat=n):
            yield "".join(chars)


def _is_p(word_or_pos, table: TranspositionTable) -> bool:
    pos = from_word(word_or_pos) if isinstance(word_or_pos, str) else word_or_pos
    return grundy(pos, table) == 0


def suite_next_count(
    max_len: int = 10,
    random_samples: int = 1000,
    random_max_len: int = 18,
    seed: int = DEFAULT_SEED,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Each position has exactly as many distinct successors as characters."""
    report = SuiteReport("next-count")
    start = time.perf_counter()

    def check_one(word: str) -> None:
        pos = from_word(word)
        count = len({apply_move(pos, mv) for mv in legal_moves(pos)})
        report.check(count == len(word), word, len(word), count)

    for word in _words("abc", max_len):
        check_one(word)
    rng = random.Random(seed)
    for _ in range(random_samples):
        n = rng.randint(0, random_max_len)
        check_one("".join(rng.choice("abc") for _ in range(n)))
    report.wall_time = time.perf_counter() - start
    return report


def suite_unique_extension(
    max_len: int = 10,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Appending a fresh-symbol block admits exactly one P length in [0,|s|]."""
    report = SuiteReport("unique-extension")
    start = time.perf_counter()
    if table is None:
        table = TranspositionTable()
    for word in _words("ab", max_len, min_len=1):
        pos = from_word(word)
        for c in (0, 1, 2):
            if c == pos.runs[-1].symbol:
                continue
            try:
                unique_extension(pos, c, table)
                report.check(True, word, "unique", "unique")
            except ConsistencyError as exc:
                report.check(False, f"{word}+{chr(97 + c)}", "unique", str(exc))
    report.wall_time = time.perf_counter() - start
    return report


def suite_aba_tables(
    max_i: int = 200,
    solver_max_i: int = 25,
    search_bound: int = 10_000,
    margin: int = 3,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Detected periodic pair sets match the published six, and the mex
    recurrence matches brute-force classification."""
    report = SuiteReport("aba-tables")
    start = time.perf_counter()
    if table is None:
        table = TranspositionTable()
    golden = aba.known_tables()
    expected_periods = {1: 1, 2: 2, 3: 2, 4: 4, 5: 4, 6: 6}
    for j in range(1, 7):
        detected = aba.detect_period(j, search_bound, margin)
        report.check(
            detected.period == expected_periods[j],
            f"j={j} period",
            expected_periods[j],
            detected.period,
        )
        mismatches = [
            (i, k)
            for i in range(max_i + 1)
            for k in range(max_i + 1)
            if detected.member(i, k) != golden[j].member(i, k)
        ]
        report.check(not mismatches, f"j={j} membership<= {max_i}", [], mismatches[:5])
        discrepancies = aba.verify_against_solver(j, solver_max_i, table)
        report.check(
            not discrepancies, f"j={j} recurrence vs solver", [], discrepancies[:5]
        )
    report.wall_time = time.perf_counter() - start
    return report


def _two_letter_palindromes(max_len: int):
    swap = str.maketrans("ab", "ba")
    for half in range(max_len // 2 + 1):
        for chars in product("ab", repeat=half):
            t = "".join(chars)
            yield t + t[::-1].translate(swap)


def suite_comp_palindrome(
    max_len: int = 14,
    audit_len: int = 10,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Half-plus-coded-half strings are P, and the witness finder is sound."""
    report = SuiteReport("comp-palindrome")
    start = time.perf_counter()
    if table is None:
        table = TranspositionTable()
    for word in _two_letter_palindromes(max_len):
        pos = from_word(word)
        report.check(
            families.comp_palindrome_witness(pos) is not None,
            word, "witness", None,
        )
        report.check(_is_p(pos, table), word, "P", "N")
    pos = from_word("abccaacb")
    report.check(_is_p(pos, table), "abccaacb", "P", "N")
    witness = families.comp_palindrome_witness(pos)
    report.check(
        witness is not None and witness[0] == "abcc",
        "abccaacb witness", "abcc", witness,
    )
    # Soundness of the whole analyzer on small words: applicable => P.
    for word in _words("ab", audit_len):
        verdict = families.comp_palindrome_verdict(from_word(word))
        if verdict.applicable:
            report.check(_is_p(word, table), word, "P", "N")
    report.wall_time = time.perf_counter() - start
    return report


def _intervals(pos: Position):
    """All 1-based single-character removal ranges of the expanded word."""
    offset = 0
    for run in pos.runs:
        for lo in range(run.length):
            for hi in range(lo, run.length):
                yield offset + lo + 1, offset + hi + 1
        offset += run.length


def suite_mirror(
    max_len: int = 12,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Mirrored answers are legal, disjoint, and re-establish the family."""
    report = SuiteReport("mirror")
    start = time.perf_counter()
    words = set(_two_letter_palindromes(max_len))
    cyc = {"a": "b", "b": "c", "c": "a"}
    for half in range(max_len // 2 + 1):
        for chars in product("abc", repeat=half):
            t = "".join(chars)
            words.add(t + "".join(cyc[ch] for ch in t[::-1]))
    for word in sorted(words):
        pos = from_word(word)
        if families.comp_palindrome_witness(pos) is None:
            continue
        for interval in _intervals(pos):
            response = families.mirror_response(pos, interval)
            disjoint = response[0] > interval[1] or response[1] < interval[0]
            report.check(disjoint, f"{word} {interval}", "disjoint", response)
            result = families.mirror_play(pos, interval)
            report.check(
                families.comp_palindrome_witness(result) is not None,
                f"{word} {interval}",
                "palindrome after reply",
                result.expand(),
            )
    report.wall_time = time.perf_counter() - start
    return report


def suite_alternating(
    max_len: int = 12,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Run-length-one strings: P exactly at even length; the repair move
    restores even alternating from any opponent move."""
    report = SuiteReport("alternating")
    start = time.perf_counter()
    if table is None:
        table = TranspositionTable()
    for word in _words("abc", max_len):
        pos = from_word(word)
        verdict = families.alternating_verdict(pos)
        if not verdict.applicable:
            continue
        expected = "P" if len(word) % 2 == 0 else "N"
        report.check(verdict.verdict == expected, word, expected, verdict.verdict)
        solver_says = "P" if _is_p(pos, table) else "N"
        report.check(solver_says == expected, word, expected, solver_says)
        if len(word) % 2 != 0:
            continue
        for mv in legal_moves(pos):
            reply = families.alternating_response(pos, mv)
            after = apply_move(apply_move(pos, mv), reply)
            good = (
                all(r.length == 1 for r in after.runs) and len(after) % 2 == 0
            )
            report.check(good, f"{word} {mv}", "alternating even", after.expand())
    report.wall_time = time.perf_counter() - start
    return report


def suite_lstar(
    max_len: int = 14,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Concatenations of a^k b^k and ba blocks are P and stay restorable."""
    report = SuiteReport("lstar")
    start = time.perf_counter()
    if table is None:
        table = TranspositionTable()
    members = _lstar_words(max_len)
    for word in sorted(members):
        report.check(_is_p(word, table), word, "P", "N")
    report.check(
        families.lstar_member(from_word("aabbaaabbbba")) == ["aabb", "aaabbb", "ba"],
        "aabbaaabbbba", ["aabb", "aaabbb", "ba"],
        families.lstar_member(from_word("aabbaaabbbba")),
    )
    report.check(
        families.lstar_member(from_word("aabbbbaa")) is None,
        "aabbbbaa", None, families.lstar_member(from_word("aabbbbaa")),
    )
    for word in sorted(members):
        pos = from_word(word)
        for mv in legal_moves(pos):
            after = apply_move(pos, mv)
            try:
                reply = families.lstar_response(pos, after)
            except ConsistencyError as exc:
                report.check(False, f"{word} {mv}", "restoring move", str(exc))
                continue
            restored = families.lstar_member(apply_move(after, reply))
            report.check(
                restored is not None, f"{word} {mv}", "membership restored", None
            )
    report.wall_time = time.perf_counter() - start
    return report


def _lstar_words(max_len: int) -> set[str]:
    blocks = ["ba"] + ["a" * k + "b" * k for k in range(1, max_len // 2 + 1)]
    members = {""}
    frontier = [""]
    while frontier:
        word = frontier.pop()
        for block in blocks:
            grown = word + block
            if len(grown) <= max_len and grown not in members:
                members.add(grown)
                frontier.append(grown)
    return members


def suite_thue_morse(
    max_len: int = 20,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Doubling-sequence prefixes are P exactly at even lengths."""
    report = SuiteReport("thue-morse")
    start = time.perf_counter()
    if table is None:
        table = TranspositionTable()
    report.check(
        families.thue_morse_prefix(8).expand() == "abbabaab",
        "prefix(8)", "abbabaab", families.thue_morse_prefix(8).expand(),
    )
    # Doubling steps agree with prefix truncation.
    word = "a"
    swap = str.maketrans("ab", "ba")
    for i in range(1, 11):
        word += word.translate(swap)
        report.check(
            families.thue_morse_prefix(2 ** i).expand() == word,
            f"doubling step {i}", word[:16] + "...", None,
        )
    for n in range(0, max_len + 1, 2):
        prefix = families.thue_morse_prefix(n).expand()
        chunks = [prefix[i : i + 2] for i in range(0, n, 2)]
        report.check(
            all(c in ("ab", "ba") for c in chunks),
            f"prefix({n}) in (ab+ba)*", True, chunks,
        )
    for n in range(1, max_len + 1):
        expected = "P" if n % 2 == 0 else "N"
        actual = "P" if _is_p(families.thue_morse_prefix(n), table) else "N"
        report.check(actual == expected, f"prefix({n})", expected, actual)
        claimed = families.thue_morse_verdict(n).verdict
        report.check(claimed == expected, f"prefix({n}) verdict", expected, claimed)
    report.wall_time = time.perf_counter() - start
    return report


def suite_nim_xor(
    max_heap: int = 8,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """Distinct-symbol positions are plain Nim: P iff run lengths xor to 0."""
    report = SuiteReport("nim-xor")
    start = time.perf_counter()
    if table is None:
        table = TranspositionTable()
    for i in range(max_heap + 1):
        for j in range(max_heap + 1):
            for k in range(max_heap + 1):
                pos = position_from_runs([(0, i), (1, j), (2, k)])
                expected = "P" if i ^ j ^ k == 0 else "N"
                actual = "P" if _is_p(pos, table) else "N"
                report.check(actual == expected, f"a^{i}b^{j}c^{k}", expected, actual)
                verdict = families.nim_xor_verdict(pos)
                report.check(
                    verdict.applicable and verdict.verdict == expected,
                    f"a^{i}b^{j}c^{k} analyzer", expected, verdict,
                )
    report.wall_time = time.perf_counter() - start
    return report


def _random_heavy_position(rng: random.Random) -> Position:
    n_runs = rng.randint(1, 4)
    symbols = [rng.randrange(3)]
    while len(symbols) < n_runs:
        nxt = rng.randrange(3)
        if nxt != symbols[-1]:
            symbols.append(nxt)
    lengths = [rng.randint(1, 3) for _ in range(n_runs - 1)]
    lengths.append(sum(lengths) + rng.randint(1, 3))
    return position_from_runs(list(zip(symbols, lengths)))


def suite_tail_heavy(
    samples: int = 500,
    seed: int = DEFAULT_SEED,
    table: TranspositionTable | None = None,
) -> SuiteReport:
    """A dominant outer run decides the game for the next player."""
    report = SuiteReport("tail-heavy")
    start = time.perf_counter()
    if table is None:
        table = TranspositionTable()
    rng = random.Random(seed)
    for _ in range(samples):
        pos = _random_heavy_position(rng)
        for candidate in (pos, reverse(pos)):
            verdict = families.tail_heavy_verdict(candidate)
            report.check(
                verdict.applicable and verdict.verdict == "N",
                render(candidate, "rle"), "analyzer N", verdict,
            )
            report.check(
                not _is_p(candidate, table), render(candidate, "rle"), "N", "P"
            )
    report.wall_time = time.perf_counter() - start
    return report


SUITES = {
    "next-count": suite_next_count,
    "unique-extension": suite_unique_extension,
    "aba-tables": suite_aba_tables,
    "comp-palindrome": suite_comp_palindrome,
    "mirror": suite_mirror,
    "alternating": suite_alternating,
    "lstar": suite_lstar,
    "thue-morse": suite_thue_morse,
    "nim-xor": suite_nim_xor,
    "tail-heavy": suite_tail_heavy,
}


def run_suite(name: str, table: TranspositionTable | None = None, **bounds) -> SuiteReport:
    """Run one suite by id, dropping bounds it does not understand."""
    if name not in SUITES:
        raise KeyError(f"unknown suite: {name!r} (expected one of {sorted(SUITES)} or 'all')")
    fn = SUITES[name]
    accepted = set(inspect.signature(fn).parameters)
    kwargs = {k: v for k, v in bounds.items() if k in accepted and v is not None}
    return fn(table=table, **kwargs)


def run_all(table: TranspositionTable | None = None, **bounds) -> list[SuiteReport]:
    if table is None:
        table = TranspositionTable()
    return [run_suite(name, table=table, **bounds) for name in SUITES]
